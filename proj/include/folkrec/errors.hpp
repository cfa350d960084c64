// Copyright 2026 The folkrec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace folkrec {

// Base class for every error raised by the library. Callers that only need
// a message can catch this; the subclasses carry structured context.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A data error: the input could not be turned into a usable folksonomy.
class DataError : public Error {
 public:
  using Error::Error;
};

class MalformedLine : public DataError {
 public:
  MalformedLine(std::size_t line, const std::string& reason)
      : DataError("line " + std::to_string(line) + ": " + reason),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class EmptyDataset : public DataError {
 public:
  EmptyDataset() : DataError("dataset contains no tag assignments") {}
};

class NoTestPosts : public DataError {
 public:
  NoTestPosts() : DataError("no user has at least two posts; nothing to test") {}
};

class UnknownTag : public Error {
 public:
  explicit UnknownTag(const std::string& tag)
      : Error("unknown tag: '" + tag + "'") {}
};

class BadParam : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  EmptyInput() : Error("empty score map") {}
};

class EmptyCandidates : public Error {
 public:
  EmptyCandidates()
      : Error("neither the user nor the resource has any tags in train") {}
};

class EmptyRelevantSet : public Error {
 public:
  EmptyRelevantSet() : Error("relevant tag set is empty") {}
};

}  // namespace folkrec
