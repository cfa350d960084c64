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

#include <iosfwd>
#include <span>
#include <string>

namespace folkrec {

// Exit codes returned by run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

// Entry point of the `folkrec` tool. `args` excludes the program name.
// An input path of "-" reads from `in`.
int run(std::span<const std::string> args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace folkrec
