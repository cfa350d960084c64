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
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace folkrec {

// Interned entity ids. Ids are dense and assigned in lexicographic order of
// the entity names, so comparing ids compares names.
enum class UserId : std::uint32_t {};
enum class ResourceId : std::uint32_t {};
enum class TagId : std::uint32_t {};

template <typename Id>
constexpr std::size_t index_of(Id id) {
  return static_cast<std::size_t>(id);
}

// One (user, resource, tag, timestamp) line of the input log.
struct TagAssignment {
  std::string user;
  std::string resource;
  std::string tag;
  std::int64_t timestamp = 0;

  friend bool operator==(const TagAssignment&, const TagAssignment&) = default;
};

// All assignments one user gave one resource. `tags` is ascending and
// unique; `tag_times[i]` is the (earliest) timestamp of `tags[i]`.
// `timestamp` is the earliest of the tag times.
struct Post {
  UserId user{};
  ResourceId resource{};
  std::int64_t timestamp = 0;
  std::vector<TagId> tags;
  std::vector<std::int64_t> tag_times;
};

// Name-based view of a post, detached from any folksonomy.
struct PostRecord {
  std::string user;
  std::string resource;
  std::int64_t timestamp = 0;
  std::vector<std::string> tags;  // ascending
  std::vector<std::int64_t> tag_times;

  friend bool operator==(const PostRecord&, const PostRecord&) = default;
};

struct TagCount {
  TagId tag{};
  std::uint32_t count = 0;

  friend bool operator==(const TagCount&, const TagCount&) = default;
};

struct TagEvents {
  TagId tag{};
  std::vector<std::int64_t> times;  // ascending post timestamps
};

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const {
    return std::hash<std::string_view>{}(s);
  }
};

using NameTable =
    std::unordered_map<std::string, std::uint32_t, StringHash, std::equal_to<>>;

class FolksonomyBuilder;

// Immutable, fully indexed tag-assignment corpus. Safe to share between
// threads once built.
class Folksonomy {
 public:
  Folksonomy() = default;

  bool empty() const { return posts_.empty(); }
  std::size_t n_users() const { return user_names_.size(); }
  std::size_t n_resources() const { return resource_names_.size(); }
  std::size_t n_tags() const { return tag_names_.size(); }
  std::size_t n_posts() const { return posts_.size(); }
  std::size_t n_assignments() const { return n_assignments_; }

  // Entity sets, ascending.
  std::span<const std::string> user_names() const { return user_names_; }
  std::span<const std::string> resource_names() const { return resource_names_; }
  std::span<const std::string> tag_names() const { return tag_names_; }

  const std::string& name(UserId u) const { return user_names_[index_of(u)]; }
  const std::string& name(ResourceId r) const { return resource_names_[index_of(r)]; }
  const std::string& name(TagId t) const { return tag_names_[index_of(t)]; }

  std::optional<UserId> find_user(std::string_view name) const;
  std::optional<ResourceId> find_resource(std::string_view name) const;
  std::optional<TagId> find_tag(std::string_view name) const;

  // Posts ordered by (user, timestamp, resource).
  std::span<const Post> posts() const { return posts_; }
  // A user's posts, ascending by (timestamp, resource).
  std::span<const Post> user_posts(UserId u) const;
  std::optional<std::size_t> find_post(UserId u, ResourceId r) const;

  // Per-entity tag counts at post granularity, ascending by tag id.
  std::span<const TagCount> user_tag_counts(UserId u) const;
  std::span<const TagCount> resource_tag_counts(ResourceId r) const;
  std::span<const TagEvents> user_tag_events(UserId u) const;

  std::uint32_t tag_post_count(TagId t) const { return tag_post_count_[index_of(t)]; }
  // Number of posts containing both tags; equals tag_post_count when a == b.
  std::uint32_t tag_pair_post_count(TagId a, TagId b) const;
  // Tags co-occurring with `t` in at least one post, ascending by tag id.
  std::span<const TagCount> cooccurring_tags(TagId t) const;
  // Users who used `t`, ascending.
  std::span<const UserId> tag_users(TagId t) const;

  std::int64_t latest_timestamp() const { return latest_timestamp_; }

  PostRecord record(const Post& post) const;
  // Materialized Y, ordered as the posts are.
  std::vector<TagAssignment> assignments() const;

 private:
  friend class FolksonomyBuilder;

  std::vector<std::string> user_names_;
  std::vector<std::string> resource_names_;
  std::vector<std::string> tag_names_;
  NameTable user_lookup_;
  NameTable resource_lookup_;
  NameTable tag_lookup_;

  std::vector<Post> posts_;
  std::size_t n_assignments_ = 0;
  std::int64_t latest_timestamp_ = 0;

  std::vector<std::size_t> user_post_offsets_;  // n_users + 1
  std::unordered_map<std::uint64_t, std::size_t> post_lookup_;
  std::vector<std::vector<TagCount>> user_tag_counts_;
  std::vector<std::vector<TagCount>> resource_tag_counts_;
  std::vector<std::vector<TagEvents>> user_tag_events_;
  std::vector<std::uint32_t> tag_post_count_;
  std::vector<std::vector<TagCount>> tag_pairs_;
  std::vector<std::vector<UserId>> tag_users_;
};

// Accumulates assignments and freezes them into a Folksonomy. Duplicate
// (user, resource, tag) triples keep their earliest timestamp.
class FolksonomyBuilder {
 public:
  void add(std::string_view user, std::string_view resource,
           std::string_view tag, std::int64_t timestamp);
  void add(const PostRecord& post);
  std::size_t size() const { return raw_.size(); }

  Folksonomy build() &&;

 private:
  struct Raw {
    std::uint32_t user;
    std::uint32_t resource;
    std::uint32_t tag;
    std::int64_t timestamp;
  };

  std::uint32_t intern(NameTable& table,
                       std::vector<std::string>& names, std::string_view key);

  NameTable users_;
  NameTable resources_;
  NameTable tags_;
  std::vector<std::string> user_names_;
  std::vector<std::string> resource_names_;
  std::vector<std::string> tag_names_;
  std::vector<Raw> raw_;
  std::string scratch_;
};

struct ParseOptions {
  // Trim surrounding whitespace and lowercase ASCII letters in tags.
  bool normalize_tags = true;
};

// Reads header-less UTF-8 TSV: user, resource, tag, timestamp. Blank lines
// are skipped. Throws MalformedLine or EmptyDataset.
Folksonomy parse_dataset(std::istream& in, const ParseOptions& options = {});
Folksonomy parse_dataset(std::string_view text, const ParseOptions& options = {});

std::string normalize_tag(std::string_view tag);

struct DatasetStats {
  std::size_t n_users = 0;
  std::size_t n_resources = 0;
  std::size_t n_tags = 0;
  std::size_t n_assignments = 0;
  std::size_t n_posts = 0;

  // Average posts per resource; 1.0 means every resource was posted once.
  double narrowness() const {
    return static_cast<double>(n_posts) / static_cast<double>(n_resources);
  }

  friend bool operator==(const DatasetStats&, const DatasetStats&) = default;
};

DatasetStats compute_stats(const Folksonomy& f);

// n_posts / n_resources truncated (not rounded) to three decimals, computed
// in integer arithmetic: 71062 posts over 12522 resources gives "5.674".
std::string format_narrowness(const DatasetStats& stats);

// Human-readable aligned table.
std::string format_stats_table(const DatasetStats& stats);
// One `key<TAB>value` line per field.
std::string format_stats_lines(const DatasetStats& stats);

// Largest sub-folksonomy (made of whole posts) in which every user,
// resource and tag occurs in at least p posts. May be empty.
Folksonomy p_core(const Folksonomy& f, std::uint32_t p);

struct SplitPair {
  Folksonomy train;
  std::vector<PostRecord> test;  // one per eligible user, ascending by user
};

// Moves each user's latest post (ties: greatest resource id) to test when
// the user has at least two posts. Throws NoTestPosts.
SplitPair split_leave_latest(const Folksonomy& f);

// P(target | cue) over posts. Throws UnknownTag when cue is not in T.
double cooccurrence_prob(const Folksonomy& f, std::string_view cue,
                         std::string_view target);
double cooccurrence_prob(const Folksonomy& f, TagId cue, TagId target);

void write_tsv(const Folksonomy& f, std::ostream& out);
void write_tsv(std::span<const PostRecord> posts, std::ostream& out);

}  // namespace folkrec
