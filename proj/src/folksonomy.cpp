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

#include "folkrec/folksonomy.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "folkrec/errors.hpp"

namespace folkrec {

namespace {

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

template <typename Id>
std::optional<Id> lookup(const NameTable& table, std::string_view name) {
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return Id{it->second};
}

// Sorts `names` in place and returns old index -> new index.
std::vector<std::uint32_t> sort_names(std::vector<std::string>& names) {
  std::vector<std::uint32_t> order(names.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return names[a] < names[b];
  });
  std::vector<std::uint32_t> rank(names.size());
  std::vector<std::string> sorted;
  sorted.reserve(names.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) {
    rank[order[i]] = i;
    sorted.push_back(std::move(names[order[i]]));
  }
  names = std::move(sorted);
  return rank;
}

NameTable make_lookup(const std::vector<std::string>& names) {
  NameTable table;
  table.reserve(names.size());
  for (std::uint32_t i = 0; i < names.size(); ++i) table.emplace(names[i], i);
  return table;
}

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\v\f";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace

// ---------------------------------------------------------------------------
// Folksonomy

std::optional<UserId> Folksonomy::find_user(std::string_view name) const {
  return lookup<UserId>(user_lookup_, name);
}

std::optional<ResourceId> Folksonomy::find_resource(std::string_view name) const {
  return lookup<ResourceId>(resource_lookup_, name);
}

std::optional<TagId> Folksonomy::find_tag(std::string_view name) const {
  return lookup<TagId>(tag_lookup_, name);
}

std::span<const Post> Folksonomy::user_posts(UserId u) const {
  const auto i = index_of(u);
  return std::span<const Post>(posts_).subspan(
      user_post_offsets_[i], user_post_offsets_[i + 1] - user_post_offsets_[i]);
}

std::optional<std::size_t> Folksonomy::find_post(UserId u, ResourceId r) const {
  auto it = post_lookup_.find(
      pair_key(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(r)));
  if (it == post_lookup_.end()) return std::nullopt;
  return it->second;
}

std::span<const TagCount> Folksonomy::user_tag_counts(UserId u) const {
  return user_tag_counts_[index_of(u)];
}

std::span<const TagCount> Folksonomy::resource_tag_counts(ResourceId r) const {
  return resource_tag_counts_[index_of(r)];
}

std::span<const TagEvents> Folksonomy::user_tag_events(UserId u) const {
  return user_tag_events_[index_of(u)];
}

std::uint32_t Folksonomy::tag_pair_post_count(TagId a, TagId b) const {
  if (a == b) return tag_post_count(a);
  const auto& row = tag_pairs_[index_of(a)];
  auto it = std::lower_bound(
      row.begin(), row.end(), b,
      [](const TagCount& c, TagId t) { return c.tag < t; });
  return (it != row.end() && it->tag == b) ? it->count : 0;
}

std::span<const TagCount> Folksonomy::cooccurring_tags(TagId t) const {
  return tag_pairs_[index_of(t)];
}

std::span<const UserId> Folksonomy::tag_users(TagId t) const {
  return tag_users_[index_of(t)];
}

PostRecord Folksonomy::record(const Post& post) const {
  PostRecord rec;
  rec.user = name(post.user);
  rec.resource = name(post.resource);
  rec.timestamp = post.timestamp;
  rec.tags.reserve(post.tags.size());
  for (TagId t : post.tags) rec.tags.push_back(name(t));
  rec.tag_times = post.tag_times;
  return rec;
}

std::vector<TagAssignment> Folksonomy::assignments() const {
  std::vector<TagAssignment> out;
  out.reserve(n_assignments_);
  for (const Post& p : posts_) {
    for (std::size_t i = 0; i < p.tags.size(); ++i) {
      out.push_back({name(p.user), name(p.resource), name(p.tags[i]),
                     p.tag_times[i]});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// FolksonomyBuilder

std::uint32_t FolksonomyBuilder::intern(NameTable& table,
                                        std::vector<std::string>& names,
                                        std::string_view key) {
  auto it = table.find(key);
  if (it != table.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(names.size());
  names.emplace_back(key);
  table.emplace(names.back(), id);
  return id;
}

void FolksonomyBuilder::add(std::string_view user, std::string_view resource,
                            std::string_view tag, std::int64_t timestamp) {
  raw_.push_back({intern(users_, user_names_, user),
                  intern(resources_, resource_names_, resource),
                  intern(tags_, tag_names_, tag), timestamp});
}

void FolksonomyBuilder::add(const PostRecord& post) {
  for (std::size_t i = 0; i < post.tags.size(); ++i) {
    const auto ts = i < post.tag_times.size() ? post.tag_times[i] : post.timestamp;
    add(post.user, post.resource, post.tags[i], ts);
  }
}

Folksonomy FolksonomyBuilder::build() && {
  Folksonomy f;
  users_.clear();
  resources_.clear();
  tags_.clear();

  const auto user_rank = sort_names(user_names_);
  const auto resource_rank = sort_names(resource_names_);
  const auto tag_rank = sort_names(tag_names_);
  for (Raw& r : raw_) {
    r.user = user_rank[r.user];
    r.resource = resource_rank[r.resource];
    r.tag = tag_rank[r.tag];
  }
  std::sort(raw_.begin(), raw_.end(), [](const Raw& a, const Raw& b) {
    return std::tie(a.user, a.resource, a.tag, a.timestamp) <
           std::tie(b.user, b.resource, b.tag, b.timestamp);
  });
  // Collapse duplicate triples; the first of each run has the earliest time.
  raw_.erase(std::unique(raw_.begin(), raw_.end(),
                         [](const Raw& a, const Raw& b) {
                           return a.user == b.user && a.resource == b.resource &&
                                  a.tag == b.tag;
                         }),
             raw_.end());

  f.n_assignments_ = raw_.size();
  for (std::size_t i = 0; i < raw_.size();) {
    Post post;
    post.user = UserId{raw_[i].user};
    post.resource = ResourceId{raw_[i].resource};
    post.timestamp = raw_[i].timestamp;
    std::size_t j = i;
    for (; j < raw_.size() && raw_[j].user == raw_[i].user &&
           raw_[j].resource == raw_[i].resource;
         ++j) {
      post.tags.push_back(TagId{raw_[j].tag});
      post.tag_times.push_back(raw_[j].timestamp);
      post.timestamp = std::min(post.timestamp, raw_[j].timestamp);
    }
    f.latest_timestamp_ = f.posts_.empty()
                              ? post.timestamp
                              : std::max(f.latest_timestamp_, post.timestamp);
    f.posts_.push_back(std::move(post));
    i = j;
  }
  raw_.clear();
  raw_.shrink_to_fit();

  std::sort(f.posts_.begin(), f.posts_.end(), [](const Post& a, const Post& b) {
    return std::tie(a.user, a.timestamp, a.resource) <
           std::tie(b.user, b.timestamp, b.resource);
  });

  const std::size_t nu = user_names_.size();
  const std::size_t nr = resource_names_.size();
  const std::size_t nt = tag_names_.size();

  f.user_post_offsets_.assign(nu + 1, 0);
  for (const Post& p : f.posts_) ++f.user_post_offsets_[index_of(p.user) + 1];
  std::partial_sum(f.user_post_offsets_.begin(), f.user_post_offsets_.end(),
                   f.user_post_offsets_.begin());

  f.post_lookup_.reserve(f.posts_.size());
  f.user_tag_counts_.resize(nu);
  f.resource_tag_counts_.resize(nr);
  f.user_tag_events_.resize(nu);
  f.tag_post_count_.assign(nt, 0);
  f.tag_users_.resize(nt);

  std::vector<std::uint64_t> pairs;
  for (std::size_t pi = 0; pi < f.posts_.size(); ++pi) {
    const Post& p = f.posts_[pi];
    f.post_lookup_.emplace(pair_key(static_cast<std::uint32_t>(p.user),
                                    static_cast<std::uint32_t>(p.resource)),
                           pi);
    for (std::size_t a = 0; a < p.tags.size(); ++a) {
      const auto ta = static_cast<std::uint32_t>(p.tags[a]);
      ++f.tag_post_count_[ta];
      f.resource_tag_counts_[index_of(p.resource)].push_back({p.tags[a], 1});
      for (std::size_t b = a + 1; b < p.tags.size(); ++b) {
        const auto tb = static_cast<std::uint32_t>(p.tags[b]);
        pairs.push_back(pair_key(ta, tb));
        pairs.push_back(pair_key(tb, ta));
      }
    }
  }

  // Per-user indices: posts of one user are contiguous and time-ordered, so
  // event lists come out sorted without a further sort.
  for (std::size_t u = 0; u < nu; ++u) {
    std::vector<std::pair<TagId, std::int64_t>> events;
    for (std::size_t pi = f.user_post_offsets_[u]; pi < f.user_post_offsets_[u + 1]; ++pi) {
      const Post& p = f.posts_[pi];
      for (TagId t : p.tags) events.emplace_back(t, p.timestamp);
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    auto& counts = f.user_tag_counts_[u];
    auto& tev = f.user_tag_events_[u];
    for (const auto& [tag, ts] : events) {
      if (tev.empty() || tev.back().tag != tag) {
        tev.push_back({tag, {}});
        counts.push_back({tag, 0});
        f.tag_users_[index_of(tag)].push_back(UserId{static_cast<std::uint32_t>(u)});
      }
      tev.back().times.push_back(ts);
      ++counts.back().count;
    }
  }

  for (auto& counts : f.resource_tag_counts_) {
    std::sort(counts.begin(), counts.end(),
              [](const TagCount& a, const TagCount& b) { return a.tag < b.tag; });
    std::vector<TagCount> merged;
    for (const TagCount& c : counts) {
      if (!merged.empty() && merged.back().tag == c.tag) {
        merged.back().count += c.count;
      } else {
        merged.push_back(c);
      }
    }
    counts = std::move(merged);
  }

  std::sort(pairs.begin(), pairs.end());
  f.tag_pairs_.resize(nt);
  for (std::size_t i = 0; i < pairs.size();) {
    std::size_t j = i;
    while (j < pairs.size() && pairs[j] == pairs[i]) ++j;
    f.tag_pairs_[pairs[i] >> 32].push_back(
        {TagId{static_cast<std::uint32_t>(pairs[i] & 0xffffffffu)},
         static_cast<std::uint32_t>(j - i)});
    i = j;
  }

  f.user_lookup_ = make_lookup(user_names_);
  f.resource_lookup_ = make_lookup(resource_names_);
  f.tag_lookup_ = make_lookup(tag_names_);
  f.user_names_ = std::move(user_names_);
  f.resource_names_ = std::move(resource_names_);
  f.tag_names_ = std::move(tag_names_);
  return f;
}

// ---------------------------------------------------------------------------
// Parsing

std::string normalize_tag(std::string_view tag) {
  std::string out(trim(tag));
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

Folksonomy parse_dataset(std::istream& in, const ParseOptions& options) {
  FolksonomyBuilder builder;
  std::string line;
  std::size_t line_no = 0;
  std::string tag_buf;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (trim(view).empty()) continue;

    const auto n_fields =
        static_cast<std::size_t>(std::count(view.begin(), view.end(), '\t')) + 1;
    if (n_fields != 4) {
      throw MalformedLine(
          line_no, fmt::format("expected 4 tab-separated fields, got {}", n_fields));
    }
    std::string_view fields[4];
    for (std::size_t i = 0, start = 0; i < 4; ++i) {
      const auto tab = view.find('\t', start);
      fields[i] = view.substr(start, tab == std::string_view::npos
                                         ? std::string_view::npos
                                         : tab - start);
      start = tab + 1;
    }
    if (fields[0].empty()) throw MalformedLine(line_no, "empty user id");
    if (fields[1].empty()) throw MalformedLine(line_no, "empty resource id");

    std::string_view tag = fields[2];
    if (options.normalize_tags) {
      tag_buf = normalize_tag(tag);
      tag = tag_buf;
    }
    if (tag.empty()) throw MalformedLine(line_no, "empty tag");

    const std::string_view ts_field = trim(fields[3]);
    std::int64_t ts = 0;
    const auto [ptr, ec] =
        std::from_chars(ts_field.data(), ts_field.data() + ts_field.size(), ts);
    if (ts_field.empty() || ec != std::errc() ||
        ptr != ts_field.data() + ts_field.size()) {
      throw MalformedLine(line_no, fmt::format("timestamp '{}' is not an integer", ts_field));
    }
    if (ts < 0) throw MalformedLine(line_no, "timestamp is negative");

    builder.add(fields[0], fields[1], tag, ts);
  }
  if (builder.size() == 0) throw EmptyDataset();
  return std::move(builder).build();
}

Folksonomy parse_dataset(std::string_view text, const ParseOptions& options) {
  std::istringstream in{std::string(text)};
  return parse_dataset(in, options);
}

// ---------------------------------------------------------------------------
// Statistics

DatasetStats compute_stats(const Folksonomy& f) {
  if (f.empty()) throw EmptyDataset();
  return DatasetStats{f.n_users(), f.n_resources(), f.n_tags(),
                      f.n_assignments(), f.n_posts()};
}

std::string format_narrowness(const DatasetStats& s) {
  if (s.n_resources == 0) return "nan";
  const auto milli = static_cast<unsigned __int128>(s.n_posts) * 1000u / s.n_resources;
  return fmt::format("{}.{:03d}", static_cast<std::uint64_t>(milli / 1000),
                     static_cast<unsigned>(milli % 1000));
}

std::string format_stats_table(const DatasetStats& s) {
  std::string out;
  out += fmt::format("{:<12}{:>12}\n", "|U|", s.n_users);
  out += fmt::format("{:<12}{:>12}\n", "|R|", s.n_resources);
  out += fmt::format("{:<12}{:>12}\n", "|T|", s.n_tags);
  out += fmt::format("{:<12}{:>12}\n", "|Y|", s.n_assignments);
  out += fmt::format("{:<12}{:>12}\n", "|P|", s.n_posts);
  out += fmt::format("{:<12}{:>12}\n", "|P|/|R|", format_narrowness(s));
  return out;
}

std::string format_stats_lines(const DatasetStats& s) {
  std::string out;
  out += fmt::format("n_users\t{}\n", s.n_users);
  out += fmt::format("n_resources\t{}\n", s.n_resources);
  out += fmt::format("n_tags\t{}\n", s.n_tags);
  out += fmt::format("n_assignments\t{}\n", s.n_assignments);
  out += fmt::format("n_posts\t{}\n", s.n_posts);
  out += fmt::format("narrowness\t{}\n", format_narrowness(s));
  return out;
}

// ---------------------------------------------------------------------------
// p-core

Folksonomy p_core(const Folksonomy& f, std::uint32_t p) {
  if (p == 0) throw BadParam("p must be at least 1");
  const auto posts = f.posts();
  std::vector<std::uint32_t> user_count(f.n_users(), 0);
  std::vector<std::uint32_t> resource_count(f.n_resources(), 0);
  std::vector<std::uint32_t> tag_count(f.n_tags(), 0);
  std::vector<std::vector<std::uint32_t>> resource_posts(f.n_resources());
  std::vector<std::vector<std::uint32_t>> tag_posts(f.n_tags());
  for (std::uint32_t i = 0; i < posts.size(); ++i) {
    const Post& post = posts[i];
    ++user_count[index_of(post.user)];
    ++resource_count[index_of(post.resource)];
    resource_posts[index_of(post.resource)].push_back(i);
    for (TagId t : post.tags) {
      ++tag_count[index_of(t)];
      tag_posts[index_of(t)].push_back(i);
    }
  }

  enum Kind : std::uint8_t { kUser, kResource, kTag };
  std::deque<std::pair<Kind, std::uint32_t>> queue;
  std::vector<bool> user_dead(f.n_users()), resource_dead(f.n_resources()),
      tag_dead(f.n_tags()), post_dead(posts.size());
  auto check = [&](Kind kind, std::uint32_t id) {
    auto& dead = kind == kUser ? user_dead : kind == kResource ? resource_dead : tag_dead;
    const auto count = kind == kUser ? user_count[id]
                       : kind == kResource ? resource_count[id]
                                           : tag_count[id];
    if (!dead[id] && count < p) {
      dead[id] = true;
      queue.emplace_back(kind, id);
    }
  };
  for (std::uint32_t i = 0; i < f.n_users(); ++i) check(kUser, i);
  for (std::uint32_t i = 0; i < f.n_resources(); ++i) check(kResource, i);
  for (std::uint32_t i = 0; i < f.n_tags(); ++i) check(kTag, i);

  auto kill_post = [&](std::uint32_t pi) {
    if (post_dead[pi]) return;
    post_dead[pi] = true;
    const Post& post = posts[pi];
    const auto u = static_cast<std::uint32_t>(post.user);
    const auto r = static_cast<std::uint32_t>(post.resource);
    --user_count[u];
    check(kUser, u);
    --resource_count[r];
    check(kResource, r);
    for (TagId t : post.tags) {
      const auto ti = static_cast<std::uint32_t>(t);
      --tag_count[ti];
      check(kTag, ti);
    }
  };

  while (!queue.empty()) {
    const auto [kind, id] = queue.front();
    queue.pop_front();
    switch (kind) {
      case kUser: {
        const auto span = f.user_posts(UserId{id});
        const auto base = static_cast<std::uint32_t>(span.data() - posts.data());
        for (std::uint32_t k = 0; k < span.size(); ++k) kill_post(base + k);
        break;
      }
      case kResource:
        for (auto pi : resource_posts[id]) kill_post(pi);
        break;
      case kTag:
        for (auto pi : tag_posts[id]) kill_post(pi);
        break;
    }
  }

  FolksonomyBuilder builder;
  for (std::uint32_t i = 0; i < posts.size(); ++i) {
    if (!post_dead[i]) builder.add(f.record(posts[i]));
  }
  return std::move(builder).build();
}

// ---------------------------------------------------------------------------
// Temporal split

SplitPair split_leave_latest(const Folksonomy& f) {
  if (f.empty()) throw EmptyDataset();
  SplitPair split;
  FolksonomyBuilder builder;
  for (std::uint32_t u = 0; u < f.n_users(); ++u) {
    const auto user_posts = f.user_posts(UserId{u});
    // Posts are ascending by (timestamp, resource id) and resource ids follow
    // name order, so the last post is the latest with the greatest resource.
    const bool eligible = user_posts.size() >= 2;
    const std::size_t n_train = eligible ? user_posts.size() - 1 : user_posts.size();
    for (std::size_t i = 0; i < n_train; ++i) builder.add(f.record(user_posts[i]));
    if (eligible) split.test.push_back(f.record(user_posts.back()));
  }
  if (split.test.empty()) throw NoTestPosts();
  split.train = std::move(builder).build();
  return split;
}

// ---------------------------------------------------------------------------
// Co-occurrence

double cooccurrence_prob(const Folksonomy& f, TagId cue, TagId target) {
  const auto denom = f.tag_post_count(cue);
  if (denom == 0) return 0.0;
  return static_cast<double>(f.tag_pair_post_count(cue, target)) / denom;
}

double cooccurrence_prob(const Folksonomy& f, std::string_view cue,
                         std::string_view target) {
  const auto cue_id = f.find_tag(cue);
  if (!cue_id) throw UnknownTag(std::string(cue));
  const auto target_id = f.find_tag(target);
  if (!target_id) return 0.0;
  return cooccurrence_prob(f, *cue_id, *target_id);
}

// ---------------------------------------------------------------------------
// Output

void write_tsv(std::span<const PostRecord> posts, std::ostream& out) {
  for (const PostRecord& p : posts) {
    for (std::size_t i = 0; i < p.tags.size(); ++i) {
      const auto ts = i < p.tag_times.size() ? p.tag_times[i] : p.timestamp;
      out << p.user << '\t' << p.resource << '\t' << p.tags[i] << '\t' << ts
          << '\n';
    }
  }
}

void write_tsv(const Folksonomy& f, std::ostream& out) {
  for (const Post& p : f.posts()) {
    for (std::size_t i = 0; i < p.tags.size(); ++i) {
      out << f.name(p.user) << '\t' << f.name(p.resource) << '\t'
          << f.name(p.tags[i]) << '\t' << p.tag_times[i] << '\n';
    }
  }
}

}  // namespace folkrec
