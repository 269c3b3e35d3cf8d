#pragma once

// Activity logs (who recommended which item when), co-activity counting,
// proximity-activity correlation, and the record-quality filters used to
// clean cascade data before analysis.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "proxnet/graph.hpp"
#include "proxnet/proximity.hpp"

namespace proxnet {

// Raised when a Pearson correlation is undefined (fewer than two pairs, or
// zero variance in either variable).
class UndefinedCorrelationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A log of (user, item, time) records. A user recommends an item at most
// once: duplicate (user, item) insertions collapse onto the first record,
// keeping the earliest time. Items may carry an optional promotion time.
class ActivityLog {
 public:
  struct Record {
    std::uint32_t user;
    std::uint32_t item;
    std::int64_t time;
  };

  // Returns false when the record collapsed into an existing (user, item)
  // pair (whose stored time becomes the minimum of the two).
  bool add(std::string_view user, std::string_view item, std::int64_t time) {
    if (time < 0) {
      throw std::invalid_argument("ActivityLog: record times are nonnegative");
    }
    const std::uint32_t u = intern(user, user_index_, user_labels_);
    const std::uint32_t i = intern(item, item_index_, item_labels_);
    const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | i;
    auto [it, inserted] = pair_index_.try_emplace(key, records_.size());
    if (!inserted) {
      Record& r = records_[it->second];
      r.time = std::min(r.time, time);
      return false;
    }
    records_.push_back({u, i, time});
    auto& items = user_items_;
    if (items.size() <= u) items.resize(u + 1);
    items[u].insert(std::upper_bound(items[u].begin(), items[u].end(), i), i);
    return true;
  }

  std::size_t record_count() const { return records_.size(); }
  std::size_t user_count() const { return user_labels_.size(); }
  std::size_t item_count() const { return item_labels_.size(); }

  const std::string& user_label(std::uint32_t u) const {
    if (u >= user_labels_.size()) throw std::out_of_range("unknown user id");
    return user_labels_[u];
  }
  const std::string& item_label(std::uint32_t i) const {
    if (i >= item_labels_.size()) throw std::out_of_range("unknown item id");
    return item_labels_[i];
  }

  std::optional<std::uint32_t> find_user(std::string_view label) const {
    auto it = user_index_.find(std::string(label));
    if (it == user_index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<std::uint32_t> find_item(std::string_view label) const {
    auto it = item_index_.find(std::string(label));
    if (it == item_index_.end()) return std::nullopt;
    return it->second;
  }

  // Records in first-insertion order.
  std::span<const Record> records() const {
    return {records_.data(), records_.size()};
  }

  // Sorted distinct item ids the user recommended.
  std::span<const std::uint32_t> items_of(std::uint32_t user) const {
    if (user >= user_labels_.size()) throw std::out_of_range("unknown user id");
    if (user >= user_items_.size()) return {};
    return {user_items_[user].data(), user_items_[user].size()};
  }

  // |items(a) ∩ items(b)|; an unknown user contributes the empty set.
  std::size_t co_activity(std::string_view a, std::string_view b) const {
    auto ua = find_user(a);
    auto ub = find_user(b);
    if (!ua || !ub) return 0;
    return co_activity_ids(*ua, *ub);
  }

  std::size_t co_activity_ids(std::uint32_t a, std::uint32_t b) const {
    auto ia = items_of(a);
    auto ib = items_of(b);
    std::size_t n = 0;
    auto pa = ia.begin();
    auto pb = ib.begin();
    while (pa != ia.end() && pb != ib.end()) {
      if (*pa < *pb) {
        ++pa;
      } else if (*pb < *pa) {
        ++pb;
      } else {
        ++n;
        ++pa;
        ++pb;
      }
    }
    return n;
  }

  // Promotion metadata (kept separate from the record stream; setting a
  // promotion time does not create an item).
  void set_promotion_time(std::string_view item, std::int64_t t) {
    promotions_[std::string(item)] = t;
  }
  std::optional<std::int64_t> promotion_time(std::string_view item) const {
    auto it = promotions_.find(std::string(item));
    if (it == promotions_.end()) return std::nullopt;
    return it->second;
  }
  const std::map<std::string, std::int64_t>& promotions() const {
    return promotions_;
  }

 private:
  static std::uint32_t intern(std::string_view label,
                              std::unordered_map<std::string, std::uint32_t>& index,
                              std::vector<std::string>& labels) {
    auto [it, inserted] =
        index.try_emplace(std::string(label),
                          static_cast<std::uint32_t>(labels.size()));
    if (inserted) labels.push_back(it->first);
    return it->second;
  }

  std::vector<Record> records_;
  std::vector<std::string> user_labels_;
  std::vector<std::string> item_labels_;
  std::unordered_map<std::string, std::uint32_t> user_index_;
  std::unordered_map<std::string, std::uint32_t> item_index_;
  std::unordered_map<std::uint64_t, std::size_t> pair_index_;
  std::vector<std::vector<std::uint32_t>> user_items_;
  std::map<std::string, std::int64_t> promotions_;
};

// Two-pass Pearson correlation, accumulated in index order so results are
// reproducible bit-for-bit.
inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("pearson: length mismatch");
  }
  const std::size_t n = x.size();
  if (n < 2) {
    throw UndefinedCorrelationError("correlation undefined: fewer than 2 pairs");
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw UndefinedCorrelationError("correlation undefined: zero variance");
  }
  return sxy / (std::sqrt(sxx) * std::sqrt(syy));
}

// Which unordered node pairs a correlation runs over. `Linked` (pairs joined
// by at least one edge) is the follower-graph protocol and the default;
// `All` correlates every pair and is the protocol under which the bundled
// co-attendance dataset's published correlations arise.
enum class PairScope { Linked, All };

struct CorrelateOptions {
  std::optional<std::uint64_t> max_coactivity;  // strict upper bound
  PairScope scope = PairScope::Linked;
};

struct CorrelationResult {
  Metric metric;
  double r = 0.0;
  std::size_t pair_count = 0;
  std::string filter_description;
};

namespace detail {

// Co-activity of two graph nodes under the log's user labels; graph nodes
// absent from the log have empty item sets.
class NodeCoActivity {
 public:
  NodeCoActivity(const DirectedGraph& g, const ActivityLog& log) : log_(log) {
    ids_.reserve(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) {
      ids_.push_back(log.find_user(g.label(u)));
    }
  }

  std::size_t operator()(NodeId u, NodeId v) const {
    if (!ids_[u] || !ids_[v]) return 0;
    return log_.co_activity_ids(*ids_[u], *ids_[v]);
  }

 private:
  const ActivityLog& log_;
  std::vector<std::optional<std::uint32_t>> ids_;
};

inline std::vector<std::pair<NodeId, NodeId>> pairs_in_scope(
    const DirectedGraph& g, PairScope scope) {
  if (scope == PairScope::Linked) return g.linked_pairs();
  std::vector<std::pair<NodeId, NodeId>> all;
  const NodeId n = static_cast<NodeId>(g.node_count());
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) all.emplace_back(u, v);
  }
  return all;
}

inline std::string filter_description(const CorrelateOptions& opt) {
  std::string desc;
  if (opt.scope == PairScope::All) desc = "all-pairs";
  if (opt.max_coactivity) {
    if (!desc.empty()) desc += ";";
    desc += "co<" + std::to_string(*opt.max_coactivity);
  }
  return desc.empty() ? "none" : desc;
}

}  // namespace detail

// Pearson correlation between proximity(u, v) and co_activity(u, v) over the
// selected pair scope, keeping only pairs whose co-activity is strictly
// below max_coactivity (no bound when absent). Throws
// UndefinedCorrelationError per pearson().
inline CorrelationResult correlate(const DirectedGraph& g,
                                   const ActivityLog& log, Metric m,
                                   const CorrelateOptions& opt = {}) {
  if (m == Metric::Uniform) {
    throw std::invalid_argument("correlate: metric must not be Uniform");
  }
  detail::NodeCoActivity co(g, log);
  std::vector<double> xs, ys;
  for (auto [u, v] : detail::pairs_in_scope(g, opt.scope)) {
    const std::size_t c = co(u, v);
    if (opt.max_coactivity && c >= *opt.max_coactivity) continue;
    xs.push_back(proximity(g, u, v, m));
    ys.push_back(static_cast<double>(c));
  }
  CorrelationResult res;
  res.metric = m;
  res.pair_count = xs.size();
  res.filter_description = detail::filter_description(opt);
  res.r = pearson(xs, ys);
  return res;
}

struct ActivityLevelMean {
  std::uint64_t co_activity = 0;
  double mean_proximity = 0.0;
  std::size_t pair_count = 0;
};

// Mean proximity of linked pairs grouped by exact co-activity level,
// ascending by level; levels with no pairs are absent.
inline std::vector<ActivityLevelMean> mean_proximity_by_activity(
    const DirectedGraph& g, const ActivityLog& log, Metric m) {
  if (m == Metric::Uniform) {
    throw std::invalid_argument(
        "mean_proximity_by_activity: metric must not be Uniform");
  }
  detail::NodeCoActivity co(g, log);
  std::map<std::uint64_t, std::pair<double, std::size_t>> levels;
  for (auto [u, v] : g.linked_pairs()) {
    auto& [sum, count] = levels[co(u, v)];
    sum += proximity(g, u, v, m);
    count += 1;
  }
  std::vector<ActivityLevelMean> out;
  out.reserve(levels.size());
  for (const auto& [level, agg] : levels) {
    out.push_back({level, agg.first / static_cast<double>(agg.second),
                   agg.second});
  }
  return out;
}

struct PromotionFilterResult {
  ActivityLog log;
  std::size_t records_dropped = 0;          // all dropped records, any cause
  std::size_t items_without_promotion = 0;  // distinct items dropped entirely
};

// Keeps records strictly before their item's promotion time. Items with no
// promotion time are dropped entirely and counted. Promotion metadata is
// carried over to the filtered log.
inline PromotionFilterResult pre_promotion_filter(const ActivityLog& log) {
  PromotionFilterResult out;
  std::vector<bool> counted(log.item_count(), false);
  for (const auto& rec : log.records()) {
    const std::string& item = log.item_label(rec.item);
    const auto promo = log.promotion_time(item);
    if (!promo) {
      if (!counted[rec.item]) {
        counted[rec.item] = true;
        ++out.items_without_promotion;
      }
      ++out.records_dropped;
      continue;
    }
    if (rec.time < *promo) {
      out.log.add(log.user_label(rec.user), item, rec.time);
    } else {
      ++out.records_dropped;
    }
  }
  for (const auto& [item, t] : log.promotions()) {
    out.log.set_promotion_time(item, t);
  }
  return out;
}

namespace detail {

inline double entropy_bits(std::span<const std::size_t> counts) {
  std::size_t total = 0;
  for (std::size_t c : counts) total += c;
  if (total == 0) return 0.0;
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

// Per-item (time, user) timelines, each sorted by (time, user) so interval
// entropy is deterministic under time ties. One pass over the records.
inline std::vector<std::vector<std::pair<std::int64_t, std::uint32_t>>>
item_timelines(const ActivityLog& log) {
  std::vector<std::vector<std::pair<std::int64_t, std::uint32_t>>> groups(
      log.item_count());
  for (const auto& rec : log.records()) {
    groups[rec.item].emplace_back(rec.time, rec.user);
  }
  for (auto& g : groups) std::sort(g.begin(), g.end());
  return groups;
}

inline double user_entropy_of(
    std::span<const std::pair<std::int64_t, std::uint32_t>> timeline) {
  std::map<std::uint32_t, std::size_t> per_user;
  for (const auto& [time, user] : timeline) ++per_user[user];
  std::vector<std::size_t> counts;
  counts.reserve(per_user.size());
  for (const auto& [user, c] : per_user) counts.push_back(c);
  return entropy_bits(counts);
}

inline double interval_entropy_of(
    std::span<const std::pair<std::int64_t, std::uint32_t>> timeline) {
  if (timeline.size() < 2) return 0.0;
  std::map<std::int64_t, std::size_t> gap_counts;
  for (std::size_t i = 1; i < timeline.size(); ++i) {
    ++gap_counts[timeline[i].first - timeline[i - 1].first];
  }
  std::vector<std::size_t> counts;
  counts.reserve(gap_counts.size());
  for (const auto& [gap, c] : gap_counts) counts.push_back(c);
  return entropy_bits(counts);
}

}  // namespace detail

// Entropy (bits) of the distribution of per-user record counts for `item`.
// With deduplicated records every count is 1, so this is log2(#users).
inline double user_entropy(const ActivityLog& log, std::uint32_t item) {
  if (item >= log.item_count()) throw std::out_of_range("unknown item id");
  return detail::user_entropy_of(detail::item_timelines(log)[item]);
}

// Entropy (bits) of the distribution of gap values between consecutive
// records of `item` sorted by time: each of the n-1 gaps contributes mass
// 1/(n-1) to its value. Items with fewer than 2 records have entropy 0.
inline double interval_entropy(const ActivityLog& log, std::uint32_t item) {
  if (item >= log.item_count()) throw std::out_of_range("unknown item id");
  return detail::interval_entropy_of(detail::item_timelines(log)[item]);
}

// Items whose user entropy AND interval entropy both strictly exceed
// `threshold`, in item-id (first appearance) order.
inline std::vector<std::uint32_t> entropy_filter(const ActivityLog& log,
                                                 double threshold) {
  if (threshold < 0.0) {
    throw std::invalid_argument("entropy_filter: threshold must be >= 0");
  }
  const auto groups = detail::item_timelines(log);
  std::vector<std::uint32_t> retained;
  for (std::uint32_t item = 0; item < log.item_count(); ++item) {
    if (detail::user_entropy_of(groups[item]) > threshold &&
        detail::interval_entropy_of(groups[item]) > threshold) {
      retained.push_back(item);
    }
  }
  return retained;
}

}  // namespace proxnet
