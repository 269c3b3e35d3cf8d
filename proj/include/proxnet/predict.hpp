#pragma once

// Proximity-weighted activity prediction: a user's future activity is
// predicted as the proximity-weighted mix of their friends' activity, and
// scored by precision/recall against what the user actually did, with a
// uniform-weight baseline and percentage lift.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "proxnet/activity.hpp"
#include "proxnet/detail/rng.hpp"
#include "proxnet/graph.hpp"
#include "proxnet/proximity.hpp"

namespace proxnet {

// Raised by run_experiment when not a single trial produced an evaluable
// user under every requested metric.
class NoEvaluableUsersError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SplitSpec {
  std::size_t n_train = 1;
  std::uint64_t seed = 0;
  std::size_t trials = 200;
};

struct ItemSplit {
  std::vector<std::size_t> train;  // sorted, size n_train
  std::vector<std::size_t> test;   // sorted complement
};

// Deterministic uniformly-random n_train-subset of {0..item_count-1} as a
// pure function of (spec.seed, trial_index).
inline ItemSplit split_items(std::size_t item_count, const SplitSpec& spec,
                             std::size_t trial_index) {
  if (spec.n_train < 1 || spec.n_train >= item_count) {
    throw std::invalid_argument(
        "split_items: n_train must satisfy 1 <= n_train < item count");
  }
  auto rng = detail::make_stream(spec.seed, trial_index);
  std::vector<std::size_t> ids(item_count);
  for (std::size_t i = 0; i < item_count; ++i) ids[i] = i;
  for (std::size_t i = 0; i + 1 < item_count && i < spec.n_train; ++i) {
    const std::size_t j = i + detail::bounded(rng, item_count - i);
    std::swap(ids[i], ids[j]);
  }
  ItemSplit split;
  split.train.assign(ids.begin(), ids.begin() + spec.n_train);
  split.test.assign(ids.begin() + spec.n_train, ids.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

struct PredictionVector {
  std::string user;
  std::vector<double> values;
};

// Prediction for user w from the binary test vectors of their friends
// (friends = in-neighbors of w: the accounts whose activity w observes):
//
//   p = sum_j x_j f_j / sum_j x_j,   x_j = proximity(w, j)  (Uniform: 1).
//
// friend_vectors must cover exactly the in-neighbors of w, all vectors the
// same length. Returns nullopt when sum_j x_j = 0 (no friend carries
// positive weight): the user cannot be scored under this metric.
inline std::optional<PredictionVector> predict_user(
    const DirectedGraph& g, NodeId w,
    const std::map<NodeId, std::vector<std::uint8_t>>& friend_vectors,
    Metric metric) {
  auto friends = g.in_neighbors(w);
  if (friend_vectors.size() != friends.size() ||
      !std::equal(friends.begin(), friends.end(), friend_vectors.begin(),
                  friend_vectors.end(),
                  [](NodeId a, const auto& kv) { return a == kv.first; })) {
    throw std::invalid_argument(
        "predict_user: friend_vectors must cover exactly the in-neighbors");
  }
  std::size_t len = 0;
  bool first = true;
  for (const auto& [j, f] : friend_vectors) {
    if (first) {
      len = f.size();
      first = false;
    } else if (f.size() != len) {
      throw std::invalid_argument("predict_user: friend vector length mismatch");
    }
  }
  double weight_sum = 0.0;
  std::vector<double> p(len, 0.0);
  for (const auto& [j, f] : friend_vectors) {
    const double x =
        metric == Metric::Uniform ? 1.0 : proximity(g, w, j, metric);
    weight_sum += x;
    for (std::size_t i = 0; i < len; ++i) {
      p[i] += x * static_cast<double>(f[i]);
    }
  }
  if (weight_sum == 0.0) return std::nullopt;
  for (double& v : p) v /= weight_sum;
  return PredictionVector{g.label(w), std::move(p)};
}

struct Evaluation {
  std::optional<double> precision;  // undefined when |p| = 0
  std::optional<double> recall;     // undefined when |u| = 0 (so is precision)
};

// Precision = u.p / |p|, recall = u.p / |u|, with |z| = sum_i z_i. A user
// with an empty test-window activity vector (|u| = 0) cannot be scored at
// all; |p| = 0 leaves recall = 0 defined but precision undefined.
inline Evaluation evaluate(std::span<const double> p,
                           std::span<const std::uint8_t> actual) {
  if (p.size() != actual.size()) {
    throw std::invalid_argument("evaluate: length mismatch");
  }
  double dot = 0.0, norm_p = 0.0, norm_u = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    dot += p[i] * static_cast<double>(actual[i]);
    norm_p += p[i];
    norm_u += static_cast<double>(actual[i]);
  }
  Evaluation e;
  if (norm_u == 0.0) return e;
  e.recall = dot / norm_u;
  if (norm_p > 0.0) e.precision = dot / norm_p;
  return e;
}

struct ExperimentConfig {
  SplitSpec split;
  // Graph metrics to compare; Uniform is always computed as baseline and
  // listed last in the report whether or not it appears here.
  std::vector<Metric> metrics{kGraphMetrics.begin(), kGraphMetrics.end()};
  unsigned threads = 1;  // 0 = hardware concurrency; result is identical
};

struct MetricOutcome {
  double precision = 0.0;
  double recall = 0.0;
  // Percent lift vs. the Uniform baseline; absent if the baseline is 0.
  std::optional<double> precision_lift_pct;
  std::optional<double> recall_lift_pct;
  std::uint64_t users_evaluated = 0;
  std::uint64_t users_excluded = 0;
};

struct PredictionReport {
  std::vector<Metric> metrics;          // resolved order, Uniform last
  std::vector<MetricOutcome> outcomes;  // parallel to `metrics`
  std::size_t trials = 0;               // requested
  std::size_t trials_used = 0;          // trials with >= 1 evaluable user
};

namespace detail {

// Per-user friend list and per-metric friend weights on a fixed graph.
struct FriendWeights {
  std::vector<NodeId> friends;          // in-neighbors, ascending
  std::vector<std::vector<double>> x;   // [metric][friend]
};

inline std::vector<FriendWeights> friend_weights(
    const DirectedGraph& g, std::span<const Metric> metrics) {
  std::vector<FriendWeights> all(g.node_count());
  for (NodeId w = 0; w < g.node_count(); ++w) {
    auto friends = g.in_neighbors(w);
    auto& fw = all[w];
    fw.friends.assign(friends.begin(), friends.end());
    fw.x.resize(metrics.size());
    for (std::size_t mi = 0; mi < metrics.size(); ++mi) {
      fw.x[mi].reserve(fw.friends.size());
      for (NodeId j : fw.friends) {
        fw.x[mi].push_back(metrics[mi] == Metric::Uniform
                               ? 1.0
                               : proximity(g, w, j, metrics[mi]));
      }
    }
  }
  return all;
}

struct TrialEval {
  std::vector<double> precision;         // per metric, mean over common users
  std::vector<double> recall;            // per metric
  std::vector<std::uint64_t> evaluable;  // per metric
  std::size_t common_users = 0;
  bool used = false;
};

// Scores one trial. `tests` holds each node's binary activity vector over
// the trial's test items. Only the precision/recall sufficient statistics
// are needed per friend: |f_j| and f_j.u, so the per-item loop runs once
// per (user, friend), not per metric. Macro averages run over the users
// evaluable under EVERY metric, so per-metric numbers are comparable.
inline TrialEval evaluate_trial(
    const std::vector<FriendWeights>& weights,
    const std::vector<std::vector<std::uint8_t>>& tests,
    std::size_t metric_count) {
  const std::size_t n = weights.size();
  TrialEval out;
  out.precision.assign(metric_count, 0.0);
  out.recall.assign(metric_count, 0.0);
  out.evaluable.assign(metric_count, 0);

  std::vector<double> pr(metric_count), re(metric_count);
  std::vector<std::uint8_t> ok(metric_count);
  for (NodeId w = 0; w < n; ++w) {
    const auto& fw = weights[w];
    const auto& u = tests[w];
    double norm_u = 0.0;
    for (std::uint8_t b : u) norm_u += static_cast<double>(b);

    // Per-friend sufficient statistics: |f_j| and f_j . u.
    std::vector<double> f_norm(fw.friends.size(), 0.0);
    std::vector<double> f_dot(fw.friends.size(), 0.0);
    for (std::size_t k = 0; k < fw.friends.size(); ++k) {
      const auto& f = tests[fw.friends[k]];
      double s = 0.0, d = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) {
        s += static_cast<double>(f[i]);
        d += static_cast<double>(f[i]) * static_cast<double>(u[i]);
      }
      f_norm[k] = s;
      f_dot[k] = d;
    }

    bool all_ok = true;
    for (std::size_t mi = 0; mi < metric_count; ++mi) {
      double weight_sum = 0.0, p_norm = 0.0, p_dot = 0.0;
      for (std::size_t k = 0; k < fw.friends.size(); ++k) {
        const double x = fw.x[mi][k];
        weight_sum += x;
        p_norm += x * f_norm[k];
        p_dot += x * f_dot[k];
      }
      const bool evaluable = weight_sum > 0.0 && norm_u > 0.0 && p_norm > 0.0;
      ok[mi] = evaluable;
      all_ok = all_ok && evaluable;
      if (evaluable) {
        out.evaluable[mi] += 1;
        pr[mi] = p_dot / p_norm;
        re[mi] = p_dot / (weight_sum * norm_u);
      }
    }
    if (all_ok) {
      out.common_users += 1;
      for (std::size_t mi = 0; mi < metric_count; ++mi) {
        out.precision[mi] += pr[mi];
        out.recall[mi] += re[mi];
      }
    }
  }
  if (out.common_users > 0) {
    out.used = true;
    for (std::size_t mi = 0; mi < metric_count; ++mi) {
      out.precision[mi] /= static_cast<double>(out.common_users);
      out.recall[mi] /= static_cast<double>(out.common_users);
    }
  }
  return out;
}

inline std::vector<Metric> resolve_metrics(std::span<const Metric> requested) {
  std::vector<Metric> resolved;
  for (Metric m : requested) {
    if (m == Metric::Uniform) continue;
    if (std::find(resolved.begin(), resolved.end(), m) == resolved.end()) {
      resolved.push_back(m);
    }
  }
  resolved.push_back(Metric::Uniform);
  return resolved;
}

// Runs `trials` independent trial evaluations (possibly across threads;
// results are keyed by trial index and reduced in index order, so the
// report does not depend on the thread count) and assembles the report.
template <typename TrialFn>
PredictionReport reduce_trials(const ExperimentConfig& cfg,
                               std::span<const Metric> metrics,
                               std::size_t candidates_per_trial,
                               TrialFn&& run_trial) {
  const std::size_t trials = cfg.split.trials;
  if (trials < 1) {
    throw std::invalid_argument("run_experiment: trials must be >= 1");
  }
  std::vector<TrialEval> evals(trials);
  unsigned threads = cfg.threads == 0
                         ? std::max(1u, std::thread::hardware_concurrency())
                         : cfg.threads;
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, trials));
  if (threads <= 1) {
    for (std::size_t t = 0; t < trials; ++t) evals[t] = run_trial(t);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned k = 0; k < threads; ++k) {
      pool.emplace_back([&, k] {
        try {
          for (std::size_t t = k; t < trials; t += threads) {
            evals[t] = run_trial(t);
          }
        } catch (...) {
          errors[k] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }
  }

  PredictionReport report;
  report.metrics.assign(metrics.begin(), metrics.end());
  report.outcomes.resize(metrics.size());
  report.trials = trials;
  std::vector<double> sum_pr(metrics.size(), 0.0), sum_re(metrics.size(), 0.0);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto& ev = evals[t];
    for (std::size_t mi = 0; mi < metrics.size(); ++mi) {
      report.outcomes[mi].users_excluded +=
          candidates_per_trial - ev.evaluable[mi];
    }
    if (!ev.used) continue;
    report.trials_used += 1;
    for (std::size_t mi = 0; mi < metrics.size(); ++mi) {
      report.outcomes[mi].users_evaluated += ev.common_users;
      sum_pr[mi] += ev.precision[mi];
      sum_re[mi] += ev.recall[mi];
    }
  }
  if (report.trials_used == 0) {
    throw NoEvaluableUsersError(
        "run_experiment: no trial produced a user evaluable under every "
        "metric");
  }
  for (std::size_t mi = 0; mi < metrics.size(); ++mi) {
    report.outcomes[mi].precision =
        sum_pr[mi] / static_cast<double>(report.trials_used);
    report.outcomes[mi].recall =
        sum_re[mi] / static_cast<double>(report.trials_used);
  }
  const auto& base = report.outcomes.back();  // Uniform is last
  for (auto& out : report.outcomes) {
    if (base.precision > 0.0) {
      out.precision_lift_pct =
          100.0 * (out.precision - base.precision) / base.precision;
    }
    if (base.recall > 0.0) {
      out.recall_lift_pct = 100.0 * (out.recall - base.recall) / base.recall;
    }
  }
  return report;
}

}  // namespace detail

// Attendance mode: per trial, the training events are projected into a
// fresh graph (structure and proximity both come from training data) and
// test-event attendance is predicted per actor.
inline PredictionReport run_experiment(const BipartiteAttendance& attendance,
                                       const ExperimentConfig& cfg) {
  if (cfg.split.n_train < 1 || cfg.split.n_train >= attendance.event_count()) {
    throw std::invalid_argument(
        "run_experiment: n_train must satisfy 1 <= n_train < event count");
  }
  const auto metrics = detail::resolve_metrics(cfg.metrics);
  const std::size_t n = attendance.actor_count();
  auto run_trial = [&](std::size_t t) {
    const auto split = split_items(attendance.event_count(), cfg.split, t);
    const DirectedGraph g = project_attendance(attendance, split.train);
    const auto weights = detail::friend_weights(g, metrics);
    std::vector<std::vector<std::uint8_t>> tests(n);
    for (std::size_t a = 0; a < n; ++a) {
      tests[a].reserve(split.test.size());
      for (std::size_t e : split.test) {
        tests[a].push_back(attendance.attended(a, e) ? 1 : 0);
      }
    }
    return detail::evaluate_trial(weights, tests, metrics.size());
  };
  return detail::reduce_trials(cfg, metrics, n, run_trial);
}

// Follower-graph mode: proximity comes from the full graph (structure is
// not split); the log's items are split per trial and each node's test
// activity is its recommended items that fall in the test set. Nodes
// missing from the log simply have empty activity.
inline PredictionReport run_experiment(const DirectedGraph& g,
                                       const ActivityLog& log,
                                       const ExperimentConfig& cfg) {
  if (cfg.split.n_train < 1 || cfg.split.n_train >= log.item_count()) {
    throw std::invalid_argument(
        "run_experiment: n_train must satisfy 1 <= n_train < item count");
  }
  const auto metrics = detail::resolve_metrics(cfg.metrics);
  const std::size_t n = g.node_count();
  const auto weights = detail::friend_weights(g, metrics);
  std::vector<std::optional<std::uint32_t>> log_user(n);
  for (NodeId w = 0; w < n; ++w) log_user[w] = log.find_user(g.label(w));

  auto run_trial = [&](std::size_t t) {
    const auto split = split_items(log.item_count(), cfg.split, t);
    std::vector<std::size_t> test_pos(log.item_count(), SIZE_MAX);
    for (std::size_t i = 0; i < split.test.size(); ++i) {
      test_pos[split.test[i]] = i;
    }
    std::vector<std::vector<std::uint8_t>> tests(
        n, std::vector<std::uint8_t>(split.test.size(), 0));
    for (NodeId w = 0; w < n; ++w) {
      if (!log_user[w]) continue;
      for (std::uint32_t item : log.items_of(*log_user[w])) {
        if (test_pos[item] != SIZE_MAX) tests[w][test_pos[item]] = 1;
      }
    }
    return detail::evaluate_trial(weights, tests, metrics.size());
  };
  return detail::reduce_trials(cfg, metrics, n, run_trial);
}

}  // namespace proxnet
