// Acceptance gate: nine end-to-end criteria, each printed as one PASS/FAIL
// line with its sub-checks indented beneath. Exit status is the number of
// failing criteria, so the binary doubles as a CI gate. Tolerances are
// pinned in code next to the values they guard.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "proxnet/activity.hpp"
#include "proxnet/dynamics.hpp"
#include "proxnet/graph.hpp"
#include "proxnet/ingest.hpp"
#include "proxnet/predict.hpp"
#include "proxnet/proximity.hpp"
#include "support.hpp"

namespace {

using namespace proxnet;
using Clock = std::chrono::steady_clock;

std::string fmt(double v) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(6) << v;
  return ss.str();
}

struct Criterion {
  int id;
  std::string title;
  bool pass = true;
  std::vector<std::string> details;

  Criterion(int id_, std::string title_) : id(id_), title(std::move(title_)) {}

  void require(const std::string& what, bool ok) {
    details.push_back(std::string(ok ? "    [ok]   " : "    [MISS] ") + what);
    pass = pass && ok;
  }
  void require_near(const std::string& what, double actual, double expected,
                    double tol) {
    require(what + " = " + fmt(actual) + " (target " + fmt(expected) +
                " +/- " + fmt(tol) + ")",
            std::abs(actual - expected) <= tol);
  }
  void require_between(const std::string& what, double actual, double lo,
                       double hi) {
    require(what + " = " + fmt(actual) + " (window [" + fmt(lo) + ", " +
                fmt(hi) + "])",
            actual >= lo && actual <= hi);
  }
  void note(const std::string& line) { details.push_back("    " + line); }
};

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// --- criterion 1: correlation targets on the bundled dataset --------------

void criterion_correlations(Criterion& c) {
  const auto t0 = Clock::now();
  const auto& data = southern_women();
  const auto g = project_attendance(data);
  const auto log = attendance_activity_log(data);
  CorrelateOptions opt;
  opt.scope = PairScope::All;

  const std::pair<Metric, double> targets[] = {
      {Metric::CN, 0.515}, {Metric::JC, 0.504},    {Metric::AA, 0.519},
      {Metric::CS, 0.532}, {Metric::CS_AL, 0.492}, {Metric::NC, 0.515},
      {Metric::NC_AL, 0.532}};
  std::map<Metric, double> r;
  for (const auto& [m, expected] : targets) {
    r[m] = correlate(g, log, m, opt).r;
    c.require_near(std::string(to_string(m)), r[m], expected, 0.02);
  }
  double best = r.begin()->second;
  for (const auto& [m, v] : r) best = std::max(best, v);
  c.require("CS attains the maximum (" + fmt(r[Metric::CS]) + ")",
            r[Metric::CS] == best);
  c.require("NC_AL ties CS bit-for-bit", r[Metric::NC_AL] == r[Metric::CS]);

  const double ms = elapsed_ms(t0);
  c.require("runtime " + fmt(ms) + " ms < 1000 ms", ms < 1000.0);
}

// --- criterion 2: linked vs unlinked proximity gap -------------------------

void criterion_linked_gap(Criterion& c) {
  const auto& data = southern_women();
  const auto g = project_attendance(data);
  const auto linked = g.linked_pairs();

  std::map<Metric, std::pair<double, double>> sums;  // linked, unlinked
  std::size_t linked_n = 0, unlinked_n = 0;
  std::size_t li = 0;
  const NodeId n = static_cast<NodeId>(g.node_count());
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      const bool is_linked =
          li < linked.size() && linked[li] == std::pair(u, v);
      if (is_linked) {
        ++li;
        ++linked_n;
      } else {
        ++unlinked_n;
      }
      for (Metric m : kGraphMetrics) {
        auto& [ls, us] = sums[m];
        (is_linked ? ls : us) += proximity(g, u, v, m);
      }
    }
  }
  const double cn_linked =
      sums[Metric::CN].first / static_cast<double>(linked_n);
  const double cn_unlinked =
      sums[Metric::CN].second / static_cast<double>(unlinked_n);
  c.require_near("mean CN over linked pairs", cn_linked, 13.6, 0.5);
  c.require_near("mean CN over unlinked pairs", cn_unlinked, 10.4, 0.5);

  // Linked-pair means should exceed unlinked-pair means by 16%-30%,
  // +/- 5 percentage points.
  for (Metric m : kGraphMetrics) {
    const double lm = sums[m].first / static_cast<double>(linked_n);
    const double um = sums[m].second / static_cast<double>(unlinked_n);
    const double gap_pct = 100.0 * (lm - um) / um;
    c.require_between(std::string(to_string(m)) + " linked-over-unlinked gap %",
                      gap_pct, 11.0, 35.0);
  }
}

// --- criterion 3: process-enumeration oracle equivalence -------------------

void criterion_oracle(Criterion& c) {
  const auto t0 = Clock::now();
  const std::pair<ProcessKind, Metric> pairs[] = {
      {ProcessKind::RandomWalk, Metric::CS},
      {ProcessKind::RandomWalkAttention, Metric::CS_AL},
      {ProcessKind::Broadcast, Metric::NC},
      {ProcessKind::BroadcastAttention, Metric::NC_AL}};
  double worst = 0.0;
  std::size_t pairs_checked = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t nodes = 10 + seed % 31;  // 10..40
    const auto g = testsupport::random_digraph(nodes, 0.1, seed);
    for (NodeId u = 0; u < g.node_count(); ++u) {
      for (NodeId v = u + 1; v < g.node_count(); ++v) {
        for (const auto& [process, metric] : pairs) {
          const double diff = std::abs(symmetrized_reach(g, u, v, process) -
                                       proximity(g, u, v, metric));
          worst = std::max(worst, diff);
        }
        ++pairs_checked;
      }
    }
  }
  c.note("pairs checked: " + std::to_string(pairs_checked) +
         " across 100 seeded digraphs (n in 10..40, p = 0.1)");
  c.require("max |reach - metric| = " + fmt(worst) + " <= 1e-12",
            worst <= 1e-12);
  const double ms = elapsed_ms(t0);
  c.require("runtime " + fmt(ms) + " ms < 10000 ms", ms < 10000.0);
}

// --- criterion 4: metric identities under property-based testing -----------

void criterion_identities(Criterion& c) {
  std::size_t cases = 0, violations = 0;
  auto flag = [&](bool ok) { violations += ok ? 0 : 1; };

  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto g = testsupport::random_digraph(25, 0.12, seed);
    for (NodeId u = 0; u < g.node_count(); ++u) {
      for (NodeId v = u + 1; v < g.node_count(); ++v) {
        double s[8], t[8];
        for (std::size_t i = 0; i < kGraphMetrics.size(); ++i) {
          s[i] = proximity(g, u, v, kGraphMetrics[i]);
          t[i] = proximity(g, v, u, kGraphMetrics[i]);
          flag(s[i] == t[i]);  // symmetric bit-for-bit
          flag(s[i] >= 0.0 && std::isfinite(s[i]));
        }
        flag(s[5] == s[0]);        // NC = CN exactly
        flag(s[1] <= 1.0);         // JC is a ratio
        flag(s[3] <= 1.0);         // CS is a probability
        flag(s[4] <= s[3]);        // attention never raises CS
        flag(s[6] <= s[5]);        // attention never raises NC
        ++cases;
      }
    }
  }

  double worst_closed = 0.0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto g = testsupport::random_symmetric_digraph(20, 0.25, seed);
    for (NodeId u = 0; u < g.node_count(); ++u) {
      for (NodeId v = u + 1; v < g.node_count(); ++v) {
        const double cs = proximity(g, u, v, Metric::CS);
        const double nc_al = proximity(g, u, v, Metric::NC_AL);
        flag(cs == nc_al);  // identical arithmetic on symmetric graphs
        const auto mediators = common_neighbor_sets(g, u, v).forward;
        if (mediators.empty()) {
          flag(cs == 0.0);  // endpoint degrees may be zero here
          ++cases;
          continue;
        }
        double zsum = 0.0;
        for (NodeId z : mediators) {
          zsum += 1.0 / static_cast<double>(g.undirected_degree(z));
        }
        const double closed =
            0.5 *
            (1.0 / static_cast<double>(g.undirected_degree(u)) +
             1.0 / static_cast<double>(g.undirected_degree(v))) *
            zsum;
        worst_closed = std::max(worst_closed, std::abs(cs - closed));
        ++cases;
      }
    }
  }
  c.note("property cases: " + std::to_string(cases));
  c.require("case count >= 10000", cases >= 10000);
  c.require("identity violations = " + std::to_string(violations),
            violations == 0);
  c.require("max |CS - undirected closed form| = " + fmt(worst_closed) +
                " <= 1e-12",
            worst_closed <= 1e-12);
}

// --- criterion 5: exact two-friend prediction fixture ----------------------

void criterion_fixture(Criterion& c) {
  const auto g = testsupport::make_graph({{"a", "w"},
                                          {"b", "w"},
                                          {"w", "m1"},
                                          {"w", "m2"},
                                          {"w", "m3"},
                                          {"m1", "a"},
                                          {"m2", "a"},
                                          {"m3", "a"},
                                          {"w", "mb"},
                                          {"mb", "b"}});
  const NodeId w = *g.find("w");
  const std::map<NodeId, std::vector<std::uint8_t>> vectors = {
      {*g.find("a"), {1, 0}}, {*g.find("b"), {0, 1}}};
  const std::vector<std::uint8_t> actual = {1, 0};

  const auto p = predict_user(g, w, vectors, Metric::CS);
  c.require("p = [0.75, 0.25] exactly",
            p.has_value() && p->values == std::vector<double>{0.75, 0.25});
  const auto e = evaluate(p->values, actual);
  c.require("precision = 0.75 exactly", e.precision == 0.75);
  c.require("recall = 0.75 exactly", e.recall == 0.75);

  const auto base = predict_user(g, w, vectors, Metric::Uniform);
  const auto be = evaluate(base->values, actual);
  c.require("uniform precision = 0.5 exactly", be.precision == 0.5);
  c.require("uniform recall = 0.5 exactly", be.recall == 0.5);
  const double lift = 100.0 * (*e.precision - *be.precision) / *be.precision;
  c.require("precision lift = +50% exactly", lift == 50.0);
}

// --- criterion 6: prediction direction on the bundled dataset --------------

void criterion_prediction_direction(Criterion& c) {
  const auto t0 = Clock::now();
  ExperimentConfig cfg;
  cfg.split = SplitSpec{5, 12345, 400};
  const auto report = run_experiment(southern_women(), cfg);

  std::map<Metric, const MetricOutcome*> out;
  for (std::size_t i = 0; i < report.metrics.size(); ++i) {
    out[report.metrics[i]] = &report.outcomes[i];
  }
  const double base = out[Metric::Uniform]->precision;
  c.note("trials used: " + std::to_string(report.trials_used) + " of 400");
  for (Metric m : report.metrics) {
    const auto* o = out[m];
    c.note(std::string(to_string(m)) + ": precision " + fmt(o->precision) +
           (o->precision_lift_pct
                ? " (lift " + fmt(*o->precision_lift_pct) + "%)"
                : ""));
  }
  c.require("CS precision " + fmt(out[Metric::CS]->precision) +
                " > uniform " + fmt(base),
            out[Metric::CS]->precision > base);
  c.require("JC precision " + fmt(out[Metric::JC]->precision) +
                " > uniform " + fmt(base),
            out[Metric::JC]->precision > base);
  const double ms = elapsed_ms(t0);
  c.require("runtime " + fmt(ms) + " ms < 30000 ms", ms < 30000.0);
}

// --- criterion 7: synthetic cascades close the loop ------------------------

void criterion_synthetic(Criterion& c) {
  const auto t0 = Clock::now();
  const auto g = testsupport::random_digraph(500, 0.02, 424242);
  c.note("graph: 500 nodes, " + std::to_string(g.edge_count()) + " edges");

  const int runs = 20;
  double lift_sum = 0.0;
  int lifts_defined = 0;
  for (int run = 0; run < runs; ++run) {
    CascadeOptions co;
    co.item_count = 200;
    co.process = ProcessKind::BroadcastAttention;
    co.seeds_per_item = 3;
    co.adoption_probability = 0.5;
    co.max_hops = 6;
    co.rng_seed = static_cast<std::uint64_t>(run);
    const auto log = generate_cascades(g, co);

    ExperimentConfig cfg;
    cfg.split = SplitSpec{150, static_cast<std::uint64_t>(run), 60};
    cfg.metrics = {Metric::NC_AL};
    const auto report = run_experiment(g, log, cfg);
    const auto& lift = report.outcomes.front().precision_lift_pct;
    if (lift) {
      lift_sum += *lift;
      ++lifts_defined;
    }
  }
  c.require("lift defined in all " + std::to_string(runs) + " runs",
            lifts_defined == runs);
  const double mean_lift = lift_sum / static_cast<double>(runs);
  c.note("cascades: broadcast_attention, 200 items/run, adoption 0.5, "
         "3 seeds/item, 20 run seeds; prediction: NC_AL, n_train 150, "
         "60 trials/run");
  c.require("mean NC_AL precision lift = " + fmt(mean_lift) + "% > 0",
            lifts_defined == runs && mean_lift > 0.0);
  const double ms = elapsed_ms(t0);
  c.require("runtime " + fmt(ms) + " ms < 120000 ms", ms < 120000.0);
}

// --- criterion 8: entropy filter boundary ----------------------------------

void criterion_entropy_boundary(Criterion& c) {
  ActivityLog log;
  const std::int64_t times8[] = {0, 1, 3, 6, 10, 15, 21, 28};
  for (int u = 0; u < 8; ++u) {
    log.add("a" + std::to_string(u), "eight", times8[u]);
  }
  const std::int64_t times10[] = {0, 1, 3, 6, 10, 15, 21, 28, 36, 45};
  for (int u = 0; u < 10; ++u) {
    log.add("b" + std::to_string(u), "ten", times10[u]);
  }
  const auto eight = *log.find_item("eight");
  const auto ten = *log.find_item("ten");

  c.require("8-user item: user entropy = 3.0 bits exactly",
            user_entropy(log, eight) == 3.0);
  const auto kept = entropy_filter(log, 3.0);
  const bool eight_out =
      std::find(kept.begin(), kept.end(), eight) == kept.end();
  const bool ten_in = std::find(kept.begin(), kept.end(), ten) != kept.end();
  c.require("8-user item excluded at threshold 3 (strict >)", eight_out);
  c.require("10-user item (user entropy " + fmt(user_entropy(log, ten)) +
                ", interval entropy " + fmt(interval_entropy(log, ten)) +
                ") included at threshold 3",
            ten_in);
}

// --- criterion 9: CLI byte-reproducibility ----------------------------------

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run_cli(const std::filesystem::path& dir, const std::string& args) {
  static int counter = 0;
  const auto out = dir / ("out_" + std::to_string(counter++));
  const std::string cmd = std::string("'") + PROXNET_CLI_PATH + "' " + args +
                          " >'" + out.string() + "' 2>/dev/null";
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

void criterion_reproducibility(Criterion& c) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() /
                       ("proxnet_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path star = dir / "star.tsv";
  {
    std::ofstream out(star);
    out << "hub\tf1\nhub\tf2\nhub\tf3\nhub\tf4\nhub\tf5\n";
  }

  const std::string commands[] = {
      "correlate --dataset southern-women",
      "predict --dataset southern-women --n-train 5 --trials 50 --seed 7",
      "simulate --graph " + star.string() +
          " --process broadcast_attention --items 8 --seeds-per-item 2 "
          "--adoption 0.5 --seed 11",
  };
  for (const auto& cmd : commands) {
    const auto a = run_cli(dir, cmd);
    const auto b = run_cli(dir, cmd);
    c.require("re-run byte-identical: " + cmd.substr(0, cmd.find(' ')),
              a.code == 0 && b.code == 0 && a.out == b.out);
  }

  const std::string predict =
      "predict --dataset southern-women --n-train 5 --trials 50 --seed 7";
  const auto one = run_cli(dir, predict + " --threads 1");
  const auto four = run_cli(dir, predict + " --threads 4");
  bool same_results = false;
  if (one.code == 0 && four.code == 0) {
    const auto ja = nlohmann::json::parse(one.out, nullptr, false);
    const auto jb = nlohmann::json::parse(four.out, nullptr, false);
    same_results = !ja.is_discarded() && !jb.is_discarded() &&
                   ja["results"] == jb["results"] &&
                   ja["trials_used"] == jb["trials_used"];
  }
  c.require("results identical across --threads 1 and --threads 4",
            same_results);
  fs::remove_all(dir);
}

}  // namespace

int main() {
  std::vector<Criterion> criteria;
  const std::pair<const char*, void (*)(Criterion&)> plan[] = {
      {"correlation targets on the bundled dataset (all pairs)",
       criterion_correlations},
      {"linked pairs are substantially closer than unlinked pairs",
       criterion_linked_gap},
      {"process-enumeration oracles match the metric implementations",
       criterion_oracle},
      {"metric identities hold under property-based testing",
       criterion_identities},
      {"two-friend prediction fixture is exact", criterion_fixture},
      {"CS and JC beat the uniform baseline on the bundled dataset",
       criterion_prediction_direction},
      {"synthetic attention-limited cascades reward NC_AL weighting",
       criterion_synthetic},
      {"entropy filter boundary behavior", criterion_entropy_boundary},
      {"reports are byte-reproducible, independent of parallelism",
       criterion_reproducibility},
  };

  int failures = 0;
  for (std::size_t i = 0; i < std::size(plan); ++i) {
    Criterion c(static_cast<int>(i + 1), plan[i].first);
    try {
      plan[i].second(c);
    } catch (const std::exception& e) {
      c.require(std::string("unexpected exception: ") + e.what(), false);
    }
    std::cout << "criterion " << c.id << ": " << (c.pass ? "PASS" : "FAIL")
              << " - " << c.title << "\n";
    for (const auto& line : c.details) std::cout << line << "\n";
    failures += c.pass ? 0 : 1;
  }
  std::cout << "acceptance: " << (std::size(plan) - failures) << "/"
            << std::size(plan) << " criteria pass\n";
  return failures;
}
