// proxnet — command-line surface for the proximity toolkit.
//
// Subcommands: score, project, correlate, predict, simulate, filter.
// Every emitted report embeds its full resolved configuration (CSV: leading
// '#' comment lines; JSON: a "config" object), so any output can be
// regenerated byte-for-byte from the command it records.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "proxnet/activity.hpp"
#include "proxnet/dynamics.hpp"
#include "proxnet/graph.hpp"
#include "proxnet/ingest.hpp"
#include "proxnet/predict.hpp"
#include "proxnet/proximity.hpp"

namespace {

using nlohmann::json;
using namespace proxnet;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

std::vector<Metric> parse_metric_list(const std::string& text,
                                      bool allow_uniform) {
  std::vector<Metric> out;
  if (text == "all") {
    out.assign(kGraphMetrics.begin(), kGraphMetrics.end());
    return out;
  }
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    const auto m = metric_from_string(tok);
    if (!m) throw std::invalid_argument("unknown metric: " + tok);
    if (*m == Metric::Uniform && !allow_uniform) {
      throw std::invalid_argument(
          "Uniform is the prediction baseline, not a graph metric");
    }
    if (std::find(out.begin(), out.end(), *m) == out.end()) out.push_back(*m);
  }
  if (out.empty()) throw std::invalid_argument("empty metric list");
  return out;
}

std::string metric_list_string(const std::vector<Metric>& ms) {
  std::string s;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (i) s += ',';
    s += to_string(ms[i]);
  }
  return s;
}

// Resolved configuration echoed into every report, in insertion order.
class ConfigEcho {
 public:
  explicit ConfigEcho(std::string command) {
    add("command", std::move(command));
  }
  void add(std::string key, std::string value) {
    entries_.emplace_back(std::move(key), std::move(value));
  }
  void add(std::string key, std::uint64_t value) {
    add(std::move(key), std::to_string(value));
  }
  void write_comments(std::ostream& out) const {
    for (const auto& [k, v] : entries_) out << "# " << k << '=' << v << '\n';
  }
  json to_json() const {
    json j = json::object();
    for (const auto& [k, v] : entries_) j[k] = v;
    return j;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// Writes report text to --out (or stdout), creating the file fresh.
void emit(const std::optional<std::string>& out_path, const std::string& text) {
  if (!out_path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot open output file: " + *out_path);
  out << text;
}

struct GraphInputs {
  std::string path;
  std::string semantics = "flows";
  bool lenient = false;
};

DirectedGraph load_graph(const GraphInputs& in) {
  const auto parsed = parse_edge_list_file(in.path, in.lenient);
  if (!parsed.skipped_lines.empty()) {
    std::cerr << "warning: skipped " << parsed.skipped_lines.size()
              << " malformed line(s) in " << in.path << "\n";
  }
  const EdgeSemantics sem = in.semantics == "follows" ? EdgeSemantics::Follows
                                                      : EdgeSemantics::Flows;
  auto built = build_graph(parsed.edges, sem);
  if (built.dropped_edges > 0) {
    std::cerr << "note: dropped " << built.dropped_edges
              << " duplicate/self-loop edge(s) from " << in.path << "\n";
  }
  return std::move(built.graph);
}

// ---------------------------------------------------------------- score ---

struct ScoreArgs {
  GraphInputs graph;
  std::string metrics = "all";
  std::optional<std::string> out;
};

int cmd_score(const ScoreArgs& a) {
  const auto metrics = parse_metric_list(a.metrics, /*allow_uniform=*/false);
  const DirectedGraph g = load_graph(a.graph);
  ConfigEcho cfg("score");
  cfg.add("graph", a.graph.path);
  cfg.add("edge-semantics", a.graph.semantics);
  cfg.add("metrics", metric_list_string(metrics));
  cfg.add("lenient", a.graph.lenient ? "true" : "false");

  std::ostringstream out;
  cfg.write_comments(out);
  out << "metric,u,v,score\n";
  for (Metric m : metrics) {
    for (const auto& row : edge_proximity_table(g, m)) {
      out << to_string(m) << ',' << g.label(row.u) << ',' << g.label(row.v)
          << ',' << detail::format_double(row.score) << '\n';
    }
  }
  emit(a.out, out.str());
  return kExitOk;
}

// -------------------------------------------------------------- project ---

struct ProjectArgs {
  std::optional<std::string> attendance;
  std::optional<std::string> dataset;
  std::string events;  // comma-separated 0-based indices; empty = all
  std::optional<std::string> out;
};

int cmd_project(const ProjectArgs& a) {
  if (a.attendance.has_value() == a.dataset.has_value()) {
    throw std::invalid_argument(
        "project: give exactly one of --attendance or --dataset");
  }
  const BipartiteAttendance data =
      a.dataset ? *load_dataset(*a.dataset).attendance
                : parse_attendance_file(*a.attendance);
  std::vector<std::size_t> events;
  if (a.events.empty()) {
    for (std::size_t e = 0; e < data.event_count(); ++e) events.push_back(e);
  } else {
    std::stringstream ss(a.events);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const auto v = detail::parse_int64(tok);
      if (!v || *v < 0 ||
          static_cast<std::size_t>(*v) >= data.event_count()) {
        throw std::invalid_argument("project: bad event index: " + tok);
      }
      events.push_back(static_cast<std::size_t>(*v));
    }
    if (events.empty()) {
      throw std::invalid_argument("project: empty event list");
    }
  }
  const DirectedGraph g = project_attendance(data, events);

  ConfigEcho cfg("project");
  cfg.add("input", a.dataset ? ("dataset:" + *a.dataset) : *a.attendance);
  cfg.add("events", a.events.empty() ? "all" : a.events);
  std::ostringstream out;
  cfg.write_comments(out);
  write_edge_list(out, g);
  emit(a.out, out.str());
  return kExitOk;
}

// ------------------------------------------------------------ correlate ---

struct CorrelateArgs {
  std::optional<std::string> dataset;
  std::optional<std::string> graph_path;
  std::optional<std::string> activity_path;
  std::string semantics = "flows";
  bool lenient = false;
  std::string metrics = "all";
  std::vector<std::string> max_coactivity;  // integers or "none"
  bool include_unlinked = false;
  bool linked_only = false;
  std::optional<std::string> out;
};

int cmd_correlate(const CorrelateArgs& a) {
  const bool dataset_mode = a.dataset.has_value();
  if (dataset_mode == (a.graph_path && a.activity_path)) {
    throw std::invalid_argument(
        "correlate: give either --dataset or both --graph and --activity");
  }
  if (a.include_unlinked && a.linked_only) {
    throw std::invalid_argument(
        "correlate: --include-unlinked and --linked-only conflict");
  }
  DirectedGraph g;
  ActivityLog log;
  if (dataset_mode) {
    auto bundle = load_dataset(*a.dataset);
    g = project_attendance(*bundle.attendance);
    log = std::move(*bundle.activity);
  } else {
    g = load_graph({*a.graph_path, a.semantics, a.lenient});
    log = parse_activity_file(*a.activity_path).log;
  }
  // The bundled co-attendance dataset's published correlations arise over
  // all actor pairs; follower-graph inputs default to linked pairs.
  PairScope scope = dataset_mode ? PairScope::All : PairScope::Linked;
  if (a.include_unlinked) scope = PairScope::All;
  if (a.linked_only) scope = PairScope::Linked;

  const auto metrics = parse_metric_list(a.metrics, /*allow_uniform=*/false);
  std::vector<std::optional<std::uint64_t>> bounds;
  for (const auto& f : a.max_coactivity) {
    if (f == "none") {
      bounds.push_back(std::nullopt);
    } else {
      const auto v = detail::parse_int64(f);
      if (!v || *v < 0) {
        throw std::invalid_argument("correlate: bad --max-coactivity: " + f);
      }
      bounds.push_back(static_cast<std::uint64_t>(*v));
    }
  }
  if (bounds.empty()) bounds.push_back(std::nullopt);

  ConfigEcho cfg("correlate");
  if (dataset_mode) {
    cfg.add("dataset", *a.dataset);
  } else {
    cfg.add("graph", *a.graph_path);
    cfg.add("activity", *a.activity_path);
    cfg.add("edge-semantics", a.semantics);
    cfg.add("lenient", a.lenient ? "true" : "false");
  }
  cfg.add("metrics", metric_list_string(metrics));
  cfg.add("pairs", scope == PairScope::All ? "all" : "linked");
  {
    std::string fs;
    for (std::size_t i = 0; i < bounds.size(); ++i) {
      if (i) fs += ',';
      fs += bounds[i] ? std::to_string(*bounds[i]) : "none";
    }
    cfg.add("max-coactivity", fs);
  }

  std::ostringstream out;
  cfg.write_comments(out);
  out << "metric,filter,r,pairs\n";
  for (Metric m : metrics) {
    for (const auto& bound : bounds) {
      CorrelateOptions opt;
      opt.max_coactivity = bound;
      opt.scope = scope;
      try {
        const auto res = correlate(g, log, m, opt);
        out << to_string(m) << ',' << res.filter_description << ','
            << detail::format_double(res.r) << ',' << res.pair_count << '\n';
      } catch (const UndefinedCorrelationError& e) {
        std::cerr << "warning: " << to_string(m) << ": " << e.what() << "\n";
        out << to_string(m) << ','
            << detail::filter_description({bound, scope}) << ",,0\n";
      }
    }
  }
  emit(a.out, out.str());
  return kExitOk;
}

// -------------------------------------------------------------- predict ---

struct PredictArgs {
  std::optional<std::string> dataset;
  std::optional<std::string> graph_path;
  std::optional<std::string> activity_path;
  std::string semantics = "flows";
  bool lenient = false;
  std::string metrics = "all";
  std::uint64_t n_train = 0;
  std::uint64_t trials = 200;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string format = "json";
  std::optional<std::string> out;
};

int cmd_predict(const PredictArgs& a) {
  const bool dataset_mode = a.dataset.has_value();
  if (dataset_mode == (a.graph_path && a.activity_path)) {
    throw std::invalid_argument(
        "predict: give either --dataset or both --graph and --activity");
  }
  if (a.format != "json" && a.format != "csv") {
    throw std::invalid_argument("predict: --format must be json or csv");
  }
  ExperimentConfig cfg;
  cfg.split.n_train = a.n_train;
  cfg.split.seed = a.seed;
  cfg.split.trials = a.trials;
  cfg.metrics = parse_metric_list(a.metrics, /*allow_uniform=*/true);
  cfg.threads = a.threads;

  PredictionReport report;
  ConfigEcho echo("predict");
  if (dataset_mode) {
    auto bundle = load_dataset(*a.dataset);
    echo.add("dataset", *a.dataset);
    report = run_experiment(*bundle.attendance, cfg);
  } else {
    const DirectedGraph g = load_graph({*a.graph_path, a.semantics, a.lenient});
    const ActivityLog log = parse_activity_file(*a.activity_path).log;
    echo.add("graph", *a.graph_path);
    echo.add("activity", *a.activity_path);
    echo.add("edge-semantics", a.semantics);
    echo.add("lenient", a.lenient ? "true" : "false");
    report = run_experiment(g, log, cfg);
  }
  echo.add("metrics", metric_list_string(cfg.metrics));
  echo.add("n-train", a.n_train);
  echo.add("trials", a.trials);
  echo.add("seed", a.seed);
  echo.add("threads", static_cast<std::uint64_t>(a.threads));
  echo.add("format", a.format);

  std::ostringstream out;
  if (a.format == "json") {
    json j;
    j["config"] = echo.to_json();
    j["trials_used"] = report.trials_used;
    json results = json::object();
    for (std::size_t i = 0; i < report.metrics.size(); ++i) {
      const auto& o = report.outcomes[i];
      json r;
      r["precision"] = o.precision;
      r["recall"] = o.recall;
      r["precision_lift_pct"] =
          o.precision_lift_pct ? json(*o.precision_lift_pct) : json();
      r["recall_lift_pct"] =
          o.recall_lift_pct ? json(*o.recall_lift_pct) : json();
      r["users_evaluated"] = o.users_evaluated;
      r["users_excluded"] = o.users_excluded;
      results[std::string(to_string(report.metrics[i]))] = r;
    }
    j["results"] = results;
    out << j.dump(2) << '\n';
  } else {
    echo.write_comments(out);
    out << "# trials_used=" << report.trials_used << '\n';
    out << "metric,precision,recall,precision_lift_pct,recall_lift_pct,"
           "users_evaluated,users_excluded\n";
    for (std::size_t i = 0; i < report.metrics.size(); ++i) {
      const auto& o = report.outcomes[i];
      out << to_string(report.metrics[i]) << ','
          << detail::format_double(o.precision) << ','
          << detail::format_double(o.recall) << ','
          << (o.precision_lift_pct
                  ? detail::format_double(*o.precision_lift_pct)
                  : "")
          << ','
          << (o.recall_lift_pct ? detail::format_double(*o.recall_lift_pct)
                                : "")
          << ',' << o.users_evaluated << ',' << o.users_excluded << '\n';
    }
  }
  emit(a.out, out.str());
  return kExitOk;
}

// ------------------------------------------------------------- simulate ---

struct SimulateArgs {
  GraphInputs graph;
  std::string process = "broadcast";
  std::uint64_t items = 1;
  std::uint64_t seeds_per_item = 1;
  std::string seed_nodes;  // comma-separated labels; empty = random seeds
  double adoption = 1.0;
  std::uint64_t max_hops = 6;
  std::uint64_t seed = 0;
  std::optional<std::string> out;
};

int cmd_simulate(const SimulateArgs& a) {
  const auto process = process_from_string(a.process);
  if (!process) {
    throw std::invalid_argument("simulate: unknown process: " + a.process);
  }
  const DirectedGraph g = load_graph(a.graph);
  CascadeOptions opt;
  opt.item_count = a.items;
  opt.process = *process;
  opt.seeds_per_item = a.seeds_per_item;
  opt.adoption_probability = a.adoption;
  opt.max_hops = a.max_hops;
  opt.rng_seed = a.seed;
  if (!a.seed_nodes.empty()) {
    std::stringstream ss(a.seed_nodes);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const auto id = g.find(tok);
      if (!id) {
        throw std::invalid_argument("simulate: unknown seed node: " + tok);
      }
      opt.seed_nodes.push_back(*id);
    }
  }
  const ActivityLog log = generate_cascades(g, opt);

  ConfigEcho cfg("simulate");
  cfg.add("graph", a.graph.path);
  cfg.add("edge-semantics", a.graph.semantics);
  cfg.add("lenient", a.graph.lenient ? "true" : "false");
  cfg.add("process", a.process);
  cfg.add("items", a.items);
  cfg.add("seeds-per-item", a.seeds_per_item);
  cfg.add("seed-nodes", a.seed_nodes.empty() ? "random" : a.seed_nodes);
  cfg.add("adoption", detail::format_double(a.adoption));
  cfg.add("max-hops", a.max_hops);
  cfg.add("seed", a.seed);

  std::ostringstream out;
  cfg.write_comments(out);
  write_activity(out, log);
  emit(a.out, out.str());
  return kExitOk;
}

// --------------------------------------------------------------- filter ---

struct FilterArgs {
  std::string activity_path;
  std::optional<std::string> promotions_path;
  bool pre_promotion = false;
  std::optional<double> entropy_threshold;
  std::optional<std::string> out;
};

int cmd_filter(const FilterArgs& a) {
  if (a.pre_promotion && !a.promotions_path) {
    throw std::invalid_argument("filter: --pre-promotion needs --promotions");
  }
  auto parsed = parse_activity_file(a.activity_path);
  ActivityLog log = std::move(parsed.log);
  if (a.promotions_path) {
    for (const auto& [item, t] : parse_promotions_file(*a.promotions_path)) {
      log.set_promotion_time(item, t);
    }
  }

  ConfigEcho cfg("filter");
  cfg.add("activity", a.activity_path);
  cfg.add("promotions", a.promotions_path ? *a.promotions_path : "none");
  cfg.add("pre-promotion", a.pre_promotion ? "true" : "false");
  cfg.add("entropy-threshold",
          a.entropy_threshold ? detail::format_double(*a.entropy_threshold)
                              : "none");

  std::ostringstream summary;
  summary << "# records_in=" << log.record_count() << '\n';
  summary << "# duplicates_collapsed=" << parsed.duplicates_collapsed << '\n';

  if (a.pre_promotion) {
    auto res = pre_promotion_filter(log);
    summary << "# promotion_records_dropped=" << res.records_dropped << '\n';
    summary << "# items_without_promotion=" << res.items_without_promotion
            << '\n';
    log = std::move(res.log);
  }
  if (a.entropy_threshold) {
    const auto retained = entropy_filter(log, *a.entropy_threshold);
    std::vector<bool> keep(log.item_count(), false);
    for (std::uint32_t item : retained) keep[item] = true;
    ActivityLog filtered;
    for (const auto& rec : log.records()) {
      if (keep[rec.item]) {
        filtered.add(log.user_label(rec.user), log.item_label(rec.item),
                     rec.time);
      }
    }
    for (const auto& [item, t] : log.promotions()) {
      filtered.set_promotion_time(item, t);
    }
    summary << "# items_retained_by_entropy=" << retained.size() << '\n';
    log = std::move(filtered);
  }
  summary << "# records_out=" << log.record_count() << '\n';

  std::ostringstream out;
  cfg.write_comments(out);
  out << summary.str();
  write_activity(out, log);
  emit(a.out, out.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"proxnet: structural proximity metrics, proximity-activity "
               "correlation, and proximity-weighted activity prediction on "
               "directed graphs"};
  app.require_subcommand(1);

  ScoreArgs score;
  auto* s = app.add_subcommand("score", "Score linked pairs per metric");
  s->add_option("--graph", score.graph.path, "Edge list (src<TAB>dst)")
      ->required();
  s->add_option("--edge-semantics", score.graph.semantics, "flows|follows")
      ->check(CLI::IsMember({"flows", "follows"}));
  s->add_flag("--lenient", score.graph.lenient,
              "Skip malformed lines instead of failing");
  s->add_option("--metrics", score.metrics, "Comma list or 'all'");
  s->add_option("--out", score.out, "Output path (default stdout)");

  ProjectArgs project;
  auto* p = app.add_subcommand("project",
                               "Project attendance onto a symmetric graph");
  p->add_option("--attendance", project.attendance, "Attendance CSV");
  p->add_option("--dataset", project.dataset, "Bundled dataset name");
  p->add_option("--events", project.events,
                "Comma list of 0-based event indices (default all)");
  p->add_option("--out", project.out, "Output path (default stdout)");

  CorrelateArgs corr;
  auto* c = app.add_subcommand("correlate",
                               "Correlate proximity with co-activity");
  c->add_option("--dataset", corr.dataset, "Bundled dataset name");
  c->add_option("--graph", corr.graph_path, "Edge list (src<TAB>dst)");
  c->add_option("--activity", corr.activity_path, "Activity CSV");
  c->add_option("--edge-semantics", corr.semantics, "flows|follows")
      ->check(CLI::IsMember({"flows", "follows"}));
  c->add_flag("--lenient", corr.lenient,
              "Skip malformed lines instead of failing");
  c->add_option("--metrics", corr.metrics, "Comma list or 'all'");
  c->add_option("--max-coactivity", corr.max_coactivity,
                "Strict co-activity upper bound, or 'none' (repeatable)");
  c->add_flag("--include-unlinked", corr.include_unlinked,
              "Correlate over all pairs, not only linked ones");
  c->add_flag("--linked-only", corr.linked_only,
              "Correlate over linked pairs only");
  c->add_option("--out", corr.out, "Output path (default stdout)");

  PredictArgs predict;
  auto* d = app.add_subcommand("predict",
                               "Proximity-weighted activity prediction");
  d->add_option("--dataset", predict.dataset, "Bundled dataset name");
  d->add_option("--graph", predict.graph_path, "Edge list (src<TAB>dst)");
  d->add_option("--activity", predict.activity_path, "Activity CSV");
  d->add_option("--edge-semantics", predict.semantics, "flows|follows")
      ->check(CLI::IsMember({"flows", "follows"}));
  d->add_flag("--lenient", predict.lenient,
              "Skip malformed lines instead of failing");
  d->add_option("--metrics", predict.metrics,
                "Comma list or 'all' (Uniform baseline always included)");
  d->add_option("--n-train", predict.n_train, "Training items per trial")
      ->required();
  d->add_option("--trials", predict.trials, "Trial count (default 200)");
  d->add_option("--seed", predict.seed, "RNG seed (default 0)");
  d->add_option("--threads", predict.threads,
                "Worker threads (0 = hardware; result is identical)");
  d->add_option("--format", predict.format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  d->add_option("--out", predict.out, "Output path (default stdout)");

  SimulateArgs sim;
  auto* m = app.add_subcommand("simulate", "Generate synthetic cascades");
  m->add_option("--graph", sim.graph.path, "Edge list (src<TAB>dst)")
      ->required();
  m->add_option("--edge-semantics", sim.graph.semantics, "flows|follows")
      ->check(CLI::IsMember({"flows", "follows"}));
  m->add_flag("--lenient", sim.graph.lenient,
              "Skip malformed lines instead of failing");
  m->add_option("--process", sim.process,
                "random_walk|random_walk_attention|broadcast|"
                "broadcast_attention");
  m->add_option("--items", sim.items, "Cascade count (default 1)");
  m->add_option("--seeds-per-item", sim.seeds_per_item,
                "Random seeds per item (default 1)");
  m->add_option("--seed-nodes", sim.seed_nodes,
                "Fixed seed labels (comma list) used for every item");
  m->add_option("--adoption", sim.adoption,
                "Adoption probability in [0,1] (default 1.0)");
  m->add_option("--max-hops", sim.max_hops, "Depth cap (default 6)");
  m->add_option("--seed", sim.seed, "RNG seed (default 0)");
  m->add_option("--out", sim.out, "Output path (default stdout)");

  FilterArgs filter;
  auto* f = app.add_subcommand("filter", "Clean an activity log");
  f->add_option("--activity", filter.activity_path, "Activity CSV")
      ->required();
  f->add_option("--promotions", filter.promotions_path,
                "Promotion CSV (item,promotion_time)");
  f->add_flag("--pre-promotion", filter.pre_promotion,
              "Keep only records strictly before promotion");
  f->add_option("--entropy-threshold", filter.entropy_threshold,
                "Retain items with user AND interval entropy > X");
  f->add_option("--out", filter.out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(s)) return cmd_score(score);
    if (app.got_subcommand(p)) return cmd_project(project);
    if (app.got_subcommand(c)) return cmd_correlate(corr);
    if (app.got_subcommand(d)) return cmd_predict(predict);
    if (app.got_subcommand(m)) return cmd_simulate(sim);
    if (app.got_subcommand(f)) return cmd_filter(filter);
    std::cerr << "error: no subcommand\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const NoEvaluableUsersError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
