#include "ontoflux/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <ostream>
#include <thread>

#include <CLI11.hpp>

#include "ontoflux/error.hpp"
#include "ontoflux/io.hpp"
#include "ontoflux/mfrag.hpp"
#include "ontoflux/monitor.hpp"
#include "ontoflux/prob_merge.hpp"
#include "ontoflux/regimes.hpp"

namespace ontoflux {

namespace {

/// ONTOFLUX_LOG: error (default), info or debug.
enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

LogLevel log_level() {
  const char* env = std::getenv("ONTOFLUX_LOG");
  if (!env) return LogLevel::Error;
  const std::string v = env;
  if (v == "debug") return LogLevel::Debug;
  if (v == "info") return LogLevel::Info;
  return LogLevel::Error;
}

class Logger {
 public:
  explicit Logger(std::ostream& err) : err_(err), level_(log_level()) {}
  void info(const std::string& msg) const { emit(LogLevel::Info, "info", msg); }
  void debug(const std::string& msg) const { emit(LogLevel::Debug, "debug", msg); }

 private:
  void emit(LogLevel level, const char* tag, const std::string& msg) const {
    if (level_ >= level) err_ << "[" << tag << "] " << msg << "\n";
  }
  std::ostream& err_;
  LogLevel level_;
};

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string seeds;
  std::string out;
  std::string format = "csv";
  std::string regime;
  std::optional<double> threshold;
  std::string local, external, mappings, query;
  std::string ontology, script;
  std::optional<int> ticks;
  std::string fragments;
  unsigned jobs = 0;
};

/// Writes to --out when given, else to `out`.
void emit(const Options& opt, std::ostream& out, const std::string& text) {
  if (opt.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(opt.out, std::ios::binary);
  if (!file) throw Error("cannot write '" + opt.out + "'");
  file << text;
}

ResultRecord timed_run(const SimConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ResultRecord r{cfg, run_simulation(cfg), 0.0};
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string render(const std::vector<ResultRecord>& records, const std::string& format) {
  if (format == "json") return (records.size() == 1 ? to_json(records.front()) : to_json(records)) + "\n";
  std::string text = csv_header() + "\n";
  for (const auto& r : records) text += to_csv_row(r) + "\n";
  return text;
}

void apply_overrides(SimConfig& cfg, const Options& opt) {
  if (opt.seed) cfg.seed = *opt.seed;
  if (!opt.regime.empty()) {
    if (opt.regime == "exo") cfg.regime = Regime::Exogenous;
    else if (opt.regime == "endo") cfg.regime = Regime::Endogenous;
    else cfg.regime = Regime::ExogenousIID;
  }
}

int cmd_simulate(const Options& opt, std::ostream& out) {
  SimConfig cfg = parse_config(read_file(opt.config));
  apply_overrides(cfg, opt);
  emit(opt, out, render({timed_run(cfg)}, opt.format));
  return kExitOk;
}

int cmd_sweep(const Options& opt, std::ostream& out, const Logger& log) {
  auto grid = parse_config_grid(read_file(opt.config));
  std::vector<SimConfig> runs;
  const auto seeds = opt.seeds.empty() ? std::vector<std::uint64_t>{} : parse_seed_range(opt.seeds);
  for (auto cfg : grid) {
    apply_overrides(cfg, opt);
    if (seeds.empty()) {
      runs.push_back(cfg);
      continue;
    }
    for (const auto s : seeds) {
      cfg.seed = s;
      runs.push_back(cfg);
    }
  }

  // Each worker claims the next run index; rows are stored by index so the
  // output order is the grid order.
  std::vector<ResultRecord> results(runs.size());
  std::vector<std::exception_ptr> failures(runs.size());
  std::atomic<std::size_t> next{0};
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(opt.jobs ? opt.jobs : hw, std::max<std::size_t>(runs.size(), 1)));
  log.info("sweep: " + std::to_string(runs.size()) + " runs on " + std::to_string(workers) + " threads");
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < runs.size();) {
      try {
        results[i] = timed_run(runs[i]);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  emit(opt, out, render(results, opt.format));
  return kExitOk;
}

int cmd_merge_query(const Options& opt, std::ostream& out, const Logger& log) {
  const KnowledgeBase local = parse_ontology(read_file(opt.local));
  const KnowledgeBase external = parse_ontology(read_file(opt.external));
  auto mappings = parse_mappings(read_file(opt.mappings));
  if (opt.threshold) mappings = MergePolicy::make(*opt.threshold).select(mappings);
  const auto conjuncts = parse_query(opt.query);
  const MergedKB merged = merge(local, external, mappings);
  log.info("merged " + std::to_string(merged.derived.size()) + " facts from " + std::to_string(mappings.size()) +
           " mappings");
  std::string text;
  for (const auto& answer : query(merged, conjuncts)) text += format_binding(answer, local.ns()) + "\n";
  emit(opt, out, text);
  return kExitOk;
}

int cmd_monitor(const Options& opt, std::ostream& out) {
  const KnowledgeBase kb = parse_ontology(read_file(opt.ontology));
  const MonitorScript script = parse_monitor_script(read_file(opt.script), kb.ns());
  KnowledgeBase external(kb.ns() + "_ext");
  std::vector<Mapping> mappings;
  if (!opt.external.empty()) external = parse_ontology(read_file(opt.external));
  if (!opt.mappings.empty()) mappings = parse_mappings(read_file(opt.mappings));
  const MergePolicy policy = MergePolicy::make(opt.threshold.value_or(0.5));
  const MonitorState start = init(kb, script.config);
  const MonitorState end = run(start, opt.ticks.value_or(script.ticks), policy, mappings, external, script.events);
  emit(opt, out, format_log(end.event_log));
  return kExitOk;
}

int cmd_validate(const Options& opt, std::ostream& out) {
  const auto fragments = parse_fragments(read_file(opt.fragments));
  const auto errors = validate_mtheory(MTheory::from_fragments(fragments));
  std::string text;
  for (const auto& e : errors) text += to_string(e) + "\n";
  if (errors.empty()) text = "ok: " + std::to_string(fragments.size()) + " fragment(s)\n";
  emit(opt, out, text);
  return errors.empty() ? kExitOk : kExitValidationFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ontoflux: ontology merging, monitoring and inventory simulation", "ontoflux"};
  app.require_subcommand(1);
  Options opt;

  auto* simulate = app.add_subcommand("simulate", "Single run from a config file");
  auto* sweep = app.add_subcommand("sweep", "Config grid x seed list, run concurrently");
  for (auto* sub : {simulate, sweep}) {
    sub->add_option("--config", opt.config, "Config file (key = value)")->required();
    sub->add_option("--out", opt.out, "Output file (default stdout)");
    sub->add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--regime", opt.regime, "Override the regime")->check(CLI::IsMember({"exo", "endo", "exo-iid"}));
  }
  simulate->add_option("--seed", opt.seed, "Override the seed");
  sweep->add_option("--seeds", opt.seeds, "Seed range a..b");
  sweep->add_option("--jobs", opt.jobs, "Worker threads (default: hardware concurrency)");

  auto* mq = app.add_subcommand("merge-query", "Merge two ontologies and answer a conjunctive query");
  mq->add_option("--local", opt.local, "Local ontology")->required();
  mq->add_option("--external", opt.external, "External ontology")->required();
  mq->add_option("--mappings", opt.mappings, "Mapping file")->required();
  mq->add_option("--query", opt.query, "Query, e.g. 'O1:Event(x) & O1:keyword(x, Sea)'")->required();
  mq->add_option("--threshold", opt.threshold, "Drop mappings below this probability");
  mq->add_option("--out", opt.out, "Output file (default stdout)");

  auto* mon = app.add_subcommand("monitor", "Run the monitoring loop over a scripted event file");
  mon->add_option("--ontology", opt.ontology, "Local ontology")->required();
  mon->add_option("--script", opt.script, "Event script")->required();
  mon->add_option("--ticks", opt.ticks, "Override the script's tick count");
  mon->add_option("--external", opt.external, "External ontology");
  mon->add_option("--mappings", opt.mappings, "Candidate mappings");
  mon->add_option("--threshold", opt.threshold, "Merge acceptance threshold (default 0.5)");
  mon->add_option("--out", opt.out, "Output file (default stdout)");

  auto* val = app.add_subcommand("validate", "Check the fragments of an MTheory file");
  val->add_option("fragments", opt.fragments, "Fragment file")->required();
  val->add_option("--out", opt.out, "Output file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  const Logger log(err);
  try {
    if (*simulate) return cmd_simulate(opt, out);
    if (*sweep) return cmd_sweep(opt, out, log);
    if (*mq) return cmd_merge_query(opt, out, log);
    if (*mon) return cmd_monitor(opt, out);
    if (*val) return cmd_validate(opt, out);
  } catch (const ontoflux::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace ontoflux
