#include "seal/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "seal/data.hpp"
#include "seal/errors.hpp"
#include "seal/lab.hpp"
#include "seal/output.hpp"
#include "seal/params.hpp"
#include "seal/snapshot.hpp"

namespace seal {

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "output";
  std::string data_dir;
  std::string snapshot;
  std::string cache_dir;
  bool synthetic = false;
  std::optional<double> pop_fraction;
  std::optional<int> days;
  unsigned threads = 0;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, Common& c, bool with_out = true) {
  cmd->add_option("--config", c.config, "flat KEY=value parameter file");
  cmd->add_option("--seed", c.seed, "random seed");
  if (with_out) cmd->add_option("--out", c.out, "output root (SEAL_OUTPUT_PATH overrides)");
  cmd->add_option("--data-dir", c.data_dir, "directory with boundaries, population and vital tables");
  cmd->add_option("--snapshot", c.snapshot, "start from a .seal-snap world instead of generating one");
  cmd->add_option("--cache-dir", c.cache_dir, "reuse generated worlds stored in this directory");
  cmd->add_flag("--synthetic", c.synthetic, "use the built-in two-municipality toy world");
  cmd->add_option("--pop-fraction", c.pop_fraction, "PERCENTAGE_ACTUAL_POP override");
  cmd->add_option("--days", c.days, "TOTAL_DAYS override");
  cmd->add_option("--threads", c.threads, "worker threads for batch modes (0 = all cores)");
  cmd->add_option("--set", c.sets, "KEY=value parameter override, repeatable");
}

Params load_params(const Common& c) {
  Params p;
  if (!c.config.empty()) {
    const ConfigParseResult r = load_config_file(c.config);
    if (!r.ok()) {
      std::string msg = fmt::format("config {} rejected:", c.config);
      for (const auto& k : r.unknown_keys) msg += fmt::format("\n  unknown key: {}", k);
      for (const auto& e : r.errors) msg += "\n  " + e;
      throw InputError(msg);
    }
    p = r.params;
  }
  for (const std::string& kv : c.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw InputError(fmt::format("--set expects KEY=value, got '{}'", kv));
    set_from_text(p, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (c.seed) p.seed = *c.seed;
  if (c.pop_fraction) p.percentage_actual_pop = *c.pop_fraction;
  if (c.days) p.total_days = *c.days;
  return p;
}

std::filesystem::path output_root(const Common& c) {
  if (const char* env = std::getenv("SEAL_OUTPUT_PATH"); env && *env) return env;
  return c.out;
}

WorldData load_data(const Common& c) {
  if (c.synthetic && !c.data_dir.empty()) throw InputError("use either --synthetic or --data-dir, not both");
  if (c.synthetic) return synthetic_world();
  if (c.data_dir.empty()) throw InputError("no world given: pass --synthetic, --data-dir or --snapshot");
  WorldData data = load_world_data(c.data_dir);
  if (const auto problems = validate_world_data(data); !problems.empty()) {
    std::string msg = "data rejected:";
    for (const auto& s : problems) msg += "\n  " + s;
    throw InputError(msg);
  }
  return data;
}

World load_world(const Common& c, const Params& p) {
  if (!c.snapshot.empty()) {
    if (c.synthetic || !c.data_dir.empty()) throw InputError("--snapshot cannot be combined with a data source");
    return load_snapshot(c.snapshot);
  }
  const WorldData data = load_data(c);
  if (!c.cache_dir.empty()) return cached_world(data, p, c.cache_dir);
  return make_world(data, p);
}

void require_valid(const Params& p) {
  const auto problems = validate(p);
  if (problems.empty()) return;
  std::string msg = "invalid parameters:";
  for (const auto& s : problems) msg += "\n  " + s;
  throw InputError(msg);
}

void print_final(const RunResult& r) {
  const auto names = general_columns();
  const auto values = general_fields(r.final_row);
  for (std::size_t i = 0; i < names.size(); ++i) fmt::print("  {:<18}{}\n", names[i], values[i]);
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"seal: spatial agent-based economy simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SEAL_VERSION);

  Common c;
  int values = 6;
  int runs = 5;
  int iterations = 2;
  int pairs = 1;
  std::string snapshot_out;

  auto* run = app.add_subcommand("run", "a single simulation");
  add_common(run, c);
  auto* sens = app.add_subcommand("sensitivity", "one-at-a-time sweep of the nine economic parameters");
  add_common(sens, c);
  sens->add_option("--values", values, "values per parameter")->check(CLI::Range(2, 1000));
  auto* multi = app.add_subcommand("multirun", "repeated runs varying only the seed");
  add_common(multi, c);
  multi->add_option("--runs", runs, "number of runs")->check(CLI::Range(2, 100000));
  auto* adjust = app.add_subcommand("autoadjust", "grid refinement toward high GDP and low GINI");
  add_common(adjust, c);
  adjust->add_option("--values", values, "grid points per parameter")->check(CLI::Range(2, 1000));
  adjust->add_option("--iterations", iterations, "refinement rounds")->check(CLI::Range(1, 1000));
  auto* acp = app.add_subcommand("acp-compare", "separate versus merged fiscal clusters");
  add_common(acp, c);
  acp->add_option("--pairs", pairs, "seed-matched pairs")->check(CLI::Range(1, 100000));
  auto* gen = app.add_subcommand("gen-snapshot", "generate a world and save it");
  add_common(gen, c, false);
  gen->add_option("--snapshot-out", snapshot_out, "destination .seal-snap file")->required();
  auto* check = app.add_subcommand("validate-data", "check a data directory");
  add_common(check, c, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  Params params;
  World world;
  try {
    params = load_params(c);
    if (check->parsed()) {
      const WorldData data = load_data(c);
      fmt::print("data ok: {} regions, {} population rows, digest {}\n", data.boundaries.size(),
                 data.population.size(), data.digest);
      return kExitOk;
    }
    if (run->parsed()) {
      params.sensitivity_choice = params.multi_run_simulation = params.auto_adjust_sensitivity_test = false;
    } else if (sens->parsed()) {
      params.sensitivity_choice = true;
      params.multi_run_simulation = params.auto_adjust_sensitivity_test = false;
    } else if (multi->parsed()) {
      params.multi_run_simulation = true;
      params.sensitivity_choice = params.auto_adjust_sensitivity_test = false;
    } else if (adjust->parsed()) {
      params.auto_adjust_sensitivity_test = true;
      params.sensitivity_choice = params.multi_run_simulation = false;
    }
    require_valid(params);
    world = load_world(c, params);
  } catch (const InputError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitRuntime;
  }

  try {
    const std::filesystem::path root = output_root(c);
    if (gen->parsed()) {
      save_snapshot(world, snapshot_out);
      fmt::print("snapshot {}: {} citizens, {} firms, {} houses\n", snapshot_out, world.state.citizens.size(),
                 world.state.firms.size(), world.state.houses.size());
    } else if (run->parsed()) {
      RunOptions opt;
      opt.out_dir = root / fmt::format("seed{}", params.seed);
      const RunResult r = run_single(world, params, opt);
      fmt::print("run {} finished in {:.2f} s, output in {}\n", r.run_id, r.wall_seconds, opt.out_dir->string());
      if (params.print_statistics_and_results) print_final(r);
    } else if (sens->parsed()) {
      const SensitivityReport rep = run_sensitivity(world, params, values, root, c.threads);
      fmt::print("sensitivity: {} runs, {} failed, report in {}\n", rep.rows.size(), rep.failures,
                 (root / "sensitivity_report.csv").string());
      if (rep.failures > 0) return kExitRuntime;
    } else if (multi->parsed()) {
      const MultiRunReport rep = run_multi(world, params, runs, root, c.threads);
      std::size_t failed = 0;
      for (const auto& r : rep.runs) failed += r.ok() ? 0 : 1;
      fmt::print("multirun: {} runs, {} failed, summary in {}\n", rep.runs.size(), failed,
                 (root / "multirun_summary.csv").string());
      if (failed > 0) return kExitRuntime;
    } else if (adjust->parsed()) {
      const AutoAdjustResult res = run_autoadjust(params, values, iterations, simulation_evaluator(world));
      fmt::print("autoadjust: {} evaluations ({} simulated), best score {}\n", res.trace.size(), res.evaluator_calls,
                 res.best_score);
      for (const auto& name : autoadjust_param_names()) fmt::print("  {}={}\n", name, to_text(res.best, name));
      std::filesystem::create_directories(root);
      std::ofstream trace(root / "autoadjust_trace.csv");
      trace << "iteration,param,value,gdp,gini,score,cached,pareto\n";
      for (std::size_t i = 0; i < res.trace.size(); ++i) {
        const Evaluation& e = res.trace[i];
        const bool front = std::find(res.pareto.begin(), res.pareto.end(), i) != res.pareto.end();
        trace << fmt::format("{},{},{},{},{},{},{},{}\n", e.iteration, e.param, format_number(e.value),
                             e.objective ? format_number(e.objective->gdp) : "None",
                             e.objective ? format_number(e.objective->gini) : "None", format_number(e.score),
                             e.cached ? "True" : "False", front ? "True" : "False");
      }
      std::ofstream best(root / "autoadjust_best.cfg");
      best << dump_config(res.best);
    } else if (acp->parsed()) {
      const AcpReport rep = run_acp_alternate(world, params, pairs, root, c.threads);
      fmt::print("acp-compare: {} pairs, deltas in {}\n", rep.pairs.size(), (root / "acp_deltas.csv").string());
    }
  } catch (const InputError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    fmt::print(stderr, "run failed: {}\n", e.what());
    return kExitRuntime;
  }
  return kExitOk;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"seal"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace seal
