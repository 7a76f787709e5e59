#include "seal/lab.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include <fmt/core.h>

#include "seal/digest.hpp"
#include "seal/errors.hpp"
#include "seal/genesis.hpp"
#include "seal/output.hpp"
#include "seal/scheduler.hpp"

namespace seal {

World make_world(const WorldData& data, const Params& params) {
  World w;
  w.state = generate_world(data, GenesisConfig::from_params(params));
  w.vitals = data.vitals;
  w.qualification = data.qualification;
  w.data_digest = data.digest;
  return w;
}

std::string world_cache_key(const WorldData& data, const Params& params) {
  return fnv1a_hex(data.digest + "|" + GenesisConfig::from_params(params).digest());
}

World cached_world(const WorldData& data, const Params& params, const std::filesystem::path& cache_dir, bool* hit) {
  const auto path = cache_dir / fmt::format("world_{}.seal-snap", world_cache_key(data, params));
  if (std::filesystem::exists(path)) {
    if (hit) *hit = true;
    return load_snapshot(path);
  }
  if (hit) *hit = false;
  World w = make_world(data, params);
  std::filesystem::create_directories(cache_dir);
  save_snapshot(w, path);
  return w;
}

namespace {

Params without_modes(Params p) {
  p.sensitivity_choice = false;
  p.multi_run_simulation = false;
  p.auto_adjust_sensitivity_test = false;
  return p;
}

void check_params(const Params& p) {
  const auto problems = validate(p);
  if (problems.empty()) return;
  std::string msg = "invalid parameters:";
  for (const auto& s : problems) msg += "\n  " + s;
  throw InputError(msg);
}

}  // namespace

RunResult run_simulation(const World& world, const Params& params, const RunOptions& options, std::string run_id) {
  check_params(params);
  const auto t0 = std::chrono::steady_clock::now();
  RunResult result;
  result.run_id = std::move(run_id);
  result.params = params;
  result.params_digest = params_digest(params);
  result.seed = params.seed;

  Simulation sim(world.state, params, world.vitals, world.qualification);
  sim.set_consistency_checks(options.consistency_checks);
  sim.set_firm_scope(options.scope);

  std::optional<OutputWriter> writer;
  if (options.out_dir) {
    writer.emplace(*options.out_dir, params, world.state.citizens.size());
    result.dir = options.out_dir;
  }
  sim.set_observer([&](const SimulationState& s, const MonthReport&) {
    if (writer) {
      writer->write_month(s);
      result.general.push_back(writer->last_general());
      const auto& reg = writer->regional_series();
      result.regional.insert(result.regional.end(), reg.end() - static_cast<std::ptrdiff_t>(s.regions.size()),
                             reg.end());
    } else {
      result.general.push_back(general_row(s));
      const auto rows = regional_rows(s);
      result.regional.insert(result.regional.end(), rows.begin(), rows.end());
    }
  });
  sim.run();
  if (!result.general.empty()) result.final_row = result.general.back();
  result.final_state_digest = state_digest(sim.state());
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (writer) {
    writer->flush();
    write_manifest(*options.out_dir, params, world.data_digest, result.final_state_digest, result.final_row,
                   result.wall_seconds);
  }
  return result;
}

RunResult run_single(const World& world, const Params& params, const RunOptions& options) {
  if (run_mode(params) != RunMode::single) {
    throw InputError("run_single refuses to run with a mode flag set");
  }
  return run_simulation(world, params, options, fmt::format("seed{}", params.seed));
}

std::vector<double> linspace(double lo, double hi, int n_values) {
  if (n_values < 2) throw InputError("a grid needs at least two values");
  std::vector<double> out(static_cast<std::size_t>(n_values));
  const double step = (hi - lo) / static_cast<double>(n_values - 1);
  for (int i = 0; i < n_values; ++i) out[static_cast<std::size_t>(i)] = lo + step * static_cast<double>(i);
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> sensitivity_grid(const std::string& param, int n_values) {
  const ParamSpec& spec = param_spec(param);
  if (!spec.lower || !spec.upper) throw InputError(fmt::format("parameter {} has no registered bounds", param));
  return linspace(*spec.lower, *spec.upper, n_values);
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& job) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

RunResult guarded_run(const World& world, const Params& p, const std::optional<std::filesystem::path>& dir,
                      const std::string& run_id) {
  try {
    RunOptions opt;
    opt.out_dir = dir;
    return run_simulation(world, p, opt, run_id);
  } catch (const std::exception& e) {
    RunResult r;
    r.run_id = run_id;
    r.params = p;
    r.seed = p.seed;
    r.params_digest = params_digest(p);
    r.error = e.what();
    return r;
  }
}

void write_rows(const std::filesystem::path& path, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i];
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

std::vector<std::string> report_header(std::vector<std::string> head) {
  const auto& cols = general_columns();
  head.insert(head.end(), cols.begin(), cols.end());
  head.push_back("error");
  return head;
}

std::vector<std::string> report_fields(std::vector<std::string> head, const RunResult& r) {
  const auto g = general_fields(r.final_row);
  head.insert(head.end(), g.begin(), g.end());
  head.push_back(r.error);
  return head;
}

double column_value(const GeneralRow& r, std::size_t column) {
  switch (column) {
    case 0: return r.month;
    case 1: return r.price_index;
    case 2: return r.gdp_index;
    case 3: return r.unemployment;
    case 4: return r.average_workers;
    case 5: return r.families_wealth;
    case 6: return r.families_savings;
    case 7: return r.firms_wealth;
    case 8: return r.firms_profit;
    case 9: return r.gini_index;
    case 10: return r.average_utility;
  }
  throw InputError("general column out of range");
}

}  // namespace

SensitivityReport run_sensitivity(const World& world, const Params& params, int n_values,
                                  const std::optional<std::filesystem::path>& out_root, unsigned threads) {
  if (run_mode(params) != RunMode::sensitivity) throw InputError("sensitivity_choice must be the only mode flag set");
  const Params base = without_modes(params);
  check_params(base);
  SensitivityReport report;
  for (const std::string& name : economic_param_names()) {
    const auto grid = sensitivity_grid(name, n_values);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      SweepRow row;
      row.param = name;
      row.value = grid[i];
      row.result.run_id = fmt::format("{}_{}", name, i);
      report.rows.push_back(std::move(row));
    }
  }
  const std::size_t n = report.rows.size() + 1;
  parallel_for(n, threads, [&](std::size_t i) {
    if (i == report.rows.size()) {
      const auto dir = out_root ? std::optional(*out_root / "baseline") : std::nullopt;
      report.baseline = guarded_run(world, base, dir, "baseline");
      return;
    }
    SweepRow& row = report.rows[i];
    Params p = base;
    set_numeric(p, row.param, row.value);
    const auto dir = out_root ? std::optional(*out_root / "runs" / row.result.run_id) : std::nullopt;
    row.result = guarded_run(world, p, dir, row.result.run_id);
  });
  for (const auto& row : report.rows) report.failures += row.result.ok() ? 0 : 1;
  if (out_root) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back(report_fields({"baseline", "", report.baseline.run_id}, report.baseline));
    for (const auto& row : report.rows) {
      rows.push_back(report_fields({row.param, format_number(row.value), row.result.run_id}, row.result));
    }
    write_rows(*out_root / "sensitivity_report.csv", report_header({"param", "value", "run_id"}), rows);
  }
  return report;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InputError("quantile of an empty set");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + (values[hi] - values[lo]) * frac;
}

MultiRunReport run_multi(const World& world, const Params& params, int number_of_runs,
                         const std::optional<std::filesystem::path>& out_root, unsigned threads) {
  if (run_mode(params) != RunMode::multi_run) throw InputError("multi_run_simulation must be the only mode flag set");
  if (number_of_runs < 2) throw InputError("multi-run needs at least two runs");
  const Params base = without_modes(params);
  check_params(base);
  MultiRunReport report;
  report.runs.resize(static_cast<std::size_t>(number_of_runs));
  parallel_for(report.runs.size(), threads, [&](std::size_t i) {
    Params p = base;
    p.seed = base.seed + i;
    const std::string id = fmt::format("run_{}", i);
    report.runs[i] = guarded_run(world, p, out_root ? std::optional(*out_root / id) : std::nullopt, id);
  });
  std::size_t months = 0;
  bool any = false;
  for (const auto& r : report.runs) {
    if (!r.ok()) continue;
    months = any ? std::min(months, r.general.size()) : r.general.size();
    any = true;
  }
  const auto& cols = general_columns();
  for (std::size_t c = 1; c < cols.size(); ++c) {
    Band band;
    band.column = cols[c];
    for (std::size_t m = 0; m < months; ++m) {
      std::vector<double> xs;
      for (const auto& r : report.runs) {
        if (r.ok()) xs.push_back(column_value(r.general[m], c));
      }
      band.median.push_back(quantile(xs, 0.5));
      band.q1.push_back(quantile(xs, 0.25));
      band.q3.push_back(quantile(xs, 0.75));
      band.min.push_back(*std::min_element(xs.begin(), xs.end()));
      band.max.push_back(*std::max_element(xs.begin(), xs.end()));
    }
    report.bands.push_back(std::move(band));
  }
  if (out_root) {
    std::vector<std::vector<std::string>> rows;
    for (const Band& b : report.bands) {
      for (std::size_t m = 0; m < b.median.size(); ++m) {
        rows.push_back({fmt::format("{}", m), b.column, format_number(b.median[m]), format_number(b.q1[m]),
                        format_number(b.q3[m]), format_number(b.min[m]), format_number(b.max[m])});
      }
    }
    write_rows(*out_root / "multirun_summary.csv", {"month", "indicator", "median", "q1", "q3", "min", "max"}, rows);
  }
  return report;
}

std::vector<double> minmax(const std::vector<double>& values) {
  std::vector<double> out(values.size(), 0.0);
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double span = *hi - *lo;
  if (!(span > 0.0)) return out;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - *lo) / span;
  return out;
}

std::vector<double> scores(const std::vector<std::optional<Objective>>& objectives) {
  std::vector<double> gdp;
  std::vector<double> gini;
  for (const auto& o : objectives) {
    if (!o) continue;
    gdp.push_back(o->gdp);
    gini.push_back(o->gini);
  }
  const auto zg = minmax(gdp);
  const auto zi = minmax(gini);
  std::vector<double> out(objectives.size(), -std::numeric_limits<double>::infinity());
  std::size_t k = 0;
  for (std::size_t i = 0; i < objectives.size(); ++i) {
    if (!objectives[i]) continue;
    out[i] = zg[k] - zi[k];
    ++k;
  }
  return out;
}

std::pair<double, double> bracket(const std::vector<double>& grid, const std::vector<double>& sc) {
  if (grid.size() < 2 || grid.size() != sc.size()) throw InputError("bracket needs a grid of two or more scored values");
  std::size_t best = 0;
  for (std::size_t i = 1; i < sc.size(); ++i) {
    if (sc[i] > sc[best]) best = i;
  }
  if (best == 0) return {grid[0], grid[1]};
  if (best + 1 == grid.size()) return {grid[best - 1], grid[best]};
  return sc[best + 1] > sc[best - 1] ? std::pair{grid[best], grid[best + 1]} : std::pair{grid[best - 1], grid[best]};
}

AutoAdjustResult run_autoadjust(const Params& params, int interval_for_values, int times_test_approximations,
                                const Evaluator& evaluator) {
  if (run_mode(params) != RunMode::auto_adjust) {
    throw InputError("auto_adjust_sensitivity_test must be the only mode flag set");
  }
  if (times_test_approximations < 1) throw InputError("times_test_approximations must be at least 1");
  const Params base = without_modes(params);
  check_params(base);
  AutoAdjustResult result;
  std::map<std::string, std::optional<Objective>> cache;

  std::map<std::string, std::pair<double, double>> interval;
  for (const std::string& name : autoadjust_param_names()) {
    const ParamSpec& spec = param_spec(name);
    interval[name] = {*spec.lower, *spec.upper};
  }

  for (int it = 1; it <= times_test_approximations; ++it) {
    const std::size_t first = result.trace.size();
    std::map<std::string, std::vector<double>> grids;
    for (const std::string& name : autoadjust_param_names()) {
      const auto [lo, hi] = interval[name];
      grids[name] = linspace(lo, hi, interval_for_values);
      for (double v : grids[name]) {
        Evaluation e;
        e.iteration = it;
        e.param = name;
        e.value = v;
        e.params = base;
        set_numeric(e.params, name, v);
        const std::string key = params_digest(e.params);
        if (auto hit = cache.find(key); hit != cache.end()) {
          e.objective = hit->second;
          e.cached = true;
        } else {
          try {
            e.objective = evaluator(e.params);
          } catch (const std::exception&) {
            e.objective.reset();
          }
          ++result.evaluator_calls;
          cache.emplace(key, e.objective);
        }
        result.trace.push_back(std::move(e));
      }
    }
    std::vector<std::optional<Objective>> objs;
    for (std::size_t i = first; i < result.trace.size(); ++i) objs.push_back(result.trace[i].objective);
    const auto sc = scores(objs);
    for (std::size_t i = first; i < result.trace.size(); ++i) result.trace[i].score = sc[i - first];
    for (const std::string& name : autoadjust_param_names()) {
      std::vector<double> param_scores;
      for (std::size_t i = first; i < result.trace.size(); ++i) {
        if (result.trace[i].param == name) param_scores.push_back(result.trace[i].score);
      }
      interval[name] = bracket(grids[name], param_scores);
    }
  }

  std::vector<std::optional<Objective>> all;
  for (const auto& e : result.trace) all.push_back(e.objective);
  if (std::none_of(all.begin(), all.end(), [](const auto& o) { return o.has_value(); })) {
    throw std::runtime_error(fmt::format("auto-adjust: all {} evaluations failed", all.size()));
  }
  const auto global = scores(all);
  std::size_t best = 0;
  for (std::size_t i = 1; i < global.size(); ++i) {
    if (global[i] > global[best]) best = i;
  }
  result.best = result.trace[best].params;
  result.best_score = global[best];

  for (std::size_t i = 0; i < all.size(); ++i) {
    if (!all[i]) continue;
    bool dominated = false;
    for (std::size_t j = 0; j < all.size() && !dominated; ++j) {
      if (i == j || !all[j]) continue;
      const bool no_worse = all[j]->gdp >= all[i]->gdp && all[j]->gini <= all[i]->gini;
      const bool better = all[j]->gdp > all[i]->gdp || all[j]->gini < all[i]->gini;
      dominated = no_worse && better;
    }
    if (!dominated) result.pareto.push_back(i);
  }
  return result;
}

Evaluator simulation_evaluator(const World& world) {
  return [&world](const Params& p) -> std::optional<Objective> {
    const RunResult r = run_simulation(world, p, {}, "autoadjust");
    return Objective{r.final_row.gdp_index, r.final_row.gini_index};
  };
}

AcpReport run_acp_alternate(const World& world, const Params& params, int n_pairs,
                            const std::optional<std::filesystem::path>& out_root, unsigned threads) {
  const bool any_acp = std::any_of(world.state.regions.begin(), world.state.regions.end(),
                                   [](const auto& kv) { return kv.second.acp_id.has_value(); });
  if (!any_acp) throw InputError("no region carries an acp_id; nothing to merge");
  if (n_pairs < 1) throw InputError("acp comparison needs at least one pair");
  const Params base = without_modes(params);
  check_params(base);
  AcpReport report;
  report.pairs.resize(static_cast<std::size_t>(n_pairs));
  parallel_for(report.pairs.size() * 2, threads, [&](std::size_t job) {
    const std::size_t i = job / 2;
    const bool merged = job % 2 == 1;
    Params p = base;
    p.seed = base.seed + i;
    p.alternative0 = !merged;
    const std::string id = fmt::format("pair_{}_{}", i, merged ? "merged" : "separate");
    RunResult r = guarded_run(world, p, out_root ? std::optional(*out_root / id) : std::nullopt, id);
    if (!r.ok()) throw std::runtime_error(fmt::format("{} failed: {}", id, r.error));
    (merged ? report.pairs[i].merged : report.pairs[i].separate) = std::move(r);
  });
  std::size_t months = report.pairs.front().separate.general.size();
  for (const auto& pr : report.pairs) months = std::min({months, pr.separate.general.size(), pr.merged.general.size()});
  const auto& cols = general_columns();
  for (std::size_t m = 0; m < months; ++m) {
    for (std::size_t c = 1; c < cols.size(); ++c) {
      std::vector<double> sep;
      std::vector<double> mer;
      std::vector<double> delta;
      for (const auto& pr : report.pairs) {
        const double a = column_value(pr.separate.general[m], c);
        const double b = column_value(pr.merged.general[m], c);
        sep.push_back(a);
        mer.push_back(b);
        delta.push_back(b - a);
      }
      report.deltas.push_back({static_cast<int>(m), cols[c], quantile(sep, 0.5), quantile(mer, 0.5),
                               quantile(delta, 0.5)});
    }
  }
  if (out_root) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& d : report.deltas) {
      rows.push_back({fmt::format("{}", d.month), d.indicator, format_number(d.median_separate),
                      format_number(d.median_merged), format_number(d.median_delta)});
    }
    write_rows(*out_root / "acp_deltas.csv",
               {"month", "indicator", "median_separate", "median_merged", "median_delta"}, rows);
  }
  return report;
}

}  // namespace seal
