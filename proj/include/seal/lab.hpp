#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "seal/data.hpp"
#include "seal/markets.hpp"
#include "seal/params.hpp"
#include "seal/snapshot.hpp"
#include "seal/state.hpp"
#include "seal/stats.hpp"

namespace seal {

World make_world(const WorldData& data, const Params& params);

// Cache file name for a world: a digest of the input tables (which fix the region set)
// and the genesis settings (population fraction, seed, ...).
std::string world_cache_key(const WorldData& data, const Params& params);

// Loads <cache_dir>/world_<key>.seal-snap when present, else generates the world and
// saves it there. `hit` reports which path was taken.
World cached_world(const WorldData& data, const Params& params, const std::filesystem::path& cache_dir,
                   bool* hit = nullptr);

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;  // no files when empty
  FirmSearchScope scope = FirmSearchScope::global;
  bool consistency_checks = true;
};

struct RunResult {
  std::string run_id;
  std::string params_digest;
  std::uint64_t seed = 0;
  Params params;
  GeneralRow final_row;
  std::vector<GeneralRow> general;
  std::vector<RegionalRow> regional;
  std::string final_state_digest;
  double wall_seconds = 0.0;
  std::optional<std::filesystem::path> dir;
  std::string error;  // nonempty when the run failed

  bool ok() const { return error.empty(); }
};

// Bootstrap plus TOTAL_DAYS of simulation, ignoring the mode flags.
RunResult run_simulation(const World& world, const Params& params, const RunOptions& options = {},
                         std::string run_id = "run");

// A single run. Refuses (InputError) when a mode flag is set or params are invalid.
RunResult run_single(const World& world, const Params& params, const RunOptions& options = {});

// n evenly spaced values over the parameter's registered bounds, both ends included.
std::vector<double> sensitivity_grid(const std::string& param, int n_values);
// n evenly spaced values over [lo, hi].
std::vector<double> linspace(double lo, double hi, int n_values);

struct SweepRow {
  std::string param;
  double value = 0.0;
  RunResult result;
};

struct SensitivityReport {
  std::vector<SweepRow> rows;  // grouped by parameter, in registry order
  RunResult baseline;
  std::size_t failures = 0;
};

// Ceteris paribus sweep: n_values runs per economic parameter, the others held fixed.
// Run directories go to <out_root>/runs/<PARAM>_<i>, the baseline to <out_root>/baseline.
SensitivityReport run_sensitivity(const World& world, const Params& params, int n_values,
                                  const std::optional<std::filesystem::path>& out_root, unsigned threads = 0);

struct Band {
  std::string column;
  std::vector<double> median, q1, q3, min, max;  // one entry per month
};

struct MultiRunReport {
  std::vector<RunResult> runs;
  std::vector<Band> bands;  // one per GENERAL column except month
};

// Linear-interpolation quantile of unsorted values, q in [0, 1].
double quantile(std::vector<double> values, double q);

// Identical parameters with seeds seed, seed+1, ..., seed+n-1 and per-month bands.
MultiRunReport run_multi(const World& world, const Params& params, int number_of_runs,
                         const std::optional<std::filesystem::path>& out_root, unsigned threads = 0);

struct Objective {
  double gdp = 0.0;
  double gini = 0.0;
};

// Returns the final (GDP, GINI) of a run with these parameters, or empty on failure.
using Evaluator = std::function<std::optional<Objective>(const Params&)>;

struct Evaluation {
  int iteration = 0;
  std::string param;
  double value = 0.0;
  Params params;
  std::optional<Objective> objective;
  double score = 0.0;  // min-max z(GDP) - z(GINI) within the iteration
  bool cached = false;
};

struct AutoAdjustResult {
  Params best;
  double best_score = 0.0;
  std::vector<Evaluation> trace;
  std::size_t evaluator_calls = 0;
  std::vector<std::size_t> pareto;  // trace indexes of the non-dominated evaluations
};

// Min-max normalization over `values`; all zeros when they are constant.
std::vector<double> minmax(const std::vector<double>& values);

// Score every objective as z(GDP) - z(GINI) with z taken over the given set.
std::vector<double> scores(const std::vector<std::optional<Objective>>& objectives);

// Given a grid and its scores, the two neighbouring grid values around the best score.
std::pair<double, double> bracket(const std::vector<double>& grid, const std::vector<double>& scores);

AutoAdjustResult run_autoadjust(const Params& params, int interval_for_values, int times_test_approximations,
                                const Evaluator& evaluator);

// The real evaluator: a full run on `world`.
Evaluator simulation_evaluator(const World& world);

struct AcpPair {
  RunResult separate;  // alternative0 = true
  RunResult merged;    // alternative0 = false
};

struct AcpDeltaRow {
  int month = 0;
  std::string indicator;
  double median_separate = 0.0;
  double median_merged = 0.0;
  double median_delta = 0.0;  // merged - separate
};

struct AcpReport {
  std::vector<AcpPair> pairs;
  std::vector<AcpDeltaRow> deltas;
};

// Seed-matched runs alternating alternative0 true/false. InputError when no region has an acp_id.
// Writes <out_root>/acp_deltas.csv when out_root is given.
AcpReport run_acp_alternate(const World& world, const Params& params, int n_pairs,
                            const std::optional<std::filesystem::path>& out_root, unsigned threads = 0);

// Runs jobs 0..n-1 on up to `threads` workers (hardware concurrency when 0).
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& job);

}  // namespace seal
