// Acceptance suite: one PASS/FAIL line per criterion, sub-check details underneath.

#include <chrono>
#include <cmath>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "seal/domain.hpp"
#include "seal/genesis.hpp"
#include "seal/geo.hpp"
#include "seal/lab.hpp"
#include "seal/markets.hpp"
#include "seal/output.hpp"
#include "seal/random.hpp"
#include "seal/scheduler.hpp"
#include "seal/stats.hpp"
#include "support.hpp"

using namespace seal;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Check {
  std::string id;
  bool ok = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  std::vector<Check> checks;

  void add(std::string id, bool ok, std::string detail) { checks.push_back({std::move(id), ok, std::move(detail)}); }
  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
  }
};

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string join(const std::vector<double>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt::format("{:.6g}", v[i]);
  return s + "}";
}

bool all_close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!close(a[i], b[i], tol)) return false;
  }
  return true;
}

// ---- 1 --------------------------------------------------------------------------

Criterion worked_examples() {
  Criterion c{"worked examples"};
  Firm f;
  f.total_balance = 1000;
  f.profit = 200;
  const double wb = wage_base(f);
  c.add("wage_base", wb == 1.2, fmt::format("wage_base(1000, 200) = {}", wb));

  const std::vector<double> g = sensitivity_grid("ALPHA", 6);
  c.add("alpha_grid", all_close(g, {0.01, 0.208, 0.406, 0.604, 0.802, 1.0}, 1e-9), join(g));

  Params p;
  p.auto_adjust_sensitivity_test = true;
  // Peak between grid points 0.505 and 0.7525, nearer the first.
  const Evaluator stub = [](const Params& q) -> std::optional<Objective> {
    return Objective{-(q.alpha - 0.6) * (q.alpha - 0.6), 0.0};
  };
  const AutoAdjustResult r = run_autoadjust(p, 5, 2, stub);
  std::vector<double> first, second;
  for (const auto& e : r.trace) {
    if (e.param == "ALPHA") (e.iteration == 1 ? first : second).push_back(e.value);
  }
  c.add("autoadjust_first_grid", all_close(first, {0.01, 0.2575, 0.505, 0.7525, 1.0}, 1e-4), join(first));
  c.add("autoadjust_refinement", all_close(second, {0.505, 0.57, 0.63, 0.69, 0.75}, 1e-4), join(second));

  FiscalCluster cl;
  cl.index = 0.7;
  cl.treasure = 100000;
  fiscal_spend(cl, 0.0005, 1000, 1000);
  c.add("qli_update", cl.index == 0.75, fmt::format("0.7 -> {}", cl.index));
  return c;
}

// ---- 2 --------------------------------------------------------------------------

Criterion conservation() {
  Criterion c{"conservation"};
  const auto t0 = Clock::now();
  const World w = test::toy_world(11);
  Simulation sim(w.state, test::short_params(24, 11), w.vitals);
  sim.bootstrap();
  double worst = 0.0;
  bool ledger = true;
  for (int m = 0; m < 24; ++m) {
    const MonthReport r = sim.run_month();
    for (const StepAudit& a : r.steps) {
      const double expected = a.step == MonthStep::fiscal_spend ? a.money_before - r.fiscal_spent : a.money_before;
      worst = std::max(worst, std::abs(expected - a.money_after) / std::max(1.0, std::abs(a.money_before)));
    }
    ledger = ledger && r.pop_after == r.pop_before + r.demographics.births.size() - r.demographics.deaths.size();
    for (int d = 0; d < kDaysPerMonth; ++d) sim.run_day();
  }
  const double secs = seconds_since(t0);
  c.add("money", worst <= 1e-6, fmt::format("worst relative drift {:.3g} over 24 months", worst));
  c.add("population_ledger", ledger, "pop(t+1) = pop(t) + births - deaths");
  c.add("runtime", secs < 10.0, fmt::format("{} citizens, {:.2f} s", w.state.citizens.size(), secs));
  return c;
}

// ---- 3 --------------------------------------------------------------------------

std::string files_of(const fs::path& dir) {
  return test::read_text(test::find_output(dir, "general")) + test::read_text(test::find_output(dir, "regional"));
}

Criterion determinism(const fs::path& work) {
  Criterion c{"determinism"};
  const World w = test::toy_world(21);
  const World again = world_from_string(snapshot_to_string(w));
  auto run = [&](const World& world, std::uint64_t seed, const std::string& name) {
    RunOptions opt;
    opt.out_dir = work / "determinism" / name;
    fs::remove_all(*opt.out_dir);
    run_simulation(world, test::short_params(24, seed), opt);
    return files_of(*opt.out_dir);
  };
  const std::string a = run(w, 21, "a");
  const std::string b = run(again, 21, "b");
  const std::string other = run(w, 22, "c");
  c.add("identical", !a.empty() && a == b, fmt::format("{} bytes, same snapshot/params/seed", a.size()));
  c.add("seed_changes", a != other, "seed 21 vs 22");
  return c;
}

// ---- 4 --------------------------------------------------------------------------

std::vector<std::pair<FirmId, CitizenId>> rank_pairing(std::vector<PostingFirm> firms,
                                                       std::vector<PostingCandidate> cands) {
  std::sort(firms.begin(), firms.end(), [](const auto& a, const auto& b) {
    return a.wage_base != b.wage_base ? a.wage_base > b.wage_base : a.id < b.id;
  });
  std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
    return a.qualification != b.qualification ? a.qualification > b.qualification : a.id < b.id;
  });
  std::vector<std::pair<FirmId, CitizenId>> out;
  for (std::size_t i = 0; i < std::min(firms.size(), cands.size()); ++i) out.emplace_back(firms[i].id, cands[i].id);
  return out;
}

Criterion oracles() {
  Criterion c{"oracle equivalence"};
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<int> len(0, 200);
  std::uniform_real_distribution<double> val(0.0, 100.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> x(static_cast<std::size_t>(len(gen)));
    for (double& v : x) v = val(gen);
    if (i % 10 == 0 && !x.empty()) x[0] = 0.0;
    worst = std::max(worst, std::abs(gini(x) - test::gini_oracle(x)));
  }
  c.add("gini", worst <= 1e-12, fmt::format("1000 vectors, max |diff| {:.3g}", worst));

  Rng rng(7);
  std::size_t instances = 0;
  std::size_t mismatches = 0;
  for (std::size_t nf = 0; nf <= 5; ++nf) {
    for (std::size_t nc = 0; nc <= 5; ++nc) {
      // Wages and qualifications from {1, 2}: every tie pattern shows up.
      for (std::size_t code = 0; code < (std::size_t{1} << (nf + nc)); ++code) {
        std::vector<PostingFirm> firms;
        std::vector<PostingCandidate> cands;
        for (std::size_t i = 0; i < nf; ++i) {
          firms.push_back({FirmId{i}, 1.0 + static_cast<double>((code >> i) & 1), {rng.uniform(0, 9), rng.uniform(0, 9)}});
        }
        for (std::size_t i = 0; i < nc; ++i) {
          cands.push_back({CitizenId{i}, 1.0 + static_cast<double>((code >> (nf + i)) & 1),
                           {rng.uniform(0, 9), rng.uniform(0, 9)}});
        }
        Posting board{firms, cands};
        board.sort();
        ++instances;
        if (assign_post(board, rng, CandidateChoice::most_qualified) != rank_pairing(firms, cands)) ++mismatches;
      }
    }
  }
  c.add("assign_post", mismatches == 0, fmt::format("{} boards up to 5x5, {} mismatches", instances, mismatches));

  const Polygon l{{{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}}};
  Rng prng(31);
  std::map<std::pair<int, int>, int> cells;
  const int draws = 10000;
  bool inside = true;
  for (int i = 0; i < draws; ++i) {
    const Point p = random_point_in_polygon(l, prng);
    inside = inside && contains(l, p);
    cells[{static_cast<int>(p.x / 0.5), static_cast<int>(p.y / 0.5)}]++;
  }
  double chi2 = 0.0;
  const double expected = draws / 12.0;
  for (const auto& [cell, n] : cells) chi2 += (n - expected) * (n - expected) / expected;
  chi2 += static_cast<double>(12 - std::min<std::size_t>(12, cells.size())) * expected;
  // Critical value of chi-square with 11 degrees of freedom at p = 0.001.
  c.add("point_uniformity", inside && cells.size() == 12 && chi2 < 31.264,
        fmt::format("L-shape, 12 cells, chi2 = {:.2f} (critical 31.264)", chi2));
  return c;
}

// ---- 5 --------------------------------------------------------------------------

Criterion statistical_contracts() {
  Criterion c{"statistical contracts"};
  const double beta = 0.85;
  Rng rng(3);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double m = 1.0 + 99.0 * rng.uniform();
    sum += *decide_spending(m, beta, rng) / m;
  }
  const double mean = sum / n;
  c.add("spending_mean", std::abs(mean - beta) <= 0.01 * beta, fmt::format("mean spend/M = {:.5f}", mean));

  const WorldData data = synthetic_world();
  double lo = 1e9, hi = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GenesisConfig cfg;
    cfg.seed = seed;
    const SimulationState s = generate_world(data, cfg);
    const double size = static_cast<double>(s.citizens.size()) / static_cast<double>(s.families.size());
    lo = std::min(lo, size);
    hi = std::max(hi, size);
  }
  c.add("family_size", lo >= 2.3 && hi <= 2.7, fmt::format("20 seeds, mean size in [{:.3f}, {:.3f}]", lo, hi));

  SimulationState s = test::empty_state();
  for (std::uint64_t i = 0; i < 10; ++i) test::add_firm(s, i).profit = -1.0;
  Params p;
  p.labour_market = 0.75;
  Rng lrng(17);
  std::size_t entries = 0, firm_months = 0;
  for (int m = 0; m < 1000; ++m) {
    entries += labor_step(s, p, lrng).entered.size();
    firm_months += s.firms.size();
  }
  const double freq = static_cast<double>(entries) / static_cast<double>(firm_months);
  c.add("labour_entry", std::abs(freq - 0.25) <= 0.02, fmt::format("{} firm-months, entry {:.4f}", firm_months, freq));
  return c;
}

// ---- 6 --------------------------------------------------------------------------

Criterion schedule_and_schema(const fs::path& work) {
  Criterion c{"schedule and schema"};
  const World w = test::toy_world(4);
  const Params p = test::short_params(12, 4);
  Simulation canonical(w.state, p, w.vitals);
  canonical.bootstrap();
  canonical.run_month();
  const bool order = std::equal(canonical.trace().begin(), canonical.trace().end(), kMonthSteps.begin(),
                                kMonthSteps.end());
  Simulation a(w.state, p, w.vitals);
  Simulation b(w.state, p, w.vitals);
  auto swapped = std::vector<MonthStep>(kMonthSteps.begin(), kMonthSteps.end());
  std::swap(swapped[2], swapped[4]);
  b.set_step_order(swapped);
  a.run();
  b.run();
  const bool detected = state_digest(a.state()) != state_digest(b.state());
  c.add("step_order", order && detected, "canonical order traced; salaries/consume swap detected");

  const auto t0 = Clock::now();
  RunOptions opt;
  opt.out_dir = work / "schema";
  fs::remove_all(*opt.out_dir);
  Params full;
  full.seed = 4;
  run_simulation(w, full, opt);
  const double secs = seconds_since(t0);
  const std::pair<const char*, std::size_t> expected[] = {
      {"agent", 12}, {"firm", 10}, {"general", 11}, {"house", 9}, {"regional", 10}};
  std::string detail;
  bool columns = true;
  for (const auto& [kind, n] : expected) {
    const auto path = test::find_output(*opt.out_dir, kind);
    const auto lines = path.empty() ? std::vector<std::string>{} : test::read_lines(path);
    bool ok = !lines.empty();
    for (const auto& l : lines) ok = ok && test::field_count(l) == n;
    columns = columns && ok;
    detail += fmt::format("{}{}={}", detail.empty() ? "" : " ", kind, ok ? std::to_string(n) : "bad");
  }
  const auto general = test::read_lines(test::find_output(*opt.out_dir, "general"));
  columns = columns && general.size() == static_cast<std::size_t>(full.total_days / kDaysPerMonth);
  c.add("columns", columns, detail);
  c.add("full_run", secs < 300.0, fmt::format("5040 days in {:.1f} s", secs));
  return c;
}

// ---- 7 --------------------------------------------------------------------------

Criterion policy(const fs::path& work) {
  Criterion c{"policy"};
  const World w = test::toy_world(13);
  auto run = [&](bool alternative0, double tax, const std::string& name) {
    Params p = test::short_params(24, 13);
    p.tax_consumption = tax;
    p.alternative0 = alternative0;
    RunOptions opt;
    opt.out_dir = work / "policy" / name;
    fs::remove_all(*opt.out_dir);
    run_simulation(w, p, opt);
    return files_of(*opt.out_dir);
  };
  const bool same = run(true, 0.0, "separate") == run(false, 0.0, "merged");
  c.add("tax0_identical", same, "TAX_CONSUMPTION=0, alternative0 true vs false");

  Params p = test::short_params(24, 13);
  p.alternative0 = false;
  Simulation sim(w.state, p, w.vitals);
  int months = 0, shared = 0;
  sim.set_observer([&](const SimulationState& s, const MonthReport&) {
    ++months;
    bool eq = true;
    for (const auto& [id, cl] : s.clusters) {
      for (const RegionId& r : cl.members) eq = eq && s.region(r).index == cl.index;
    }
    shared += eq ? 1 : 0;
  });
  sim.run();
  c.add("merged_qli_shared", months == 24 && shared == months,
        fmt::format("{}/{} months with identical member QLIs", shared, months));
  return c;
}

// Known reds, each analysed in the project's decisions notes.
const std::set<std::string> kKnownFailures{"worked examples/autoadjust_refinement", "policy/tax0_identical"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seal acceptance suite"};
  bool known_ok = false;
  std::string work = (fs::temp_directory_path() / "seal_acceptance").string();
  app.add_flag("--known-failures-ok", known_ok, "exit 0 when exactly the known failures fail");
  app.add_option("--work-dir", work, "where run outputs are written");
  CLI11_PARSE(app, argc, argv);
  fs::create_directories(work);

  std::vector<Criterion> all;
  all.push_back(worked_examples());
  all.push_back(conservation());
  all.push_back(determinism(work));
  all.push_back(oracles());
  all.push_back(statistical_contracts());
  all.push_back(schedule_and_schema(work));
  all.push_back(policy(work));

  std::set<std::string> failed;
  for (const Criterion& cr : all) {
    std::cout << (cr.ok() ? "PASS " : "FAIL ") << cr.name << "\n";
    for (const Check& ch : cr.checks) {
      std::cout << "     " << (ch.ok ? "ok   " : "FAIL ") << ch.id << ": " << ch.detail << "\n";
      if (!ch.ok) failed.insert(cr.name + "/" + ch.id);
    }
  }
  const std::size_t passed = std::count_if(all.begin(), all.end(), [](const Criterion& c) { return c.ok(); });
  std::cout << fmt::format("{}/{} criteria passed\n", passed, all.size());
  if (failed.empty()) return 0;
  if (known_ok && failed == kKnownFailures) {
    std::cout << "all failures are the known, documented ones\n";
    return 0;
  }
  return 1;
}
