#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "seal/data.hpp"
#include "seal/demographics.hpp"
#include "seal/markets.hpp"
#include "seal/params.hpp"
#include "seal/random.hpp"
#include "seal/state.hpp"

namespace seal {

enum class MonthStep {
  record_month = 1,
  demographics,
  salaries,
  pool_and_split,
  consume,
  collect_taxes,
  fiscal_spend,
  prices,
  labor,
  real_estate,
  statistics,
};

inline constexpr std::array<MonthStep, 11> kMonthSteps{
    MonthStep::record_month, MonthStep::demographics, MonthStep::salaries,     MonthStep::pool_and_split,
    MonthStep::consume,      MonthStep::collect_taxes, MonthStep::fiscal_spend, MonthStep::prices,
    MonthStep::labor,        MonthStep::real_estate,   MonthStep::statistics};

std::string step_name(MonthStep s);

struct StepAudit {
  MonthStep step;
  double money_before = 0.0;
  double money_after = 0.0;
};

struct MonthReport {
  int month_index = 0;
  std::vector<StepAudit> steps;
  double fiscal_spent = 0.0;
  std::size_t pop_before = 0;
  std::size_t pop_after = 0;
  DemographicsReport demographics;
  LaborReport labor;
  RealEstateReport real_estate;
  ConsumptionTotals consumption;
  double salaries_paid = 0.0;
};

// Receives the state at the statistics step of each month.
using MonthObserver = std::function<void(const SimulationState&, const MonthReport&)>;

// One simulation: the state, its parameters, the demographic tables and its single
// random stream. Single-threaded; owns its state exclusively.
class Simulation {
 public:
  Simulation(SimulationState state, Params params, VitalTables vitals, QualificationTable qualification = {});

  // Day 0: every firm gets its product (once) and one round of labor matching runs.
  // Throws ConsistencyError when called twice.
  void bootstrap();

  // Production for every firm, then the clock advances one day.
  void run_day();

  // The eleven monthly steps, in order. `order` overrides the sequence (tests only).
  MonthReport run_month();

  // Bootstraps if needed and runs until TOTAL_DAYS, calling run_month at every month
  // boundary (day 0 included) before the day's production.
  void run();

  void set_observer(MonthObserver observer) { observer_ = std::move(observer); }
  void set_step_order(std::vector<MonthStep> order) { order_ = std::move(order); }
  void set_consistency_checks(bool on) { check_ = on; }
  void set_firm_scope(FirmSearchScope scope) { scope_ = scope; }

  const SimulationState& state() const { return state_; }
  SimulationState& mutable_state() { return state_; }
  const Params& params() const { return params_; }
  Rng& rng() { return rng_; }
  const std::vector<MonthStep>& trace() const { return trace_; }

 private:
  void run_step(MonthStep step, MonthReport& report);

  SimulationState state_;
  Params params_;
  VitalTables vitals_;
  QualificationTable qualification_;
  Rng rng_;
  MonthObserver observer_;
  std::vector<MonthStep> order_{kMonthSteps.begin(), kMonthSteps.end()};
  std::vector<MonthStep> trace_;
  bool check_ = true;
  FirmSearchScope scope_ = FirmSearchScope::global;
};

}  // namespace seal
