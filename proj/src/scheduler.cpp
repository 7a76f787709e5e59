#include "seal/scheduler.hpp"

#include <functional>

#include <fmt/core.h>

#include "seal/domain.hpp"
#include "seal/errors.hpp"

namespace seal {

std::string step_name(MonthStep s) {
  switch (s) {
    case MonthStep::record_month: return "record_month";
    case MonthStep::demographics: return "demographics";
    case MonthStep::salaries: return "salaries";
    case MonthStep::pool_and_split: return "pool_and_split";
    case MonthStep::consume: return "consume";
    case MonthStep::collect_taxes: return "collect_taxes";
    case MonthStep::fiscal_spend: return "fiscal_spend";
    case MonthStep::prices: return "prices";
    case MonthStep::labor: return "labor";
    case MonthStep::real_estate: return "real_estate";
    case MonthStep::statistics: return "statistics";
  }
  return "unknown";
}

Simulation::Simulation(SimulationState state, Params params, VitalTables vitals, QualificationTable qualification)
    : state_(std::move(state)),
      params_(std::move(params)),
      vitals_(std::move(vitals)),
      qualification_(std::move(qualification)),
      rng_(params_.seed) {
  if (const auto problems = validate(params_); !problems.empty()) throw InputError(problems.front());
  assign_fiscal_clusters(state_, !params_.alternative0);
}

namespace {

std::vector<double> employee_qualifications(const SimulationState& state, const Firm& firm) {
  std::vector<double> q;
  q.reserve(firm.employees.size());
  for (CitizenId e : firm.employees) q.push_back(state.citizen(e).qualification);
  return q;
}

}  // namespace

void Simulation::bootstrap() {
  if (state_.bootstrapped) throw ConsistencyError("simulation already bootstrapped");
  for (auto& [id, firm] : state_.firms) {
    if (!firm.product) create_product(firm);
  }
  labor_step(state_, params_, rng_);
  state_.bootstrapped = true;
  if (check_) check_consistency(state_);
}

void Simulation::run_day() {
  for (auto& [id, firm] : state_.firms) {
    if (firm.employees.empty()) continue;
    const auto q = employee_qualifications(state_, firm);
    produce(firm, q, params_.alpha);
  }
  ++state_.clock.day;
}

void Simulation::run_step(MonthStep step, MonthReport& report) {
  switch (step) {
    case MonthStep::record_month:
      report.month_index = state_.clock.month_index();
      break;
    case MonthStep::demographics: {
      const int year = params_.year_to_start + state_.clock.year_offset();
      report.demographics = check_demographics(state_, vitals_, qualification_, year, rng_);
      break;
    }
    case MonthStep::salaries:
      for (auto& [id, firm] : state_.firms) {
        const std::vector<CitizenId> staff(firm.employees.begin(), firm.employees.end());
        const auto q = employee_qualifications(state_, firm);
        const Payroll pay = pay_salaries(firm, q, params_.alpha);
        for (std::size_t i = 0; i < staff.size(); ++i) state_.citizen(staff[i]).money += pay.salaries[i];
        report.salaries_paid += pay.paid;
      }
      break;
    case MonthStep::pool_and_split:
      for (auto& [id, family] : state_.families) {
        std::vector<std::reference_wrapper<Citizen>> members;
        members.reserve(family.members.size());
        for (CitizenId m : family.members) members.emplace_back(state_.citizen(m));
        pool_and_split(family, members);
      }
      break;
    case MonthStep::consume:
      for (const auto& [id, family] : state_.families) {
        report.consumption += consume_step(state_, id, params_, rng_, scope_);
      }
      break;
    case MonthStep::collect_taxes:
      // Taxes accrue on the cluster treasuries at sale time; this closes the month's ledger.
      sync_regions_from_clusters(state_);
      break;
    case MonthStep::fiscal_spend: {
      const auto pops = refresh_populations(state_);
      for (auto& [cid, cluster] : state_.clusters) {
        const std::size_t now = pops.at(cid);
        report.fiscal_spent += fiscal_spend(cluster, params_.treasure_into_services, cluster.pop_prev, now);
        if (now > 0) cluster.pop_prev = now;
      }
      sync_regions_from_clusters(state_);
      break;
    }
    case MonthStep::prices: {
      const int m = state_.clock.month_index();
      const bool rebase = Clock::is_quarter_month(m) && m > 0;
      for (auto& [id, firm] : state_.firms) {
        if (rebase) quarterly_rebase(firm);
        update_prices(firm, params_.quantity_to_change_prices, params_.markup);
      }
      break;
    }
    case MonthStep::labor:
      report.labor = labor_step(state_, params_, rng_);
      break;
    case MonthStep::real_estate:
      report.real_estate = real_estate_step(state_, params_, rng_);
      break;
    case MonthStep::statistics:
      refresh_populations(state_);
      for (auto& [rid, r] : state_.regions) r.total_commute = 0.0;
      for (const auto& [id, c] : state_.citizens) {
        if (c.distance) state_.region(c.region_id).total_commute += *c.distance;
      }
      for (auto& [rid, r] : state_.regions) r.region_gdp = 0.0;
      for (const auto& [id, f] : state_.firms) state_.region(f.region_id).region_gdp += f.amount_sold;
      if (observer_) observer_(state_, report);
      break;
  }
}

MonthReport Simulation::run_month() {
  if (!state_.clock.at_month_start()) throw ConsistencyError("run_month called off a month boundary");
  MonthReport report;
  report.month_index = state_.clock.month_index();
  report.pop_before = population(state_);
  for (MonthStep step : order_) {
    StepAudit audit{step, total_money(state_), 0.0};
    trace_.push_back(step);
    run_step(step, report);
    audit.money_after = total_money(state_);
    report.steps.push_back(audit);
    if (check_) {
      try {
        check_consistency(state_);
      } catch (const ConsistencyError& e) {
        throw ConsistencyError(fmt::format("month {}, after {}: {}", report.month_index, step_name(step), e.what()));
      }
    }
  }
  report.pop_after = population(state_);
  return report;
}

void Simulation::run() {
  if (!state_.bootstrapped) bootstrap();
  while (state_.clock.day < params_.total_days) {
    if (state_.clock.at_month_start()) run_month();
    run_day();
  }
}

}  // namespace seal
