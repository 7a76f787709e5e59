#include "seal/stats.hpp"

#include <algorithm>
#include <numeric>

#include "seal/errors.hpp"

namespace seal {

const std::vector<std::string>& agent_columns() {
  static const std::vector<std::string> c{"month", "region_id", "gender",        "long",      "lat",     "id",
                                          "age",   "qualification", "firm_id", "family_id", "utility", "distance"};
  return c;
}

const std::vector<std::string>& firm_columns() {
  static const std::vector<std::string> c{"month", "firm_id", "region_id", "long", "lat", "total_balance",
                                          "number_employees", "total_quantity_in_stock", "amount_produced", "price"};
  return c;
}

const std::vector<std::string>& general_columns() {
  static const std::vector<std::string> c{"month",          "price_index",     "gdp_index",        "unemployment",
                                          "average_workers", "families_wealth", "families_savings", "firms_wealth",
                                          "firms_profit",   "gini_index",      "average_utility"};
  return c;
}

const std::vector<std::string>& house_columns() {
  static const std::vector<std::string> c{"month",       "house_id",  "long",           "lat",      "house_size",
                                          "house_price", "family_id", "family_savings", "region_id"};
  return c;
}

const std::vector<std::string>& regional_columns() {
  static const std::vector<std::string> c{"month",         "region_id",  "commuting",  "pop",          "gdp_region",
                                          "regional_gini", "regional_unemployment", "qli_index", "gdp_percapta",
                                          "treasure"};
  return c;
}

double average_price(const SimulationState& state) {
  if (state.firms.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [id, f] : state.firms) sum += f.product ? f.product->price : 0.0;
  return sum / static_cast<double>(state.firms.size());
}

double region_gdp(const SimulationState& state, const RegionId& region) {
  double sum = 0.0;
  for (const auto& [id, f] : state.firms) {
    if (f.region_id == region) sum += f.amount_sold;
  }
  return sum;
}

namespace {

double unemployment_where(const SimulationState& state, const RegionId* region) {
  std::size_t workforce = 0;
  std::size_t idle = 0;
  for (const auto& [id, c] : state.citizens) {
    if (region && c.region_id != *region) continue;
    if (!c.in_workforce()) continue;
    ++workforce;
    if (!c.employed()) ++idle;
  }
  return workforce == 0 ? 0.0 : static_cast<double>(idle) / static_cast<double>(workforce);
}

}  // namespace

double unemployment(const SimulationState& state) { return unemployment_where(state, nullptr); }

double regional_unemployment(const SimulationState& state, const RegionId& region) {
  return unemployment_where(state, &region);
}

std::size_t workforce_size(const SimulationState& state) {
  return static_cast<std::size_t>(std::count_if(state.citizens.begin(), state.citizens.end(),
                                                [](const auto& kv) { return kv.second.in_workforce(); }));
}

double gini(std::span<const double> values) {
  for (double v : values) {
    if (v < 0.0) throw InputError("gini requires nonnegative values");
  }
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  const double total = std::accumulate(x.begin(), x.end(), 0.0);
  if (total == 0.0) return 0.0;
  // Sum over pairs |xi - xj| = 2 * sum_i (2i - n + 1) x_(i) for sorted x.
  double weighted = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    weighted += (2.0 * static_cast<double>(i) - static_cast<double>(n) + 1.0) * x[i];
  }
  return weighted / (static_cast<double>(n) * total);
}

std::vector<double> family_utilities(const SimulationState& state, const RegionId* region) {
  std::vector<double> out;
  for (const auto& [id, fam] : state.families) {
    if (fam.members.empty()) continue;
    if (region && fam.region_id != *region) continue;
    double u = 0.0;
    for (CitizenId m : fam.members) u += state.citizen(m).utility;
    out.push_back(u / static_cast<double>(fam.members.size()));
  }
  return out;
}

double commuting(const SimulationState& state, const RegionId& region) {
  double sum = 0.0;
  for (const auto& [id, c] : state.citizens) {
    if (c.region_id == region && c.distance) sum += *c.distance;
  }
  return sum;
}

GeneralRow general_row(const SimulationState& state) {
  GeneralRow row;
  row.month = state.clock.month_index();
  row.price_index = average_price(state);
  for (const auto& [id, f] : state.firms) {
    row.gdp_index += f.amount_sold;
    row.firms_wealth += f.total_balance;
    row.firms_profit += f.profit;
    row.average_workers += static_cast<double>(f.employees.size());
  }
  if (!state.firms.empty()) row.average_workers /= static_cast<double>(state.firms.size());
  row.unemployment = unemployment(state);
  for (const auto& [id, c] : state.citizens) {
    row.families_wealth += c.money + c.savings;
    row.families_savings += c.savings;
    row.average_utility += c.utility;
  }
  for (const auto& [id, fam] : state.families) {
    row.families_wealth += fam.balance + fam.savings;
    row.families_savings += fam.savings;
  }
  if (!state.citizens.empty()) row.average_utility /= static_cast<double>(state.citizens.size());
  const auto utilities = family_utilities(state);
  row.gini_index = gini(utilities);
  return row;
}

std::vector<RegionalRow> regional_rows(const SimulationState& state) {
  std::vector<RegionalRow> rows;
  rows.reserve(state.regions.size());
  for (const auto& [rid, r] : state.regions) {
    RegionalRow row;
    row.month = state.clock.month_index();
    row.region_id = rid;
    row.commuting = commuting(state, rid);
    row.pop = region_population(state, rid);
    row.gdp_region = region_gdp(state, rid);
    const auto utilities = family_utilities(state, &rid);
    row.regional_gini = gini(utilities);
    row.regional_unemployment = regional_unemployment(state, rid);
    row.qli_index = r.index;
    row.gdp_percapta = row.pop > 0 ? row.gdp_region / static_cast<double>(row.pop) : 0.0;
    row.treasure = r.treasure;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace seal
