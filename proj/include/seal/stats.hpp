#pragma once

#include <span>
#include <string>
#include <vector>

#include "seal/state.hpp"

namespace seal {

struct GeneralRow {
  int month = 0;
  double price_index = 0.0;
  double gdp_index = 0.0;
  double unemployment = 0.0;
  double average_workers = 0.0;
  double families_wealth = 0.0;
  double families_savings = 0.0;
  double firms_wealth = 0.0;
  double firms_profit = 0.0;
  double gini_index = 0.0;
  double average_utility = 0.0;

  bool operator==(const GeneralRow&) const = default;
};

struct RegionalRow {
  int month = 0;
  RegionId region_id;
  double commuting = 0.0;
  std::size_t pop = 0;
  double gdp_region = 0.0;
  double regional_gini = 0.0;
  double regional_unemployment = 0.0;
  double qli_index = 0.0;
  double gdp_percapta = 0.0;
  double treasure = 0.0;

  bool operator==(const RegionalRow&) const = default;
};

inline constexpr std::size_t kAgentColumns = 12;
inline constexpr std::size_t kFirmColumns = 10;
inline constexpr std::size_t kGeneralColumns = 11;
inline constexpr std::size_t kHouseColumns = 9;
inline constexpr std::size_t kRegionalColumns = 10;

const std::vector<std::string>& agent_columns();
const std::vector<std::string>& firm_columns();
const std::vector<std::string>& general_columns();
const std::vector<std::string>& house_columns();
const std::vector<std::string>& regional_columns();

// Unweighted mean product price; 0 with no firms.
double average_price(const SimulationState& state);

// Cumulative gross sales of the region's firms.
double region_gdp(const SimulationState& state, const RegionId& region);

// Unemployed share of the 16..69 workforce; 0 when the workforce is empty.
double unemployment(const SimulationState& state);
double regional_unemployment(const SimulationState& state, const RegionId& region);
std::size_t workforce_size(const SimulationState& state);

// Mean absolute difference over twice the mean. Throws InputError on negative values;
// 0 when n < 2 or the mean is 0.
double gini(std::span<const double> values);

// Average member utility of every nonempty family (optionally only those in `region`).
std::vector<double> family_utilities(const SimulationState& state, const RegionId* region = nullptr);

// Commuting distance summed over employed citizens living in the region.
double commuting(const SimulationState& state, const RegionId& region);

GeneralRow general_row(const SimulationState& state);
std::vector<RegionalRow> regional_rows(const SimulationState& state);

}  // namespace seal
