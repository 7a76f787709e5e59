#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "seal/data.hpp"
#include "seal/params.hpp"
#include "seal/random.hpp"
#include "seal/state.hpp"

namespace seal {

struct GenesisConfig {
  double percentage_actual_pop = 0.01;
  bool simplify_pop_evolution = true;
  std::vector<int> list_new_age_groups{6, 12, 17, 25, 35, 45, 65, 100};
  double members_per_family = 2.5;
  double house_vacancy = 0.10;
  double initial_firm_cash = 100.0;
  std::uint64_t seed = 0;

  static GenesisConfig from_params(const Params& p);
  std::string digest() const;

  bool operator==(const GenesisConfig&) const = default;
};

// Gamma(shape 3, rate 3) clipped to (0.1, 10): mean 1.
double draw_default_qualification(Rng& rng);
// From the regional table when it has an entry, else the default distribution.
double draw_qualification(Rng& rng, const QualificationTable& table, const RegionId& region);

// ceil() that ignores floating-point dust, so 10 * 1.1 gives 11 rather than 12.
std::size_t ceil_count(double x);
// Round half up, the rule used for every scaled count.
std::size_t round_count(double x);

// One Region per boundary: index = HDI, empty treasury, its own fiscal cluster.
// Throws InputError "no HDI for <id>" when a boundary has no HDI entry.
std::vector<Region> create_regions(const std::vector<RegionBoundary>& boundaries,
                                   const std::map<RegionId, double>& hdi,
                                   const std::map<RegionId, std::string>& acp = {},
                                   const std::map<RegionId, double>& urban_share = {});

// Re-buckets rows into the coarse age groups (upper bounds, inclusive) keeping
// per-region, per-gender totals. A row goes to the group containing its age_low.
PopulationTable simplify_population(const PopulationTable& pop, const std::vector<int>& upper_bounds);

// Scaled citizens per row with uniform age in the bracket, uniform birth month,
// money ~ U(20, 40). Ids are sequential from first_id; family ids are left unset.
std::vector<Citizen> create_citizens(const PopulationTable& pop, const GenesisConfig& cfg,
                                     const QualificationTable& qualification, Rng& rng,
                                     std::uint64_t first_id = 0);

// Creates ceil(n / members_per_family) families for the region's citizens and fills them
// by repeated uniform draws of (family, unassigned citizen). Some families may stay empty.
// Returns the ids of the new families.
std::vector<FamilyId> create_families_and_allocate(SimulationState& state, const RegionId& region,
                                                   const GenesisConfig& cfg, Rng& rng);

// Builds ceil(families * (1 + vacancy)) houses for the region, places every nonempty
// family in a distinct house it owns, and hands the leftovers to random families.
std::vector<HouseId> create_households_and_allocate(SimulationState& state, const RegionId& region,
                                                    const GenesisConfig& cfg, Rng& rng);

// Samples an address inside the region: urban zone with probability urban_share, else
// the rural remainder (the whole municipality when it has no urban zones).
Point sample_address(const Region& region, Rng& rng);

// round(count * fraction) firms per region, at least one where the count is positive.
std::vector<FirmId> create_firms(SimulationState& state, const std::map<RegionId, double>& firm_counts,
                                 const GenesisConfig& cfg, Rng& rng);

// The whole generator. A pure function of (data, cfg): same inputs, same world.
SimulationState generate_world(const WorldData& data, const GenesisConfig& cfg);

}  // namespace seal
