#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "seal/domain.hpp"

namespace seal {

// Working-day clock: 21 days per month, months grouped into quarters and years.
struct Clock {
  int day = 0;

  int month_index() const { return day / kDaysPerMonth; }
  int calendar_month() const { return month_index() % 12 + 1; }
  int year_offset() const { return month_index() / 12; }
  bool at_month_start() const { return day % kDaysPerMonth == 0; }

  static bool is_quarter_month(int month_index) { return month_index % 3 == 0; }
  static bool is_year_month(int month_index) { return month_index % 12 == 0; }

  bool operator==(const Clock&) const = default;
};

// Every registry iterates in ascending id order, which fixes the order of random draws.
struct SimulationState {
  Clock clock;
  std::map<CitizenId, Citizen> citizens;
  std::map<FamilyId, Family> families;
  std::map<HouseId, Household> houses;
  std::map<FirmId, Firm> firms;
  std::map<RegionId, Region> regions;
  std::map<ClusterId, FiscalCluster> clusters;
  std::vector<Citizen> graveyard;

  std::uint64_t next_citizen_id = 0;
  std::uint64_t genesis_seed = 0;
  std::string genesis_digest;  // digest of the inputs/config that produced this world
  bool bootstrapped = false;

  bool operator==(const SimulationState&) const = default;

  Citizen& citizen(CitizenId id);
  const Citizen& citizen(CitizenId id) const;
  Family& family(FamilyId id);
  const Family& family(FamilyId id) const;
  Household& house(HouseId id);
  const Household& house(HouseId id) const;
  Firm& firm(FirmId id);
  const Firm& firm(FirmId id) const;
  Region& region(const RegionId& id);
  const Region& region(const RegionId& id) const;
  FiscalCluster& cluster_of(const RegionId& id);
};

// Throws ConsistencyError describing the first broken backlink.
void check_consistency(const SimulationState& state);

// Money held anywhere in the economy: citizens, families, firms and treasuries.
double total_money(const SimulationState& state);

std::size_t population(const SimulationState& state);
std::size_t region_population(const SimulationState& state, const RegionId& region);

// Recomputes Region::pop for every region and returns the per-cluster totals.
std::map<ClusterId, std::size_t> refresh_populations(SimulationState& state);

// Member savings plus the family's own account.
double family_total_savings(const SimulationState& state, const Family& family);

// Regroups regions into fiscal clusters: one per region when `merge_by_acp` is false,
// otherwise regions sharing an acp_id share a treasury and an index (population-weighted
// mean of the member indexes). Treasuries are pooled.
void assign_fiscal_clusters(SimulationState& state, bool merge_by_acp);

// Copies cluster index and treasury back onto member regions.
void sync_regions_from_clusters(SimulationState& state);

// Stable digest of the complete state, for determinism checks.
std::string state_digest(const SimulationState& state);

}  // namespace seal
