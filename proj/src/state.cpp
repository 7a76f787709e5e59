#include "seal/state.hpp"

#include <fmt/core.h>

#include "seal/errors.hpp"

namespace seal {

namespace {

template <class Map, class Key>
auto& lookup(Map& map, const Key& key, const char* what) {
  const auto it = map.find(key);
  if (it == map.end()) {
    if constexpr (std::is_same_v<Key, RegionId>) {
      throw ConsistencyError(fmt::format("unknown {} '{}'", what, key));
    } else {
      throw ConsistencyError(fmt::format("unknown {} {}", what, key.value));
    }
  }
  return it->second;
}

void fail(std::string msg) { throw ConsistencyError(std::move(msg)); }

}  // namespace

Citizen& SimulationState::citizen(CitizenId id) { return lookup(citizens, id, "citizen"); }
const Citizen& SimulationState::citizen(CitizenId id) const { return lookup(citizens, id, "citizen"); }
Family& SimulationState::family(FamilyId id) { return lookup(families, id, "family"); }
const Family& SimulationState::family(FamilyId id) const { return lookup(families, id, "family"); }
Household& SimulationState::house(HouseId id) { return lookup(houses, id, "house"); }
const Household& SimulationState::house(HouseId id) const { return lookup(houses, id, "house"); }
Firm& SimulationState::firm(FirmId id) { return lookup(firms, id, "firm"); }
const Firm& SimulationState::firm(FirmId id) const { return lookup(firms, id, "firm"); }
Region& SimulationState::region(const RegionId& id) { return lookup(regions, id, "region"); }
const Region& SimulationState::region(const RegionId& id) const { return lookup(regions, id, "region"); }

FiscalCluster& SimulationState::cluster_of(const RegionId& id) {
  return lookup(clusters, region(id).fiscal_cluster, "fiscal cluster");
}

void check_consistency(const SimulationState& state) {
  for (const auto& [id, c] : state.citizens) {
    if (c.id != id) fail(fmt::format("citizen key {} holds id {}", id.value, c.id.value));
    const auto fam = state.families.find(c.family_id);
    if (fam == state.families.end() || !fam->second.members.contains(id)) {
      fail(fmt::format("citizen {} missing from family {}", id.value, c.family_id.value));
    }
    if (c.firm_id.has_value() != c.distance.has_value()) {
      fail(fmt::format("citizen {} has workplace/distance mismatch", id.value));
    }
    if (c.firm_id) {
      const auto firm = state.firms.find(*c.firm_id);
      if (firm == state.firms.end() || !firm->second.employees.contains(id)) {
        fail(fmt::format("citizen {} missing from staff of firm {}", id.value, c.firm_id->value));
      }
    }
    if (!state.regions.contains(c.region_id)) fail(fmt::format("citizen {} in unknown region", id.value));
  }
  for (const auto& [id, f] : state.families) {
    for (CitizenId m : f.members) {
      const auto c = state.citizens.find(m);
      if (c == state.citizens.end()) fail(fmt::format("family {} lists dead or unknown member {}", id.value, m.value));
      if (c->second.family_id != id) fail(fmt::format("member {} points to another family", m.value));
    }
    if (f.household_id) {
      const auto h = state.houses.find(*f.household_id);
      if (h == state.houses.end() || h->second.occupant != id) {
        fail(fmt::format("family {} occupies house {} which does not list it", id.value, f.household_id->value));
      }
    }
    for (HouseId h : f.owned_houses) {
      const auto it = state.houses.find(h);
      if (it == state.houses.end() || it->second.owner != id) {
        fail(fmt::format("family {} owns house {} which names another owner", id.value, h.value));
      }
    }
  }
  for (const auto& [id, h] : state.houses) {
    const auto owner = state.families.find(h.owner);
    if (owner == state.families.end() || !owner->second.owned_houses.contains(id)) {
      fail(fmt::format("house {} owner {} does not list it", id.value, h.owner.value));
    }
    if (h.occupant) {
      const auto occ = state.families.find(*h.occupant);
      if (occ == state.families.end() || occ->second.household_id != id) {
        fail(fmt::format("house {} occupant {} lives elsewhere", id.value, h.occupant->value));
      }
    }
  }
  for (const auto& [id, firm] : state.firms) {
    for (CitizenId e : firm.employees) {
      const auto c = state.citizens.find(e);
      if (c == state.citizens.end()) fail(fmt::format("firm {} employs dead or unknown citizen {}", id.value, e.value));
      if (c->second.firm_id != id) fail(fmt::format("employee {} points to another firm", e.value));
    }
  }
  for (const Citizen& dead : state.graveyard) {
    if (state.citizens.contains(dead.id)) fail(fmt::format("citizen {} is both alive and buried", dead.id.value));
  }
  for (const auto& [id, r] : state.regions) {
    if (!state.clusters.contains(r.fiscal_cluster)) fail(fmt::format("region '{}' has no fiscal cluster", id));
  }
}

double total_money(const SimulationState& state) {
  double total = 0.0;
  for (const auto& [id, c] : state.citizens) total += c.money + c.savings;
  for (const auto& [id, f] : state.families) total += f.balance + f.savings;
  for (const auto& [id, firm] : state.firms) total += firm.total_balance;
  for (const auto& [id, cl] : state.clusters) total += cl.treasure;
  return total;
}

std::size_t population(const SimulationState& state) { return state.citizens.size(); }

std::size_t region_population(const SimulationState& state, const RegionId& region) {
  std::size_t n = 0;
  for (const auto& [id, c] : state.citizens) n += c.region_id == region ? 1 : 0;
  return n;
}

std::map<ClusterId, std::size_t> refresh_populations(SimulationState& state) {
  for (auto& [id, r] : state.regions) r.pop = 0;
  for (const auto& [id, c] : state.citizens) ++state.region(c.region_id).pop;
  std::map<ClusterId, std::size_t> totals;
  for (const auto& [id, cl] : state.clusters) totals[id] = 0;
  for (const auto& [id, r] : state.regions) totals[r.fiscal_cluster] += r.pop;
  return totals;
}

double family_total_savings(const SimulationState& state, const Family& family) {
  double s = family.savings;
  for (CitizenId m : family.members) s += state.citizen(m).savings;
  return s;
}

void assign_fiscal_clusters(SimulationState& state, bool merge_by_acp) {
  for (const auto& [id, cl] : state.clusters) {
    if (cl.treasure != 0.0) throw InputError("fiscal clusters can only be regrouped while treasuries are empty");
  }
  state.clusters.clear();
  for (auto& [rid, r] : state.regions) {
    r.fiscal_cluster = merge_by_acp && r.acp_id ? *r.acp_id : rid;
    FiscalCluster& cl = state.clusters[r.fiscal_cluster];
    cl.id = r.fiscal_cluster;
    cl.members.push_back(rid);
  }
  refresh_populations(state);
  for (auto& [cid, cl] : state.clusters) {
    double weighted = 0.0;
    double plain = 0.0;
    std::size_t pop = 0;
    for (const RegionId& rid : cl.members) {
      const Region& r = state.region(rid);
      weighted += r.index * static_cast<double>(r.pop);
      plain += r.index;
      pop += r.pop;
    }
    if (cl.members.size() == 1) {
      cl.index = plain;
    } else {
      cl.index = pop > 0 ? weighted / static_cast<double>(pop) : plain / static_cast<double>(cl.members.size());
    }
    cl.treasure = 0.0;
    cl.pop_prev = pop;
  }
  sync_regions_from_clusters(state);
}

void sync_regions_from_clusters(SimulationState& state) {
  for (auto& [rid, r] : state.regions) {
    const FiscalCluster& cl = state.clusters.at(r.fiscal_cluster);
    r.index = cl.index;
    r.treasure = cl.treasure;
  }
}

}  // namespace seal
