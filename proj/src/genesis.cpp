#include "seal/genesis.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "seal/digest.hpp"
#include "seal/errors.hpp"

namespace seal {

namespace {

template <class Map>
std::uint64_t next_key(const Map& m) {
  return m.empty() ? 0 : m.rbegin()->first.value + 1;
}

void place_family(SimulationState& state, Family& family, Household& house) {
  house.occupant = family.id;
  family.household_id = house.id;
  family.address = house.address;
  family.region_id = house.region_id;
  for (CitizenId m : family.members) {
    Citizen& c = state.citizen(m);
    c.address = house.address;
    c.region_id = house.region_id;
  }
}

}  // namespace

GenesisConfig GenesisConfig::from_params(const Params& p) {
  GenesisConfig cfg;
  cfg.percentage_actual_pop = p.percentage_actual_pop;
  cfg.simplify_pop_evolution = p.simplify_pop_evolution;
  cfg.list_new_age_groups = p.list_new_age_groups;
  cfg.members_per_family = p.members_per_family;
  cfg.house_vacancy = p.house_vacancy;
  cfg.initial_firm_cash = p.initial_firm_cash;
  cfg.seed = p.seed;
  return cfg;
}

std::string GenesisConfig::digest() const {
  std::string groups;
  for (int g : list_new_age_groups) groups += fmt::format("{},", g);
  return fnv1a_hex(fmt::format("fraction={};simplify={};groups={};mpf={};vacancy={};cash={};seed={}",
                               percentage_actual_pop, simplify_pop_evolution, groups, members_per_family,
                               house_vacancy, initial_firm_cash, seed));
}

double draw_default_qualification(Rng& rng) { return std::clamp(rng.gamma(3.0, 3.0), 0.1, 10.0); }

double draw_qualification(Rng& rng, const QualificationTable& table, const RegionId& region) {
  const auto* dist = table.find(region);
  if (!dist) return draw_default_qualification(rng);
  double total = 0.0;
  for (const auto& [v, w] : *dist) total += w;
  if (!(total > 0.0)) return draw_default_qualification(rng);
  double u = rng.uniform() * total;
  for (const auto& [v, w] : *dist) {
    if (u < w) return v;
    u -= w;
  }
  return dist->back().first;
}

std::size_t ceil_count(double x) {
  if (!(x > 0.0)) return 0;
  return static_cast<std::size_t>(std::ceil(x - 1e-9 * std::max(1.0, x)));
}

std::size_t round_count(double x) {
  if (!(x > 0.0)) return 0;
  return static_cast<std::size_t>(std::floor(x + 0.5 + 1e-9 * std::max(1.0, x)));
}

std::vector<Region> create_regions(const std::vector<RegionBoundary>& boundaries,
                                   const std::map<RegionId, double>& hdi,
                                   const std::map<RegionId, std::string>& acp,
                                   const std::map<RegionId, double>& urban_share) {
  std::vector<Region> regions;
  for (const RegionBoundary& b : boundaries) {
    const auto it = hdi.find(b.region_id);
    if (it == hdi.end()) throw InputError(fmt::format("no HDI for {}", b.region_id));
    if (!(it->second > 0.0 && it->second <= 1.0)) {
      throw InputError(fmt::format("HDI for {} must lie in (0, 1]", b.region_id));
    }
    Region r;
    r.id = b.region_id;
    r.name = b.name;
    r.boundary = b;
    r.index = it->second;
    r.treasure = 0.0;
    r.fiscal_cluster = b.region_id;
    if (auto a = acp.find(b.region_id); a != acp.end()) r.acp_id = a->second;
    if (auto u = urban_share.find(b.region_id); u != urban_share.end()) {
      r.urban_share = u->second;
    } else {
      r.urban_share = b.urban_zones.empty() ? 0.0 : 0.8;
    }
    regions.push_back(std::move(r));
  }
  return regions;
}

PopulationTable simplify_population(const PopulationTable& pop, const std::vector<int>& upper_bounds) {
  if (upper_bounds.empty()) throw InputError("age group list is empty");
  struct Key {
    RegionId region;
    std::size_t group;
    char gender;
    auto operator<=>(const Key&) const = default;
  };
  std::vector<RegionId> region_order;
  std::map<Key, double> counts;
  for (const PopulationRow& row : pop) {
    if (std::find(region_order.begin(), region_order.end(), row.region_id) == region_order.end()) {
      region_order.push_back(row.region_id);
    }
    const auto it = std::lower_bound(upper_bounds.begin(), upper_bounds.end(), row.age_low);
    const std::size_t group = it == upper_bounds.end() ? upper_bounds.size() - 1
                                                       : static_cast<std::size_t>(it - upper_bounds.begin());
    counts[{row.region_id, group, row.gender}] += row.count;
  }
  PopulationTable out;
  for (const RegionId& region : region_order) {
    for (std::size_t g = 0; g < upper_bounds.size(); ++g) {
      for (char gender : {'M', 'F', 'B'}) {
        const auto it = counts.find({region, g, gender});
        if (it == counts.end()) continue;
        const int lo = g == 0 ? 0 : upper_bounds[g - 1] + 1;
        out.push_back({region, lo, upper_bounds[g], gender, it->second});
      }
    }
  }
  return out;
}

std::vector<Citizen> create_citizens(const PopulationTable& pop, const GenesisConfig& cfg,
                                     const QualificationTable& qualification, Rng& rng, std::uint64_t first_id) {
  PopulationTable rows = pop;
  std::stable_sort(rows.begin(), rows.end(),
                   [](const PopulationRow& a, const PopulationRow& b) { return a.region_id < b.region_id; });
  std::vector<Citizen> citizens;
  std::uint64_t next = first_id;
  for (const PopulationRow& row : rows) {
    const std::size_t n = round_count(row.count * cfg.percentage_actual_pop);
    for (std::size_t i = 0; i < n; ++i) {
      Citizen c;
      c.id = CitizenId{next++};
      if (row.gender == 'B') {
        c.gender = i % 2 == 0 ? Gender::male : Gender::female;
      } else {
        c.gender = row.gender == 'M' ? Gender::male : Gender::female;
      }
      c.age = static_cast<int>(rng.integer(row.age_low, row.age_high));
      c.month_of_birth = static_cast<int>(rng.integer(1, 12));
      c.money = rng.uniform(20.0, 40.0);
      c.qualification = draw_qualification(rng, qualification, row.region_id);
      c.region_id = row.region_id;
      citizens.push_back(std::move(c));
    }
  }
  if (citizens.empty()) throw InputError("population fraction too small: no citizens generated");
  return citizens;
}

std::vector<FamilyId> create_families_and_allocate(SimulationState& state, const RegionId& region,
                                                   const GenesisConfig& cfg, Rng& rng) {
  std::vector<CitizenId> unassigned;
  for (const auto& [id, c] : state.citizens) {
    if (c.region_id == region) unassigned.push_back(id);
  }
  const std::size_t n_families = ceil_count(static_cast<double>(unassigned.size()) / cfg.members_per_family);
  std::vector<FamilyId> ids;
  std::uint64_t next = next_key(state.families);
  for (std::size_t i = 0; i < n_families; ++i) {
    Family f;
    f.id = FamilyId{next++};
    f.region_id = region;
    ids.push_back(f.id);
    state.families.emplace(f.id, std::move(f));
  }
  while (!unassigned.empty()) {
    const FamilyId fid = ids[rng.index(ids.size())];
    const std::size_t pick = rng.index(unassigned.size());
    const CitizenId cid = unassigned[pick];
    unassigned[pick] = unassigned.back();
    unassigned.pop_back();
    state.family(fid).members.insert(cid);
    state.citizen(cid).family_id = fid;
  }
  return ids;
}

Point sample_address(const Region& region, Rng& rng) {
  const RegionBoundary& b = region.boundary;
  if (b.urban_zones.empty() || !rng.bernoulli(region.urban_share)) {
    return random_point_in_polygon(b.outer, b.urban_zones, rng);
  }
  double total = 0.0;
  for (const MultiPolygon& z : b.urban_zones) total += area(z);
  double u = rng.uniform() * total;
  const MultiPolygon* zone = &b.urban_zones.back();
  for (const MultiPolygon& z : b.urban_zones) {
    const double a = area(z);
    if (u < a) {
      zone = &z;
      break;
    }
    u -= a;
  }
  // Urban zones may spill over the municipal border; keep the part inside it.
  const Envelope env = envelope_of(*zone);
  for (long attempt = 0; attempt < kMaxRejections; ++attempt) {
    const Point p{rng.uniform(env.min_x, env.max_x), rng.uniform(env.min_y, env.max_y)};
    if (contains(*zone, p) && contains(b.outer, p)) return p;
  }
  throw SamplingError(fmt::format("urban zone of region {} does not overlap its boundary", region.id));
}

std::vector<HouseId> create_households_and_allocate(SimulationState& state, const RegionId& region,
                                                   const GenesisConfig& cfg, Rng& rng) {
  std::vector<FamilyId> families;
  for (const auto& [id, f] : state.families) {
    if (f.region_id == region) families.push_back(id);
  }
  const Region& reg = state.region(region);
  if (!families.empty() && (reg.boundary.outer.parts.empty() || !(area(reg.boundary.outer) > 0.0))) {
    throw InputError(fmt::format("region {} has families but a zero-area boundary", region));
  }
  const std::size_t n_houses = ceil_count(static_cast<double>(families.size()) * (1.0 + cfg.house_vacancy));
  std::vector<HouseId> ids;
  std::uint64_t next = next_key(state.houses);
  for (std::size_t i = 0; i < n_houses; ++i) {
    Household h;
    h.id = HouseId{next++};
    h.address = sample_address(reg, rng);
    h.size = rng.uniform(20.0, 120.0);
    h.quality = static_cast<int>(rng.integer(1, 4));
    h.region_id = region;
    reprice_house(h, reg.index);
    ids.push_back(h.id);
    state.houses.emplace(h.id, std::move(h));
  }

  std::vector<HouseId> free = ids;
  for (FamilyId fid : families) {
    Family& f = state.family(fid);
    if (f.members.empty()) continue;
    if (free.empty()) throw InputError(fmt::format("region {}: fewer houses than families", region));
    const std::size_t pick = rng.index(free.size());
    Household& h = state.house(free[pick]);
    free.erase(free.begin() + static_cast<std::ptrdiff_t>(pick));
    h.owner = fid;
    f.owned_houses.insert(h.id);
    place_family(state, f, h);
  }
  for (HouseId hid : free) {
    const FamilyId owner = families[rng.index(families.size())];
    state.house(hid).owner = owner;
    state.family(owner).owned_houses.insert(hid);
  }
  return ids;
}

std::vector<FirmId> create_firms(SimulationState& state, const std::map<RegionId, double>& firm_counts,
                                 const GenesisConfig& cfg, Rng& rng) {
  std::vector<FirmId> ids;
  std::uint64_t next = next_key(state.firms);
  for (const auto& [region_id, region] : state.regions) {
    const auto it = firm_counts.find(region_id);
    if (it == firm_counts.end() || !(it->second > 0.0)) continue;
    const std::size_t n = std::max<std::size_t>(1, round_count(it->second * cfg.percentage_actual_pop));
    for (std::size_t i = 0; i < n; ++i) {
      Firm f;
      f.id = FirmId{next++};
      f.address = sample_address(region, rng);
      f.region_id = region_id;
      f.total_balance = cfg.initial_firm_cash;
      f.last_qtr_balance = cfg.initial_firm_cash;
      f.profit = 1.0;
      create_product(f);
      ids.push_back(f.id);
      state.firms.emplace(f.id, std::move(f));
    }
  }
  return ids;
}

SimulationState generate_world(const WorldData& data, const GenesisConfig& cfg) {
  Rng rng(cfg.seed);
  SimulationState state;
  state.genesis_seed = cfg.seed;
  state.genesis_digest = fnv1a_hex(data.digest + "|" + cfg.digest());

  for (Region& r : create_regions(data.boundaries, data.hdi, data.acp, data.urban_share)) {
    const RegionId id = r.id;
    state.regions.emplace(id, std::move(r));
  }
  const PopulationTable pop =
      cfg.simplify_pop_evolution ? simplify_population(data.population, cfg.list_new_age_groups) : data.population;
  for (const PopulationRow& row : pop) {
    if (!state.regions.contains(row.region_id)) {
      throw InputError(fmt::format("population row for unknown region {}", row.region_id));
    }
  }
  for (Citizen& c : create_citizens(pop, cfg, data.qualification, rng, 0)) {
    state.next_citizen_id = c.id.value + 1;
    const CitizenId id = c.id;
    state.citizens.emplace(id, std::move(c));
  }
  for (const auto& [id, r] : state.regions) create_families_and_allocate(state, id, cfg, rng);
  for (const auto& [id, r] : state.regions) create_households_and_allocate(state, id, cfg, rng);
  create_firms(state, data.firm_counts, cfg, rng);
  assign_fiscal_clusters(state, false);
  return state;
}

}  // namespace seal
