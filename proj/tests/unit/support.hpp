#pragma once

// Small hand-built worlds and independent reference implementations used by the tests.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "seal/data.hpp"
#include "seal/domain.hpp"
#include "seal/lab.hpp"
#include "seal/state.hpp"

namespace seal::test {

// One or two square regions with their own clusters and no people.
inline SimulationState empty_state(std::vector<std::string> region_ids = {"R"}) {
  SimulationState s;
  double x = 0.0;
  for (const auto& id : region_ids) {
    Region r;
    r.id = id;
    r.name = id;
    r.boundary = make_boundary(id, id, MultiPolygon{{rectangle(x, 0, x + 10, 10)}});
    r.index = 0.7;
    r.fiscal_cluster = id;
    s.regions.emplace(id, r);
    FiscalCluster c;
    c.id = id;
    c.members = {id};
    c.index = 0.7;
    s.clusters.emplace(id, c);
    x += 10.0;
  }
  return s;
}

inline Family& add_family(SimulationState& s, std::uint64_t id, const RegionId& region = "R") {
  Family f;
  f.id = FamilyId{id};
  f.region_id = region;
  return s.families.emplace(f.id, f).first->second;
}

inline Citizen& add_citizen(SimulationState& s, std::uint64_t id, std::uint64_t family, int age = 30,
                            double qualification = 1.0, Point address = {1, 1}, const RegionId& region = "R") {
  Citizen c;
  c.id = CitizenId{id};
  c.age = age;
  c.qualification = qualification;
  c.family_id = FamilyId{family};
  c.address = address;
  c.region_id = region;
  s.family(c.family_id).members.insert(c.id);
  s.next_citizen_id = std::max(s.next_citizen_id, id + 1);
  return s.citizens.emplace(c.id, c).first->second;
}

inline Firm& add_firm(SimulationState& s, std::uint64_t id, Point address = {5, 5}, double balance = 100.0,
                      const RegionId& region = "R") {
  Firm f;
  f.id = FirmId{id};
  f.address = address;
  f.region_id = region;
  f.total_balance = balance;
  f.last_qtr_balance = balance;
  create_product(f);
  return s.firms.emplace(f.id, f).first->second;
}

inline Household& add_house(SimulationState& s, std::uint64_t id, std::uint64_t owner, double size, int quality,
                            Point address = {2, 2}, const RegionId& region = "R") {
  Household h;
  h.id = HouseId{id};
  h.owner = FamilyId{owner};
  h.size = size;
  h.quality = quality;
  h.address = address;
  h.region_id = region;
  reprice_house(h, s.region(region).index);
  s.family(h.owner).owned_houses.insert(h.id);
  return s.houses.emplace(h.id, h).first->second;
}

inline void occupy(SimulationState& s, std::uint64_t house, std::uint64_t family) {
  Household& h = s.house(HouseId{house});
  Family& f = s.family(FamilyId{family});
  h.occupant = f.id;
  f.household_id = h.id;
  f.address = h.address;
  f.region_id = h.region_id;
  for (CitizenId m : f.members) {
    s.citizen(m).address = h.address;
    s.citizen(m).region_id = h.region_id;
  }
}

inline void employ(SimulationState& s, std::uint64_t firm, std::uint64_t citizen) {
  Firm& f = s.firm(FirmId{firm});
  Citizen& c = s.citizen(CitizenId{citizen});
  f.employees.insert(c.id);
  c.firm_id = f.id;
  c.distance = distance(c.address, f.address);
}

// Synthetic world at the default 1% scale (about 200 citizens).
inline World toy_world(std::uint64_t seed = 1) {
  Params p;
  p.seed = seed;
  return make_world(synthetic_world(), p);
}

inline Params short_params(int months, std::uint64_t seed = 1) {
  Params p;
  p.total_days = months * kDaysPerMonth;
  p.seed = seed;
  return p;
}

// Gini by the O(n^2) pairwise definition.
inline double gini_oracle(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  if (mean == 0.0) return 0.0;
  double sum = 0.0;
  for (double a : x) {
    for (double b : x) sum += std::fabs(a - b);
  }
  return sum / (2.0 * static_cast<double>(n) * static_cast<double>(n) * mean);
}

inline std::vector<std::string> read_lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::size_t field_count(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

inline std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("seal_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::filesystem::path find_output(const std::filesystem::path& dir, const std::string& kind,
                                         const std::string& ext = ".txt") {
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name.rfind("temp_" + kind + "_", 0) == 0 && e.path().extension() == ext) return e.path();
  }
  return {};
}

}  // namespace seal::test
