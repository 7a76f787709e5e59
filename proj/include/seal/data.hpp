#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "seal/domain.hpp"
#include "seal/geo.hpp"

namespace seal {

// One row of population.csv. Gender 'M', 'F', or 'B' for a mixed bracket whose
// citizens are generated alternating male/female.
struct PopulationRow {
  RegionId region_id;
  int age_low = 0;
  int age_high = 0;
  char gender = 'B';
  double count = 0.0;

  bool operator==(const PopulationRow&) const = default;
};

using PopulationTable = std::vector<PopulationRow>;

// Annual probabilities. Years outside the table clamp to the nearest year present;
// ages beyond the last row clamp to the last row.
class VitalTables {
 public:
  void set_mortality(int year, Gender gender, int age, double prob);
  void set_fertility(int year, int age, double prob);

  double mortality(int year, Gender gender, int age) const;
  double fertility(int year, int age) const;

  bool empty() const { return mortality_.empty(); }
  bool probabilities_valid() const;

  using MortalityTable = std::map<int, std::array<std::vector<double>, 2>>;
  using FertilityTable = std::map<int, std::vector<double>>;
  const MortalityTable& mortality_table() const { return mortality_; }
  const FertilityTable& fertility_table() const { return fertility_; }

  bool operator==(const VitalTables&) const = default;

 private:
  // year -> [male, female] -> prob by age
  std::map<int, std::array<std::vector<double>, 2>> mortality_;
  std::map<int, std::vector<double>> fertility_;
};

// Optional per-municipality qualification distribution: (value, weight) pairs.
struct QualificationTable {
  std::map<RegionId, std::vector<std::pair<double, double>>> by_region;

  bool operator==(const QualificationTable&) const = default;

  const std::vector<std::pair<double, double>>* find(const RegionId& region) const {
    const auto it = by_region.find(region);
    return it == by_region.end() || it->second.empty() ? nullptr : &it->second;
  }
};

struct BoundaryRecord {
  RegionBoundary boundary;
  std::optional<double> hdi2000;
  std::optional<std::string> acp_id;
};

struct WorldData {
  std::vector<RegionBoundary> boundaries;
  std::map<RegionId, double> hdi;
  std::map<RegionId, std::string> acp;
  std::map<RegionId, double> urban_share;
  PopulationTable population;
  std::map<RegionId, double> firm_counts;
  VitalTables vitals;
  QualificationTable qualification;
  std::string digest;  // content digest of the inputs
};

// Minimal RFC-4180 style reader: header row, comma delimiter, optional double quotes.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // InputError if absent
};

CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(const std::string& text, const std::string& source = "<memory>");

PopulationTable load_population_csv(const std::filesystem::path& path);
void load_mortality_csv(const std::filesystem::path& path, VitalTables& tables);
void load_fertility_csv(const std::filesystem::path& path, VitalTables& tables);
std::map<RegionId, double> load_hdi_csv(const std::filesystem::path& path);
std::map<RegionId, double> load_firms_csv(const std::filesystem::path& path);
std::map<RegionId, double> load_urban_csv(const std::filesystem::path& path);
QualificationTable load_qualification_csv(const std::filesystem::path& path);

// FeatureCollection of Polygon/MultiPolygon features with region_id, name, hdi2000, acp_id.
std::vector<BoundaryRecord> load_boundaries_geojson(const std::filesystem::path& path);
std::vector<BoundaryRecord> parse_boundaries_geojson(const std::string& text);
// Urban-zone polygons keyed by the region_id property.
std::map<RegionId, std::vector<MultiPolygon>> load_urban_zones_geojson(const std::filesystem::path& path);
std::map<RegionId, std::vector<MultiPolygon>> parse_urban_zones_geojson(const std::string& text);

// Reads a data directory:
//   boundaries.geojson, population.csv, mortality.csv, fertility.csv, hdi.csv, firms.csv
//   and optionally urban_zones.geojson, urban.csv, qualification.csv.
// hdi.csv, when present, overrides hdi2000 properties.
WorldData load_world_data(const std::filesystem::path& dir);

// Problems found in a data set (missing HDI, unknown regions in tables, bad probabilities).
std::vector<std::string> validate_world_data(const WorldData& data);

// Two rectangular municipalities with square urban cores, one concentration area,
// smooth synthetic vital tables. About 200 citizens at 1% of population.
WorldData synthetic_world();

// Writes a world's tables in the load_world_data layout.
void write_world_data(const WorldData& data, const std::filesystem::path& dir);

}  // namespace seal
