#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/core.h>

#include "seal/data.hpp"
#include "seal/digest.hpp"
#include "seal/errors.hpp"

namespace seal {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot read '{}'", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_record(const std::string& line, const std::string& source, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted) throw InputError(fmt::format("{}:{}: unterminated quote", source, line_no));
  fields.push_back(std::move(field));
  for (std::string& f : fields) {
    const auto a = f.find_first_not_of(" \t");
    const auto b = f.find_last_not_of(" \t");
    f = a == std::string::npos ? std::string{} : f.substr(a, b - a + 1);
  }
  return fields;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError(fmt::format("{}: '{}' is not a number", what, s));
  }
}

int to_int(const std::string& s, const std::string& what) {
  const double v = to_double(s, what);
  if (v != std::floor(v)) throw InputError(fmt::format("{}: '{}' is not an integer", what, s));
  return static_cast<int>(v);
}

Gender to_gender(const std::string& s, const std::string& what) {
  if (s == "M" || s == "m" || s == "male" || s == "Male") return Gender::male;
  if (s == "F" || s == "f" || s == "female" || s == "Female") return Gender::female;
  throw InputError(fmt::format("{}: unknown gender '{}'", what, s));
}

std::map<RegionId, double> load_region_values(const std::filesystem::path& path, const char* value_column) {
  const CsvTable t = read_csv(path);
  const std::size_t rc = t.column("region_id");
  const std::size_t vc = t.column(value_column);
  std::map<RegionId, double> out;
  for (const auto& row : t.rows) {
    out[row.at(rc)] = to_double(row.at(vc), fmt::format("{} {}", path.filename().string(), value_column));
  }
  return out;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw InputError(fmt::format("missing column '{}'", name));
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable parse_csv(const std::string& text, const std::string& source) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fields = split_record(line, source, line_no);
    if (table.header.empty()) {
      table.header = std::move(fields);
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw InputError(fmt::format("{}:{}: expected {} fields, found {}", source, line_no, table.header.size(),
                                   fields.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (table.header.empty()) throw InputError(fmt::format("{}: empty CSV", source));
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) { return parse_csv(read_file(path), path.string()); }

PopulationTable load_population_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  const std::size_t rc = t.column("region_id"), lo = t.column("age_low"), hi = t.column("age_high"),
                    gc = t.column("gender"), cc = t.column("count");
  PopulationTable out;
  for (const auto& row : t.rows) {
    PopulationRow r;
    r.region_id = row[rc];
    r.age_low = to_int(row[lo], "population age_low");
    r.age_high = to_int(row[hi], "population age_high");
    const std::string& g = row[gc];
    if (g == "B" || g == "b" || g == "both") {
      r.gender = 'B';
    } else {
      r.gender = to_gender(g, "population gender") == Gender::male ? 'M' : 'F';
    }
    r.count = to_double(row[cc], "population count");
    if (r.count < 0.0) throw InputError("population counts must be >= 0");
    if (r.age_high < r.age_low) throw InputError("population bracket with age_high < age_low");
    out.push_back(std::move(r));
  }
  return out;
}

void load_mortality_csv(const std::filesystem::path& path, VitalTables& tables) {
  const CsvTable t = read_csv(path);
  const std::size_t yc = t.column("year"), gc = t.column("gender"), ac = t.column("age"), pc = t.column("prob");
  for (const auto& row : t.rows) {
    tables.set_mortality(to_int(row[yc], "mortality year"), to_gender(row[gc], "mortality gender"),
                         to_int(row[ac], "mortality age"), to_double(row[pc], "mortality prob"));
  }
}

void load_fertility_csv(const std::filesystem::path& path, VitalTables& tables) {
  const CsvTable t = read_csv(path);
  const std::size_t yc = t.column("year"), ac = t.column("age"), pc = t.column("prob");
  for (const auto& row : t.rows) {
    tables.set_fertility(to_int(row[yc], "fertility year"), to_int(row[ac], "fertility age"),
                         to_double(row[pc], "fertility prob"));
  }
}

std::map<RegionId, double> load_hdi_csv(const std::filesystem::path& path) { return load_region_values(path, "hdi2000"); }
std::map<RegionId, double> load_firms_csv(const std::filesystem::path& path) { return load_region_values(path, "count"); }
std::map<RegionId, double> load_urban_csv(const std::filesystem::path& path) {
  return load_region_values(path, "urban_share");
}

QualificationTable load_qualification_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  const std::size_t rc = t.column("region_id"), qc = t.column("qualification"), wc = t.column("weight");
  QualificationTable out;
  for (const auto& row : t.rows) {
    const double q = to_double(row[qc], "qualification value");
    const double w = to_double(row[wc], "qualification weight");
    if (!(q > 0.0) || w < 0.0) throw InputError("qualification values must be > 0 with weights >= 0");
    out.by_region[row[rc]].emplace_back(q, w);
  }
  return out;
}

void VitalTables::set_mortality(int year, Gender gender, int age, double prob) {
  if (age < 0) throw InputError("negative age in mortality table");
  auto& v = mortality_[year][gender == Gender::male ? 0 : 1];
  if (v.size() <= static_cast<std::size_t>(age)) v.resize(static_cast<std::size_t>(age) + 1, 0.0);
  v[static_cast<std::size_t>(age)] = prob;
}

void VitalTables::set_fertility(int year, int age, double prob) {
  if (age < 0) throw InputError("negative age in fertility table");
  auto& v = fertility_[year];
  if (v.size() <= static_cast<std::size_t>(age)) v.resize(static_cast<std::size_t>(age) + 1, 0.0);
  v[static_cast<std::size_t>(age)] = prob;
}

namespace {

template <class Map>
const typename Map::mapped_type* clamp_year(const Map& m, int year) {
  if (m.empty()) return nullptr;
  auto it = m.upper_bound(year);
  if (it == m.begin()) return &it->second;
  return &std::prev(it)->second;
}

}  // namespace

double VitalTables::mortality(int year, Gender gender, int age) const {
  const auto* by_gender = clamp_year(mortality_, year);
  if (!by_gender) return 0.0;
  const auto& v = (*by_gender)[gender == Gender::male ? 0 : 1];
  if (v.empty() || age < 0) return 0.0;
  return v[std::min(static_cast<std::size_t>(age), v.size() - 1)];
}

bool VitalTables::probabilities_valid() const {
  const auto ok = [](double p) { return p >= 0.0 && p <= 1.0; };
  for (const auto& [year, by_gender] : mortality_) {
    for (const auto& v : by_gender) {
      if (!std::all_of(v.begin(), v.end(), ok)) return false;
    }
  }
  for (const auto& [year, v] : fertility_) {
    if (!std::all_of(v.begin(), v.end(), ok)) return false;
  }
  return true;
}

double VitalTables::fertility(int year, int age) const {
  const auto* v = clamp_year(fertility_, year);
  if (!v || age < 0 || static_cast<std::size_t>(age) >= v->size()) return 0.0;
  return (*v)[static_cast<std::size_t>(age)];
}

WorldData load_world_data(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw InputError(fmt::format("data directory '{}' not found", dir.string()));
  WorldData data;
  Fnv1a digest;
  auto digest_file = [&](const fs::path& p) {
    digest.update(p.filename().string());
    digest.update(read_file(p));
  };

  const fs::path boundaries = dir / "boundaries.geojson";
  digest_file(boundaries);
  for (BoundaryRecord& rec : load_boundaries_geojson(boundaries)) {
    const RegionId id = rec.boundary.region_id;
    if (rec.hdi2000) data.hdi[id] = *rec.hdi2000;
    if (rec.acp_id) data.acp[id] = *rec.acp_id;
    data.boundaries.push_back(std::move(rec.boundary));
  }
  if (const fs::path zones = dir / "urban_zones.geojson"; fs::exists(zones)) {
    digest_file(zones);
    auto by_region = load_urban_zones_geojson(zones);
    for (RegionBoundary& b : data.boundaries) {
      if (auto it = by_region.find(b.region_id); it != by_region.end()) b.urban_zones = std::move(it->second);
    }
  }
  if (const fs::path hdi = dir / "hdi.csv"; fs::exists(hdi)) {
    digest_file(hdi);
    for (const auto& [id, v] : load_hdi_csv(hdi)) data.hdi[id] = v;
  }
  digest_file(dir / "population.csv");
  data.population = load_population_csv(dir / "population.csv");
  digest_file(dir / "firms.csv");
  data.firm_counts = load_firms_csv(dir / "firms.csv");
  digest_file(dir / "mortality.csv");
  load_mortality_csv(dir / "mortality.csv", data.vitals);
  digest_file(dir / "fertility.csv");
  load_fertility_csv(dir / "fertility.csv", data.vitals);
  if (const fs::path urban = dir / "urban.csv"; fs::exists(urban)) {
    digest_file(urban);
    data.urban_share = load_urban_csv(urban);
  }
  if (const fs::path qual = dir / "qualification.csv"; fs::exists(qual)) {
    digest_file(qual);
    data.qualification = load_qualification_csv(qual);
  }
  data.digest = digest.hex();
  return data;
}

std::vector<std::string> validate_world_data(const WorldData& data) {
  std::vector<std::string> problems;
  std::map<RegionId, bool> known;
  for (const RegionBoundary& b : data.boundaries) {
    known[b.region_id] = true;
    const auto hdi = data.hdi.find(b.region_id);
    if (hdi == data.hdi.end()) {
      problems.push_back(fmt::format("no HDI for {}", b.region_id));
    } else if (!(hdi->second > 0.0 && hdi->second <= 1.0)) {
      problems.push_back(fmt::format("HDI for {} outside (0, 1]", b.region_id));
    }
    if (b.outer.parts.empty() || !(area(b.outer) > 0.0)) {
      problems.push_back(fmt::format("region {} has a zero-area boundary", b.region_id));
    }
  }
  for (const PopulationRow& r : data.population) {
    if (!known.contains(r.region_id)) problems.push_back(fmt::format("population row for unknown region {}", r.region_id));
  }
  for (const auto& [id, n] : data.firm_counts) {
    if (!known.contains(id)) problems.push_back(fmt::format("firm count for unknown region {}", id));
    if (n < 0.0) problems.push_back(fmt::format("negative firm count for {}", id));
  }
  for (const auto& [id, u] : data.urban_share) {
    if (!(u >= 0.0 && u <= 1.0)) problems.push_back(fmt::format("urban share for {} outside [0, 1]", id));
  }
  if (!data.vitals.probabilities_valid()) problems.push_back("vital table probability outside [0, 1]");
  if (data.vitals.empty()) problems.push_back("mortality table is empty");
  return problems;
}

WorldData synthetic_world() {
  WorldData data;
  const MultiPolygon a{{rectangle(0.0, 0.0, 10.0, 10.0)}};
  const MultiPolygon b{{rectangle(10.0, 0.0, 20.0, 10.0)}};
  data.boundaries.push_back(make_boundary("A", "Alpha", a, {MultiPolygon{{rectangle(3.0, 3.0, 7.0, 7.0)}}}));
  data.boundaries.push_back(make_boundary("B", "Beta", b, {MultiPolygon{{rectangle(12.0, 2.0, 15.0, 5.0)}}}));
  data.hdi = {{"A", 0.72}, {"B", 0.65}};
  data.acp = {{"A", "ACP1"}, {"B", "ACP1"}};
  data.urban_share = {{"A", 0.85}, {"B", 0.6}};

  struct Bracket {
    int lo, hi;
    double share;
  };
  const Bracket pyramid[] = {{0, 6, 0.10},   {7, 12, 0.09},  {13, 17, 0.08}, {18, 25, 0.14},
                             {26, 35, 0.16}, {36, 45, 0.15}, {46, 65, 0.20}, {66, 100, 0.08}};
  for (const auto& [region, total] : {std::pair<RegionId, double>{"A", 12000.0}, {"B", 8000.0}}) {
    for (const Bracket& br : pyramid) {
      for (char g : {'M', 'F'}) data.population.push_back({region, br.lo, br.hi, g, total * br.share / 2.0});
    }
  }
  data.firm_counts = {{"A", 600.0}, {"B", 400.0}};

  for (int year = 2000; year <= 2030; ++year) {
    for (int age = 0; age <= 100; ++age) {
      const double base = 0.0008 + 0.00005 * std::exp(0.095 * age);
      data.vitals.set_mortality(year, Gender::male, age, std::min(base, 0.6));
      data.vitals.set_mortality(year, Gender::female, age, std::min(0.8 * base, 0.6));
    }
    for (int age = 15; age <= 49; ++age) {
      double f = 0.003;
      if (age <= 19) f = 0.02;
      else if (age <= 24) f = 0.08;
      else if (age <= 29) f = 0.09;
      else if (age <= 34) f = 0.07;
      else if (age <= 39) f = 0.04;
      else if (age <= 44) f = 0.015;
      data.vitals.set_fertility(year, age, f);
    }
  }
  data.digest = fnv1a_hex("synthetic-world-v1");
  return data;
}

namespace {

std::string geojson_coords(const MultiPolygon& mp) {
  std::string s = "[";
  for (std::size_t i = 0; i < mp.parts.size(); ++i) {
    if (i) s += ",";
    s += "[";
    const auto& rings = mp.parts[i].rings;
    for (std::size_t r = 0; r < rings.size(); ++r) {
      if (r) s += ",";
      s += "[";
      for (std::size_t k = 0; k <= rings[r].size(); ++k) {
        const Point p = rings[r][k % rings[r].size()];
        if (k) s += ",";
        s += fmt::format("[{},{}]", p.x, p.y);
      }
      s += "]";
    }
    s += "]";
  }
  return s + "]";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(fmt::format("cannot write '{}'", path.string()));
  out << text;
}

}  // namespace

void write_world_data(const WorldData& data, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::string features;
  std::string zones;
  for (const RegionBoundary& b : data.boundaries) {
    std::string props = fmt::format("\"region_id\":\"{}\",\"name\":\"{}\"", b.region_id, b.name);
    if (auto it = data.hdi.find(b.region_id); it != data.hdi.end()) props += fmt::format(",\"hdi2000\":{}", it->second);
    if (auto it = data.acp.find(b.region_id); it != data.acp.end()) props += fmt::format(",\"acp_id\":\"{}\"", it->second);
    if (!features.empty()) features += ",\n";
    features += fmt::format("{{\"type\":\"Feature\",\"properties\":{{{}}},\"geometry\":{{\"type\":\"MultiPolygon\","
                            "\"coordinates\":{}}}}}",
                            props, geojson_coords(b.outer));
    for (const MultiPolygon& z : b.urban_zones) {
      if (!zones.empty()) zones += ",\n";
      zones += fmt::format("{{\"type\":\"Feature\",\"properties\":{{\"region_id\":\"{}\"}},\"geometry\":{{\"type\":"
                           "\"MultiPolygon\",\"coordinates\":{}}}}}",
                           b.region_id, geojson_coords(z));
    }
  }
  write_text(dir / "boundaries.geojson", "{\"type\":\"FeatureCollection\",\"features\":[\n" + features + "\n]}\n");
  write_text(dir / "urban_zones.geojson", "{\"type\":\"FeatureCollection\",\"features\":[\n" + zones + "\n]}\n");

  std::string hdi = "region_id,hdi2000\n";
  for (const auto& [id, v] : data.hdi) hdi += fmt::format("{},{}\n", id, v);
  write_text(dir / "hdi.csv", hdi);

  std::string pop = "region_id,age_low,age_high,gender,count\n";
  for (const PopulationRow& r : data.population) {
    pop += fmt::format("{},{},{},{},{}\n", r.region_id, r.age_low, r.age_high, r.gender, r.count);
  }
  write_text(dir / "population.csv", pop);

  std::string firms = "region_id,count\n";
  for (const auto& [id, n] : data.firm_counts) firms += fmt::format("{},{}\n", id, n);
  write_text(dir / "firms.csv", firms);

  std::string urban = "region_id,urban_share\n";
  for (const auto& [id, u] : data.urban_share) urban += fmt::format("{},{}\n", id, u);
  write_text(dir / "urban.csv", urban);

  std::string mort = "year,gender,age,prob\n";
  std::string fert = "year,age,prob\n";
  for (int year = 2000; year <= 2030; ++year) {
    for (int age = 0; age <= 100; ++age) {
      mort += fmt::format("{},M,{},{}\n", year, age, data.vitals.mortality(year, Gender::male, age));
      mort += fmt::format("{},F,{},{}\n", year, age, data.vitals.mortality(year, Gender::female, age));
    }
    for (int age = 15; age <= 49; ++age) fert += fmt::format("{},{},{}\n", year, age, data.vitals.fertility(year, age));
  }
  write_text(dir / "mortality.csv", mort);
  write_text(dir / "fertility.csv", fert);

  if (!data.qualification.by_region.empty()) {
    std::string q = "region_id,qualification,weight\n";
    for (const auto& [id, rows] : data.qualification.by_region) {
      for (const auto& [v, w] : rows) q += fmt::format("{},{},{}\n", id, v, w);
    }
    write_text(dir / "qualification.csv", q);
  }
}

}  // namespace seal
