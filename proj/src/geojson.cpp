#include <fstream>
#include <sstream>

#include <fmt/core.h>

#include "json.hpp"
#include "seal/data.hpp"
#include "seal/errors.hpp"

namespace seal {

namespace {

using nlohmann::json;

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(fmt::format("{}: invalid JSON: {}", source, e.what()));
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot read '{}'", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Ring parse_ring(const json& coords) {
  Ring ring;
  for (const json& pt : coords) {
    if (!pt.is_array() || pt.size() < 2) throw InputError("GeoJSON position needs two coordinates");
    ring.push_back({pt[0].get<double>(), pt[1].get<double>()});
  }
  if (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
  return ring;
}

Polygon parse_polygon(const json& coords) {
  Polygon poly;
  for (const json& ring : coords) poly.rings.push_back(parse_ring(ring));
  if (poly.rings.empty() || poly.rings.front().size() < 3) {
    throw InputError("degenerate polygon: outer ring needs at least 3 vertices");
  }
  return poly;
}

MultiPolygon parse_geometry(const json& geometry) {
  if (!geometry.is_object()) throw InputError("feature without geometry");
  const std::string type = geometry.value("type", "");
  const json& coords = geometry.at("coordinates");
  MultiPolygon mp;
  if (type == "Polygon") {
    mp.parts.push_back(parse_polygon(coords));
  } else if (type == "MultiPolygon") {
    for (const json& poly : coords) mp.parts.push_back(parse_polygon(poly));
  } else {
    throw InputError(fmt::format("unsupported geometry type '{}'", type));
  }
  return mp;
}

std::string property_text(const json& props, const char* key) {
  const json& v = props.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw InputError(fmt::format("property '{}' must be a string", key));
}

const json& features_of(const json& doc) {
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" || !doc.contains("features")) {
    throw InputError("expected a GeoJSON FeatureCollection");
  }
  return doc["features"];
}

}  // namespace

std::vector<BoundaryRecord> parse_boundaries_geojson(const std::string& text) {
  const json doc = parse_json(text, "boundaries");
  std::vector<BoundaryRecord> out;
  try {
    for (const json& f : features_of(doc)) {
      const json& props = f.at("properties");
      BoundaryRecord rec;
      const std::string id = property_text(props, "region_id");
      const std::string name = props.contains("name") ? props["name"].get<std::string>() : id;
      rec.boundary = make_boundary(id, name, parse_geometry(f.at("geometry")));
      if (props.contains("hdi2000") && !props["hdi2000"].is_null()) {
        rec.hdi2000 = props["hdi2000"].get<double>();
      }
      if (props.contains("acp_id") && !props["acp_id"].is_null()) rec.acp_id = property_text(props, "acp_id");
      out.push_back(std::move(rec));
    }
  } catch (const json::exception& e) {
    throw InputError(fmt::format("malformed boundary feature: {}", e.what()));
  }
  return out;
}

std::map<RegionId, std::vector<MultiPolygon>> parse_urban_zones_geojson(const std::string& text) {
  const json doc = parse_json(text, "urban zones");
  std::map<RegionId, std::vector<MultiPolygon>> out;
  try {
    for (const json& f : features_of(doc)) {
      out[property_text(f.at("properties"), "region_id")].push_back(parse_geometry(f.at("geometry")));
    }
  } catch (const json::exception& e) {
    throw InputError(fmt::format("malformed urban-zone feature: {}", e.what()));
  }
  return out;
}

std::vector<BoundaryRecord> load_boundaries_geojson(const std::filesystem::path& path) {
  return parse_boundaries_geojson(read_text(path));
}

std::map<RegionId, std::vector<MultiPolygon>> load_urban_zones_geojson(const std::filesystem::path& path) {
  return parse_urban_zones_geojson(read_text(path));
}

}  // namespace seal
