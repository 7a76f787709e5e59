#include "seal/snapshot.hpp"

#include <fstream>
#include <sstream>

#include <fmt/core.h>

#include "json.hpp"
#include "seal/digest.hpp"
#include "seal/errors.hpp"

namespace seal {

using nlohmann::json;

template <class Tag>
void to_json(json& j, const Id<Tag>& id) {
  j = id.value;
}
template <class Tag>
void from_json(const json& j, Id<Tag>& id) {
  id.value = j.get<std::uint64_t>();
}

void to_json(json& j, const Point& p) { j = json::array({p.x, p.y}); }
void from_json(const json& j, Point& p) {
  p.x = j.at(0).get<double>();
  p.y = j.at(1).get<double>();
}

void to_json(json& j, const Polygon& p) { j = p.rings; }
void from_json(const json& j, Polygon& p) { j.get_to(p.rings); }
void to_json(json& j, const MultiPolygon& p) { j = p.parts; }
void from_json(const json& j, MultiPolygon& p) { j.get_to(p.parts); }

void to_json(json& j, const Envelope& e) { j = json::array({e.min_x, e.min_y, e.max_x, e.max_y}); }
void from_json(const json& j, Envelope& e) {
  e.min_x = j.at(0).get<double>();
  e.min_y = j.at(1).get<double>();
  e.max_x = j.at(2).get<double>();
  e.max_y = j.at(3).get<double>();
}

void to_json(json& j, const RegionBoundary& b) {
  j = json{{"region_id", b.region_id}, {"name", b.name}, {"outer", b.outer}, {"urban_zones", b.urban_zones},
           {"envelope", b.envelope}};
}
void from_json(const json& j, RegionBoundary& b) {
  j.at("region_id").get_to(b.region_id);
  j.at("name").get_to(b.name);
  j.at("outer").get_to(b.outer);
  j.at("urban_zones").get_to(b.urban_zones);
  j.at("envelope").get_to(b.envelope);
}

namespace {

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
void get_opt(const json& j, const char* key, std::optional<T>& out) {
  const json& v = j.at(key);
  if (v.is_null()) {
    out.reset();
  } else {
    out = v.get<T>();
  }
}

json citizen_json(const Citizen& c) {
  return json{{"id", c.id},
              {"gender", c.gender == Gender::male ? "M" : "F"},
              {"month_of_birth", c.month_of_birth},
              {"age", c.age},
              {"qualification", c.qualification},
              {"money", c.money},
              {"savings", c.savings},
              {"firm_id", opt(c.firm_id)},
              {"utility", c.utility},
              {"address", c.address},
              {"distance", opt(c.distance)},
              {"region_id", c.region_id},
              {"family_id", c.family_id}};
}

Citizen citizen_from(const json& j) {
  Citizen c;
  j.at("id").get_to(c.id);
  c.gender = j.at("gender").get<std::string>() == "M" ? Gender::male : Gender::female;
  j.at("month_of_birth").get_to(c.month_of_birth);
  j.at("age").get_to(c.age);
  j.at("qualification").get_to(c.qualification);
  j.at("money").get_to(c.money);
  j.at("savings").get_to(c.savings);
  get_opt(j, "firm_id", c.firm_id);
  j.at("utility").get_to(c.utility);
  j.at("address").get_to(c.address);
  get_opt(j, "distance", c.distance);
  j.at("region_id").get_to(c.region_id);
  j.at("family_id").get_to(c.family_id);
  return c;
}

json family_json(const Family& f) {
  return json{{"id", f.id},
              {"members", f.members},
              {"balance", f.balance},
              {"savings", f.savings},
              {"household_id", opt(f.household_id)},
              {"owned_houses", f.owned_houses},
              {"address", f.address},
              {"region_id", f.region_id}};
}

Family family_from(const json& j) {
  Family f;
  j.at("id").get_to(f.id);
  j.at("members").get_to(f.members);
  j.at("balance").get_to(f.balance);
  j.at("savings").get_to(f.savings);
  get_opt(j, "household_id", f.household_id);
  j.at("owned_houses").get_to(f.owned_houses);
  j.at("address").get_to(f.address);
  j.at("region_id").get_to(f.region_id);
  return f;
}

json house_json(const Household& h) {
  return json{{"id", h.id},
              {"address", h.address},
              {"size", h.size},
              {"quality", h.quality},
              {"region_id", h.region_id},
              {"price", h.price},
              {"occupant", opt(h.occupant)},
              {"owner", h.owner}};
}

Household house_from(const json& j) {
  Household h;
  j.at("id").get_to(h.id);
  j.at("address").get_to(h.address);
  j.at("size").get_to(h.size);
  j.at("quality").get_to(h.quality);
  j.at("region_id").get_to(h.region_id);
  j.at("price").get_to(h.price);
  get_opt(j, "occupant", h.occupant);
  j.at("owner").get_to(h.owner);
  return h;
}

json firm_json(const Firm& f) {
  json product = nullptr;
  if (f.product) product = json{{"id", f.product->product_id}, {"price", f.product->price}, {"quantity", f.product->quantity}};
  return json{{"id", f.id},
              {"address", f.address},
              {"region_id", f.region_id},
              {"total_balance", f.total_balance},
              {"last_qtr_balance", f.last_qtr_balance},
              {"profit", f.profit},
              {"employees", f.employees},
              {"product", product},
              {"product_index", f.product_index},
              {"amount_sold", f.amount_sold},
              {"amount_produced", f.amount_produced}};
}

Firm firm_from(const json& j) {
  Firm f;
  j.at("id").get_to(f.id);
  j.at("address").get_to(f.address);
  j.at("region_id").get_to(f.region_id);
  j.at("total_balance").get_to(f.total_balance);
  j.at("last_qtr_balance").get_to(f.last_qtr_balance);
  j.at("profit").get_to(f.profit);
  j.at("employees").get_to(f.employees);
  if (const json& p = j.at("product"); !p.is_null()) {
    f.product = Product{p.at("id").get<int>(), p.at("price").get<double>(), p.at("quantity").get<double>()};
  }
  j.at("product_index").get_to(f.product_index);
  j.at("amount_sold").get_to(f.amount_sold);
  j.at("amount_produced").get_to(f.amount_produced);
  return f;
}

json region_json(const Region& r) {
  return json{{"id", r.id},
              {"name", r.name},
              {"boundary", r.boundary},
              {"index", r.index},
              {"treasure", r.treasure},
              {"pop", r.pop},
              {"total_commute", r.total_commute},
              {"region_gdp", r.region_gdp},
              {"fiscal_cluster", r.fiscal_cluster},
              {"acp_id", opt(r.acp_id)},
              {"urban_share", r.urban_share}};
}

Region region_from(const json& j) {
  Region r;
  j.at("id").get_to(r.id);
  j.at("name").get_to(r.name);
  j.at("boundary").get_to(r.boundary);
  j.at("index").get_to(r.index);
  j.at("treasure").get_to(r.treasure);
  j.at("pop").get_to(r.pop);
  j.at("total_commute").get_to(r.total_commute);
  j.at("region_gdp").get_to(r.region_gdp);
  j.at("fiscal_cluster").get_to(r.fiscal_cluster);
  get_opt(j, "acp_id", r.acp_id);
  j.at("urban_share").get_to(r.urban_share);
  return r;
}

json cluster_json(const FiscalCluster& c) {
  return json{{"id", c.id}, {"members", c.members}, {"index", c.index}, {"treasure", c.treasure}, {"pop_prev", c.pop_prev}};
}

FiscalCluster cluster_from(const json& j) {
  FiscalCluster c;
  j.at("id").get_to(c.id);
  j.at("members").get_to(c.members);
  j.at("index").get_to(c.index);
  j.at("treasure").get_to(c.treasure);
  j.at("pop_prev").get_to(c.pop_prev);
  return c;
}

void put_record(std::string& out, const std::string& kind, const json& body) {
  const std::string payload = json{{"kind", kind}, {"data", body}}.dump();
  out += fmt::format("{}\n{}\n", payload.size(), payload);
}

}  // namespace

namespace {

std::string encode(const SimulationState& state, const World* world) {
  std::string out = fmt::format("SEAL-SNAP {} {}\n", kSnapshotVersion,
                                state.genesis_digest.empty() ? "-" : state.genesis_digest);
  put_record(out, "meta",
             json{{"day", state.clock.day},
                  {"next_citizen_id", state.next_citizen_id},
                  {"genesis_seed", state.genesis_seed},
                  {"bootstrapped", state.bootstrapped}});
  if (world) {
    put_record(out, "data", json{{"digest", world->data_digest}});
    for (const auto& [year, by_gender] : world->vitals.mortality_table()) {
      put_record(out, "mortality", json{{"year", year}, {"male", by_gender[0]}, {"female", by_gender[1]}});
    }
    for (const auto& [year, probs] : world->vitals.fertility_table()) {
      put_record(out, "fertility", json{{"year", year}, {"probs", probs}});
    }
    for (const auto& [region, pairs] : world->qualification.by_region) {
      put_record(out, "qualification", json{{"region_id", region}, {"pairs", pairs}});
    }
  }
  for (const auto& [id, r] : state.regions) put_record(out, "region", region_json(r));
  for (const auto& [id, c] : state.clusters) put_record(out, "cluster", cluster_json(c));
  for (const auto& [id, f] : state.firms) put_record(out, "firm", firm_json(f));
  for (const auto& [id, h] : state.houses) put_record(out, "house", house_json(h));
  for (const auto& [id, f] : state.families) put_record(out, "family", family_json(f));
  for (const auto& [id, c] : state.citizens) put_record(out, "citizen", citizen_json(c));
  for (const Citizen& c : state.graveyard) put_record(out, "dead", citizen_json(c));
  put_record(out, "end", json::object());
  return out;
}

World decode(const std::string& text) {
  std::size_t pos = text.find('\n');
  if (pos == std::string::npos) throw SnapshotError("snapshot truncated: missing header");
  std::istringstream header(text.substr(0, pos));
  std::string magic;
  int version = 0;
  std::string digest;
  header >> magic >> version >> digest;
  if (magic != "SEAL-SNAP") throw SnapshotError("not a snapshot file");
  if (version != kSnapshotVersion) {
    throw SnapshotError(fmt::format("snapshot version {} is not supported (expected {})", version, kSnapshotVersion));
  }
  World world;
  SimulationState& state = world.state;
  state.genesis_digest = digest == "-" ? "" : digest;
  ++pos;
  bool ended = false;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) throw SnapshotError("snapshot truncated inside a record length");
    std::size_t len = 0;
    try {
      len = std::stoull(text.substr(pos, nl - pos));
    } catch (const std::exception&) {
      throw SnapshotError(fmt::format("malformed record length at byte {}", pos));
    }
    pos = nl + 1;
    if (pos + len + 1 > text.size() || text[pos + len] != '\n') throw SnapshotError("snapshot truncated inside a record");
    json rec;
    try {
      rec = json::parse(text.substr(pos, len));
    } catch (const json::exception& e) {
      throw SnapshotError(fmt::format("malformed record: {}", e.what()));
    }
    pos += len + 1;
    try {
      const std::string kind = rec.at("kind").get<std::string>();
      const json& d = rec.at("data");
      if (kind == "meta") {
        d.at("day").get_to(state.clock.day);
        d.at("next_citizen_id").get_to(state.next_citizen_id);
        d.at("genesis_seed").get_to(state.genesis_seed);
        d.at("bootstrapped").get_to(state.bootstrapped);
      } else if (kind == "data") {
        d.at("digest").get_to(world.data_digest);
      } else if (kind == "mortality") {
        const int year = d.at("year").get<int>();
        const auto male = d.at("male").get<std::vector<double>>();
        const auto female = d.at("female").get<std::vector<double>>();
        for (std::size_t a = 0; a < male.size(); ++a) world.vitals.set_mortality(year, Gender::male, static_cast<int>(a), male[a]);
        for (std::size_t a = 0; a < female.size(); ++a) {
          world.vitals.set_mortality(year, Gender::female, static_cast<int>(a), female[a]);
        }
      } else if (kind == "fertility") {
        const int year = d.at("year").get<int>();
        const auto probs = d.at("probs").get<std::vector<double>>();
        for (std::size_t a = 0; a < probs.size(); ++a) world.vitals.set_fertility(year, static_cast<int>(a), probs[a]);
      } else if (kind == "qualification") {
        d.at("pairs").get_to(world.qualification.by_region[d.at("region_id").get<std::string>()]);
      } else if (kind == "region") {
        Region r = region_from(d);
        state.regions.emplace(r.id, std::move(r));
      } else if (kind == "cluster") {
        FiscalCluster c = cluster_from(d);
        state.clusters.emplace(c.id, std::move(c));
      } else if (kind == "firm") {
        Firm f = firm_from(d);
        state.firms.emplace(f.id, std::move(f));
      } else if (kind == "house") {
        Household h = house_from(d);
        state.houses.emplace(h.id, std::move(h));
      } else if (kind == "family") {
        Family f = family_from(d);
        state.families.emplace(f.id, std::move(f));
      } else if (kind == "citizen") {
        Citizen c = citizen_from(d);
        state.citizens.emplace(c.id, std::move(c));
      } else if (kind == "dead") {
        state.graveyard.push_back(citizen_from(d));
      } else if (kind == "end") {
        ended = true;
        break;
      } else {
        throw SnapshotError(fmt::format("unknown record kind '{}'", kind));
      }
    } catch (const json::exception& e) {
      throw SnapshotError(fmt::format("malformed record: {}", e.what()));
    }
  }
  if (!ended) throw SnapshotError("snapshot truncated: no END record");
  return world;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError(fmt::format("cannot read snapshot {}", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::string snapshot_to_string(const SimulationState& state) { return encode(state, nullptr); }
std::string snapshot_to_string(const World& world) { return encode(world.state, &world); }
SimulationState snapshot_from_string(const std::string& text) { return decode(text).state; }
World world_from_string(const std::string& text) { return decode(text); }

void save_snapshot(const World& world, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SnapshotError(fmt::format("cannot write snapshot {}", path.string()));
  out << snapshot_to_string(world);
  if (!out) throw SnapshotError(fmt::format("write failed for snapshot {}", path.string()));
}

World load_snapshot(const std::filesystem::path& path) { return decode(read_file(path)); }

std::string state_digest(const SimulationState& state) { return fnv1a_hex(snapshot_to_string(state)); }

}  // namespace seal
