#include "seal/output.hpp"

#include <fmt/core.h>

#include "json.hpp"
#include "seal/errors.hpp"

#ifndef SEAL_VERSION
#define SEAL_VERSION "dev"
#endif

namespace seal {

std::string output_file_stem(OutputFile f) {
  switch (f) {
    case OutputFile::agent: return "agent";
    case OutputFile::firm: return "firm";
    case OutputFile::general: return "general";
    case OutputFile::house: return "house";
    case OutputFile::regional: return "regional";
  }
  return "unknown";
}

std::string format_number(double v) { return fmt::format("{}", v); }

namespace {

std::string opt_id(const auto& id) { return id ? fmt::format("{}", id->value) : std::string("None"); }

const std::vector<std::string>& columns_of(OutputFile f) {
  switch (f) {
    case OutputFile::agent: return agent_columns();
    case OutputFile::firm: return firm_columns();
    case OutputFile::general: return general_columns();
    case OutputFile::house: return house_columns();
    case OutputFile::regional: return regional_columns();
  }
  return general_columns();
}

}  // namespace

std::vector<std::vector<std::string>> agent_rows(const SimulationState& state) {
  std::vector<std::vector<std::string>> rows;
  const std::string month = fmt::format("{}", state.clock.month_index());
  for (const auto& [id, c] : state.citizens) {
    rows.push_back({month, c.region_id, c.gender == Gender::male ? "Male" : "Female", format_number(c.address.x),
                    format_number(c.address.y), fmt::format("{}", id.value), fmt::format("{}", c.age),
                    format_number(c.qualification), opt_id(c.firm_id), fmt::format("{}", c.family_id.value),
                    format_number(c.utility), c.distance ? format_number(*c.distance) : "None"});
  }
  return rows;
}

std::vector<std::vector<std::string>> firm_rows(const SimulationState& state) {
  std::vector<std::vector<std::string>> rows;
  const std::string month = fmt::format("{}", state.clock.month_index());
  for (const auto& [id, f] : state.firms) {
    rows.push_back({month, fmt::format("{}", id.value), f.region_id, format_number(f.address.x),
                    format_number(f.address.y), format_number(f.total_balance), fmt::format("{}", f.employees.size()),
                    format_number(f.product ? f.product->quantity : 0.0), format_number(f.amount_produced),
                    f.product ? format_number(f.product->price) : "None"});
  }
  return rows;
}

std::vector<std::string> general_fields(const GeneralRow& r) {
  return {fmt::format("{}", r.month),     format_number(r.price_index),     format_number(r.gdp_index),
          format_number(r.unemployment),  format_number(r.average_workers), format_number(r.families_wealth),
          format_number(r.families_savings), format_number(r.firms_wealth), format_number(r.firms_profit),
          format_number(r.gini_index),    format_number(r.average_utility)};
}

std::vector<std::vector<std::string>> house_rows(const SimulationState& state) {
  std::vector<std::vector<std::string>> rows;
  const std::string month = fmt::format("{}", state.clock.month_index());
  for (const auto& [id, h] : state.houses) {
    std::string savings = "None";
    if (h.occupant) savings = format_number(family_total_savings(state, state.family(*h.occupant)));
    rows.push_back({month, fmt::format("{}", id.value), format_number(h.address.x), format_number(h.address.y),
                    format_number(h.size), format_number(h.price), opt_id(h.occupant), savings, h.region_id});
  }
  return rows;
}

std::vector<std::string> regional_fields(const RegionalRow& r) {
  return {fmt::format("{}", r.month),          r.region_id,
          format_number(r.commuting),          fmt::format("{}", r.pop),
          format_number(r.gdp_region),         format_number(r.regional_gini),
          format_number(r.regional_unemployment), format_number(r.qli_index),
          format_number(r.gdp_percapta),       format_number(r.treasure)};
}

bool saves_agents_at(const Params& p, int month_index) {
  if (!p.save_agents_data) return false;
  switch (p.periodicity) {
    case SavePeriodicity::monthly: return true;
    case SavePeriodicity::quarterly: return Clock::is_quarter_month(month_index);
    case SavePeriodicity::annually: return Clock::is_year_month(month_index);
  }
  return true;
}

OutputWriter::OutputWriter(std::filesystem::path dir, const Params& params, std::size_t total_pop)
    : dir_(std::move(dir)), params_(params), tuple_(file_name_tuple(params, total_pop)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec || !std::filesystem::is_directory(dir_)) {
    throw std::runtime_error(fmt::format("cannot create output directory {}: {}", dir_.string(), ec.message()));
  }
  // Truncate so that a rerun into the same directory does not append to stale output.
  for (OutputFile f : {OutputFile::agent, OutputFile::firm, OutputFile::general, OutputFile::house,
                       OutputFile::regional}) {
    stream(f, false);
    if (params_.create_csv_files) {
      std::ofstream& csv = stream(f, true);
      const auto& cols = columns_of(f);
      for (std::size_t i = 0; i < cols.size(); ++i) csv << (i ? "," : "") << cols[i];
      csv << '\n';
    }
  }
}

std::filesystem::path OutputWriter::path(OutputFile f, bool csv) const {
  return dir_ / fmt::format("temp_{}_{}.{}", output_file_stem(f), tuple_, csv ? "csv" : "txt");
}

std::ofstream& OutputWriter::stream(OutputFile f, bool csv) {
  const auto key = std::make_pair(static_cast<int>(f), csv);
  auto it = streams_.find(key);
  if (it == streams_.end()) {
    std::ofstream out(path(f, csv), std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot write {}", path(f, csv).string()));
    it = streams_.emplace(key, std::move(out)).first;
  }
  return it->second;
}

void OutputWriter::emit(OutputFile f, const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += fields[i];
  }
  line += '\n';
  stream(f, false) << line;
  if (params_.create_csv_files) stream(f, true) << line;
}

void OutputWriter::write_month(const SimulationState& state) {
  last_general_ = general_row(state);
  general_series_.push_back(last_general_);
  emit(OutputFile::general, general_fields(last_general_));
  for (const RegionalRow& r : regional_rows(state)) {
    emit(OutputFile::regional, regional_fields(r));
    regional_series_.push_back(r);
  }
  if (saves_agents_at(params_, state.clock.month_index())) {
    for (const auto& row : agent_rows(state)) emit(OutputFile::agent, row);
    for (const auto& row : firm_rows(state)) emit(OutputFile::firm, row);
    for (const auto& row : house_rows(state)) emit(OutputFile::house, row);
  }
  for (auto& [key, s] : streams_) {
    if (!s) throw std::runtime_error(fmt::format("write failed in {}", dir_.string()));
  }
}

void OutputWriter::flush() {
  for (auto& [key, s] : streams_) s.flush();
}

void write_manifest(const std::filesystem::path& dir, const Params& params, const std::string& data_digest,
                    const std::string& state_digest, const GeneralRow& final_row, double wall_seconds) {
  nlohmann::ordered_json m;
  m["version"] = SEAL_VERSION;
  m["seed"] = params.seed;
  m["params_digest"] = params_digest(params);
  m["data_digest"] = data_digest;
  m["final_state_digest"] = state_digest;
  nlohmann::ordered_json p;
  for (const ParamSpec& spec : param_registry()) p[spec.name] = to_text(params, spec.name);
  m["params"] = p;
  nlohmann::ordered_json g;
  const auto names = general_columns();
  const auto values = general_fields(final_row);
  for (std::size_t i = 0; i < names.size(); ++i) g[names[i]] = values[i];
  m["final_general"] = g;
  m["wall_seconds"] = wall_seconds;
  std::ofstream out(dir / "manifest.json");
  if (!out) throw std::runtime_error(fmt::format("cannot write manifest in {}", dir.string()));
  out << m.dump(2) << '\n';
}

}  // namespace seal
