#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "seal/params.hpp"
#include "seal/state.hpp"
#include "seal/stats.hpp"

namespace seal {

enum class OutputFile { agent, firm, general, house, regional };

std::string output_file_stem(OutputFile f);

// Shortest round-trip decimal text; "None" for absent values.
std::string format_number(double v);

// Rows as text fields, in the documented column orders.
std::vector<std::vector<std::string>> agent_rows(const SimulationState& state);
std::vector<std::vector<std::string>> firm_rows(const SimulationState& state);
std::vector<std::string> general_fields(const GeneralRow& row);
std::vector<std::vector<std::string>> house_rows(const SimulationState& state);
std::vector<std::string> regional_fields(const RegionalRow& row);

// True when agent/firm/house files are written at this month.
bool saves_agents_at(const Params& p, int month_index);

// Appends one month of output to <dir>/temp_<kind>_<tuple>.txt (no header, comma
// delimited) and, with create_csv_files, to .csv mirrors that carry a header.
class OutputWriter {
 public:
  OutputWriter(std::filesystem::path dir, const Params& params, std::size_t total_pop);

  void write_month(const SimulationState& state);
  void flush();

  std::filesystem::path path(OutputFile f, bool csv = false) const;
  const std::filesystem::path& directory() const { return dir_; }
  const GeneralRow& last_general() const { return last_general_; }
  const std::vector<GeneralRow>& general_series() const { return general_series_; }
  const std::vector<RegionalRow>& regional_series() const { return regional_series_; }

 private:
  std::ofstream& stream(OutputFile f, bool csv);
  void emit(OutputFile f, const std::vector<std::string>& fields);

  std::filesystem::path dir_;
  Params params_;
  std::string tuple_;
  std::map<std::pair<int, bool>, std::ofstream> streams_;
  GeneralRow last_general_;
  std::vector<GeneralRow> general_series_;
  std::vector<RegionalRow> regional_series_;
};

// manifest.json: params, seed, digests, version.
void write_manifest(const std::filesystem::path& dir, const Params& params, const std::string& data_digest,
                    const std::string& state_digest, const GeneralRow& final_row, double wall_seconds);

}  // namespace seal
