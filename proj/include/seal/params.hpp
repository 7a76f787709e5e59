#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace seal {

enum class SavePeriodicity { monthly, quarterly, annually };

struct Params {
  // Economic parameters (the sensitivity set).
  double alpha = 0.2;
  double beta = 0.85;
  double quantity_to_change_prices = 10.0;
  double markup = 0.15;
  double labour_market = 0.75;
  int size_market = 10;
  double consumption_satisfaction = 0.01;
  double percentage_check_new_location = 0.05;
  double tax_consumption = 0.10;

  double treasure_into_services = 0.0005;
  int total_days = 5040;
  double members_per_family = 2.5;
  double house_vacancy = 0.10;
  double percentage_actual_pop = 0.01;
  int year_to_start = 2000;
  double initial_firm_cash = 100.0;
  bool simplify_pop_evolution = true;
  std::vector<int> list_new_age_groups{6, 12, 17, 25, 35, 45, 65, 100};

  bool alternative0 = true;
  bool sensitivity_choice = false;
  bool multi_run_simulation = false;
  bool auto_adjust_sensitivity_test = false;

  bool save_agents_data = true;
  SavePeriodicity periodicity = SavePeriodicity::monthly;
  bool create_csv_files = false;
  bool save_plots_figures = false;
  bool print_statistics_and_results = false;
  double time_to_be_eliminated = 0.2;

  std::uint64_t seed = 0;

  bool operator==(const Params&) const = default;
};

using ParamValue = std::variant<double, int, bool, std::string>;

struct ParamSpec {
  std::string name;
  // Registered sweep bounds; present for the numeric economic parameters.
  std::optional<double> lower;
  std::optional<double> upper;
};

// Registry of every key accepted in a config file, in canonical order.
const std::vector<ParamSpec>& param_registry();

// The nine parameters varied by the sensitivity sweep, in report order.
const std::vector<std::string>& economic_param_names();

// The four parameters searched by auto-adjustment.
const std::vector<std::string>& autoadjust_param_names();

const ParamSpec& param_spec(std::string_view name);  // InputError for unknown names
bool is_known_param(std::string_view name);

double get_numeric(const Params& p, std::string_view name);
void set_numeric(Params& p, std::string_view name, double value);

// Assigns a textual value (as found in a config file) to a named parameter.
void set_from_text(Params& p, std::string_view name, std::string_view value);
std::string to_text(const Params& p, std::string_view name);

struct ConfigParseResult {
  Params params;
  std::vector<std::string> unknown_keys;
  std::vector<std::string> errors;

  bool ok() const { return unknown_keys.empty() && errors.empty(); }
};

// Flat KEY=value lines, '#' comments, blank lines ignored. Applied over `base`.
ConfigParseResult parse_config(std::string_view text, const Params& base = {});
ConfigParseResult load_config_file(const std::string& path, const Params& base = {});

// Human-readable problems; empty when the parameters are runnable.
std::vector<std::string> validate(const Params& p);

enum class RunMode { single, sensitivity, multi_run, auto_adjust };

// Mode implied by the three flags. InputError when more than one is set.
RunMode run_mode(const Params& p);

std::string periodicity_name(SavePeriodicity s);

// Canonical KEY=value dump; parse_config(dump_config(p)) == p.
std::string dump_config(const Params& p);

// FNV-1a digest of the canonical dump.
std::string params_digest(const Params& p);

// Parameter tuple embedded in output file names.
std::string file_name_tuple(const Params& p, std::size_t total_pop);

}  // namespace seal
