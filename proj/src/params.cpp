#include "seal/params.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/core.h>

#include "seal/digest.hpp"
#include "seal/errors.hpp"

namespace seal {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view name, std::string_view text) {
  const std::string s(trim(text));
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError(fmt::format("{}: '{}' is not a number", name, s));
  }
}

long long parse_integer(std::string_view name, std::string_view text) {
  const std::string_view s = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw InputError(fmt::format("{}: '{}' is not an integer", name, s));
  }
  return v;
}

bool parse_bool(std::string_view name, std::string_view text) {
  const std::string_view s = trim(text);
  if (s == "True" || s == "true" || s == "1") return true;
  if (s == "False" || s == "false" || s == "0") return false;
  throw InputError(fmt::format("{}: '{}' is not a boolean", name, s));
}

std::string bool_text(bool b) { return b ? "True" : "False"; }

std::string number_text(double v) { return fmt::format("{}", v); }

std::vector<int> parse_int_list(std::string_view name, std::string_view text) {
  std::string s(trim(text));
  std::replace(s.begin(), s.end(), '[', ' ');
  std::replace(s.begin(), s.end(), ']', ' ');
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(static_cast<int>(parse_integer(name, item)));
  }
  return out;
}

struct Accessor {
  std::function<std::string(const Params&)> get_text;
  std::function<void(Params&, std::string_view)> set_text;
  std::function<double(const Params&)> get_number;  // empty for non-numeric keys
  std::function<void(Params&, double)> set_number;
};

template <class T>
Accessor real_field(T Params::*member, const char* name) {
  return {[member](const Params& p) { return number_text(static_cast<double>(p.*member)); },
          [member, name](Params& p, std::string_view v) { p.*member = static_cast<T>(parse_double(name, v)); },
          [member](const Params& p) { return static_cast<double>(p.*member); },
          [member](Params& p, double v) { p.*member = static_cast<T>(v); }};
}

Accessor int_field(int Params::*member, const char* name) {
  return {[member](const Params& p) { return std::to_string(p.*member); },
          [member, name](Params& p, std::string_view v) { p.*member = static_cast<int>(parse_integer(name, v)); },
          [member](const Params& p) { return static_cast<double>(p.*member); },
          [member](Params& p, double v) { p.*member = static_cast<int>(std::lround(v)); }};
}

Accessor bool_field(bool Params::*member, const char* name) {
  return {[member](const Params& p) { return bool_text(p.*member); },
          [member, name](Params& p, std::string_view v) { p.*member = parse_bool(name, v); },
          {},
          {}};
}

Accessor periodicity_flag(SavePeriodicity which, const char* name) {
  return {[which](const Params& p) { return bool_text(p.periodicity == which); },
          [which, name](Params& p, std::string_view v) {
            if (parse_bool(name, v)) p.periodicity = which;
          },
          {},
          {}};
}

struct Entry {
  ParamSpec spec;
  Accessor access;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = [] {
    std::vector<Entry> t;
    auto add = [&t](const char* name, Accessor a, std::optional<double> lo = {}, std::optional<double> hi = {}) {
      t.push_back({ParamSpec{name, lo, hi}, std::move(a)});
    };
    add("ALPHA", real_field(&Params::alpha, "ALPHA"), 0.01, 1.0);
    add("BETA", real_field(&Params::beta, "BETA"), 0.05, 0.95);
    add("QUANTITY_TO_CHANGE_PRICES", real_field(&Params::quantity_to_change_prices, "QUANTITY_TO_CHANGE_PRICES"),
        0.0, 500.0);
    add("MARKUP", real_field(&Params::markup, "MARKUP"), 0.01, 0.5);
    add("LABOUR_MARKET", real_field(&Params::labour_market, "LABOUR_MARKET"), 0.0, 1.0);
    add("SIZE_MARKET", int_field(&Params::size_market, "SIZE_MARKET"), 1.0, 50.0);
    add("CONSUMPTION_SATISFACTION", real_field(&Params::consumption_satisfaction, "CONSUMPTION_SATISFACTION"),
        0.001, 1.0);
    add("PERCENTAGE_CHECK_NEW_LOCATION",
        real_field(&Params::percentage_check_new_location, "PERCENTAGE_CHECK_NEW_LOCATION"), 0.005, 0.25);
    add("TAX_CONSUMPTION", real_field(&Params::tax_consumption, "TAX_CONSUMPTION"), 0.0, 0.4);
    add("TREASURE_INTO_SERVICES", real_field(&Params::treasure_into_services, "TREASURE_INTO_SERVICES"));
    add("TOTAL_DAYS", int_field(&Params::total_days, "TOTAL_DAYS"));
    add("MEMBERS_PER_FAMILY", real_field(&Params::members_per_family, "MEMBERS_PER_FAMILY"));
    add("HOUSE_VACANCY", real_field(&Params::house_vacancy, "HOUSE_VACANCY"));
    add("PERCENTAGE_ACTUAL_POP", real_field(&Params::percentage_actual_pop, "PERCENTAGE_ACTUAL_POP"));
    add("YEAR_TO_START", int_field(&Params::year_to_start, "YEAR_TO_START"));
    add("INITIAL_FIRM_CASH", real_field(&Params::initial_firm_cash, "INITIAL_FIRM_CASH"));
    add("SIMPLIFY_POP_EVOLUTION", bool_field(&Params::simplify_pop_evolution, "SIMPLIFY_POP_EVOLUTION"));
    add("LIST_NEW_AGE_GROUPS",
        Accessor{[](const Params& p) {
                   std::string s = "[";
                   for (std::size_t i = 0; i < p.list_new_age_groups.size(); ++i) {
                     if (i) s += ", ";
                     s += std::to_string(p.list_new_age_groups[i]);
                   }
                   return s + "]";
                 },
                 [](Params& p, std::string_view v) { p.list_new_age_groups = parse_int_list("LIST_NEW_AGE_GROUPS", v); },
                 {},
                 {}});
    add("alternative0", bool_field(&Params::alternative0, "alternative0"));
    add("sensitivity_choice", bool_field(&Params::sensitivity_choice, "sensitivity_choice"));
    add("multi_run_simulation", bool_field(&Params::multi_run_simulation, "multi_run_simulation"));
    add("auto_adjust_sensitivity_test", bool_field(&Params::auto_adjust_sensitivity_test, "auto_adjust_sensitivity_test"));
    add("save_agents_data", bool_field(&Params::save_agents_data, "save_agents_data"));
    add("save_agents_data_monthly", periodicity_flag(SavePeriodicity::monthly, "save_agents_data_monthly"));
    add("save_agents_data_quarterly", periodicity_flag(SavePeriodicity::quarterly, "save_agents_data_quarterly"));
    add("save_agents_data_annually", periodicity_flag(SavePeriodicity::annually, "save_agents_data_annually"));
    add("create_csv_files", bool_field(&Params::create_csv_files, "create_csv_files"));
    add("save_plots_figures", bool_field(&Params::save_plots_figures, "save_plots_figures"));
    add("print_statistics_and_results", bool_field(&Params::print_statistics_and_results, "print_statistics_and_results"));
    add("time_to_be_eliminated", real_field(&Params::time_to_be_eliminated, "time_to_be_eliminated"));
    add("seed", Accessor{[](const Params& p) { return std::to_string(p.seed); },
                         [](Params& p, std::string_view v) {
                           const long long s = parse_integer("seed", v);
                           if (s < 0) throw InputError("seed must be non-negative");
                           p.seed = static_cast<std::uint64_t>(s);
                         },
                         {},
                         {}});
    return t;
  }();
  return table;
}

const Entry& entry(std::string_view name) {
  for (const Entry& e : entries()) {
    if (e.spec.name == name) return e;
  }
  throw InputError(fmt::format("unknown parameter '{}'", name));
}

}  // namespace

const std::vector<ParamSpec>& param_registry() {
  static const std::vector<ParamSpec> specs = [] {
    std::vector<ParamSpec> out;
    for (const Entry& e : entries()) out.push_back(e.spec);
    return out;
  }();
  return specs;
}

const std::vector<std::string>& economic_param_names() {
  static const std::vector<std::string> names{
      "ALPHA", "BETA", "QUANTITY_TO_CHANGE_PRICES", "MARKUP", "LABOUR_MARKET", "SIZE_MARKET",
      "CONSUMPTION_SATISFACTION", "PERCENTAGE_CHECK_NEW_LOCATION", "TAX_CONSUMPTION"};
  return names;
}

const std::vector<std::string>& autoadjust_param_names() {
  static const std::vector<std::string> names{"ALPHA", "BETA", "MARKUP", "TAX_CONSUMPTION"};
  return names;
}

const ParamSpec& param_spec(std::string_view name) { return entry(name).spec; }

bool is_known_param(std::string_view name) {
  return std::any_of(entries().begin(), entries().end(), [&](const Entry& e) { return e.spec.name == name; });
}

double get_numeric(const Params& p, std::string_view name) {
  const Entry& e = entry(name);
  if (!e.access.get_number) throw InputError(fmt::format("parameter '{}' is not numeric", name));
  return e.access.get_number(p);
}

void set_numeric(Params& p, std::string_view name, double value) {
  const Entry& e = entry(name);
  if (!e.access.set_number) throw InputError(fmt::format("parameter '{}' is not numeric", name));
  e.access.set_number(p, value);
}

void set_from_text(Params& p, std::string_view name, std::string_view value) {
  entry(name).access.set_text(p, value);
}

std::string to_text(const Params& p, std::string_view name) { return entry(name).access.get_text(p); }

ConfigParseResult parse_config(std::string_view text, const Params& base) {
  ConfigParseResult result{base, {}, {}};
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      result.errors.push_back(fmt::format("line {}: expected KEY=value", line_no));
    } else {
      const std::string key(trim(line.substr(0, eq)));
      const std::string_view value = trim(line.substr(eq + 1));
      if (!is_known_param(key)) {
        result.unknown_keys.push_back(key);
      } else {
        try {
          set_from_text(result.params, key, value);
        } catch (const InputError& e) {
          result.errors.push_back(fmt::format("line {}: {}", line_no, e.what()));
        }
      }
    }
    if (end == text.size()) break;
  }
  return result;
}

ConfigParseResult load_config_file(const std::string& path, const Params& base) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot read config file '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), base);
}

std::vector<std::string> validate(const Params& p) {
  std::vector<std::string> problems;
  auto need = [&problems](bool ok, std::string msg) {
    if (!ok) problems.push_back(std::move(msg));
  };
  need(p.alpha >= 0.01 && p.alpha <= 1.0, "ALPHA must lie in [0.01, 1]");
  need(p.beta > 0.0 && p.beta < 1.0, "BETA must lie in (0, 1)");
  need(p.quantity_to_change_prices >= 0.0, "QUANTITY_TO_CHANGE_PRICES must be >= 0");
  need(p.markup > 0.0 && p.markup < 1.0, "MARKUP must lie in (0, 1)");
  need(p.labour_market >= 0.0 && p.labour_market <= 1.0, "LABOUR_MARKET must lie in [0, 1]");
  need(p.size_market >= 1, "SIZE_MARKET must be >= 1");
  need(p.consumption_satisfaction > 0.0, "CONSUMPTION_SATISFACTION must be > 0");
  need(p.percentage_check_new_location > 0.0 && p.percentage_check_new_location <= 1.0,
       "PERCENTAGE_CHECK_NEW_LOCATION must lie in (0, 1]");
  need(p.tax_consumption >= 0.0 && p.tax_consumption < 1.0, "TAX_CONSUMPTION must lie in [0, 1)");
  need(p.treasure_into_services >= 0.0, "TREASURE_INTO_SERVICES must be >= 0");
  need(p.total_days > 0, "TOTAL_DAYS must be > 0");
  need(p.members_per_family > 0.0, "MEMBERS_PER_FAMILY must be > 0");
  need(p.house_vacancy >= 0.0, "HOUSE_VACANCY must be >= 0");
  need(p.percentage_actual_pop > 0.0 && p.percentage_actual_pop <= 1.0, "PERCENTAGE_ACTUAL_POP must lie in (0, 1]");
  need(p.initial_firm_cash >= 0.0, "INITIAL_FIRM_CASH must be >= 0");
  need(p.time_to_be_eliminated >= 0.0 && p.time_to_be_eliminated < 1.0, "time_to_be_eliminated must lie in [0, 1)");
  const auto& groups = p.list_new_age_groups;
  need(!groups.empty() && groups.back() == 100 && groups.front() >= 0 &&
           std::adjacent_find(groups.begin(), groups.end(), std::greater_equal<>()) == groups.end(),
       "LIST_NEW_AGE_GROUPS must be strictly increasing and end at 100");
  const int modes = int(p.sensitivity_choice) + int(p.multi_run_simulation) + int(p.auto_adjust_sensitivity_test);
  need(modes <= 1, "at most one of sensitivity_choice, multi_run_simulation, auto_adjust_sensitivity_test may be True");
  return problems;
}

RunMode run_mode(const Params& p) {
  const int modes = int(p.sensitivity_choice) + int(p.multi_run_simulation) + int(p.auto_adjust_sensitivity_test);
  if (modes > 1) throw InputError("more than one run-mode flag is True");
  if (p.sensitivity_choice) return RunMode::sensitivity;
  if (p.multi_run_simulation) return RunMode::multi_run;
  if (p.auto_adjust_sensitivity_test) return RunMode::auto_adjust;
  return RunMode::single;
}

std::string periodicity_name(SavePeriodicity s) {
  switch (s) {
    case SavePeriodicity::monthly: return "monthly";
    case SavePeriodicity::quarterly: return "quarterly";
    case SavePeriodicity::annually: return "annually";
  }
  return "monthly";
}

std::string dump_config(const Params& p) {
  std::string out;
  for (const Entry& e : entries()) {
    out += e.spec.name;
    out += '=';
    out += e.access.get_text(p);
    out += '\n';
  }
  return out;
}

std::string params_digest(const Params& p) { return fnv1a_hex(dump_config(p)); }

std::string file_name_tuple(const Params& p, std::size_t total_pop) {
  return fmt::format("None_{}_{}_{}_{}_{}_{}_{}_{}_{}_{}_{}_{}_{}", bool_text(p.alternative0),
                     periodicity_name(p.periodicity), p.total_days, total_pop, p.size_market, number_text(p.alpha),
                     number_text(p.beta), number_text(p.quantity_to_change_prices), number_text(p.markup),
                     number_text(p.labour_market), number_text(p.consumption_satisfaction),
                     number_text(p.percentage_check_new_location), number_text(p.tax_consumption));
}

}  // namespace seal
