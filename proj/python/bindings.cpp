#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cctype>

#include "seal/cli.hpp"
#include "seal/domain.hpp"
#include "seal/errors.hpp"
#include "seal/lab.hpp"
#include "seal/output.hpp"
#include "seal/params.hpp"
#include "seal/scheduler.hpp"
#include "seal/snapshot.hpp"
#include "seal/stats.hpp"

namespace py = pybind11;
using namespace seal;

namespace {

py::dict general_dict(const GeneralRow& r) {
  py::dict d;
  d["month"] = r.month;
  d["price_index"] = r.price_index;
  d["gdp_index"] = r.gdp_index;
  d["unemployment"] = r.unemployment;
  d["average_workers"] = r.average_workers;
  d["families_wealth"] = r.families_wealth;
  d["families_savings"] = r.families_savings;
  d["firms_wealth"] = r.firms_wealth;
  d["firms_profit"] = r.firms_profit;
  d["gini_index"] = r.gini_index;
  d["average_utility"] = r.average_utility;
  return d;
}

py::dict regional_dict(const RegionalRow& r) {
  py::dict d;
  d["month"] = r.month;
  d["region_id"] = r.region_id;
  d["commuting"] = r.commuting;
  d["pop"] = r.pop;
  d["gdp_region"] = r.gdp_region;
  d["regional_gini"] = r.regional_gini;
  d["regional_unemployment"] = r.regional_unemployment;
  d["qli_index"] = r.qli_index;
  d["gdp_percapta"] = r.gdp_percapta;
  d["treasure"] = r.treasure;
  return d;
}

py::list general_list(const std::vector<GeneralRow>& rows) {
  py::list out;
  for (const auto& r : rows) out.append(general_dict(r));
  return out;
}

py::list regional_list(const std::vector<RegionalRow>& rows) {
  py::list out;
  for (const auto& r : rows) out.append(regional_dict(r));
  return out;
}

Params params_from_kwargs(const py::kwargs& kwargs, Params p = {}) {
  for (const auto& [key, value] : kwargs) {
    std::string name = py::str(key);
    if (!is_known_param(name)) {
      for (char& ch : name) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    }
    std::string text = py::str(value);
    if (py::isinstance<py::bool_>(value)) text = value.cast<bool>() ? "True" : "False";
    set_from_text(p, name, text);
  }
  return p;
}

struct PySimulation {
  World world;
  Simulation sim;

  PySimulation(const World& w, const Params& p) : world(w), sim(w.state, p, w.vitals, w.qualification) {}
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "SEAL agent-based economy simulator";
  m.attr("__version__") = SEAL_VERSION;
  m.attr("DAYS_PER_MONTH") = kDaysPerMonth;

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_RuntimeError);
  py::register_exception<SnapshotError>(m, "SnapshotError", PyExc_RuntimeError);
  py::register_exception<SamplingError>(m, "SamplingError", PyExc_RuntimeError);

  py::class_<Params>(m, "Params")
      .def(py::init([](const py::kwargs& kwargs) { return params_from_kwargs(kwargs); }))
      .def_static("from_config", [](const std::string& text) {
        ConfigParseResult r = parse_config(text);
        if (!r.ok()) {
          std::string msg = "bad config:";
          for (const auto& k : r.unknown_keys) msg += " unknown key " + k + ";";
          for (const auto& e : r.errors) msg += " " + e + ";";
          throw InputError(msg);
        }
        return r.params;
      })
      .def_static("from_file", [](const std::string& path) {
        ConfigParseResult r = load_config_file(path);
        if (!r.ok()) throw InputError("bad config file " + path);
        return r.params;
      })
      .def("__getitem__", [](const Params& p, const std::string& name) { return to_text(p, name); })
      .def("__setitem__", [](Params& p, const std::string& name, const py::object& v) {
        std::string text = py::str(v);
        if (py::isinstance<py::bool_>(v)) text = v.cast<bool>() ? "True" : "False";
        set_from_text(p, name, text);
      })
      .def("replace", [](const Params& p, const py::kwargs& kwargs) { return params_from_kwargs(kwargs, p); })
      .def("dump", &dump_config)
      .def("digest", &params_digest)
      .def("validate", &validate)
      .def_readwrite("seed", &Params::seed)
      .def_readwrite("total_days", &Params::total_days)
      .def_readwrite("alternative0", &Params::alternative0)
      .def_readwrite("alpha", &Params::alpha)
      .def_readwrite("beta", &Params::beta)
      .def_readwrite("markup", &Params::markup)
      .def_readwrite("labour_market", &Params::labour_market)
      .def_readwrite("size_market", &Params::size_market)
      .def_readwrite("tax_consumption", &Params::tax_consumption)
      .def_readwrite("percentage_actual_pop", &Params::percentage_actual_pop)
      .def("__eq__", [](const Params& a, const Params& b) { return a == b; })
      .def("__repr__", [](const Params& p) { return "<Params " + params_digest(p) + ">"; });

  py::class_<World>(m, "World")
      .def_property_readonly("citizens", [](const World& w) { return w.state.citizens.size(); })
      .def_property_readonly("families", [](const World& w) { return w.state.families.size(); })
      .def_property_readonly("firms", [](const World& w) { return w.state.firms.size(); })
      .def_property_readonly("houses", [](const World& w) { return w.state.houses.size(); })
      .def_property_readonly("regions", [](const World& w) {
        std::vector<std::string> ids;
        for (const auto& [id, r] : w.state.regions) ids.push_back(id);
        return ids;
      })
      .def_readonly("data_digest", &World::data_digest)
      .def("state_digest", [](const World& w) { return state_digest(w.state); })
      .def("save", [](const World& w, const std::filesystem::path& path) { save_snapshot(w, path); })
      .def("__eq__", [](const World& a, const World& b) { return a == b; });

  m.def("synthetic_world", [](const Params& p) { return make_world(synthetic_world(), p); }, py::arg("params") = Params{},
        "Generate the built-in two-region toy world.");
  m.def("load_world", [](const std::filesystem::path& dir, const Params& p) {
        const WorldData data = load_world_data(dir);
        if (const auto problems = validate_world_data(data); !problems.empty()) throw InputError(problems.front());
        return make_world(data, p);
      },
      py::arg("data_dir"), py::arg("params") = Params{});
  m.def("load_snapshot", [](const std::filesystem::path& path) { return load_snapshot(path); });

  py::class_<PySimulation>(m, "Simulation")
      .def(py::init<const World&, const Params&>(), py::arg("world"), py::arg("params"))
      .def("bootstrap", [](PySimulation& s) { s.sim.bootstrap(); })
      .def("run_day", [](PySimulation& s) { s.sim.run_day(); })
      .def("run_month", [](PySimulation& s) {
        const MonthReport r = s.sim.run_month();
        py::dict d;
        d["month_index"] = r.month_index;
        d["pop_before"] = r.pop_before;
        d["pop_after"] = r.pop_after;
        d["births"] = r.demographics.births.size();
        d["deaths"] = r.demographics.deaths.size();
        d["fiscal_spent"] = r.fiscal_spent;
        py::list steps;
        for (const StepAudit& a : r.steps) steps.append(py::make_tuple(step_name(a.step), a.money_before, a.money_after));
        d["steps"] = steps;
        return d;
      })
      .def("run", [](PySimulation& s) {
        py::gil_scoped_release release;
        s.sim.run();
      })
      .def_property_readonly("day", [](const PySimulation& s) { return s.sim.state().clock.day; })
      .def_property_readonly("month", [](const PySimulation& s) { return s.sim.state().clock.month_index(); })
      .def("general", [](const PySimulation& s) { return general_dict(general_row(s.sim.state())); })
      .def("regional", [](const PySimulation& s) { return regional_list(regional_rows(s.sim.state())); })
      .def("total_money", [](const PySimulation& s) { return total_money(s.sim.state()); })
      .def("state_digest", [](const PySimulation& s) { return state_digest(s.sim.state()); });

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("run_id", &RunResult::run_id)
      .def_readonly("seed", &RunResult::seed)
      .def_readonly("params_digest", &RunResult::params_digest)
      .def_readonly("final_state_digest", &RunResult::final_state_digest)
      .def_readonly("wall_seconds", &RunResult::wall_seconds)
      .def_readonly("error", &RunResult::error)
      .def_property_readonly("ok", &RunResult::ok)
      .def_property_readonly("final", [](const RunResult& r) { return general_dict(r.final_row); })
      .def_property_readonly("general", [](const RunResult& r) { return general_list(r.general); })
      .def_property_readonly("regional", [](const RunResult& r) { return regional_list(r.regional); });

  m.def("run", [](const World& w, const Params& p, std::optional<std::filesystem::path> out_dir) {
        RunOptions opt;
        opt.out_dir = std::move(out_dir);
        py::gil_scoped_release release;
        return run_single(w, p, opt);
      },
      py::arg("world"), py::arg("params"), py::arg("out_dir") = py::none(),
      "One simulation; files are written only when out_dir is given.");

  m.def("gini", [](const std::vector<double>& x) { return gini(x); });
  m.def("wage_base", [](double balance, double profit) {
    Firm f;
    f.total_balance = balance;
    f.profit = profit;
    return wage_base(f);
  });
  m.def("linspace", &linspace);
  m.def("sensitivity_grid", &sensitivity_grid);
  m.def("general_columns", &general_columns);
  m.def("regional_columns", &regional_columns);
  m.def("economic_param_names", &economic_param_names);
  m.def("cli", [](const std::vector<std::string>& args) {
        py::gil_scoped_release release;
        return run_cli(args);
      },
      "Run the seal command line with the given arguments; returns the exit code.");
}
