#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ldas/harness.hpp"

namespace py = pybind11;
using namespace ldas;

namespace {

ScenarioConfig config_from_text(const std::string& json_text, const std::string& mode) {
  ScenarioConfig base = mode == "lcas" ? default_lcas() : default_ldas();
  base.mode = mode == "lcas" ? AntennaMode::kColocated : AntennaMode::kDistributed;
  if (json_text.empty()) return base;
  return config_from_json(nlohmann::json::parse(json_text), base);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Energy-efficiency simulator for large-scale distributed antenna systems";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<InfeasibleSelection>(m, "InfeasibleSelection", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  m.def(
      "make_config",
      [](const std::string& overrides_json, const std::string& mode) {
        ScenarioConfig c = config_from_text(overrides_json, mode);
        c.validate();
        return config_to_json(c).dump();
      },
      py::arg("overrides_json") = "", py::arg("mode") = "ldas",
      "Effective configuration (JSON text) after applying overrides to the mode defaults.");

  m.def("lambert_w0", &lambert_w0, py::arg("x"));
  m.def("realization_seed", &realization_seed, py::arg("master_seed"), py::arg("index"));

  m.def(
      "draw_channel",
      [](const std::string& config_json, std::uint64_t seed) {
        const ScenarioConfig c = config_from_text(config_json, "ldas");
        return draw_realization(c, seed).composite;
      },
      py::arg("config_json"), py::arg("seed"), "Composite U x M channel of one drop.");

  m.def(
      "greedy_select",
      [](const RMatrix& score, const std::vector<int>& quota, const std::string& metric) {
        const SelectionAssignment a = greedy_select(score, quota, parse_selection_metric(metric));
        return a.assigned;
      },
      py::arg("score"), py::arg("quota"), py::arg("metric") = "cgb",
      "Per-UE assigned antenna lists from the greedy pairing.");

  m.def("agglomerate", &agglomerate, py::arg("distances"), py::arg("gamma_linear"));

  m.def(
      "zf_precoder",
      [](const CMatrix& channel, const std::vector<int>& das) {
        const ClusterPrecoder p = zf_precoder(channel, das);
        if (!p.ok()) throw ConfigError("cluster channel admits no zero-forcing precoder");
        return p.restricted;
      },
      py::arg("cluster_channel"), py::arg("active_das"),
      "Zero-forcing precoder restricted to the active antennas.");

  m.def(
      "cluster_power",
      [](const CMatrix& channel, const std::vector<int>& das, int num_clusters, const std::string& method,
         const std::string& config_json) {
        ScenarioConfig c = config_from_text(config_json, "ldas");
        const ClusterPrecoder p = zf_precoder(channel, das);
        if (!p.ok()) throw ConfigError("cluster channel admits no zero-forcing precoder");
        const ClusterPowerProblem pr = make_power_problem(p, num_clusters, c);
        const PowerAllocation a =
            parse_power_control(method) == PowerControlMethod::kOptimal ? optimal_power(pr) : heuristic_power(pr);
        py::dict out;
        out["p"] = a.p;
        out["feasible"] = a.feasible();
        out["ee_bits_per_joule"] = a.ee_bits_per_joule;
        out["bound"] = a.achieved_ee_bound;
        return out;
      },
      py::arg("cluster_channel"), py::arg("active_das"), py::arg("num_clusters") = 1,
      py::arg("method") = "heuristic", py::arg("config_json") = "");

  m.def(
      "solve",
      [](const std::string& config_json, std::uint64_t index, const std::string& mode) {
        const ScenarioConfig c = config_from_text(config_json, mode);
        c.validate();
        const ChannelRealization r = draw_realization(c, realization_seed(c.master_seed, index));
        py::gil_scoped_release release;
        return run_realization(r, c).to_json().dump();
      },
      py::arg("config_json") = "", py::arg("index") = 0, py::arg("mode") = "ldas",
      "Report (JSON text) for realization `index` under the configuration.");

  m.def(
      "run_sweep",
      [](const std::string& config_json, const std::string& sweep, int threads, const std::string& mode) {
        const ScenarioConfig c = config_from_text(config_json, mode);
        const SweepSpec spec = parse_sweep(sweep);
        std::vector<AggregateRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_sweep(c, spec, threads).rows;
        }
        return rows_to_csv(rows);
      },
      py::arg("config_json") = "", py::arg("sweep") = "gamma=22", py::arg("threads") = 1,
      py::arg("mode") = "ldas", "Aggregated sweep as CSV text.");

  m.attr("columns") = aggregate_columns();
}
