#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <vector>

#include "qmitigate/circuits.hpp"
#include "qmitigate/experiments.hpp"
#include "qmitigate/intensity_filter.hpp"
#include "qmitigate/m3.hpp"
#include "qmitigate/report.hpp"
#include "qmitigate/simulator.hpp"
#include "qmitigate/vqe.hpp"

namespace py = pybind11;
using namespace qmitigate;

namespace {

using CountsDict = std::map<std::string, std::uint64_t>;
using ProbsDict = std::map<std::string, double>;

Counts to_counts(const CountsDict& d) {
    return Counts(Table<std::uint64_t>(d.begin(), d.end()));
}

CountsDict from_counts(const Counts& c) { return {c.entries().begin(), c.entries().end()}; }

ProbsDict from_table(const Table<double>& t) { return {t.begin(), t.end()}; }

ProbDist to_probs(const ProbsDict& d) { return ProbDist(Table<double>(d.begin(), d.end())); }

py::object json_to_py(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

nlohmann::json py_to_json(const py::handle& obj) {
    return nlohmann::json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

IntensityRange to_range(const py::object& range) {
    if (range.is_none()) return {};
    if (py::isinstance<py::str>(range)) return IntensityRange::parse(range.cast<std::string>());
    const auto pair = range.cast<std::pair<double, double>>();
    return IntensityRange(pair.first, pair.second);
}

NoiseProfile to_noise(const py::object& noise) {
    if (noise.is_none()) return NoiseProfile::ideal();
    if (py::isinstance<py::str>(noise)) {
        const auto name = noise.cast<std::string>();
        if (name == "paper-like") return NoiseProfile::paper_like();
        if (name == "ideal" || name == "noiseless") return NoiseProfile::ideal();
        return load_noise_profile(name);
    }
    return noise_from_json(py_to_json(noise));
}

std::vector<QubitCalibration> to_cal(const std::vector<std::pair<double, double>>& cal) {
    std::vector<QubitCalibration> out;
    for (const auto& [e01, e10] : cal) {
        QubitCalibration c{e01, e10};
        c.validate();
        out.push_back(c);
    }
    return out;
}

Circuit build_circuit(const std::string& family, const py::dict& kw) {
    auto get_str = [&](const char* key) { return kw[key].cast<std::string>(); };
    if (family == "ghz") return ghz(kw["qubits"].cast<int>());
    if (family == "bv") return bv(get_str("secret"));
    if (family == "dynamic_bv") return dynamic_bv(get_str("secret"));
    if (family == "trotter") {
        const Hamiltonian h = kw.contains("hamiltonian")
                                  ? Hamiltonian::parse(get_str("hamiltonian"))
                                  : heisenberg(2, false, 1.0, kTrotterField);
        return trotter_step(h, kw["dt"].cast<double>(), kw["steps"].cast<int>(),
                            kw.contains("initial") ? get_str("initial") : std::string());
    }
    throw DomainError("unknown circuit family '" + family +
                      "' (expected ghz, bv, dynamic_bv or trotter)");
}

}  // namespace

PYBIND11_MODULE(_qmitigate, m) {
    m.doc() = "Readout-error mitigation: intensity filter, reduced-subspace baseline, simulator";

    py::register_exception<FilterAnnihilatedError>(m, "FilterAnnihilatedError", PyExc_RuntimeError);
    py::register_exception<UnsupportedCircuitError>(m, "UnsupportedCircuitError", PyExc_RuntimeError);

    m.def("counts_to_probs", [](const CountsDict& c) { return from_table(counts_to_probs(to_counts(c)).entries()); },
          py::arg("counts"));
    m.def("probs_to_counts",
          [](const ProbsDict& p, std::uint64_t shots) { return from_counts(probs_to_counts(to_probs(p), shots)); },
          py::arg("probs"), py::arg("shots"));
    m.def("hellinger_fidelity",
          [](const ProbsDict& p, const ProbsDict& q) { return hellinger_fidelity(to_probs(p), to_probs(q)); });
    m.def("total_variation",
          [](const ProbsDict& p, const ProbsDict& q) { return total_variation(to_probs(p), to_probs(q)); });
    m.def("success_probability",
          [](const ProbsDict& p, const std::string& target) { return success_probability(to_probs(p), target); });
    m.def("parity_expectation",
          [](const ProbsDict& p, const std::string& mask) { return parity_expectation(to_probs(p), mask); });

    m.def("rescale_intensity",
          [](const ProbsDict& p, const py::object& range) {
              return from_table(rescale_intensity(to_probs(p), to_range(range)));
          },
          py::arg("probs"), py::arg("range") = py::none());
    m.def("mitigate_counts",
          [](const CountsDict& c, const py::object& range) {
              return json_to_py(to_json(mitigate_counts(to_counts(c), to_range(range))));
          },
          py::arg("counts"), py::arg("range") = py::none(),
          "Intensity-filter a counts dict; returns the report as a dict.");

    m.def("calibrate",
          [](const py::object& noise, int qubits, std::uint64_t shots, std::uint64_t seed) {
              std::vector<std::pair<double, double>> out;
              for (const auto& c : calibrate(to_noise(noise), qubits, shots, seed)) out.emplace_back(c.e01, c.e10);
              return out;
          },
          py::arg("noise"), py::arg("qubits"), py::arg("shots") = 10000, py::arg("seed") = 0);
    m.def("mitigate_m3",
          [](const CountsDict& c, const std::vector<std::pair<double, double>>& cal, const std::string& method) {
              return from_table(mitigate_m3(to_counts(c), to_cal(cal), parse_m3_method(method)).entries());
          },
          py::arg("counts"), py::arg("calibration"), py::arg("method") = "direct");

    m.def("ideal_probabilities",
          [](const std::string& family, const py::kwargs& kw) {
              return from_table(ideal_probabilities(build_circuit(family, kw)).entries());
          },
          py::arg("family"));
    m.def("run_shots",
          [](const std::string& family, const py::object& noise, std::uint64_t shots, std::uint64_t seed,
             const py::kwargs& kw) {
              return from_counts(run_shots(build_circuit(family, kw), to_noise(noise), shots, seed));
          },
          py::arg("family"), py::arg("noise") = py::none(), py::arg("shots") = 1024, py::arg("seed") = 0);

    m.def("exact_ground_energy",
          [](const std::string& hamiltonian) { return exact_ground_energy(Hamiltonian::parse(hamiltonian)); },
          py::arg("hamiltonian"));
    m.def("run_vqe",
          [](const py::dict& config) {
              const VqeConfig cfg = vqe_config_from_json(py_to_json(config));
              py::gil_scoped_release release;
              const VqeResult r = run_vqe(cfg);
              py::gil_scoped_acquire acquire;
              return json_to_py(to_json(r));
          },
          py::arg("config"));

    m.attr("experiment_ids") = kExperimentIds;
    m.def("run_experiment",
          [](const std::string& id, const py::object& noise, std::optional<std::uint64_t> shots,
             std::uint64_t seed, const std::vector<std::string>& mitigators) {
              ExperimentSpec spec = ExperimentSpec::defaults(id);
              if (!noise.is_none()) {
                  spec.noise = to_noise(noise);
                  spec.noise_source = py::isinstance<py::str>(noise) ? noise.cast<std::string>() : "inline";
              }
              if (shots) spec.shots = *shots;
              spec.seed = seed;
              if (!mitigators.empty()) {
                  spec.mitigators.clear();
                  for (const auto& s : mitigators) spec.mitigators.push_back(MitigatorSpec::parse(s));
              }
              ExperimentReport report;
              {
                  py::gil_scoped_release release;
                  report = run_experiment(spec);
              }
              return json_to_py(to_json(report));
          },
          py::arg("experiment"), py::arg("noise") = py::none(), py::arg("shots") = py::none(),
          py::arg("seed") = 1, py::arg("mitigators") = std::vector<std::string>{});
    m.def("emit_report",
          [](const py::dict& report, const std::string& out_dir, const std::string& formats) {
              std::vector<std::string> out;
              for (const auto& p : emit_report(report_from_json(py_to_json(report)), out_dir, parse_formats(formats))) {
                  out.push_back(p.string());
              }
              return out;
          },
          py::arg("report"), py::arg("out_dir"), py::arg("formats") = "json,csv,svg");
}
