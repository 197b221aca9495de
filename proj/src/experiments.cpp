#include "qmitigate/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <numbers>

#include "qmitigate/circuits.hpp"
#include "qmitigate/simulator.hpp"
#include "qmitigate/vqe.hpp"

namespace qmitigate {

namespace {

std::vector<MitigatorSpec> parse_all(std::initializer_list<const char*> names) {
    std::vector<MitigatorSpec> out;
    for (const char* n : names) out.push_back(MitigatorSpec::parse(n));
    return out;
}

}  // namespace

ExperimentSpec ExperimentSpec::defaults(std::string_view id) {
    ExperimentSpec spec;
    spec.id = std::string(id);
    if (id == "ghz-demo") {
        spec.min_width = spec.max_width = 3;
        spec.shots = 2048;
        spec.mitigators = parse_all({"raw", "filter:3%"});
    } else if (id == "probs") {
        spec.min_width = spec.max_width = 5;
        spec.shots = 8192;
        spec.mitigators = parse_all({"raw", "filter:3%", "m3"});
    } else if (id == "bv-sweep") {
        spec.min_width = 3;
        spec.max_width = 7;
        spec.shots = 10000;
        spec.mitigators = parse_all({"raw", "filter:1%", "filter:2%", "m3"});
    } else if (id == "dynamic-bv") {
        spec.min_width = 2;
        spec.max_width = 15;
        spec.shots = 10000;
        spec.mitigators = parse_all({"raw", "filter:1%", "m3"});
    } else if (id == "trotter") {
        spec.min_width = spec.max_width = 2;
        spec.shots = 8192;
        spec.trotter_steps = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
        spec.mitigators = parse_all({"raw", "filter:2%", "m3"});
    } else if (id == "vqe-basic") {
        spec.min_width = spec.max_width = 2;
        spec.shots = 2048;
        spec.mitigators = parse_all({"raw", "filter:1%", "m3"});
    } else if (id == "heisenberg-vqe") {
        spec.min_width = spec.max_width = 3;
        spec.shots = 2048;
        spec.mitigators = parse_all({"raw", "filter:2%"});
    } else {
        throw DomainError("unknown experiment id '" + std::string(id) + "'");
    }
    return spec;
}

void ExperimentSpec::validate() const {
    if (std::find(kExperimentIds.begin(), kExperimentIds.end(), id) == kExperimentIds.end()) {
        throw DomainError("unknown experiment id '" + id + "'");
    }
    if (mitigators.empty()) {
        throw DomainError("experiment needs at least one mitigator");
    }
    if (shots < 1) {
        throw DomainError("shots must be >= 1");
    }
    if (min_width < 1 || max_width < min_width) {
        throw DomainError("invalid qubit range " + std::to_string(min_width) + ".." +
                          std::to_string(max_width));
    }
    if (id == "ghz-demo" || id == "probs") {
        if (min_width < 2 || max_width > kMaxQubits) throw DomainError("ghz width outside 2..20");
    } else if (id == "bv-sweep") {
        if (max_width + 1 > kMaxQubits) throw DomainError("bv width exceeds simulator capacity");
    } else if (id == "dynamic-bv") {
        if (max_width > kMaxClbits) throw DomainError("dynamic-bv width exceeds 64");
    } else if (id == "heisenberg-vqe") {
        if (min_width < 3 || max_width > 8) throw DomainError("heisenberg ring size outside 3..8");
    }
    if (id == "trotter") {
        if (trotter_steps.empty()) throw DomainError("trotter needs at least one step count");
        for (int s : trotter_steps) {
            if (s < 0) throw DomainError("trotter step counts must be non-negative");
        }
    }
    if ((id == "vqe-basic" || id == "heisenberg-vqe") && max_iterations < 1) {
        throw DomainError("max_iterations must be >= 1");
    }
    noise.validate();
}

nlohmann::json to_json(const ExperimentSpec& spec) {
    nlohmann::json ms = nlohmann::json::array();
    for (const auto& m : spec.mitigators) ms.push_back(m.label());
    return {
        {"id", spec.id},
        {"noise_source", spec.noise_source},
        {"noise", to_json(spec.noise)},
        {"shots", spec.shots},
        {"seed", spec.seed},
        {"mitigators", ms},
        {"qubit_range", {spec.min_width, spec.max_width}},
        {"trotter_steps", spec.trotter_steps},
        {"trotter_dt", spec.trotter_dt},
        {"max_iterations", spec.max_iterations},
        {"calibration_shots", spec.calibration_shots},
    };
}

const MetricRow* ExperimentReport::find(std::string_view mitigator,
                                        std::string_view configuration) const {
    for (const auto& row : rows) {
        if (row.mitigator == mitigator && row.configuration == configuration) return &row;
    }
    return nullptr;
}

std::vector<std::string> ExperimentReport::configurations() const {
    std::vector<std::string> out;
    for (const auto& row : rows) {
        if (std::find(out.begin(), out.end(), row.configuration) == out.end()) {
            out.push_back(row.configuration);
        }
    }
    return out;
}

std::vector<std::string> ExperimentReport::mitigators() const {
    std::vector<std::string> out;
    for (const auto& row : rows) {
        if (std::find(out.begin(), out.end(), row.mitigator) == out.end()) {
            out.push_back(row.mitigator);
        }
    }
    return out;
}

namespace {

double elapsed_us(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start)
        .count();
}

nlohmann::json environment_stamp() {
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return {
        {"library", "qmitigate"},
        {"version", "0.1.0"},
#if defined(__VERSION__)
        {"compiler", __VERSION__},
#endif
        {"cxx", static_cast<long>(__cplusplus)},
        {"timestamp", stamp},
    };
}

bool needs_calibration(const ExperimentSpec& spec) {
    return std::any_of(spec.mitigators.begin(), spec.mitigators.end(),
                       [](const MitigatorSpec& m) { return m.kind == MitigatorSpec::Kind::M3; });
}

struct Calibration {
    std::vector<QubitCalibration> cal;
    double elapsed_us = 0.0;
};

Calibration calibrate_timed(const ExperimentSpec& spec, int qubits, const std::string& tag) {
    const auto start = std::chrono::steady_clock::now();
    Calibration out;
    out.cal = calibrate(spec.noise, qubits, spec.calibration_shots,
                        derive_seed(spec.seed, spec.id + "/calibration/" + tag));
    out.elapsed_us = elapsed_us(start);
    return out;
}

// Applies every mitigator to the same counts and appends one row each.
void score_counts(ExperimentReport& report, const ExperimentSpec& spec,
                  const std::string& configuration, double x, const Counts& counts,
                  const ProbDist* ideal, const std::vector<BitString>& targets,
                  const Calibration* calibration) {
    for (const auto& m : spec.mitigators) {
        MetricRow row;
        row.mitigator = m.label();
        row.configuration = configuration;
        row.x = x;
        try {
            const std::vector<QubitCalibration>* cal = calibration ? &calibration->cal : nullptr;
            Mitigated out = apply_mitigator(m, counts, cal);
            if (!targets.empty()) {
                double s = 0.0;
                for (const auto& t : targets) s += success_probability(out.probs, t);
                row.success_probability = s;
            }
            if (ideal) {
                row.hellinger_fidelity = hellinger_fidelity(out.probs, *ideal);
            }
            row.correction_us = out.correction_us;
            if (m.kind == MitigatorSpec::Kind::M3 && calibration) {
                row.calibration_us = calibration->elapsed_us;
            }
            row.distribution = out.probs.entries();
            row.zeroed = std::move(out.zeroed);
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
        report.rows.push_back(std::move(row));
    }
}

void run_ghz(ExperimentReport& report, const ExperimentSpec& spec) {
    for (int w = spec.min_width; w <= spec.max_width; ++w) {
        const std::string config = "ghz" + std::to_string(w);
        const Circuit circuit = ghz(w);
        const ProbDist ideal = ideal_probabilities(circuit);
        report.reference["ideal"][config] = table_to_json(ideal.entries());
        const Counts counts = run_shots(circuit, spec.noise, spec.shots,
                                        derive_seed(spec.seed, spec.id + "/" + config));
        std::optional<Calibration> cal;
        if (needs_calibration(spec)) cal = calibrate_timed(spec, w, config);
        score_counts(report, spec, config, w, counts, &ideal,
                     {std::string(static_cast<std::size_t>(w), '0'),
                      std::string(static_cast<std::size_t>(w), '1')},
                     cal ? &*cal : nullptr);
    }
}

void run_bv_sweep(ExperimentReport& report, const ExperimentSpec& spec) {
    for (int w = spec.min_width; w <= spec.max_width; ++w) {
        const std::string secret(static_cast<std::size_t>(w), '1');
        const std::string config = "width" + std::to_string(w);
        const Circuit circuit = bv(secret);
        const ProbDist ideal = ideal_probabilities(circuit);
        report.reference["ideal"][config] = table_to_json(ideal.entries());
        const Counts counts = run_shots(circuit, spec.noise, spec.shots,
                                        derive_seed(spec.seed, spec.id + "/" + config));
        std::optional<Calibration> cal;
        if (needs_calibration(spec)) cal = calibrate_timed(spec, w, config);
        score_counts(report, spec, config, w, counts, &ideal, {secret}, cal ? &*cal : nullptr);
    }
}

void run_dynamic_bv(ExperimentReport& report, const ExperimentSpec& spec) {
    std::optional<Calibration> data_qubit;
    if (needs_calibration(spec)) data_qubit = calibrate_timed(spec, 1, "data-qubit");
    for (int w = spec.min_width; w <= spec.max_width; ++w) {
        const std::string secret(static_cast<std::size_t>(w), '1');
        const std::string config = "width" + std::to_string(w);
        const Circuit circuit = dynamic_bv(secret);
        const ProbDist ideal(Table<double>{{secret, 1.0}});
        report.reference["ideal"][config] = table_to_json(ideal.entries());
        const Counts counts = run_shots(circuit, spec.noise, spec.shots,
                                        derive_seed(spec.seed, spec.id + "/" + config));
        std::optional<Calibration> cal;
        if (data_qubit) {
            cal = Calibration{std::vector<QubitCalibration>(static_cast<std::size_t>(w),
                                                            data_qubit->cal.front()),
                              data_qubit->elapsed_us};
        }
        score_counts(report, spec, config, w, counts, &ideal, {secret}, cal ? &*cal : nullptr);
    }
}

void run_trotter(ExperimentReport& report, const ExperimentSpec& spec) {
    const Hamiltonian h = heisenberg(2, false, 1.0, kTrotterField);
    report.reference["hamiltonian"] = h.to_string();
    report.reference["initial_state"] = "01";
    std::optional<Calibration> cal;
    if (needs_calibration(spec)) cal = calibrate_timed(spec, 2, "trotter");
    for (int steps : spec.trotter_steps) {
        const std::string config = "steps" + std::to_string(steps);
        const Circuit circuit = trotter_step(h, spec.trotter_dt, steps, "01");
        const ProbDist ideal = ideal_probabilities(circuit);
        report.reference["ideal"][config] = table_to_json(ideal.entries());
        const Counts counts = run_shots(circuit, spec.noise, spec.shots,
                                        derive_seed(spec.seed, spec.id + "/" + config));
        score_counts(report, spec, config, steps * spec.trotter_dt, counts, &ideal, {},
                     cal ? &*cal : nullptr);
    }
}

void run_vqe_rows(ExperimentReport& report, const ExperimentSpec& spec, const std::string& config,
                  double x, VqeConfig base, double reference) {
    for (const auto& m : spec.mitigators) {
        MetricRow row;
        row.mitigator = m.label();
        row.configuration = config;
        row.x = x;
        try {
            VqeConfig cfg = base;
            cfg.mitigator = m;
            const VqeResult result = run_vqe(cfg);
            row.energy = result.energy;
            row.relative_error = std::abs(result.energy - reference) / std::abs(reference);
            row.trace = result.trace;
            row.correction_us = result.correction_us;
            row.calibration_us = result.calibration_us;
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
        report.rows.push_back(std::move(row));
    }
}

void run_vqe_basic(ExperimentReport& report, const ExperimentSpec& spec) {
    VqeConfig base;
    base.hamiltonian = basic_vqe_hamiltonian();
    base.ansatz = AnsatzKind::TwoLocal;
    base.initial_params = basic_vqe_initial_angles();
    base.shots = spec.shots;
    base.noise = spec.noise;
    base.calibration_shots = spec.calibration_shots;
    base.max_iterations = spec.max_iterations;
    base.seed = derive_seed(spec.seed, spec.id);
    report.reference["optimum"] = kBasicVqeOptimum;
    report.reference["exact_ground_energy"] = exact_ground_energy(base.hamiltonian);
    report.reference["hamiltonian"] = base.hamiltonian.to_string();
    run_vqe_rows(report, spec, "basic", 0.0, base, kBasicVqeOptimum);
}

void run_heisenberg_vqe(ExperimentReport& report, const ExperimentSpec& spec) {
    for (int m = spec.min_width; m <= spec.max_width; ++m) {
        const std::string config = "ring" + std::to_string(m);
        VqeConfig base;
        base.hamiltonian = heisenberg(m, true);
        base.ansatz = AnsatzKind::EfficientSU2;
        SplitMix64 rng(derive_seed(spec.seed, spec.id + "/init/" + config), 0);
        base.initial_params.resize(
            static_cast<std::size_t>(ansatz_parameter_count(base.ansatz, m)));
        for (auto& p : base.initial_params) p = 2.0 * std::numbers::pi * rng.uniform();
        base.shots = spec.shots;
        base.noise = spec.noise;
        base.calibration_shots = spec.calibration_shots;
        base.max_iterations = spec.max_iterations;
        base.seed = derive_seed(spec.seed, spec.id + "/" + config);
        const double exact = exact_ground_energy(base.hamiltonian);
        report.reference["exact_ground_energy"][config] = exact;
        run_vqe_rows(report, spec, config, m, base, exact);
    }
}

}  // namespace

ExperimentReport run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    ExperimentReport report;
    report.experiment = spec.id;
    report.spec = to_json(spec);
    report.environment = environment_stamp();
    report.reference = nlohmann::json::object();

    if (spec.id == "ghz-demo" || spec.id == "probs") {
        run_ghz(report, spec);
    } else if (spec.id == "bv-sweep") {
        run_bv_sweep(report, spec);
    } else if (spec.id == "dynamic-bv") {
        run_dynamic_bv(report, spec);
    } else if (spec.id == "trotter") {
        run_trotter(report, spec);
    } else if (spec.id == "vqe-basic") {
        run_vqe_basic(report, spec);
    } else if (spec.id == "heisenberg-vqe") {
        run_heisenberg_vqe(report, spec);
    }

    report.timings = nlohmann::json::object();
    for (const auto& label : report.mitigators()) {
        double calibration = 0.0;
        double correction = 0.0;
        std::vector<double> seen;
        for (const auto& row : report.rows) {
            if (row.mitigator != label) continue;
            correction += row.correction_us;
            // Count each shared calibration once.
            if (row.calibration_us > 0.0 &&
                std::find(seen.begin(), seen.end(), row.calibration_us) == seen.end()) {
                seen.push_back(row.calibration_us);
                calibration += row.calibration_us;
            }
        }
        report.timings[label] = {{"calibration_us", calibration}, {"correction_us", correction}};
    }
    return report;
}

namespace {

nlohmann::json opt(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> opt_from(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

}  // namespace

nlohmann::json to_json(const ExperimentReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        nlohmann::json distribution = nlohmann::json::array();
        for (const auto& [key, v] : r.distribution) distribution.push_back({key, v});
        rows.push_back({
            {"mitigator", r.mitigator},
            {"configuration", r.configuration},
            {"x", r.x},
            {"ok", r.ok},
            {"error", r.error},
            {"success_probability", opt(r.success_probability)},
            {"hellinger_fidelity", opt(r.hellinger_fidelity)},
            {"energy", opt(r.energy)},
            {"relative_error", opt(r.relative_error)},
            {"calibration_us", r.calibration_us},
            {"correction_us", r.correction_us},
            {"distribution", distribution},
            {"zeroed", r.zeroed},
            {"trace", r.trace},
        });
    }
    return {
        {"experiment", report.experiment}, {"spec", report.spec},
        {"environment", report.environment}, {"reference", report.reference},
        {"timings", report.timings}, {"rows", rows},
    };
}

ExperimentReport report_from_json(const nlohmann::json& j) {
    ExperimentReport report;
    report.experiment = j.at("experiment").get<std::string>();
    report.spec = j.at("spec");
    report.environment = j.at("environment");
    report.reference = j.at("reference");
    report.timings = j.at("timings");
    for (const auto& r : j.at("rows")) {
        MetricRow row;
        row.mitigator = r.at("mitigator").get<std::string>();
        row.configuration = r.at("configuration").get<std::string>();
        row.x = r.at("x").get<double>();
        row.ok = r.at("ok").get<bool>();
        row.error = r.at("error").get<std::string>();
        row.success_probability = opt_from(r, "success_probability");
        row.hellinger_fidelity = opt_from(r, "hellinger_fidelity");
        row.energy = opt_from(r, "energy");
        row.relative_error = opt_from(r, "relative_error");
        row.calibration_us = r.at("calibration_us").get<double>();
        row.correction_us = r.at("correction_us").get<double>();
        for (const auto& e : r.at("distribution")) {
            row.distribution.emplace_back(e.at(0).get<std::string>(), e.at(1).get<double>());
        }
        row.zeroed = r.at("zeroed").get<std::vector<BitString>>();
        row.trace = r.at("trace").get<std::vector<double>>();
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace qmitigate
