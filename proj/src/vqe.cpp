#include "qmitigate/vqe.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace qmitigate {

AnsatzKind parse_ansatz(std::string_view text) {
    if (text == "two_local" || text == "two-local") return AnsatzKind::TwoLocal;
    if (text == "efficient_su2" || text == "efficient-su2") return AnsatzKind::EfficientSU2;
    throw DomainError("unknown ansatz '" + std::string(text) + "'; expected two_local|efficient_su2");
}

std::string to_string(AnsatzKind kind) {
    return kind == AnsatzKind::TwoLocal ? "two_local" : "efficient_su2";
}

int default_reps(AnsatzKind kind) { return kind == AnsatzKind::TwoLocal ? 3 : 1; }

Circuit build_ansatz(AnsatzKind kind, int qubits, const std::vector<double>& params,
                     std::optional<int> reps) {
    const int r = reps.value_or(default_reps(kind));
    return kind == AnsatzKind::TwoLocal ? two_local(qubits, params, r)
                                        : efficient_su2(qubits, params, r);
}

int ansatz_parameter_count(AnsatzKind kind, int qubits, std::optional<int> reps) {
    const int r = reps.value_or(default_reps(kind));
    return kind == AnsatzKind::TwoLocal ? two_local_parameter_count(qubits, r)
                                        : efficient_su2_parameter_count(qubits, r);
}

std::vector<double> basic_vqe_initial_angles() {
    return {1.22253725, 0.39053752, 0.21462153, 5.48308027,
            2.06984514, 3.65227416, 4.01911194, 0.35749589};
}

void VqeConfig::validate() const {
    if (hamiltonian.terms().empty()) {
        throw DomainError("vqe: empty Hamiltonian");
    }
    if (shots < 1) {
        throw DomainError("vqe: shots must be >= 1");
    }
    if (max_iterations < 1) {
        throw DomainError("vqe: max_iterations must be >= 1");
    }
    const int expected = ansatz_parameter_count(ansatz, hamiltonian.num_qubits(), reps);
    if (initial_params.size() != static_cast<std::size_t>(expected)) {
        throw DomainError("vqe: ansatz " + to_string(ansatz) + " on " +
                          std::to_string(hamiltonian.num_qubits()) + " qubits expects " +
                          std::to_string(expected) + " parameters, got " +
                          std::to_string(initial_params.size()));
    }
    noise.validate();
}

namespace {

using cd = std::complex<double>;

// Applies the Pauli string to basis state `j`: returns (target index, phase).
std::pair<std::size_t, cd> pauli_action(std::string_view paulis, std::size_t j) {
    const std::size_t n = paulis.size();
    std::size_t target = j;
    cd phase{1.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
        const char p = paulis[n - 1 - k];
        const bool one = (j >> k) & 1U;
        switch (p) {
            case 'X': target ^= std::size_t{1} << k; break;
            case 'Y':
                target ^= std::size_t{1} << k;
                phase *= one ? cd{0.0, -1.0} : cd{0.0, 1.0};
                break;
            case 'Z':
                if (one) phase = -phase;
                break;
            default: break;
        }
    }
    return {target, phase};
}

}  // namespace

double exact_energy(const Hamiltonian& h, const Circuit& ansatz) {
    if (ansatz.num_qubits() != h.num_qubits()) {
        throw DomainError("ansatz width does not match the Hamiltonian");
    }
    const Statevector state = final_state(ansatz);
    const auto& psi = state.amplitudes();
    double energy = 0.0;
    for (const auto& term : h.terms()) {
        cd acc{0.0, 0.0};
        for (std::size_t j = 0; j < psi.size(); ++j) {
            const auto [target, phase] = pauli_action(term.paulis, j);
            acc += std::conj(psi[target]) * phase * psi[j];
        }
        energy += term.coefficient * acc.real();
    }
    return energy;
}

double exact_ground_energy(const Hamiltonian& h) {
    const int n = h.num_qubits();
    if (n < 1 || n > 12) {
        throw UnsupportedCircuitError("exact_ground_energy supports 1..12 qubits, got " +
                                      std::to_string(n));
    }
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& term : h.terms()) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            const auto [target, phase] = pauli_action(term.paulis, static_cast<std::size_t>(j));
            m(static_cast<Eigen::Index>(target), j) += term.coefficient * phase;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigensolver failed");
    }
    return solver.eigenvalues().minCoeff();
}

double estimate_energy(const Hamiltonian& h, const Circuit& ansatz, const NoiseProfile& noise,
                       std::uint64_t shots, const MitigatorSpec& mitigator, std::uint64_t seed,
                       const std::vector<QubitCalibration>* cal, double* correction_us) {
    const int n = h.num_qubits();
    if (ansatz.num_qubits() != n) {
        throw DomainError("ansatz width does not match the Hamiltonian");
    }
    double energy = 0.0;
    for (std::size_t t = 0; t < h.terms().size(); ++t) {
        const auto& term = h.terms()[t];
        const BitString mask = term.support_mask();
        if (mask.find('1') == BitString::npos) {
            energy += term.coefficient;
            continue;
        }
        Circuit circuit(n, n);
        circuit.append(ansatz).append(basis_rotation(term.paulis)).measure_all();
        const Counts counts =
            run_shots(circuit, noise, shots, derive_seed(seed, "term/" + std::to_string(t)));
        try {
            const Mitigated m = apply_mitigator(mitigator, counts, cal);
            if (correction_us) *correction_us += m.correction_us;
            energy += term.coefficient * m.parity(mask);
        } catch (const std::exception& e) {
            throw MitigationError("term " + term.paulis + ": " + e.what());
        }
    }
    return energy;
}

VqeResult nft_minimize(const CostFunction& cost, std::vector<double> init, int max_iterations,
                       double tolerance) {
    if (max_iterations < 1) {
        throw DomainError("nft_minimize: max_iterations must be >= 1");
    }
    constexpr double half_pi = std::numbers::pi / 2.0;
    VqeResult result;
    std::vector<double> theta = std::move(init);
    auto eval = [&](const std::vector<double>& x) {
        ++result.evaluations;
        return cost(x);
    };

    double current = eval(theta);
    result.trace.push_back(current);
    for (int sweep = 0; sweep < max_iterations; ++sweep) {
        for (std::size_t j = 0; j < theta.size(); ++j) {
            const double base = theta[j];
            const double f0 = eval(theta);
            theta[j] = base + half_pi;
            const double fp = eval(theta);
            theta[j] = base - half_pi;
            const double fm = eval(theta);
            theta[j] = base;

            // f(base + d) = a + b cos d + c sin d
            const double a = 0.5 * (fp + fm);
            const double b = f0 - a;
            const double c = 0.5 * (fp - fm);
            if (std::hypot(b, c) < 1e-12) {
                continue;
            }
            double step = std::atan2(c, b) + std::numbers::pi;
            if (step > std::numbers::pi) step -= 2.0 * std::numbers::pi;
            theta[j] = base + step;
        }
        const double next = eval(theta);
        result.trace.push_back(next);
        const double improvement = current - next;
        current = next;
        if (improvement < tolerance) {
            break;
        }
    }
    result.energy = result.trace.back();
    result.params = std::move(theta);
    return result;
}

VqeResult run_vqe(const VqeConfig& config) {
    config.validate();
    const Hamiltonian& h = config.hamiltonian;
    const int n = h.num_qubits();

    std::vector<QubitCalibration> cal;
    double calibration_us = 0.0;
    if (config.mitigator.kind == MitigatorSpec::Kind::M3 && !config.exact) {
        const auto start = std::chrono::steady_clock::now();
        cal = calibrate(config.noise, n, config.calibration_shots,
                        derive_seed(config.seed, "calibration"));
        calibration_us = std::chrono::duration<double, std::micro>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    }

    std::uint64_t evaluation = 0;
    double correction_us = 0.0;
    auto cost = [&](const std::vector<double>& params) {
        const Circuit ansatz = build_ansatz(config.ansatz, n, params, config.reps);
        const std::uint64_t seed = derive_seed(config.seed, "eval/" + std::to_string(evaluation++));
        if (config.exact) {
            return exact_energy(h, ansatz);
        }
        return estimate_energy(h, ansatz, config.noise, config.shots, config.mitigator, seed, &cal,
                               &correction_us);
    };
    VqeResult result = nft_minimize(cost, config.initial_params, config.max_iterations);
    result.correction_us = correction_us;
    result.calibration_us = calibration_us;
    return result;
}

nlohmann::json to_json(const VqeResult& result) {
    return {
        {"energy", result.energy},
        {"params", result.params},
        {"trace", result.trace},
        {"evaluations", result.evaluations},
        {"correction_us", result.correction_us},
        {"calibration_us", result.calibration_us},
    };
}

VqeConfig vqe_config_from_json(const nlohmann::json& j) {
    VqeConfig config;
    if (j.contains("hamiltonian")) {
        const auto& hj = j.at("hamiltonian");
        if (hj.is_string()) {
            config.hamiltonian = Hamiltonian::parse(hj.get<std::string>());
        } else {
            std::vector<PauliTerm> terms;
            for (const auto& t : hj) {
                terms.push_back({t.at("coeff").get<double>(), t.at("paulis").get<std::string>()});
            }
            config.hamiltonian = Hamiltonian(std::move(terms));
        }
    } else {
        config.hamiltonian = basic_vqe_hamiltonian();
    }
    config.ansatz = parse_ansatz(j.value("ansatz", std::string("two_local")));
    if (j.contains("reps")) {
        config.reps = j.at("reps").get<int>();
    }
    if (j.contains("initial_params")) {
        config.initial_params = j.at("initial_params").get<std::vector<double>>();
    } else if (config.ansatz == AnsatzKind::TwoLocal && config.hamiltonian.num_qubits() == 2 &&
               config.reps.value_or(default_reps(config.ansatz)) == 3) {
        config.initial_params = basic_vqe_initial_angles();
    } else {
        config.initial_params.assign(
            static_cast<std::size_t>(
                ansatz_parameter_count(config.ansatz, config.hamiltonian.num_qubits(), config.reps)),
            0.1);
    }
    config.shots = j.value("shots", std::uint64_t{2048});
    config.exact = j.value("exact", false);
    if (j.contains("noise")) {
        config.noise = noise_from_json(j.at("noise"));
    }
    config.mitigator = MitigatorSpec::parse(j.value("mitigator", std::string("raw")));
    config.calibration_shots = j.value("calibration_shots", std::uint64_t{10000});
    config.max_iterations = j.value("max_iterations", 100);
    config.seed = j.value("seed", std::uint64_t{0});
    config.validate();
    return config;
}

}  // namespace qmitigate
