#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qmitigate/circuits.hpp"
#include "qmitigate/mitigator.hpp"
#include "qmitigate/noise.hpp"

namespace qmitigate {

enum class AnsatzKind { TwoLocal, EfficientSU2 };

AnsatzKind parse_ansatz(std::string_view text);
std::string to_string(AnsatzKind kind);
/// 3 for two_local, 1 for efficient_su2.
int default_reps(AnsatzKind kind);
Circuit build_ansatz(AnsatzKind kind, int qubits, const std::vector<double>& params,
                     std::optional<int> reps = std::nullopt);
int ansatz_parameter_count(AnsatzKind kind, int qubits, std::optional<int> reps = std::nullopt);

/// Starting angles of the two-qubit basic VQE run.
std::vector<double> basic_vqe_initial_angles();

struct VqeConfig {
    Hamiltonian hamiltonian;
    AnsatzKind ansatz = AnsatzKind::TwoLocal;
    std::optional<int> reps;
    std::vector<double> initial_params;
    std::uint64_t shots = 2048;
    /// Use exact statevector expectations instead of sampling.
    bool exact = false;
    NoiseProfile noise;
    MitigatorSpec mitigator;
    std::uint64_t calibration_shots = 10000;
    int max_iterations = 100;
    std::uint64_t seed = 0;

    void validate() const;
};

struct VqeResult {
    double energy = 0.0;
    std::vector<double> params;
    /// Cost before the first sweep followed by the cost after every sweep.
    std::vector<double> trace;
    std::size_t evaluations = 0;
    /// Mitigation time summed over all estimations, microseconds.
    double correction_us = 0.0;
    double calibration_us = 0.0;
};

class MitigationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Sum over terms of coeff * <parity of the rotated, measured, mitigated counts>.
double estimate_energy(const Hamiltonian& h, const Circuit& ansatz, const NoiseProfile& noise,
                       std::uint64_t shots, const MitigatorSpec& mitigator, std::uint64_t seed,
                       const std::vector<QubitCalibration>* cal = nullptr,
                       double* correction_us = nullptr);

/// <psi|H|psi> for the ansatz state, no sampling.
double exact_energy(const Hamiltonian& h, const Circuit& ansatz);

/// Smallest eigenvalue of the dense Hamiltonian. Width at most 12.
double exact_ground_energy(const Hamiltonian& h);

using CostFunction = std::function<double(const std::vector<double>&)>;

inline constexpr double kNftTolerance = 1e-6;

/// Sequential sinusoid-fit coordinate descent. Each sweep visits every
/// parameter, samples the cost at theta and theta +- pi/2, and jumps to the
/// minimum of the fitted c0 + c1 cos(theta - c2).
VqeResult nft_minimize(const CostFunction& cost, std::vector<double> init, int max_iterations,
                       double tolerance = kNftTolerance);

VqeResult run_vqe(const VqeConfig& config);

nlohmann::json to_json(const VqeResult& result);
VqeConfig vqe_config_from_json(const nlohmann::json& j);

}  // namespace qmitigate
