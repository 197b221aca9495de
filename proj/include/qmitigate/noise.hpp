#pragma once

#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

namespace qmitigate {

/// Single-qubit readout confusion rates.
struct QubitCalibration {
    double e01 = 0.0;  // P(read 1 | prepared 0)
    double e10 = 0.0;  // P(read 0 | prepared 1)

    void validate() const;
    friend bool operator==(const QubitCalibration&, const QubitCalibration&) = default;
};

/// Readout flips per qubit plus depolarizing (random Pauli) gate noise.
/// Qubits beyond `readout.size()` read out perfectly.
struct NoiseProfile {
    std::vector<QubitCalibration> readout;
    double p1 = 0.0;
    double p2 = 0.0;

    void validate() const;
    bool noiseless() const;
    QubitCalibration readout_for(int qubit) const;

    static NoiseProfile ideal() { return {}; }
    /// Uniform per-qubit readout rates over `qubits` qubits.
    static NoiseProfile uniform(int qubits, double e01, double e10, double p1, double p2);
    /// e01 = 0.01, e10 = 0.02, p1 = 0.001, p2 = 0.01 on every qubit.
    static NoiseProfile paper_like(int qubits = 20);
};

nlohmann::json to_json(const QubitCalibration& cal);
nlohmann::json calibrations_to_json(const std::vector<QubitCalibration>& cals);
std::vector<QubitCalibration> calibrations_from_json(const nlohmann::json& j);

/// {"readout": [{"e01":..,"e10":..}, ...], "p1": .., "p2": ..}
nlohmann::json to_json(const NoiseProfile& noise);
NoiseProfile noise_from_json(const nlohmann::json& j);
NoiseProfile load_noise_profile(const std::filesystem::path& path);

}  // namespace qmitigate
