#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qmitigate/dist.hpp"
#include "qmitigate/mitigator.hpp"
#include "qmitigate/noise.hpp"

namespace qmitigate {

inline const std::vector<std::string> kExperimentIds = {
    "ghz-demo", "probs", "bv-sweep", "dynamic-bv", "trotter", "vqe-basic", "heisenberg-vqe",
};

/// Best value the two-local ansatz reaches on the basic VQE Hamiltonian; the
/// reference energy for that experiment.
inline constexpr double kBasicVqeOptimum = -0.44841884382998787;

/// Staggered field of the two-qubit Trotter Hamiltonian.
inline constexpr double kTrotterField = 0.5;

struct ExperimentSpec {
    std::string id;
    NoiseProfile noise = NoiseProfile::paper_like();
    std::string noise_source = "paper-like";
    std::uint64_t shots = 0;
    std::uint64_t seed = 1;
    std::vector<MitigatorSpec> mitigators;
    /// Qubit range (circuit width, secret length or ring size).
    int min_width = 0;
    int max_width = 0;
    std::vector<int> trotter_steps;
    double trotter_dt = 0.1;
    int max_iterations = 100;
    std::uint64_t calibration_shots = 10000;

    /// Per-experiment defaults; throws DomainError for an unknown id.
    static ExperimentSpec defaults(std::string_view id);
    void validate() const;
};

nlohmann::json to_json(const ExperimentSpec& spec);

/// One (mitigator, configuration) cell of an experiment.
struct MetricRow {
    std::string mitigator;
    std::string configuration;
    double x = 0.0;
    bool ok = true;
    std::string error;
    std::optional<double> success_probability;
    std::optional<double> hellinger_fidelity;
    std::optional<double> energy;
    std::optional<double> relative_error;
    double calibration_us = 0.0;
    double correction_us = 0.0;
    Table<double> distribution;
    std::vector<BitString> zeroed;
    std::vector<double> trace;

    friend bool operator==(const MetricRow&, const MetricRow&) = default;
};

struct ExperimentReport {
    std::string experiment;
    nlohmann::json spec;
    nlohmann::json environment;
    /// Ideal distributions, reference energies.
    nlohmann::json reference;
    /// Calibration and correction time per mitigator, microseconds.
    nlohmann::json timings;
    std::vector<MetricRow> rows;

    const MetricRow* find(std::string_view mitigator, std::string_view configuration) const;
    /// Configuration labels in first-seen order.
    std::vector<std::string> configurations() const;
    std::vector<std::string> mitigators() const;

    friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

/// Builds circuits, samples them, applies every mitigator to the same counts
/// and scores the results. Mitigator failures are recorded per row.
ExperimentReport run_experiment(const ExperimentSpec& spec);

nlohmann::json to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::json& j);

}  // namespace qmitigate
