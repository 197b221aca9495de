#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qmitigate/dist.hpp"
#include "qmitigate/noise.hpp"

namespace qmitigate {

enum class GateKind { H, X, Z, S, SDG, CX, RX, RY, RZ };

std::string gate_name(GateKind kind);
int gate_arity(GateKind kind);
bool gate_takes_angle(GateKind kind);

struct Gate {
    GateKind kind = GateKind::H;
    /// targets[0] is the control for CX.
    std::vector<int> targets;
    double angle = 0.0;
    /// Apply only when this classical bit reads 1.
    std::optional<int> condition;
};

struct Measure {
    int qubit = 0;
    int clbit = 0;
};

struct Reset {
    int qubit = 0;
};

struct Barrier {};

using Instruction = std::variant<Gate, Measure, Reset, Barrier>;

class UnsupportedCircuitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kMaxQubits = 20;
inline constexpr int kMaxClbits = 64;

class Circuit {
  public:
    Circuit(int num_qubits, int num_clbits);

    int num_qubits() const { return num_qubits_; }
    int num_clbits() const { return num_clbits_; }
    const std::vector<Instruction>& instructions() const { return instructions_; }

    Circuit& add(Gate gate);
    Circuit& h(int q) { return add({GateKind::H, {q}, 0.0, std::nullopt}); }
    Circuit& x(int q) { return add({GateKind::X, {q}, 0.0, std::nullopt}); }
    Circuit& z(int q) { return add({GateKind::Z, {q}, 0.0, std::nullopt}); }
    Circuit& s(int q) { return add({GateKind::S, {q}, 0.0, std::nullopt}); }
    Circuit& sdg(int q) { return add({GateKind::SDG, {q}, 0.0, std::nullopt}); }
    Circuit& cx(int control, int target) { return add({GateKind::CX, {control, target}, 0.0, std::nullopt}); }
    Circuit& rx(int q, double angle) { return add({GateKind::RX, {q}, angle, std::nullopt}); }
    Circuit& ry(int q, double angle) { return add({GateKind::RY, {q}, angle, std::nullopt}); }
    Circuit& rz(int q, double angle) { return add({GateKind::RZ, {q}, angle, std::nullopt}); }
    /// Makes the most recently added gate conditional on `clbit` == 1.
    Circuit& c_if(int clbit);
    Circuit& measure(int qubit, int clbit);
    /// Measures qubit k into classical bit k for every qubit.
    Circuit& measure_all();
    Circuit& reset(int qubit);
    Circuit& barrier();
    /// Appends every instruction of `other`, which must fit this register.
    Circuit& append(const Circuit& other);

    std::size_t gate_count() const;
    std::size_t count(GateKind kind) const;
    /// No reset, no conditional gate, and nothing touches a qubit after it
    /// has been measured.
    bool terminal_measurements_only() const;

  private:
    void check_qubit(int q) const;
    void check_clbit(int c) const;

    int num_qubits_;
    int num_clbits_;
    std::vector<Instruction> instructions_;
};

/// Dense state over n qubits; basis index bit k is qubit k.
class Statevector {
  public:
    explicit Statevector(int num_qubits);

    int num_qubits() const { return num_qubits_; }
    const std::vector<std::complex<double>>& amplitudes() const { return amps_; }
    std::vector<std::complex<double>>& amplitudes() { return amps_; }

    void apply(const Gate& gate);
    /// 1 = X, 2 = Y, 3 = Z.
    void apply_pauli(int qubit, int pauli);
    double probability_one(int qubit) const;
    /// Projects `qubit` onto `outcome` and renormalizes.
    void collapse(int qubit, int outcome);
    double norm() const;
    std::vector<double> probabilities() const;

  private:
    void apply_single(int q, const std::complex<double> (&m)[2][2]);

    int num_qubits_;
    std::vector<std::complex<double>> amps_;
};

Statevector apply_gate(Statevector state, const Gate& gate);

/// Final statevector of the unitary part of `circuit` (measurements skipped).
Statevector final_state(const Circuit& circuit);

/// Exact outcome distribution over the classical register. Requires terminal
/// measurements only.
ProbDist ideal_probabilities(const Circuit& circuit);

/// Per-shot trajectory sampling. Deterministic for a fixed seed.
Counts run_shots(const Circuit& circuit, const NoiseProfile& noise, std::uint64_t shots,
                 std::uint64_t seed);

/// Counter-keyed generator: stream (seed, index) is independent of how many
/// other streams were drawn before it.
class SplitMix64 {
  public:
    using result_type = std::uint64_t;
    SplitMix64(std::uint64_t seed, std::uint64_t stream);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();

  private:
    std::uint64_t state_;
};

/// Derives a named substream seed from a parent seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view name);

}  // namespace qmitigate
