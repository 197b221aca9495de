#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qmitigate/dist.hpp"
#include "qmitigate/simulator.hpp"

namespace qmitigate {

/// coefficient * P_{n-1} ... P_1 P_0; `paulis[k]` from the right acts on
/// qubit k, matching the bitstring convention.
struct PauliTerm {
    double coefficient = 0.0;
    std::string paulis;

    /// '1' where the term acts with a non-identity Pauli.
    BitString support_mask() const;
};

class Hamiltonian {
  public:
    Hamiltonian() = default;
    explicit Hamiltonian(std::vector<PauliTerm> terms);

    const std::vector<PauliTerm>& terms() const { return terms_; }
    int num_qubits() const { return terms_.empty() ? 0 : static_cast<int>(terms_.front().paulis.size()); }

    /// Lines of "<coeff> <paulistring>"; blank lines and '#' comments ignored.
    static Hamiltonian parse(std::string_view text);
    std::string to_string() const;

  private:
    std::vector<PauliTerm> terms_;
};

/// 0.3979 YZ - 0.3979 ZI - 0.01128 ZZ + 0.1809 XX
Hamiltonian basic_vqe_hamiltonian();

/// Nearest-neighbour XX + YY + ZZ on an open chain (ring = false) or ring,
/// plus an optional staggered longitudinal field sum_k (-1)^k h Z_k.
Hamiltonian heisenberg(int qubits, bool ring, double coupling = 1.0, double staggered_field = 0.0);

Circuit ghz(int qubits);
Circuit bv(std::string_view secret);
Circuit dynamic_bv(std::string_view secret);

/// First-order Trotter product: `steps` repetitions of exp(-i c dt P) per term
/// in listed order, after preparing `initial` (X on every '1'), then measures
/// every qubit. `initial` may be empty for |0...0>.
Circuit trotter_step(const Hamiltonian& h, double dt, int steps, std::string_view initial = {});

int two_local_parameter_count(int qubits, int reps = 3);
/// reps + 1 RY layers separated by full-entanglement CX blocks (every pair
/// i < j). Real amplitudes only. No measurement.
Circuit two_local(int qubits, const std::vector<double>& params, int reps = 3);

int efficient_su2_parameter_count(int qubits, int reps = 1);
/// RY and RZ rotation layers around reverse-linear CX blocks. No measurement.
Circuit efficient_su2(int qubits, const std::vector<double>& params, int reps = 1);

/// Rotates a Pauli string into the computational basis: X -> H, Y -> SDG then H.
Circuit basis_rotation(std::string_view paulis);

}  // namespace qmitigate
