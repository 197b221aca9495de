#include "qmitigate/circuits.hpp"

#include <charconv>
#include <sstream>

namespace qmitigate {

BitString PauliTerm::support_mask() const {
    BitString mask(paulis.size(), '0');
    for (std::size_t i = 0; i < paulis.size(); ++i) {
        if (paulis[i] != 'I') mask[i] = '1';
    }
    return mask;
}

namespace {

void validate_paulis(std::string_view paulis) {
    if (paulis.empty()) {
        throw DomainError("Pauli string must be non-empty");
    }
    for (char c : paulis) {
        if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
            throw DomainError("invalid Pauli character '" + std::string(1, c) + "' in '" +
                              std::string(paulis) + "'");
        }
    }
}

// Pauli acting on qubit k.
char pauli_on(std::string_view paulis, int k) {
    return paulis[paulis.size() - 1 - static_cast<std::size_t>(k)];
}

void validate_secret(std::string_view secret) {
    validate_bitstring(secret);
    if (secret.size() > static_cast<std::size_t>(kMaxClbits)) {
        throw DomainError("secret longer than the classical register limit");
    }
}

bool secret_bit(std::string_view secret, int k) {
    return secret[secret.size() - 1 - static_cast<std::size_t>(k)] == '1';
}

// Maps the Pauli on `q` onto Z.
void to_z_basis(Circuit& c, char pauli, int q) {
    if (pauli == 'X') {
        c.h(q);
    } else if (pauli == 'Y') {
        c.sdg(q).h(q);
    }
}

void from_z_basis(Circuit& c, char pauli, int q) {
    if (pauli == 'X') {
        c.h(q);
    } else if (pauli == 'Y') {
        c.h(q).s(q);
    }
}

void check_params(const char* name, std::size_t got, int expected) {
    if (got != static_cast<std::size_t>(expected)) {
        throw DomainError(std::string(name) + " expects " + std::to_string(expected) +
                          " parameters, got " + std::to_string(got));
    }
}

}  // namespace

Hamiltonian::Hamiltonian(std::vector<PauliTerm> terms) : terms_(std::move(terms)) {
    for (const auto& t : terms_) {
        validate_paulis(t.paulis);
        if (t.paulis.size() != terms_.front().paulis.size()) {
            throw DomainError("Hamiltonian terms have mixed widths");
        }
    }
}

Hamiltonian Hamiltonian::parse(std::string_view text) {
    std::vector<PauliTerm> terms;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string coeff;
        std::string paulis;
        if (!(fields >> coeff)) continue;
        std::string extra;
        if (!(fields >> paulis) || (fields >> extra)) {
            throw DomainError("Hamiltonian line " + std::to_string(lineno) +
                              ": expected '<coeff> <paulistring>'");
        }
        double value = 0.0;
        const char* first = coeff.data();
        if (!coeff.empty() && coeff.front() == '+') ++first;
        auto [ptr, ec] = std::from_chars(first, coeff.data() + coeff.size(), value);
        if (ec != std::errc{} || ptr != coeff.data() + coeff.size()) {
            throw DomainError("Hamiltonian line " + std::to_string(lineno) + ": bad coefficient '" +
                              coeff + "'");
        }
        terms.push_back({value, paulis});
    }
    return Hamiltonian(std::move(terms));
}

std::string Hamiltonian::to_string() const {
    std::ostringstream out;
    out.precision(17);
    for (const auto& t : terms_) {
        out << t.coefficient << ' ' << t.paulis << '\n';
    }
    return out.str();
}

Hamiltonian basic_vqe_hamiltonian() {
    return Hamiltonian({{0.3979, "YZ"}, {-0.3979, "ZI"}, {-0.01128, "ZZ"}, {0.1809, "XX"}});
}

Hamiltonian heisenberg(int qubits, bool ring, double coupling, double staggered_field) {
    if (qubits < 2) {
        throw DomainError("Heisenberg model needs at least 2 qubits");
    }
    const auto n = static_cast<std::size_t>(qubits);
    std::vector<PauliTerm> terms;
    const int bonds = ring && qubits > 2 ? qubits : qubits - 1;
    for (int b = 0; b < bonds; ++b) {
        const int i = b;
        const int j = (b + 1) % qubits;
        for (char p : {'X', 'Y', 'Z'}) {
            std::string s(n, 'I');
            s[n - 1 - static_cast<std::size_t>(i)] = p;
            s[n - 1 - static_cast<std::size_t>(j)] = p;
            terms.push_back({coupling, s});
        }
    }
    if (staggered_field != 0.0) {
        for (int k = 0; k < qubits; ++k) {
            std::string s(n, 'I');
            s[n - 1 - static_cast<std::size_t>(k)] = 'Z';
            terms.push_back({k % 2 == 0 ? staggered_field : -staggered_field, s});
        }
    }
    return Hamiltonian(std::move(terms));
}

Circuit ghz(int qubits) {
    if (qubits < 2) {
        throw DomainError("ghz needs at least 2 qubits, got " + std::to_string(qubits));
    }
    Circuit c(qubits, qubits);
    c.h(0);
    for (int q = 0; q + 1 < qubits; ++q) {
        c.cx(q, q + 1);
    }
    c.measure_all();
    return c;
}

Circuit bv(std::string_view secret) {
    validate_secret(secret);
    const int n = static_cast<int>(secret.size());
    if (n + 1 > kMaxQubits) {
        throw DomainError("bv secret too long for the simulator");
    }
    const int ancilla = n;
    Circuit c(n + 1, n);
    c.x(ancilla).h(ancilla);
    for (int q = 0; q < n; ++q) c.h(q);
    c.barrier();
    for (int q = 0; q < n; ++q) {
        if (secret_bit(secret, q)) c.cx(q, ancilla);
    }
    c.barrier();
    for (int q = 0; q < n; ++q) c.h(q);
    for (int q = 0; q < n; ++q) c.measure(q, q);
    return c;
}

Circuit dynamic_bv(std::string_view secret) {
    validate_secret(secret);
    const int rounds = static_cast<int>(secret.size());
    Circuit c(2, rounds);
    c.x(1).h(1);
    for (int k = 0; k < rounds; ++k) {
        c.h(0);
        if (secret_bit(secret, k)) c.cx(0, 1);
        c.h(0);
        c.measure(0, k);
        if (k + 1 < rounds) {
            // Conditional reset: flip the data qubit back when it read 1.
            c.x(0).c_if(k);
        }
    }
    return c;
}

Circuit trotter_step(const Hamiltonian& h, double dt, int steps, std::string_view initial) {
    const int n = h.num_qubits();
    if (n == 0) {
        throw DomainError("trotter_step needs a non-empty Hamiltonian");
    }
    if (steps < 0) {
        throw DomainError("trotter_step: steps must be non-negative");
    }
    for (const auto& t : h.terms()) {
        int weight = 0;
        for (char p : t.paulis) weight += p != 'I';
        if (weight > 2) {
            throw UnsupportedCircuitError("trotter_step supports 1- and 2-local terms only; got " +
                                          t.paulis);
        }
    }
    Circuit c(n, n);
    if (!initial.empty()) {
        validate_bitstring(initial);
        if (initial.size() != static_cast<std::size_t>(n)) {
            throw DomainError("initial state width does not match the Hamiltonian");
        }
        for (int q = 0; q < n; ++q) {
            if (secret_bit(initial, q)) c.x(q);
        }
    }
    for (int step = 0; step < steps; ++step) {
        for (const auto& t : h.terms()) {
            std::vector<int> support;
            for (int q = 0; q < n; ++q) {
                if (pauli_on(t.paulis, q) != 'I') support.push_back(q);
            }
            if (support.empty()) continue;  // global phase
            const double angle = 2.0 * t.coefficient * dt;
            for (int q : support) to_z_basis(c, pauli_on(t.paulis, q), q);
            if (support.size() == 1) {
                c.rz(support[0], angle);
            } else {
                c.cx(support[0], support[1]);
                c.rz(support[1], angle);
                c.cx(support[0], support[1]);
            }
            for (int q : support) from_z_basis(c, pauli_on(t.paulis, q), q);
        }
    }
    c.measure_all();
    return c;
}

int two_local_parameter_count(int qubits, int reps) { return qubits * (reps + 1); }

int efficient_su2_parameter_count(int qubits, int reps) { return 2 * qubits * (reps + 1); }

namespace {

Circuit rotation_ansatz(const char* name, int qubits, const std::vector<double>& params, int reps,
                        bool with_rz, bool full_entanglement) {
    if (qubits < 1) {
        throw DomainError(std::string(name) + " needs at least one qubit");
    }
    if (reps < 0) {
        throw DomainError(std::string(name) + ": reps must be non-negative");
    }
    const int per_layer = with_rz ? 2 * qubits : qubits;
    check_params(name, params.size(), per_layer * (reps + 1));
    Circuit c(qubits, qubits);
    std::size_t idx = 0;
    for (int layer = 0; layer <= reps; ++layer) {
        for (int q = 0; q < qubits; ++q) c.ry(q, params[idx++]);
        if (with_rz) {
            for (int q = 0; q < qubits; ++q) c.rz(q, params[idx++]);
        }
        if (layer == reps) break;
        if (full_entanglement) {
            for (int i = 0; i < qubits; ++i) {
                for (int j = i + 1; j < qubits; ++j) c.cx(i, j);
            }
        } else {
            for (int i = qubits - 2; i >= 0; --i) c.cx(i, i + 1);
        }
    }
    return c;
}

}  // namespace

Circuit two_local(int qubits, const std::vector<double>& params, int reps) {
    return rotation_ansatz("two_local", qubits, params, reps, false, true);
}

Circuit efficient_su2(int qubits, const std::vector<double>& params, int reps) {
    return rotation_ansatz("efficient_su2", qubits, params, reps, true, false);
}

Circuit basis_rotation(std::string_view paulis) {
    validate_paulis(paulis);
    const int n = static_cast<int>(paulis.size());
    Circuit c(n, n);
    for (int q = 0; q < n; ++q) {
        to_z_basis(c, pauli_on(paulis, q), q);
    }
    return c;
}

}  // namespace qmitigate
