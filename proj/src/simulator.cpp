#include "qmitigate/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <unordered_map>

namespace qmitigate {

using cd = std::complex<double>;

std::string gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::H: return "h";
        case GateKind::X: return "x";
        case GateKind::Z: return "z";
        case GateKind::S: return "s";
        case GateKind::SDG: return "sdg";
        case GateKind::CX: return "cx";
        case GateKind::RX: return "rx";
        case GateKind::RY: return "ry";
        case GateKind::RZ: return "rz";
    }
    return "?";
}

int gate_arity(GateKind kind) { return kind == GateKind::CX ? 2 : 1; }

bool gate_takes_angle(GateKind kind) {
    return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
}

// ---------------------------------------------------------------------------
// Circuit

Circuit::Circuit(int num_qubits, int num_clbits) : num_qubits_(num_qubits), num_clbits_(num_clbits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw DomainError("circuit width " + std::to_string(num_qubits) + " outside [1, " +
                          std::to_string(kMaxQubits) + "]");
    }
    if (num_clbits < 0 || num_clbits > kMaxClbits) {
        throw DomainError("classical register size " + std::to_string(num_clbits) +
                          " outside [0, " + std::to_string(kMaxClbits) + "]");
    }
}

void Circuit::check_qubit(int q) const {
    if (q < 0 || q >= num_qubits_) {
        throw DomainError("qubit index " + std::to_string(q) + " out of range for " +
                          std::to_string(num_qubits_) + "-qubit circuit");
    }
}

void Circuit::check_clbit(int c) const {
    if (c < 0 || c >= num_clbits_) {
        throw DomainError("classical bit " + std::to_string(c) + " out of range for " +
                          std::to_string(num_clbits_) + "-bit register");
    }
}

Circuit& Circuit::add(Gate gate) {
    if (static_cast<int>(gate.targets.size()) != gate_arity(gate.kind)) {
        throw DomainError("gate " + gate_name(gate.kind) + " expects " +
                          std::to_string(gate_arity(gate.kind)) + " target(s)");
    }
    for (int q : gate.targets) {
        check_qubit(q);
    }
    if (gate.targets.size() == 2 && gate.targets[0] == gate.targets[1]) {
        throw DomainError("cx control and target must differ");
    }
    if (!gate_takes_angle(gate.kind) && gate.angle != 0.0) {
        throw DomainError("gate " + gate_name(gate.kind) + " takes no angle");
    }
    if (!std::isfinite(gate.angle)) {
        throw DomainError("gate angle must be finite");
    }
    if (gate.condition) {
        check_clbit(*gate.condition);
    }
    instructions_.emplace_back(std::move(gate));
    return *this;
}

Circuit& Circuit::c_if(int clbit) {
    check_clbit(clbit);
    if (instructions_.empty() || !std::holds_alternative<Gate>(instructions_.back())) {
        throw DomainError("c_if must follow a gate");
    }
    std::get<Gate>(instructions_.back()).condition = clbit;
    return *this;
}

Circuit& Circuit::measure(int qubit, int clbit) {
    check_qubit(qubit);
    check_clbit(clbit);
    instructions_.emplace_back(Measure{qubit, clbit});
    return *this;
}

Circuit& Circuit::measure_all() {
    if (num_clbits_ < num_qubits_) {
        throw DomainError("measure_all needs at least as many classical bits as qubits");
    }
    for (int q = 0; q < num_qubits_; ++q) {
        instructions_.emplace_back(Measure{q, q});
    }
    return *this;
}

Circuit& Circuit::reset(int qubit) {
    check_qubit(qubit);
    instructions_.emplace_back(Reset{qubit});
    return *this;
}

Circuit& Circuit::barrier() {
    instructions_.emplace_back(Barrier{});
    return *this;
}

Circuit& Circuit::append(const Circuit& other) {
    if (other.num_qubits_ > num_qubits_ || other.num_clbits_ > num_clbits_) {
        throw DomainError("appended circuit does not fit the register");
    }
    instructions_.insert(instructions_.end(), other.instructions_.begin(), other.instructions_.end());
    return *this;
}

std::size_t Circuit::gate_count() const {
    return static_cast<std::size_t>(std::count_if(
        instructions_.begin(), instructions_.end(),
        [](const Instruction& ins) { return std::holds_alternative<Gate>(ins); }));
}

std::size_t Circuit::count(GateKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(instructions_.begin(), instructions_.end(), [kind](const Instruction& ins) {
            const auto* g = std::get_if<Gate>(&ins);
            return g && g->kind == kind;
        }));
}

bool Circuit::terminal_measurements_only() const {
    std::vector<bool> measured(static_cast<std::size_t>(num_qubits_), false);
    for (const auto& ins : instructions_) {
        if (const auto* g = std::get_if<Gate>(&ins)) {
            if (g->condition) {
                return false;
            }
            for (int q : g->targets) {
                if (measured[static_cast<std::size_t>(q)]) {
                    return false;
                }
            }
        } else if (const auto* m = std::get_if<Measure>(&ins)) {
            if (measured[static_cast<std::size_t>(m->qubit)]) {
                return false;
            }
            measured[static_cast<std::size_t>(m->qubit)] = true;
        } else if (std::holds_alternative<Reset>(ins)) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Statevector

Statevector::Statevector(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw DomainError("statevector width " + std::to_string(num_qubits) + " outside [1, " +
                          std::to_string(kMaxQubits) + "]");
    }
    amps_.assign(std::size_t{1} << num_qubits, cd{0.0, 0.0});
    amps_[0] = 1.0;
}

void Statevector::apply_single(int q, const cd (&m)[2][2]) {
    const std::size_t stride = std::size_t{1} << q;
    const std::size_t dim = amps_.size();
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const cd a0 = amps_[i];
            const cd a1 = amps_[i + stride];
            amps_[i] = m[0][0] * a0 + m[0][1] * a1;
            amps_[i + stride] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}

void Statevector::apply(const Gate& gate) {
    const int q = gate.targets.at(0);
    if (q < 0 || q >= num_qubits_) {
        throw DomainError("gate target out of range");
    }
    constexpr cd I{0.0, 1.0};
    const double r = 1.0 / std::numbers::sqrt2;
    const double c = std::cos(gate.angle / 2.0);
    const double s = std::sin(gate.angle / 2.0);
    switch (gate.kind) {
        case GateKind::H: {
            const cd m[2][2] = {{r, r}, {r, -r}};
            apply_single(q, m);
            break;
        }
        case GateKind::X: apply_pauli(q, 1); break;
        case GateKind::Z: apply_pauli(q, 3); break;
        case GateKind::S: {
            const cd m[2][2] = {{1.0, 0.0}, {0.0, I}};
            apply_single(q, m);
            break;
        }
        case GateKind::SDG: {
            const cd m[2][2] = {{1.0, 0.0}, {0.0, -I}};
            apply_single(q, m);
            break;
        }
        case GateKind::RX: {
            const cd m[2][2] = {{c, -I * s}, {-I * s, c}};
            apply_single(q, m);
            break;
        }
        case GateKind::RY: {
            const cd m[2][2] = {{c, -s}, {s, c}};
            apply_single(q, m);
            break;
        }
        case GateKind::RZ: {
            const cd m[2][2] = {{cd{c, -s}, 0.0}, {0.0, cd{c, s}}};
            apply_single(q, m);
            break;
        }
        case GateKind::CX: {
            const int t = gate.targets.at(1);
            if (t < 0 || t >= num_qubits_ || t == q) {
                throw DomainError("cx target out of range");
            }
            const std::size_t cmask = std::size_t{1} << q;
            const std::size_t tmask = std::size_t{1} << t;
            for (std::size_t i = 0; i < amps_.size(); ++i) {
                if ((i & cmask) && !(i & tmask)) {
                    std::swap(amps_[i], amps_[i | tmask]);
                }
            }
            break;
        }
    }
}

void Statevector::apply_pauli(int qubit, int pauli) {
    const std::size_t mask = std::size_t{1} << qubit;
    constexpr cd I{0.0, 1.0};
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if (i & mask) {
            continue;
        }
        cd& a0 = amps_[i];
        cd& a1 = amps_[i | mask];
        switch (pauli) {
            case 1: std::swap(a0, a1); break;
            case 2: {
                const cd t0 = a0;
                a0 = -I * a1;
                a1 = I * t0;
                break;
            }
            case 3: a1 = -a1; break;
            default: break;
        }
    }
}

double Statevector::probability_one(int qubit) const {
    const std::size_t mask = std::size_t{1} << qubit;
    double p = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if (i & mask) {
            p += std::norm(amps_[i]);
        }
    }
    return p;
}

void Statevector::collapse(int qubit, int outcome) {
    const std::size_t mask = std::size_t{1} << qubit;
    double kept = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        const bool one = (i & mask) != 0;
        if (one != (outcome == 1)) {
            amps_[i] = 0.0;
        } else {
            kept += std::norm(amps_[i]);
        }
    }
    if (kept <= 0.0) {
        throw std::logic_error("collapse onto a zero-probability outcome");
    }
    const double scale = 1.0 / std::sqrt(kept);
    for (auto& a : amps_) {
        a *= scale;
    }
}

double Statevector::norm() const {
    double sum = 0.0;
    for (const auto& a : amps_) {
        sum += std::norm(a);
    }
    return std::sqrt(sum);
}

std::vector<double> Statevector::probabilities() const {
    std::vector<double> out(amps_.size());
    std::transform(amps_.begin(), amps_.end(), out.begin(), [](const cd& a) { return std::norm(a); });
    return out;
}

Statevector apply_gate(Statevector state, const Gate& gate) {
    state.apply(gate);
    return state;
}

// ---------------------------------------------------------------------------
// Random streams

namespace {

constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

SplitMix64::SplitMix64(std::uint64_t seed, std::uint64_t stream)
    : state_(mix64(seed ^ mix64(stream + 0x9e3779b97f4a7c15ULL))) {}

SplitMix64::result_type SplitMix64::operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
}

double SplitMix64::uniform() {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view name) {
    // FNV-1a over the name, then mixed with the parent seed.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : name) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return mix64(seed ^ mix64(h));
}

// ---------------------------------------------------------------------------
// Simulation

namespace {

std::string clbits_to_string(std::uint64_t bits, int width) {
    std::string out(static_cast<std::size_t>(width), '0');
    for (int k = 0; k < width; ++k) {
        if ((bits >> k) & 1U) {
            out[static_cast<std::size_t>(width - 1 - k)] = '1';
        }
    }
    return out;
}

std::vector<Measure> terminal_measures(const Circuit& circuit) {
    std::vector<Measure> out;
    for (const auto& ins : circuit.instructions()) {
        if (const auto* m = std::get_if<Measure>(&ins)) {
            out.push_back(*m);
        }
    }
    return out;
}

std::uint64_t map_to_clbits(std::size_t basis, const std::vector<Measure>& measures) {
    std::uint64_t bits = 0;
    for (const auto& m : measures) {
        const std::uint64_t bit = (basis >> m.qubit) & 1U;
        bits = (bits & ~(std::uint64_t{1} << m.clbit)) | (bit << m.clbit);
    }
    return bits;
}

int flip_readout(int bit, const QubitCalibration& cal, SplitMix64& rng) {
    const double rate = bit == 0 ? cal.e01 : cal.e10;
    if (rate > 0.0 && rng.uniform() < rate) {
        return 1 - bit;
    }
    return bit;
}

// A Pauli inserted after gate `gate_index` on `qubit`.
struct PauliFault {
    std::size_t gate_index;
    int qubit;
    int pauli;
};

double gate_error_rate(const Gate& g, const NoiseProfile& noise) {
    return gate_arity(g.kind) == 2 ? noise.p2 : noise.p1;
}

void draw_faults(const Gate& g, std::size_t index, const NoiseProfile& noise, SplitMix64& rng,
                 std::vector<PauliFault>& faults) {
    const double p = gate_error_rate(g, noise);
    if (p > 0.0 && rng.uniform() < p) {
        for (int q : g.targets) {
            faults.push_back({index, q, 1 + static_cast<int>(rng() % 3)});
        }
    }
}

std::size_t sample_index(const std::vector<double>& cumulative, SplitMix64& rng) {
    const double u = rng.uniform() * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) {
        --it;
    }
    return static_cast<std::size_t>(it - cumulative.begin());
}

std::vector<double> cumulative_of(const Statevector& state) {
    std::vector<double> cum = state.probabilities();
    std::partial_sum(cum.begin(), cum.end(), cum.begin());
    return cum;
}

class TerminalSampler {
  public:
    TerminalSampler(const Circuit& circuit, const NoiseProfile& noise)
        : circuit_(circuit), noise_(noise), measures_(terminal_measures(circuit)) {
        for (const auto& ins : circuit.instructions()) {
            if (const auto* g = std::get_if<Gate>(&ins)) {
                gates_.push_back(g);
            }
        }
        clean_cumulative_ = cumulative_of(evolve({}));
    }

    std::uint64_t shot(SplitMix64& rng) {
        faults_.clear();
        for (std::size_t i = 0; i < gates_.size(); ++i) {
            draw_faults(*gates_[i], i, noise_, rng, faults_);
        }
        std::size_t basis = 0;
        if (faults_.empty()) {
            basis = sample_index(clean_cumulative_, rng);
        } else {
            basis = sample_index(cumulative_of(evolve(faults_)), rng);
        }
        std::uint64_t bits = 0;
        for (const auto& m : measures_) {
            int bit = static_cast<int>((basis >> m.qubit) & 1U);
            bit = flip_readout(bit, noise_.readout_for(m.qubit), rng);
            bits = (bits & ~(std::uint64_t{1} << m.clbit)) |
                   (static_cast<std::uint64_t>(bit) << m.clbit);
        }
        return bits;
    }

  private:
    Statevector evolve(const std::vector<PauliFault>& faults) const {
        Statevector state(circuit_.num_qubits());
        std::size_t next = 0;
        for (std::size_t i = 0; i < gates_.size(); ++i) {
            state.apply(*gates_[i]);
            while (next < faults.size() && faults[next].gate_index == i) {
                state.apply_pauli(faults[next].qubit, faults[next].pauli);
                ++next;
            }
        }
        return state;
    }

    const Circuit& circuit_;
    const NoiseProfile& noise_;
    std::vector<Measure> measures_;
    std::vector<const Gate*> gates_;
    std::vector<double> clean_cumulative_;
    std::vector<PauliFault> faults_;
};

std::uint64_t dynamic_shot(const Circuit& circuit, const NoiseProfile& noise, SplitMix64& rng) {
    Statevector state(circuit.num_qubits());
    std::uint64_t bits = 0;
    std::vector<PauliFault> faults;
    for (const auto& ins : circuit.instructions()) {
        if (const auto* g = std::get_if<Gate>(&ins)) {
            if (g->condition && ((bits >> *g->condition) & 1U) == 0) {
                continue;
            }
            state.apply(*g);
            faults.clear();
            draw_faults(*g, 0, noise, rng, faults);
            for (const auto& f : faults) {
                state.apply_pauli(f.qubit, f.pauli);
            }
        } else if (const auto* m = std::get_if<Measure>(&ins)) {
            const double p1 = state.probability_one(m->qubit);
            const int outcome = rng.uniform() < p1 ? 1 : 0;
            state.collapse(m->qubit, outcome);
            const int recorded = flip_readout(outcome, noise.readout_for(m->qubit), rng);
            bits = (bits & ~(std::uint64_t{1} << m->clbit)) |
                   (static_cast<std::uint64_t>(recorded) << m->clbit);
        } else if (const auto* r = std::get_if<Reset>(&ins)) {
            const double p1 = state.probability_one(r->qubit);
            const int outcome = rng.uniform() < p1 ? 1 : 0;
            state.collapse(r->qubit, outcome);
            if (outcome == 1) {
                state.apply_pauli(r->qubit, 1);
            }
        }
    }
    return bits;
}

}  // namespace

Statevector final_state(const Circuit& circuit) {
    Statevector state(circuit.num_qubits());
    for (const auto& ins : circuit.instructions()) {
        if (const auto* g = std::get_if<Gate>(&ins)) {
            if (g->condition) {
                throw UnsupportedCircuitError("conditional gates need run_shots");
            }
            state.apply(*g);
        } else if (std::holds_alternative<Reset>(ins)) {
            throw UnsupportedCircuitError("reset needs run_shots");
        }
    }
    return state;
}

ProbDist ideal_probabilities(const Circuit& circuit) {
    if (!circuit.terminal_measurements_only()) {
        throw UnsupportedCircuitError(
            "ideal_probabilities supports terminal measurements only; circuits with mid-circuit "
            "measurement, reset or conditional gates must be sampled with run_shots");
    }
    const Statevector state = final_state(circuit);
    const auto measures = terminal_measures(circuit);
    std::unordered_map<std::uint64_t, double> acc;
    const auto& amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        if (p > 0.0) {
            acc[map_to_clbits(i, measures)] += p;
        }
    }
    const int width = std::max(1, circuit.num_clbits());
    Table<double> entries;
    for (const auto& [bits, p] : acc) {
        if (p > 1e-14) {
            entries.emplace_back(clbits_to_string(bits, width), p);
        }
    }
    return ProbDist(std::move(entries));
}

Counts run_shots(const Circuit& circuit, const NoiseProfile& noise, std::uint64_t shots,
                 std::uint64_t seed) {
    if (shots == 0) {
        throw DomainError("run_shots: shots must be positive");
    }
    if (circuit.num_clbits() == 0) {
        throw DomainError("run_shots: circuit has no classical bits");
    }
    noise.validate();
    std::unordered_map<std::uint64_t, std::uint64_t> tallies;
    if (circuit.terminal_measurements_only()) {
        TerminalSampler sampler(circuit, noise);
        for (std::uint64_t s = 0; s < shots; ++s) {
            SplitMix64 rng(seed, s);
            ++tallies[sampler.shot(rng)];
        }
    } else {
        for (std::uint64_t s = 0; s < shots; ++s) {
            SplitMix64 rng(seed, s);
            ++tallies[dynamic_shot(circuit, noise, rng)];
        }
    }
    Table<std::uint64_t> entries;
    entries.reserve(tallies.size());
    for (const auto& [bits, n] : tallies) {
        entries.emplace_back(clbits_to_string(bits, circuit.num_clbits()), n);
    }
    return Counts(std::move(entries), shots);
}

}  // namespace qmitigate
