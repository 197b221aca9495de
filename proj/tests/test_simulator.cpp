#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qmitigate/circuits.hpp"
#include "qmitigate/simulator.hpp"

using namespace qmitigate;

namespace {

Statevector random_state(std::mt19937_64& rng, int n) {
    Statevector s(n);
    std::normal_distribution<double> g;
    double norm = 0.0;
    for (auto& a : s.amplitudes()) {
        a = {g(rng), g(rng)};
        norm += std::norm(a);
    }
    for (auto& a : s.amplitudes()) a /= std::sqrt(norm);
    return s;
}

double max_diff(const Statevector& a, const Statevector& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.amplitudes().size(); ++i) {
        m = std::max(m, std::abs(a.amplitudes()[i] - b.amplitudes()[i]));
    }
    return m;
}

Gate gate(GateKind k, std::vector<int> t, double angle = 0.0) {
    return Gate{k, std::move(t), angle, std::nullopt};
}

}  // namespace

TEST_CASE("circuit invariants") {
    CHECK_THROWS_AS(Circuit(0, 0), DomainError);
    CHECK_THROWS_AS(Circuit(21, 0), DomainError);
    Circuit c(2, 1);
    CHECK_THROWS_AS(c.h(2), DomainError);
    CHECK_THROWS_AS(c.measure(0, 1), DomainError);
    CHECK_THROWS_AS(c.cx(1, 1), DomainError);
    CHECK_THROWS_AS(c.add(Gate{GateKind::H, {0}, 0.5, std::nullopt}), DomainError);
    CHECK_THROWS_AS(c.add(Gate{GateKind::RX, {0, 1}, 0.5, std::nullopt}), DomainError);
    CHECK_THROWS_AS(c.c_if(0), DomainError);
    c.h(0).cx(0, 1).measure(0, 0);
    CHECK(c.gate_count() == 2);
    CHECK(c.count(GateKind::CX) == 1);
    CHECK(c.terminal_measurements_only());
    c.x(0).c_if(0);
    CHECK_FALSE(c.terminal_measurements_only());
}

TEST_CASE("H is an involution and rotations invert") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const Statevector s = random_state(rng, 3);
        const Statevector hh = apply_gate(apply_gate(s, gate(GateKind::H, {1})), gate(GateKind::H, {1}));
        CHECK(max_diff(s, hh) < 1e-12);
        const double theta = std::uniform_real_distribution<double>(-7, 7)(rng);
        for (GateKind k : {GateKind::RX, GateKind::RY, GateKind::RZ}) {
            const Statevector r = apply_gate(apply_gate(s, gate(k, {2}, theta)), gate(k, {2}, -theta));
            CHECK(max_diff(s, r) < 1e-12);
        }
        const Statevector ss = apply_gate(apply_gate(s, gate(GateKind::S, {0})), gate(GateKind::SDG, {0}));
        CHECK(max_diff(s, ss) < 1e-12);
    }
}

TEST_CASE("CX truth table") {
    // |10>: qubit 1 set; control on the set bit flips qubit 0.
    Statevector s(2);
    s.apply(gate(GateKind::X, {1}));
    s.apply(gate(GateKind::CX, {1, 0}));
    CHECK(std::abs(s.amplitudes()[3]) == doctest::Approx(1.0));
    Statevector t(2);
    t.apply(gate(GateKind::X, {1}));
    t.apply(gate(GateKind::CX, {0, 1}));
    CHECK(std::abs(t.amplitudes()[2]) == doctest::Approx(1.0));
}

TEST_CASE("norm is preserved over random gate sequences") {
    std::mt19937_64 rng(12);
    const GateKind kinds[] = {GateKind::H, GateKind::X, GateKind::Z, GateKind::S, GateKind::SDG,
                              GateKind::CX, GateKind::RX, GateKind::RY, GateKind::RZ};
    Statevector s = random_state(rng, 5);
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const GateKind k = kinds[rng() % 9];
        const int a = static_cast<int>(rng() % 5);
        int b = static_cast<int>(rng() % 5);
        if (b == a) b = (a + 1) % 5;
        s.apply(k == GateKind::CX ? gate(k, {a, b}) : gate(k, {a}, std::uniform_real_distribution<double>(-4, 4)(rng)));
        if (!gate_takes_angle(k) && k != GateKind::CX) continue;
        worst = std::max(worst, std::abs(s.norm() - 1.0));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("ideal probabilities") {
    const ProbDist g = ideal_probabilities(ghz(3));
    CHECK(g.get("000") == doctest::Approx(0.5));
    CHECK(g.get("111") == doctest::Approx(0.5));
    CHECK(g.entries().size() == 2);
    Circuit h(1, 1);
    h.h(0).measure(0, 0);
    CHECK(ideal_probabilities(h).get("1") == doctest::Approx(0.5));
    CHECK(ideal_probabilities(bv("101")).get("101") == doctest::Approx(1.0));
    Circuit dyn(1, 2);
    dyn.measure(0, 0).x(0).measure(0, 1);
    CHECK_THROWS_AS(ideal_probabilities(dyn), UnsupportedCircuitError);
    CHECK_THROWS_AS(ideal_probabilities(dynamic_bv("11")), UnsupportedCircuitError);
}

TEST_CASE("noiseless GHZ sampling") {
    const Counts c = run_shots(ghz(3), NoiseProfile::ideal(), 1000000, 7);
    CHECK(c.support_size() == 2);
    const double f = static_cast<double>(c.get("000")) / 1e6;
    CHECK(std::abs(f - 0.5) < 3 * std::sqrt(0.25 / 1e6));
}

TEST_CASE("readout flip rate recovery") {
    Circuit c(1, 1);
    c.x(0).measure(0, 0);
    const NoiseProfile noise = NoiseProfile::uniform(1, 0.0, 0.05, 0.0, 0.0);
    const std::uint64_t shots = 100000;
    const Counts counts = run_shots(c, noise, shots, 3);
    const double f = static_cast<double>(counts.get("0")) / shots;
    CHECK(std::abs(f - 0.05) < 3 * std::sqrt(0.05 * 0.95 / shots));
}

TEST_CASE("determinism") {
    const NoiseProfile noise = NoiseProfile::paper_like();
    CHECK(run_shots(bv("1011"), noise, 5000, 42) == run_shots(bv("1011"), noise, 5000, 42));
    CHECK_FALSE(run_shots(bv("1011"), noise, 5000, 42) == run_shots(bv("1011"), noise, 5000, 43));
    CHECK(run_shots(dynamic_bv("1011"), noise, 5000, 42) == run_shots(dynamic_bv("1011"), noise, 5000, 42));
    CHECK_THROWS_AS(run_shots(ghz(2), noise, 0, 1), DomainError);
}

TEST_CASE("zero-noise frequencies converge to ideal") {
    std::mt19937_64 rng(21);
    const std::uint64_t shots = 100000;
    for (int m = 1; m <= 3; ++m) {
        for (int trial = 0; trial < 5; ++trial) {
            Circuit c(m, m);
            for (int k = 0; k < m; ++k) c.ry(k, std::uniform_real_distribution<double>(0, 3)(rng));
            for (int k = 0; k + 1 < m; ++k) c.cx(k, k + 1);
            for (int k = 0; k < m; ++k) c.rx(k, std::uniform_real_distribution<double>(0, 3)(rng));
            c.measure_all();
            const ProbDist ideal = ideal_probabilities(c);
            const ProbDist observed = counts_to_probs(run_shots(c, NoiseProfile::ideal(), shots, rng()));
            CHECK(total_variation(ideal, observed) < 5 * std::sqrt(std::pow(2.0, m) / shots));
        }
    }
}

TEST_CASE("error probability grows with the number of noisy CX gates") {
    NoiseProfile noise;
    noise.p2 = 0.02;
    std::vector<double> error_rate;
    for (int k = 1; k <= 10; ++k) {
        Circuit c(2, 2);
        for (int i = 0; i < k; ++i) c.cx(0, 1);
        c.measure_all();
        const std::uint64_t shots = 40000;
        const Counts counts = run_shots(c, noise, shots, 100 + static_cast<std::uint64_t>(k));
        error_rate.push_back(1.0 - static_cast<double>(counts.get("00")) / shots);
    }
    for (std::size_t k = 1; k < error_rate.size(); ++k) CHECK(error_rate[k] > error_rate[k - 1]);
}

TEST_CASE("mid-circuit measurement, reset and conditionals") {
    Circuit c(1, 2);
    c.x(0).measure(0, 0).reset(0).measure(0, 1);
    const Counts r = run_shots(c, NoiseProfile::ideal(), 100, 1);
    CHECK(r.get("01") == 100);

    Circuit d(2, 2);
    d.h(0).measure(0, 0).x(1).c_if(0).measure(1, 1);
    const Counts s = run_shots(d, NoiseProfile::ideal(), 4000, 5);
    CHECK(s.get("00") + s.get("11") == 4000);
    CHECK(s.get("11") > 1800);
}

TEST_CASE("seed derivation and streams") {
    CHECK(derive_seed(1, "a") == derive_seed(1, "a"));
    CHECK(derive_seed(1, "a") != derive_seed(1, "b"));
    CHECK(derive_seed(1, "a") != derive_seed(2, "a"));
    SplitMix64 a(9, 0), b(9, 1);
    CHECK(a() != b());
    SplitMix64 u(3, 3);
    for (int i = 0; i < 1000; ++i) {
        const double x = u.uniform();
        CHECK((x >= 0.0 && x < 1.0));
    }
}
