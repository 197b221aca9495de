#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qmitigate/circuits.hpp"
#include "qmitigate/experiments.hpp"

using namespace qmitigate;

TEST_CASE("pauli terms and hamiltonians") {
    CHECK(PauliTerm{1.0, "XIZ"}.support_mask() == "101");
    const Hamiltonian h = Hamiltonian::parse("# comment\n0.3979 YZ\n\n-0.3979 ZI\n");
    REQUIRE(h.terms().size() == 2);
    CHECK(h.terms()[1].coefficient == doctest::Approx(-0.3979));
    CHECK(Hamiltonian::parse(h.to_string()).terms()[0].paulis == "YZ");
    CHECK_THROWS_AS(Hamiltonian::parse("1.0 XQ"), DomainError);
    CHECK_THROWS_AS(Hamiltonian::parse("1.0 XX\n1.0 Z"), DomainError);
    CHECK_THROWS_AS(Hamiltonian::parse("abc XX"), DomainError);
    const Hamiltonian b = basic_vqe_hamiltonian();
    REQUIRE(b.terms().size() == 4);
    CHECK(b.terms()[3].paulis == "XX");
    CHECK(b.terms()[2].coefficient == doctest::Approx(-0.01128));
}

TEST_CASE("heisenberg builder") {
    CHECK(heisenberg(3, true).terms().size() == 9);
    CHECK(heisenberg(3, false).terms().size() == 6);
    CHECK(heisenberg(2, false, 1.0, 0.5).terms().size() == 5);
    CHECK_THROWS_AS(heisenberg(1, false), DomainError);
}

TEST_CASE("ghz") {
    for (int n : {2, 3, 5}) {
        const ProbDist p = ideal_probabilities(ghz(n));
        CHECK(p.get(std::string(static_cast<std::size_t>(n), '0')) == doctest::Approx(0.5));
        CHECK(p.get(std::string(static_cast<std::size_t>(n), '1')) == doctest::Approx(0.5));
    }
    CHECK_THROWS_AS(ghz(1), DomainError);
}

TEST_CASE("bernstein-vazirani") {
    CHECK(ideal_probabilities(bv("11111")).get("11111") == doctest::Approx(1.0));
    CHECK(ideal_probabilities(bv("0000")).get("0000") == doctest::Approx(1.0));
    CHECK(ideal_probabilities(bv("101")).get("101") == doctest::Approx(1.0));
    CHECK(bv("101").count(GateKind::CX) == 2);
    CHECK(bv("0000").count(GateKind::CX) == 0);
    CHECK_THROWS_AS(bv(""), DomainError);
}

TEST_CASE("dynamic bv matches bv for every secret of width <= 4") {
    int checked = 0;
    for (int w = 1; w <= 4; ++w) {
        for (std::size_t s = 0; s < (std::size_t{1} << w); ++s) {
            const std::string secret = oracle::to_bits(s, w);
            const Circuit d = dynamic_bv(secret);
            CHECK(d.num_qubits() == 2);
            const Counts c = run_shots(d, NoiseProfile::ideal(), 200, s);
            CHECK(c.get(secret) == 200);
            CHECK(ideal_probabilities(bv(secret)).get(secret) == doctest::Approx(1.0));
            ++checked;
        }
    }
    CHECK(checked == 30);
    CHECK(run_shots(dynamic_bv("0"), NoiseProfile::ideal(), 10, 1).get("0") == 10);
    CHECK(dynamic_bv("1111").gate_count() > dynamic_bv("11").gate_count());
}

TEST_CASE("trotter circuits") {
    const Hamiltonian h = heisenberg(2, false);
    const ProbDist zero = ideal_probabilities(trotter_step(h, 0.1, 0));
    CHECK(zero.get("00") == doctest::Approx(1.0));
    const Hamiltonian zz({{1.0, "ZZ"}});
    CHECK(ideal_probabilities(trotter_step(zz, 0.37, 5)).get("00") == doctest::Approx(1.0));
    const ProbDist trotter = ideal_probabilities(trotter_step(h, 0.1, 10, "01"));
    CHECK(total_variation(trotter, oracle::evolve_exact(h, 1.0, "01")) <= 0.05);
    CHECK_THROWS_AS(trotter_step(Hamiltonian({{1.0, "XXX"}}), 0.1, 1), UnsupportedCircuitError);
}

TEST_CASE("trotter error shrinks with more steps") {
    const Hamiltonian h = heisenberg(2, false, 1.0, kTrotterField);
    const ProbDist exact = oracle::evolve_exact(h, 1.0, "01");
    double previous = 1.0;
    for (int steps : {1, 2, 4, 8}) {
        const double tv =
            total_variation(ideal_probabilities(trotter_step(h, 1.0 / steps, steps, "01")), exact);
        CHECK(tv < previous);
        previous = tv;
    }
    // Single-term evolution has no Trotter error.
    for (const char* p : {"XX", "YY", "ZZ", "XY", "IZ", "YI", "ZX"}) {
        const Hamiltonian single({{0.7, p}});
        const ProbDist a = ideal_probabilities(trotter_step(single, 0.9, 1, "01"));
        CHECK(total_variation(a, oracle::evolve_exact(single, 0.9, "01")) < 1e-10);
    }
}

TEST_CASE("two_local layout") {
    CHECK(two_local_parameter_count(2) == 8);
    CHECK(two_local(2, std::vector<double>(8, 0.0)).count(GateKind::RY) == 8);
    CHECK_THROWS_AS(two_local(2, std::vector<double>(7, 0.0)), DomainError);
    Circuit c = two_local(2, std::vector<double>(8, 0.0));
    CHECK(final_state(c).probabilities()[0] == doctest::Approx(1.0));
    const std::vector<double> init = {1.22253725, 0.39053752, 0.21462153, 5.48308027,
                                      2.06984514, 3.65227416, 4.01911194, 0.35749589};
    CHECK(final_state(two_local(2, init)).norm() == doctest::Approx(1.0));
    CHECK(two_local(3, std::vector<double>(12, 0.0)).count(GateKind::CX) == 9);
}

TEST_CASE("efficient_su2 layout") {
    CHECK(efficient_su2_parameter_count(3) == 12);
    CHECK_THROWS_AS(efficient_su2(3, std::vector<double>(11, 0.0)), DomainError);
    CHECK(final_state(efficient_su2(3, std::vector<double>(12, 0.0))).probabilities()[0] ==
          doctest::Approx(1.0));
    std::mt19937_64 rng(2);
    std::vector<double> params(12);
    for (auto& p : params) p = std::uniform_real_distribution<double>(0, 6.3)(rng);
    CHECK(std::abs(final_state(efficient_su2(3, params)).norm() - 1.0) < 1e-12);
}

TEST_CASE("basis rotations") {
    const Circuit xx = basis_rotation("XX");
    CHECK(xx.count(GateKind::H) == 2);
    CHECK(xx.gate_count() == 2);
    CHECK(basis_rotation("ZI").gate_count() == 0);
    const Circuit yz = basis_rotation("YZ");
    CHECK(yz.count(GateKind::SDG) == 1);
    CHECK(yz.count(GateKind::H) == 1);
    const auto& first = std::get<Gate>(yz.instructions().front());
    CHECK(first.kind == GateKind::SDG);
    CHECK(first.targets.front() == 1);
    CHECK_THROWS_AS(basis_rotation("XA"), DomainError);
}
