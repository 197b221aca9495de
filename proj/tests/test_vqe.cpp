#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qmitigate/experiments.hpp"
#include "qmitigate/vqe.hpp"

using namespace qmitigate;

namespace {

Circuit identity_ansatz(int n) { return Circuit(n, n); }

}  // namespace

TEST_CASE("estimate_energy on eigenstates") {
    const NoiseProfile ideal = NoiseProfile::ideal();
    CHECK(estimate_energy(Hamiltonian({{1.0, "ZZ"}}), identity_ansatz(2), ideal, 1000,
                          MitigatorSpec::raw(), 1) == doctest::Approx(1.0));
    Circuit plus(2, 2);
    plus.h(0).h(1);
    CHECK(estimate_energy(Hamiltonian({{1.0, "XX"}}), plus, ideal, 1000, MitigatorSpec::raw(), 1) ==
          doctest::Approx(1.0));
    Circuit y(1, 1);
    y.h(0).s(0);
    CHECK(estimate_energy(Hamiltonian({{1.0, "Y"}}), y, ideal, 1000, MitigatorSpec::raw(), 1) ==
          doctest::Approx(1.0));
    CHECK(exact_energy(Hamiltonian({{1.0, "Y"}}), y) == doctest::Approx(1.0));
    CHECK_THROWS_AS(estimate_energy(Hamiltonian({{1.0, "ZZZ"}}), identity_ansatz(2), ideal, 10,
                                    MitigatorSpec::raw(), 1),
                    DomainError);
}

TEST_CASE("filter annihilation inside an estimation carries term context") {
    Circuit plus(2, 2);
    plus.h(0).h(1);
    try {
        estimate_energy(Hamiltonian({{1.0, "ZZ"}}), plus, NoiseProfile::ideal(), 4000,
                        MitigatorSpec::filter(IntensityRange(0.4, 0.9)), 3);
        FAIL("expected mitigation failure");
    } catch (const MitigationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("ZZ") != std::string::npos);
        CHECK(msg.find("filter annihilated distribution") != std::string::npos);
    }
}

TEST_CASE("exact ground energy") {
    CHECK(exact_ground_energy(Hamiltonian({{1.0, "Z"}})) == doctest::Approx(-1.0));
    const Hamiltonian ring = heisenberg(3, true);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(oracle::hamiltonian_matrix(ring));
    CHECK(exact_ground_energy(ring) == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-12));
    CHECK(exact_ground_energy(ring) == doctest::Approx(-3.0).epsilon(1e-10));
    const Hamiltonian basic = basic_vqe_hamiltonian();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eb(oracle::hamiltonian_matrix(basic));
    CHECK(exact_ground_energy(basic) == doctest::Approx(eb.eigenvalues()(0)).epsilon(1e-12));
    CHECK_THROWS_AS(exact_ground_energy(Hamiltonian({{1.0, std::string(13, 'Z')}})),
                    UnsupportedCircuitError);
}

TEST_CASE("exact energy is linear in the coefficients and bounded below") {
    std::mt19937_64 rng(6);
    const Hamiltonian h = basic_vqe_hamiltonian();
    const double ground = exact_ground_energy(h);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> params(8);
        for (auto& p : params) p = std::uniform_real_distribution<double>(0, 6.3)(rng);
        const Circuit ansatz = two_local(2, params);
        std::vector<PauliTerm> doubled = h.terms();
        doubled[3].coefficient *= 2;
        const double base = exact_energy(h, ansatz);
        const double xx = exact_energy(Hamiltonian({{1.0, "XX"}}), ansatz);
        CHECK(exact_energy(Hamiltonian(doubled), ansatz) ==
              doctest::Approx(base + h.terms()[3].coefficient * xx).epsilon(1e-12));
        CHECK(ground <= base + 1e-9);
    }
}

TEST_CASE("basic VQE optimum is reachable by the ansatz") {
    const Hamiltonian h = basic_vqe_hamiltonian();
    const VqeResult r = nft_minimize(
        [&](const std::vector<double>& p) { return exact_energy(h, two_local(2, p)); },
        basic_vqe_initial_angles(), 100);
    CHECK(std::abs(r.energy - kBasicVqeOptimum) < 5e-3);
    CHECK(r.energy >= exact_ground_energy(h) - 1e-9);
}

TEST_CASE("nft_minimize on exact sinusoids") {
    const VqeResult r = nft_minimize([](const std::vector<double>& p) { return std::cos(p[0]); },
                                     {0.3}, 1);
    CHECK(std::abs(r.params[0] - std::numbers::pi) < 1e-8);
    CHECK(std::abs(r.energy + 1.0) < 1e-8);
    CHECK(r.trace.size() == 2);
    CHECK(r.energy == r.trace.back());

    const VqeResult c = nft_minimize([](const std::vector<double>&) { return 2.5; }, {0.1, 0.2}, 5);
    CHECK(c.params == std::vector<double>{0.1, 0.2});
    CHECK(c.energy == 2.5);

    const VqeResult one = nft_minimize(
        [](const std::vector<double>& p) { return std::sin(p[0]) + std::cos(p[1]) + std::sin(p[2]); },
        {0.0, 0.0, 0.0}, 1);
    CHECK(one.evaluations == 1 + 3 * 3 + 1);
    CHECK(one.energy == doctest::Approx(-3.0));
}

TEST_CASE("nft_minimize never increases an exact cost") {
    const Hamiltonian h = heisenberg(3, true);
    std::mt19937_64 rng(13);
    std::vector<double> init(12);
    for (auto& p : init) p = std::uniform_real_distribution<double>(0, 6.3)(rng);
    const VqeResult r = nft_minimize(
        [&](const std::vector<double>& p) { return exact_energy(h, efficient_su2(3, p)); }, init, 30);
    for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i] <= r.trace[i - 1] + 1e-12);
}

TEST_CASE("run_vqe") {
    VqeConfig cfg;
    cfg.hamiltonian = basic_vqe_hamiltonian();
    cfg.initial_params = basic_vqe_initial_angles();
    cfg.exact = true;
    const VqeResult exact = run_vqe(cfg);
    CHECK(std::abs(exact.energy - kBasicVqeOptimum) < 5e-3);

    cfg.exact = false;
    cfg.noise = NoiseProfile::paper_like();
    cfg.max_iterations = 1;
    cfg.seed = 4;
    cfg.mitigator = MitigatorSpec::filter(IntensityRange::percent(1));
    const VqeResult a = run_vqe(cfg);
    CHECK(a.evaluations == 1 + 8 * 3 + 1);
    CHECK(a.trace.size() == 2);
    const VqeResult b = run_vqe(cfg);
    CHECK(a.energy == b.energy);
    CHECK(a.params == b.params);

    cfg.mitigator = MitigatorSpec::m3();
    const VqeResult m = run_vqe(cfg);
    CHECK(m.calibration_us > 0.0);

    cfg.shots = 0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg.shots = 10;
    cfg.max_iterations = 0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg.max_iterations = 1;
    cfg.initial_params.pop_back();
    CHECK_THROWS_AS(run_vqe(cfg), DomainError);
}

TEST_CASE("vqe JSON") {
    const auto cfg = vqe_config_from_json(nlohmann::json::parse(R"({
        "hamiltonian": "1.0 ZZ\n0.5 XI",
        "ansatz": "efficient_su2",
        "initial_params": [0,0,0,0,0,0,0,0],
        "shots": 100,
        "mitigator": "filter:2%",
        "max_iterations": 3,
        "seed": 9
    })"));
    CHECK(cfg.ansatz == AnsatzKind::EfficientSU2);
    CHECK(cfg.shots == 100);
    CHECK(cfg.mitigator.kind == MitigatorSpec::Kind::Filter);
    CHECK(cfg.hamiltonian.terms().size() == 2);
    VqeResult r;
    r.energy = -1;
    r.trace = {0, -1};
    const auto j = to_json(r);
    CHECK(j.at("trace").size() == 2);
    CHECK(j.at("energy") == -1);
}
