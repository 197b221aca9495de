#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qmitigate/experiments.hpp"
#include "qmitigate/mitigator.hpp"
#include "qmitigate/report.hpp"

using namespace qmitigate;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("qmitigate_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("mitigator specs") {
    CHECK(MitigatorSpec::parse("raw").kind == MitigatorSpec::Kind::Raw);
    CHECK(MitigatorSpec::parse("none").kind == MitigatorSpec::Kind::Raw);
    CHECK(MitigatorSpec::parse("filter").range == IntensityRange());
    CHECK(MitigatorSpec::parse("filter:2%").range == IntensityRange(0.02, 0.98));
    CHECK(MitigatorSpec::parse("filter:0.03,0.97").label() == "filter(0.03,0.97)");
    CHECK(MitigatorSpec::parse("m3:iterative").method == M3Method::Iterative);
    CHECK(MitigatorSpec::parse("m3").label() == "m3(direct)");
    CHECK_THROWS_AS(MitigatorSpec::parse("zne"), DomainError);
    CHECK_THROWS_AS(apply_mitigator(MitigatorSpec::m3(), Counts({{"0", 1}})), DomainError);
}

TEST_CASE("experiment specs") {
    for (const auto& id : kExperimentIds) {
        const auto spec = ExperimentSpec::defaults(id);
        CHECK_NOTHROW(spec.validate());
        CHECK(spec.shots >= 1);
        CHECK_FALSE(spec.mitigators.empty());
    }
    CHECK_THROWS_AS(ExperimentSpec::defaults("kagome"), DomainError);
    auto spec = ExperimentSpec::defaults("ghz-demo");
    spec.mitigators.clear();
    CHECK_THROWS_AS(spec.validate(), DomainError);
    spec = ExperimentSpec::defaults("ghz-demo");
    spec.shots = 0;
    CHECK_THROWS_AS(run_experiment(spec), DomainError);
}

TEST_CASE("ghz-demo zeroes all six non-GHZ outcomes") {
    const auto report = run_experiment(ExperimentSpec::defaults("ghz-demo"));
    const MetricRow* row = report.find("filter(0.03,0.97)", "ghz3");
    REQUIRE(row != nullptr);
    CHECK(row->zeroed.size() == 6);
    CHECK(*row->success_probability == doctest::Approx(1.0));
    CHECK(report.find("raw", "ghz3")->zeroed.empty());
}

TEST_CASE("probs experiment without noise") {
    auto spec = ExperimentSpec::defaults("probs");
    spec.noise = NoiseProfile::ideal();
    spec.shots = 100000;
    const auto report = run_experiment(spec);
    for (const auto& row : report.rows) {
        REQUIRE(row.ok);
        const double p0 = [&] {
            for (const auto& [k, v] : row.distribution) {
                if (k == "00000") return v;
            }
            return 0.0;
        }();
        CHECK(std::abs(p0 - 0.5) < 3 * std::sqrt(0.25 / 100000));
        CHECK(*row.success_probability == doctest::Approx(1.0));
    }
}

TEST_CASE("bv-sweep ordering for one seed") {
    const auto report = run_experiment(ExperimentSpec::defaults("bv-sweep"));
    CHECK(report.configurations().size() == 5);
    CHECK(report.mitigators().size() == 4);
    for (const auto& config : report.configurations()) {
        CHECK(*report.find("filter(0.02,0.98)", config)->success_probability >=
              *report.find("raw", config)->success_probability);
    }
    CHECK(report.timings.contains("m3(direct)"));
    CHECK(report.timings["m3(direct)"]["calibration_us"].get<double>() > 0.0);
}

TEST_CASE("mitigator failures are recorded per row") {
    auto spec = ExperimentSpec::defaults("ghz-demo");
    spec.mitigators = {MitigatorSpec::raw(), MitigatorSpec::filter(IntensityRange(0.6, 0.9))};
    const auto report = run_experiment(spec);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].ok);
    CHECK_FALSE(report.rows[1].ok);
    CHECK(report.rows[1].error.find("filter annihilated distribution") != std::string::npos);
}

TEST_CASE("metrics are deterministic and the JSON round-trips") {
    auto spec = ExperimentSpec::defaults("trotter");
    spec.trotter_steps = {1, 3};
    const auto a = run_experiment(spec);
    const auto b = run_experiment(spec);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].hellinger_fidelity == b.rows[i].hellinger_fidelity);
        CHECK(a.rows[i].distribution == b.rows[i].distribution);
    }
    const auto j = to_json(a);
    CHECK(report_from_json(nlohmann::json::parse(j.dump())) == a);
    CHECK(to_json(report_from_json(j)) == j);
}

TEST_CASE("vqe reports round-trip with traces") {
    auto spec = ExperimentSpec::defaults("vqe-basic");
    spec.max_iterations = 1;
    const auto report = run_experiment(spec);
    CHECK(report.reference.contains("exact_ground_energy"));
    for (const auto& row : report.rows) {
        CHECK(row.energy.has_value());
        CHECK(row.relative_error.has_value());
        CHECK(row.trace.size() == 2);
    }
    CHECK(report_from_json(to_json(report)) == report);
}

TEST_CASE("emit_report writes every format atomically") {
    const auto dir = scratch_dir("emit");
    auto spec = ExperimentSpec::defaults("bv-sweep");
    spec.max_width = 4;
    const auto report = run_experiment(spec);
    const auto files = emit_report(report, dir, parse_formats("json,csv,svg"));
    CHECK(files.size() == 4);
    for (const auto& f : files) CHECK(std::filesystem::exists(f));
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        CHECK(entry.path().extension() != ".tmp");
    }
    const auto parsed = report_from_json(nlohmann::json::parse(slurp(dir / "bv-sweep.json")));
    CHECK(parsed.rows == report.rows);
    const std::string csv = slurp(dir / "bv-sweep.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + static_cast<long>(report.rows.size()));
    const std::string svg = slurp(dir / "bv-sweep_success_probability.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.find("filter(0.02,0.98)") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("chart kinds follow the experiment") {
    const auto ghz_charts = report_to_svgs(run_experiment(ExperimentSpec::defaults("ghz-demo")));
    REQUIRE(ghz_charts.size() == 1);
    CHECK(ghz_charts[0].first == "distribution");
    CHECK(ghz_charts[0].second.find("<rect") != std::string::npos);
    auto spec = ExperimentSpec::defaults("vqe-basic");
    spec.max_iterations = 2;
    const auto vqe_charts = report_to_svgs(run_experiment(spec));
    REQUIRE(vqe_charts.size() == 1);
    CHECK(vqe_charts[0].first == "energy_trace");
}

TEST_CASE("report formats and unwritable outputs") {
    CHECK(parse_formats("svg,json").size() == 2);
    CHECK_THROWS_AS(parse_formats("json,html"), DomainError);
    const auto dir = scratch_dir("blocked");
    std::filesystem::create_directories(dir.parent_path());
    { std::ofstream(dir) << "file, not a directory"; }
    const auto report = run_experiment(ExperimentSpec::defaults("ghz-demo"));
    CHECK_THROWS(emit_report(report, dir / "sub", parse_formats("json")));
    std::filesystem::remove(dir);
}
