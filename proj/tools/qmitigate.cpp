#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qmitigate/experiments.hpp"
#include "qmitigate/intensity_filter.hpp"
#include "qmitigate/report.hpp"

namespace {

constexpr int kExitSpecError = 2;
constexpr int kExitExperimentFailure = 3;

qmitigate::NoiseProfile resolve_noise(const std::string& source) {
    if (source == "paper-like") return qmitigate::NoiseProfile::paper_like();
    if (source == "ideal" || source == "noiseless") return qmitigate::NoiseProfile::ideal();
    return qmitigate::load_noise_profile(source);
}

std::pair<int, int> parse_qubit_range(const std::string& text) {
    const auto dash = text.find('-');
    try {
        if (dash == std::string::npos) {
            const int w = std::stoi(text);
            return {w, w};
        }
        return {std::stoi(text.substr(0, dash)), std::stoi(text.substr(dash + 1))};
    } catch (const std::exception&) {
        throw qmitigate::DomainError("qubit range '" + text + "' must be N or LO-HI");
    }
}

struct RunOptions {
    std::string experiment;
    std::string noise;
    std::optional<std::uint64_t> shots;
    std::uint64_t seed = 1;
    std::vector<std::string> mitigators;
    std::string filter_range;
    std::string qubits;
    std::vector<int> steps;
    int max_iterations = 0;
    std::string out = ".";
    std::string format = "json,csv,svg";
};

int run_command(const RunOptions& opt) {
    qmitigate::ExperimentSpec spec;
    std::vector<qmitigate::ReportFormat> formats;
    try {
        spec = qmitigate::ExperimentSpec::defaults(opt.experiment);
        if (!opt.noise.empty()) {
            spec.noise = resolve_noise(opt.noise);
            spec.noise_source = opt.noise;
        }
        if (opt.shots) spec.shots = *opt.shots;
        spec.seed = opt.seed;
        if (!opt.mitigators.empty()) {
            spec.mitigators.clear();
            for (const auto& m : opt.mitigators) {
                spec.mitigators.push_back(qmitigate::MitigatorSpec::parse(m));
            }
        }
        if (!opt.filter_range.empty()) {
            const auto range = qmitigate::IntensityRange::parse(opt.filter_range);
            bool any = false;
            for (auto& m : spec.mitigators) {
                if (m.kind == qmitigate::MitigatorSpec::Kind::Filter) {
                    m.range = range;
                    any = true;
                }
            }
            if (!any) spec.mitigators.push_back(qmitigate::MitigatorSpec::filter(range));
        }
        if (!opt.qubits.empty()) {
            std::tie(spec.min_width, spec.max_width) = parse_qubit_range(opt.qubits);
        }
        if (!opt.steps.empty()) spec.trotter_steps = opt.steps;
        if (opt.max_iterations > 0) spec.max_iterations = opt.max_iterations;
        formats = qmitigate::parse_formats(opt.format);
        spec.validate();
    } catch (const std::exception& e) {
        std::cerr << "qmitigate: " << e.what() << '\n';
        return kExitSpecError;
    }

    try {
        const auto report = qmitigate::run_experiment(spec);
        const auto written = qmitigate::emit_report(report, opt.out, formats);
        int failed = 0;
        for (const auto& row : report.rows) {
            if (!row.ok) {
                ++failed;
                std::cerr << "qmitigate: " << row.mitigator << " @ " << row.configuration
                          << " failed: " << row.error << '\n';
            }
        }
        for (const auto& row : report.rows) {
            std::cout << row.configuration << '\t' << row.mitigator;
            if (row.success_probability) std::cout << "\tsuccess=" << *row.success_probability;
            if (row.hellinger_fidelity) std::cout << "\thellinger=" << *row.hellinger_fidelity;
            if (row.energy) std::cout << "\tenergy=" << *row.energy;
            if (row.relative_error) std::cout << "\trel_err=" << *row.relative_error;
            if (!row.zeroed.empty()) std::cout << "\tzeroed=" << row.zeroed.size();
            if (!row.ok) std::cout << "\tFAILED";
            std::cout << '\n';
        }
        for (const auto& path : written) std::cout << "wrote " << path.string() << '\n';
        return failed == 0 ? 0 : kExitExperimentFailure;
    } catch (const std::exception& e) {
        std::cerr << "qmitigate: experiment failed: " << e.what() << '\n';
        return kExitExperimentFailure;
    }
}

int filter_command(const std::string& counts_path, const std::string& range_text) {
    qmitigate::Counts counts;
    qmitigate::IntensityRange range;
    try {
        range = qmitigate::IntensityRange::parse(range_text);
        std::ifstream in(counts_path);
        if (!in) throw qmitigate::DomainError("cannot open counts file " + counts_path);
        counts = qmitigate::counts_from_json(nlohmann::json::parse(in));
    } catch (const std::exception& e) {
        std::cerr << "qmitigate: " << e.what() << '\n';
        return kExitSpecError;
    }
    try {
        std::cout << qmitigate::to_json(qmitigate::mitigate_counts(counts, range)).dump(2) << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "qmitigate: " << e.what() << '\n';
        return kExitExperimentFailure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Readout-error mitigation experiments and standalone counts filtering"};
    app.require_subcommand(1);

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "Run one experiment and write its report");
    run_cmd->add_option("experiment", run.experiment, "Experiment id")
        ->required()
        ->check(CLI::IsMember(qmitigate::kExperimentIds));
    run_cmd->add_option("--noise", run.noise,
                        "Noise profile JSON file, or 'paper-like' / 'ideal'");
    run_cmd->add_option("--shots", run.shots, "Shots per circuit");
    run_cmd->add_option("--seed", run.seed, "Master seed");
    run_cmd->add_option("--mitigator", run.mitigators,
                        "raw | filter:<low,high|k%> | m3[:direct|iterative] (repeatable)");
    run_cmd->add_option("--filter-range", run.filter_range,
                        "Range applied to every filter mitigator (low,high or k%)");
    run_cmd->add_option("--qubits", run.qubits, "Width or ring-size range, N or LO-HI");
    run_cmd->add_option("--steps", run.steps, "Trotter step counts")->delimiter(',');
    run_cmd->add_option("--max-iterations", run.max_iterations, "VQE optimizer sweeps");
    run_cmd->add_option("--out", run.out, "Output directory");
    run_cmd->add_option("--format", run.format, "Comma-separated subset of json,csv,svg");

    std::string counts_path;
    std::string range_text = "1%";
    auto* filter_cmd =
        app.add_subcommand("filter", "Apply the intensity filter to a counts JSON file");
    filter_cmd->add_option("--counts", counts_path, "Counts JSON ({\"counts\": {...}})")
        ->required();
    filter_cmd->add_option("--range,--filter-range", range_text, "low,high or k%");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitSpecError;
    }

    if (run_cmd->parsed()) return run_command(run);
    return filter_command(counts_path, range_text);
}
