#include "qmitigate/noise.hpp"

#include <fstream>
#include <string>

#include "qmitigate/dist.hpp"

namespace qmitigate {

void QubitCalibration::validate() const {
    auto ok = [](double e) { return e >= 0.0 && e < 0.5; };
    if (!ok(e01) || !ok(e10)) {
        throw DomainError("readout calibration (e01=" + std::to_string(e01) +
                          ", e10=" + std::to_string(e10) + ") must lie in [0, 0.5)");
    }
}

void NoiseProfile::validate() const {
    for (const auto& cal : readout) {
        cal.validate();
    }
    auto ok = [](double p) { return p >= 0.0 && p <= 0.75; };
    if (!ok(p1) || !ok(p2)) {
        throw DomainError("depolarizing probabilities p1=" + std::to_string(p1) +
                          ", p2=" + std::to_string(p2) + " must lie in [0, 0.75]");
    }
}

bool NoiseProfile::noiseless() const {
    if (p1 != 0.0 || p2 != 0.0) {
        return false;
    }
    for (const auto& cal : readout) {
        if (cal.e01 != 0.0 || cal.e10 != 0.0) {
            return false;
        }
    }
    return true;
}

QubitCalibration NoiseProfile::readout_for(int qubit) const {
    if (qubit < 0 || static_cast<std::size_t>(qubit) >= readout.size()) {
        return {};
    }
    return readout[static_cast<std::size_t>(qubit)];
}

NoiseProfile NoiseProfile::uniform(int qubits, double e01, double e10, double p1, double p2) {
    NoiseProfile noise;
    noise.readout.assign(static_cast<std::size_t>(qubits), QubitCalibration{e01, e10});
    noise.p1 = p1;
    noise.p2 = p2;
    noise.validate();
    return noise;
}

NoiseProfile NoiseProfile::paper_like(int qubits) {
    return uniform(qubits, 0.01, 0.02, 0.001, 0.01);
}

nlohmann::json to_json(const QubitCalibration& cal) {
    return {{"e01", cal.e01}, {"e10", cal.e10}};
}

nlohmann::json calibrations_to_json(const std::vector<QubitCalibration>& cals) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& cal : cals) {
        out.push_back(to_json(cal));
    }
    return out;
}

std::vector<QubitCalibration> calibrations_from_json(const nlohmann::json& j) {
    if (!j.is_array()) {
        throw DomainError("calibration JSON must be an array of {\"e01\", \"e10\"} objects");
    }
    std::vector<QubitCalibration> out;
    for (const auto& item : j) {
        QubitCalibration cal{item.at("e01").get<double>(), item.at("e10").get<double>()};
        cal.validate();
        out.push_back(cal);
    }
    return out;
}

nlohmann::json to_json(const NoiseProfile& noise) {
    return {{"readout", calibrations_to_json(noise.readout)}, {"p1", noise.p1}, {"p2", noise.p2}};
}

NoiseProfile noise_from_json(const nlohmann::json& j) {
    NoiseProfile noise;
    if (j.contains("readout")) {
        noise.readout = calibrations_from_json(j.at("readout"));
    }
    noise.p1 = j.value("p1", 0.0);
    noise.p2 = j.value("p2", 0.0);
    noise.validate();
    return noise;
}

NoiseProfile load_noise_profile(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DomainError("cannot open noise profile " + path.string());
    }
    return noise_from_json(nlohmann::json::parse(in));
}

}  // namespace qmitigate
