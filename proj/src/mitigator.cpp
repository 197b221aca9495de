#include "qmitigate/mitigator.hpp"

#include <chrono>
#include <sstream>

namespace qmitigate {

MitigatorSpec MitigatorSpec::parse(std::string_view text) {
    if (text == "raw" || text == "none") {
        return raw();
    }
    if (text.starts_with("filter")) {
        if (text == "filter") {
            return filter(IntensityRange{});
        }
        if (text[6] != ':') {
            throw DomainError("bad mitigator '" + std::string(text) + "'");
        }
        return filter(IntensityRange::parse(text.substr(7)));
    }
    if (text == "m3") {
        return m3();
    }
    if (text.starts_with("m3:")) {
        return m3(parse_m3_method(text.substr(3)));
    }
    throw DomainError("unknown mitigator '" + std::string(text) +
                      "'; expected raw, filter:<low,high|k%> or m3[:direct|iterative]");
}

std::string MitigatorSpec::label() const {
    switch (kind) {
        case Kind::Raw: return "raw";
        case Kind::Filter: return "filter(" + range.to_string() + ")";
        case Kind::M3: return "m3(" + to_string(method) + ")";
    }
    return "?";
}

double Mitigated::parity(std::string_view mask) const {
    return quasi ? parity_expectation(*quasi, mask) : parity_expectation(probs, mask);
}

Mitigated apply_mitigator(const MitigatorSpec& spec, const Counts& counts,
                          const std::vector<QubitCalibration>* cal) {
    using clock = std::chrono::steady_clock;
    Mitigated out;
    const auto start = clock::now();
    switch (spec.kind) {
        case MitigatorSpec::Kind::Raw:
            out.probs = counts_to_probs(counts);
            break;
        case MitigatorSpec::Kind::Filter: {
            FilterReport report = mitigate_counts(counts, spec.range);
            out.probs = std::move(report.output);
            out.zeroed = std::move(report.zeroed);
            break;
        }
        case MitigatorSpec::Kind::M3: {
            if (cal == nullptr) {
                throw DomainError("m3 mitigation needs a calibration");
            }
            QuasiDist quasi = mitigate_m3(counts, *cal, spec.method);
            out.probs = quasi_to_nearest_probs(quasi);
            out.quasi = std::move(quasi);
            break;
        }
    }
    out.correction_us =
        std::chrono::duration<double, std::micro>(clock::now() - start).count();
    return out;
}

}  // namespace qmitigate
