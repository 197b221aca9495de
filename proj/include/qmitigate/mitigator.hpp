#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qmitigate/dist.hpp"
#include "qmitigate/intensity_filter.hpp"
#include "qmitigate/m3.hpp"

namespace qmitigate {

/// Which correction to apply to a counts object: none, the intensity filter,
/// or the reduced-subspace confusion-matrix baseline.
struct MitigatorSpec {
    enum class Kind { Raw, Filter, M3 };

    Kind kind = Kind::Raw;
    IntensityRange range;
    M3Method method = M3Method::Direct;

    static MitigatorSpec raw() { return {}; }
    static MitigatorSpec filter(IntensityRange range) { return {Kind::Filter, range, M3Method::Direct}; }
    static MitigatorSpec m3(M3Method method = M3Method::Direct) { return {Kind::M3, {}, method}; }

    /// "raw" | "filter:<low,high|k%>" | "m3[:direct|iterative]"
    static MitigatorSpec parse(std::string_view text);
    /// Stable label used in reports, e.g. "filter(0.02,0.98)".
    std::string label() const;
};

struct Mitigated {
    ProbDist probs;
    /// Set for M3, whose raw output may carry negative entries.
    std::optional<QuasiDist> quasi;
    /// Outcomes the filter clipped to zero.
    std::vector<BitString> zeroed;
    double correction_us = 0.0;

    double parity(std::string_view mask) const;
};

/// `cal` is required for M3 and ignored otherwise.
Mitigated apply_mitigator(const MitigatorSpec& spec, const Counts& counts,
                          const std::vector<QubitCalibration>* cal = nullptr);

}  // namespace qmitigate
