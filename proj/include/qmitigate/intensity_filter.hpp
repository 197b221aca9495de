#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qmitigate/dist.hpp"

namespace qmitigate {

/// Input intensity window of the contrast stretch. Values below `low` go
/// black (0), values above `high` saturate (1), values in between are
/// stretched linearly onto [0, 1].
class IntensityRange {
  public:
    /// (0.01, 0.99)
    IntensityRange();
    IntensityRange(double low, double high);

    /// Accepts "low,high" (e.g. "0.03,0.97") or the percent shorthand "k%",
    /// which means (k/100, 1 - k/100).
    static IntensityRange parse(std::string_view text);
    static IntensityRange percent(double k);

    double low() const { return low_; }
    double high() const { return high_; }
    std::string to_string() const;

    friend bool operator==(const IntensityRange&, const IntensityRange&) = default;

  private:
    double low_;
    double high_;
};

class FilterAnnihilatedError : public std::runtime_error {
  public:
    explicit FilterAnnihilatedError(const IntensityRange& range);
    const IntensityRange& range() const { return range_; }

  private:
    IntensityRange range_;
};

struct FilterReport {
    IntensityRange range;
    ProbDist input;
    /// Clipped and stretched values before renormalization.
    Table<double> rescaled;
    ProbDist output;
    Counts output_counts;
    std::vector<BitString> zeroed;
    double elapsed_ms = 0.0;
};

Table<double> rescale_intensity(const ProbDist& p, const IntensityRange& range);

/// counts -> probabilities -> rescale -> renormalize -> counts at the
/// original shot count.
FilterReport mitigate_counts(const Counts& counts, const IntensityRange& range = {});

nlohmann::json to_json(const FilterReport& report);

}  // namespace qmitigate
