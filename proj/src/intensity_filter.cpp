#include "qmitigate/intensity_filter.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <sstream>

namespace qmitigate {

IntensityRange::IntensityRange() : IntensityRange(0.01, 0.99) {}

IntensityRange::IntensityRange(double low, double high) : low_(low), high_(high) {
    if (!(low >= 0.0 && low < high && high <= 1.0)) {
        std::ostringstream msg;
        msg << "intensity range (" << low << ", " << high << ") must satisfy 0 <= low < high <= 1";
        throw DomainError(msg.str());
    }
}

IntensityRange IntensityRange::percent(double k) {
    return IntensityRange(k / 100.0, 1.0 - k / 100.0);
}

namespace {

double parse_number(std::string_view text, std::string_view whole) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    double value = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw DomainError("cannot parse intensity range '" + std::string(whole) +
                          "'; expected 'low,high' or 'k%'");
    }
    return value;
}

}  // namespace

IntensityRange IntensityRange::parse(std::string_view text) {
    if (!text.empty() && text.back() == '%') {
        return percent(parse_number(text.substr(0, text.size() - 1), text));
    }
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) {
        throw DomainError("cannot parse intensity range '" + std::string(text) +
                          "'; expected 'low,high' or 'k%'");
    }
    return IntensityRange(parse_number(text.substr(0, comma), text),
                          parse_number(text.substr(comma + 1), text));
}

std::string IntensityRange::to_string() const {
    std::ostringstream out;
    out << low_ << "," << high_;
    return out.str();
}

FilterAnnihilatedError::FilterAnnihilatedError(const IntensityRange& range)
    : std::runtime_error("filter annihilated distribution: no outcome probability exceeds the low "
                         "edge of intensity range (" +
                         range.to_string() + "); retry with a narrower range"),
      range_(range) {}

Table<double> rescale_intensity(const ProbDist& p, const IntensityRange& range) {
    const double low = range.low();
    const double high = range.high();
    const double span = high - low;
    Table<double> out;
    out.reserve(p.entries().size());
    for (const auto& [key, v] : p.entries()) {
        out.emplace_back(key, (std::clamp(v, low, high) - low) / span);
    }
    return out;
}

FilterReport mitigate_counts(const Counts& counts, const IntensityRange& range) {
    const auto start = std::chrono::steady_clock::now();

    FilterReport report;
    report.range = range;
    report.input = counts_to_probs(counts);
    report.rescaled = rescale_intensity(report.input, range);

    double total = 0.0;
    for (const auto& [key, v] : report.rescaled) {
        total += v;
        if (v == 0.0) {
            report.zeroed.push_back(key);
        }
    }
    if (!(total > 0.0)) {
        throw FilterAnnihilatedError(range);
    }

    Table<double> normalized;
    normalized.reserve(report.rescaled.size());
    for (const auto& [key, v] : report.rescaled) {
        normalized.emplace_back(key, v / total);
    }
    report.output = ProbDist(std::move(normalized), keys_validated);
    report.output_counts = probs_to_counts(report.output, counts.shots());

    report.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return report;
}

nlohmann::json to_json(const FilterReport& report) {
    return {
        {"range", {report.range.low(), report.range.high()}},
        {"input", table_to_json(report.input.entries())},
        {"rescaled", table_to_json(report.rescaled)},
        {"output", table_to_json(report.output.entries())},
        {"output_counts", counts_to_json(report.output_counts)},
        {"zeroed", report.zeroed},
        {"elapsed_ms", report.elapsed_ms},
    };
}

}  // namespace qmitigate
