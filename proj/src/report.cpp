#include "qmitigate/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "qmitigate/dist.hpp"

namespace qmitigate {

std::vector<ReportFormat> parse_formats(std::string_view text) {
    std::vector<ReportFormat> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view item = text.substr(start, end - start);
        ReportFormat f;
        if (item == "json") {
            f = ReportFormat::Json;
        } else if (item == "csv") {
            f = ReportFormat::Csv;
        } else if (item == "svg") {
            f = ReportFormat::Svg;
        } else {
            throw DomainError("unknown report format '" + std::string(item) +
                              "' (expected json, csv or svg)");
        }
        if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
        start = end + 1;
    }
    return out;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string optional_number(const std::optional<double>& v) { return v ? number(*v) : ""; }

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#e377c2", "#17becf"};
constexpr int kPaletteSize = 8;

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

std::string fmt_tick(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

void svg_frame(std::ostringstream& os, const std::string& title, const std::string& xlabel,
               const std::string& ylabel) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
       << xml_escape(title) << "</text>\n";
    os << "<text x=\"" << kLeft + (kWidth - kLeft - kRight) / 2 << "\" y=\"" << kHeight - 15
       << "\" text-anchor=\"middle\">" << xml_escape(xlabel) << "</text>\n";
    const double cy = kTop + (kHeight - kTop - kBottom) / 2;
    os << "<text x=\"18\" y=\"" << cy << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << cy << ")\">" << xml_escape(ylabel) << "</text>\n";
}

void svg_legend(std::ostringstream& os, const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        const double y = kTop + 10 + 20.0 * static_cast<double>(i);
        os << "<rect x=\"" << kWidth - kRight + 15 << "\" y=\"" << y - 9
           << "\" width=\"12\" height=\"12\" fill=\"" << kPalette[i % kPaletteSize] << "\"/>\n";
        os << "<text x=\"" << kWidth - kRight + 32 << "\" y=\"" << y + 1 << "\">"
           << xml_escape(names[i]) << "</text>\n";
    }
}

std::pair<double, double> padded_range(double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) return {0.0, 1.0};
    if (hi - lo < 1e-12) {
        const double pad = std::max(std::abs(lo) * 0.05, 0.05);
        return {lo - pad, hi + pad};
    }
    const double pad = (hi - lo) * 0.05;
    return {lo - pad, hi + pad};
}

void svg_y_axis(std::ostringstream& os, double ylo, double yhi) {
    const double plot_h = kHeight - kTop - kBottom;
    for (int i = 0; i <= 5; ++i) {
        const double v = ylo + (yhi - ylo) * i / 5.0;
        const double y = kTop + plot_h * (1.0 - i / 5.0);
        os << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kWidth - kRight
           << "\" y2=\"" << y << "\" stroke=\"#e0e0e0\"/>\n";
        os << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">"
           << fmt_tick(v) << "</text>\n";
    }
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
       << kHeight - kBottom << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\""
       << kWidth - kRight << "\" y2=\"" << kHeight - kBottom << "\" stroke=\"black\"/>\n";
}

std::string line_chart(const std::string& title, const std::string& xlabel,
                       const std::string& ylabel, const std::vector<Series>& series) {
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
    double ylo = xlo, yhi = -xlo;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            xlo = std::min(xlo, x);
            xhi = std::max(xhi, x);
            ylo = std::min(ylo, y);
            yhi = std::max(yhi, y);
        }
    }
    if (!std::isfinite(xlo)) xlo = 0.0, xhi = 1.0;
    if (xhi - xlo < 1e-12) xlo -= 0.5, xhi += 0.5;
    std::tie(ylo, yhi) = padded_range(ylo, yhi);

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + plot_w * (x - xlo) / (xhi - xlo); };
    auto py = [&](double y) { return kTop + plot_h * (1.0 - (y - ylo) / (yhi - ylo)); };

    std::ostringstream os;
    svg_frame(os, title, xlabel, ylabel);
    svg_y_axis(os, ylo, yhi);
    for (int i = 0; i <= 5; ++i) {
        const double v = xlo + (xhi - xlo) * i / 5.0;
        os << "<text x=\"" << px(v) << "\" y=\"" << kHeight - kBottom + 16
           << "\" text-anchor=\"middle\">" << fmt_tick(v) << "</text>\n";
    }
    std::vector<std::string> names;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        names.push_back(s.name);
        const char* color = kPalette[i % kPaletteSize];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const auto& [x, y] : s.points) os << px(x) << ',' << py(y) << ' ';
        os << "\"/>\n";
        if (s.points.size() <= 40) {
            for (const auto& [x, y] : s.points) {
                os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\""
                   << color << "\"/>\n";
            }
        }
    }
    svg_legend(os, names);
    os << "</svg>\n";
    return os.str();
}

std::string bar_chart(const std::string& title, const std::vector<std::string>& categories,
                      const std::vector<std::string>& names,
                      const std::vector<std::vector<double>>& values) {
    double yhi = 0.0;
    for (const auto& v : values) {
        for (double y : v) yhi = std::max(yhi, y);
    }
    if (yhi <= 0.0) yhi = 1.0;
    yhi *= 1.05;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const double group_w = plot_w / static_cast<double>(std::max<std::size_t>(categories.size(), 1));
    const double bar_w = group_w * 0.8 / static_cast<double>(std::max<std::size_t>(names.size(), 1));

    std::ostringstream os;
    svg_frame(os, title, "outcome", "probability");
    svg_y_axis(os, 0.0, yhi);
    for (std::size_t c = 0; c < categories.size(); ++c) {
        const double gx = kLeft + group_w * static_cast<double>(c);
        for (std::size_t s = 0; s < names.size(); ++s) {
            const double v = values[s][c];
            const double h = plot_h * v / yhi;
            os << "<rect x=\"" << gx + group_w * 0.1 + bar_w * static_cast<double>(s) << "\" y=\""
               << kTop + plot_h - h << "\" width=\"" << bar_w << "\" height=\"" << h
               << "\" fill=\"" << kPalette[s % kPaletteSize] << "\"/>\n";
        }
        const double tx = gx + group_w / 2;
        const double ty = kHeight - kBottom + 14;
        os << "<text x=\"" << tx << "\" y=\"" << ty << "\" text-anchor=\"end\" font-size=\"10\" "
           << "transform=\"rotate(-45 " << tx << ' ' << ty << ")\">" << xml_escape(categories[c])
           << "</text>\n";
    }
    svg_legend(os, names);
    os << "</svg>\n";
    return os.str();
}

bool is_vqe(const ExperimentReport& report) {
    return report.experiment == "vqe-basic" || report.experiment == "heisenberg-vqe";
}

std::string x_label(const std::string& experiment) {
    if (experiment == "trotter") return "evolution time";
    if (experiment == "heisenberg-vqe") return "ring size";
    return "width (qubits)";
}

std::vector<Series> metric_series(const ExperimentReport& report,
                                  std::optional<double> MetricRow::*field) {
    std::vector<Series> out;
    for (const auto& m : report.mitigators()) {
        Series s{m, {}};
        for (const auto& row : report.rows) {
            if (row.mitigator == m && row.ok && (row.*field)) {
                s.points.emplace_back(row.x, *(row.*field));
            }
        }
        if (!s.points.empty()) out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

std::string report_to_csv(const ExperimentReport& report) {
    std::ostringstream os;
    os << "experiment,mitigator,configuration,x,ok,error,success_probability,"
          "hellinger_fidelity,energy,relative_error,calibration_us,correction_us,zeroed\n";
    for (const auto& r : report.rows) {
        std::string zeroed;
        for (const auto& z : r.zeroed) zeroed += (zeroed.empty() ? "" : ";") + z;
        os << csv_field(report.experiment) << ',' << csv_field(r.mitigator) << ','
           << csv_field(r.configuration) << ',' << number(r.x) << ',' << (r.ok ? "true" : "false")
           << ',' << csv_field(r.error) << ',' << optional_number(r.success_probability) << ','
           << optional_number(r.hellinger_fidelity) << ',' << optional_number(r.energy) << ','
           << optional_number(r.relative_error) << ',' << number(r.calibration_us) << ','
           << number(r.correction_us) << ',' << zeroed << '\n';
    }
    return os.str();
}

std::vector<std::pair<std::string, std::string>> report_to_svgs(const ExperimentReport& report) {
    std::vector<std::pair<std::string, std::string>> out;
    const auto configs = report.configurations();
    const std::string& id = report.experiment;

    if (is_vqe(report)) {
        std::vector<Series> traces;
        for (const auto& row : report.rows) {
            if (!row.ok || row.trace.empty()) continue;
            Series s{configs.size() > 1 ? row.mitigator + " " + row.configuration : row.mitigator,
                     {}};
            for (std::size_t i = 0; i < row.trace.size(); ++i) {
                s.points.emplace_back(static_cast<double>(i), row.trace[i]);
            }
            traces.push_back(std::move(s));
        }
        out.emplace_back("energy_trace",
                         line_chart(id + ": energy vs evaluation", "cost evaluation", "energy",
                                    traces));
        return out;
    }

    if (configs.size() > 1) {
        const auto success = metric_series(report, &MetricRow::success_probability);
        if (!success.empty()) {
            out.emplace_back("success_probability",
                             line_chart(id + ": success probability", x_label(id),
                                        "success probability", success));
        }
        const auto hellinger = metric_series(report, &MetricRow::hellinger_fidelity);
        if (!hellinger.empty()) {
            out.emplace_back("hellinger_fidelity",
                             line_chart(id + ": Hellinger fidelity to ideal", x_label(id),
                                        "Hellinger fidelity", hellinger));
        }
        return out;
    }

    for (const auto& config : configs) {
        std::vector<std::string> outcomes;
        std::vector<std::string> names;
        for (const auto& row : report.rows) {
            if (row.configuration != config || !row.ok) continue;
            names.push_back(row.mitigator);
            for (const auto& [key, v] : row.distribution) {
                if (std::find(outcomes.begin(), outcomes.end(), key) == outcomes.end()) {
                    outcomes.push_back(key);
                }
            }
        }
        std::sort(outcomes.begin(), outcomes.end());
        std::vector<std::vector<double>> values;
        for (const auto& row : report.rows) {
            if (row.configuration != config || !row.ok) continue;
            std::vector<double> v;
            for (const auto& key : outcomes) {
                const double* p = find_value(row.distribution, key);
                v.push_back(p ? *p : 0.0);
            }
            values.push_back(std::move(v));
        }
        const std::string stem = configs.size() > 1 ? "distribution_" + config : "distribution";
        out.emplace_back(stem, bar_chart(id + ": " + config + " distribution by mitigator",
                                         outcomes, names, values));
    }
    return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw std::runtime_error("failed writing " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() +
                                 ": " + ec.message());
    }
}

std::vector<std::filesystem::path> emit_report(const ExperimentReport& report,
                                               const std::filesystem::path& out_dir,
                                               const std::vector<ReportFormat>& formats) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec || !std::filesystem::is_directory(out_dir)) {
        throw std::runtime_error("output directory " + out_dir.string() + " is not writable");
    }
    std::vector<std::filesystem::path> written;
    for (ReportFormat f : formats) {
        if (f == ReportFormat::Json) {
            const auto path = out_dir / (report.experiment + ".json");
            write_atomic(path, to_json(report).dump(2) + "\n");
            written.push_back(path);
        } else if (f == ReportFormat::Csv) {
            const auto path = out_dir / (report.experiment + ".csv");
            write_atomic(path, report_to_csv(report));
            written.push_back(path);
        } else {
            for (const auto& [stem, svg] : report_to_svgs(report)) {
                const auto path = out_dir / (report.experiment + "_" + stem + ".svg");
                write_atomic(path, svg);
                written.push_back(path);
            }
        }
    }
    return written;
}

}  // namespace qmitigate
