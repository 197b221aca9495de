#include "qmitigate/m3.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qmitigate/simulator.hpp"

namespace qmitigate {

M3Method parse_m3_method(std::string_view text) {
    if (text == "direct") return M3Method::Direct;
    if (text == "iterative") return M3Method::Iterative;
    throw DomainError("unknown m3 method '" + std::string(text) + "'; expected direct|iterative");
}

std::string to_string(M3Method method) {
    return method == M3Method::Direct ? "direct" : "iterative";
}

std::vector<QubitCalibration> calibrate(const NoiseProfile& noise, int qubits,
                                        std::uint64_t shots, std::uint64_t seed) {
    Circuit zeros(qubits, qubits);
    zeros.measure_all();
    Circuit ones(qubits, qubits);
    for (int q = 0; q < qubits; ++q) {
        ones.x(q);
    }
    ones.measure_all();

    const Counts c0 = run_shots(zeros, noise, shots, derive_seed(seed, "calibration/zeros"));
    const Counts c1 = run_shots(ones, noise, shots, derive_seed(seed, "calibration/ones"));

    std::vector<std::uint64_t> read_one(static_cast<std::size_t>(qubits), 0);
    std::vector<std::uint64_t> read_zero(static_cast<std::size_t>(qubits), 0);
    const auto w = static_cast<std::size_t>(qubits);
    for (const auto& [key, n] : c0.entries()) {
        for (std::size_t k = 0; k < w; ++k) {
            if (key[w - 1 - k] == '1') read_one[k] += n;
        }
    }
    for (const auto& [key, n] : c1.entries()) {
        for (std::size_t k = 0; k < w; ++k) {
            if (key[w - 1 - k] == '0') read_zero[k] += n;
        }
    }
    std::vector<QubitCalibration> out(w);
    const double total = static_cast<double>(shots);
    for (std::size_t k = 0; k < w; ++k) {
        out[k].e01 = static_cast<double>(read_one[k]) / total;
        out[k].e10 = static_cast<double>(read_zero[k]) / total;
    }
    return out;
}

namespace {

std::uint64_t parse_state(const BitString& s) {
    std::uint64_t v = 0;
    for (char c : s) {
        v = (v << 1) | static_cast<std::uint64_t>(c == '1');
    }
    return v;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

std::string worst_calibration(const std::vector<QubitCalibration>& cal) {
    std::size_t worst = 0;
    for (std::size_t k = 1; k < cal.size(); ++k) {
        if (cal[k].e01 + cal[k].e10 > cal[worst].e01 + cal[worst].e10) worst = k;
    }
    std::ostringstream out;
    out << "qubit " << worst << " (e01=" << cal[worst].e01 << ", e10=" << cal[worst].e10 << ")";
    return out.str();
}

}  // namespace

ReducedSystem::ReducedSystem(const Counts& counts, const std::vector<QubitCalibration>& cal) {
    if (cal.size() != counts.width()) {
        throw DomainError("calibration covers " + std::to_string(cal.size()) +
                          " qubits but bitstrings have width " + std::to_string(counts.width()));
    }
    if (counts.width() > 64) {
        throw DomainError("m3 supports at most 64 measured bits");
    }
    for (const auto& c : cal) {
        c.validate();
    }
    const double shots = static_cast<double>(counts.shots());
    for (const auto& [key, n] : counts.entries()) {
        if (n == 0) continue;
        labels_.push_back(key);
        states_.push_back(parse_state(key));
        rhs_.push_back(static_cast<double>(n) / shots);
    }
    confusion_.resize(cal.size());
    for (std::size_t k = 0; k < cal.size(); ++k) {
        confusion_[k][0][0] = 1.0 - cal[k].e01;
        confusion_[k][1][0] = cal[k].e01;
        confusion_[k][0][1] = cal[k].e10;
        confusion_[k][1][1] = 1.0 - cal[k].e10;
    }
}

double ReducedSystem::element(std::size_t row, std::size_t col) const {
    const std::uint64_t observed = states_[row];
    const std::uint64_t prepared = states_[col];
    double v = 1.0;
    for (std::size_t k = 0; k < confusion_.size(); ++k) {
        v *= confusion_[k][(observed >> k) & 1U][(prepared >> k) & 1U];
    }
    return v;
}

void ReducedSystem::multiply(const std::vector<double>& x, std::vector<double>& y) const {
    const std::size_t n = dimension();
    y.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            acc += element(i, j) * x[j];
        }
        y[i] = acc;
    }
}

std::vector<double> ReducedSystem::dense() const {
    const std::size_t n = dimension();
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a[i * n + j] = element(i, j);
        }
    }
    return a;
}

ConvergenceError::ConvergenceError(std::size_t iterations, double residual)
    : std::runtime_error("iterative solver did not converge after " + std::to_string(iterations) +
                         " iterations; relative residual " + std::to_string(residual)),
      residual_(residual) {}

std::vector<double> solve_direct(const ReducedSystem& system) {
    const std::size_t n = system.dimension();
    std::vector<double> a = system.dense();
    std::vector<double> x = system.rhs();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
        }
        if (std::abs(a[pivot * n + col]) < 1e-14) {
            throw SingularSystemError("reduced assignment matrix is singular at column " +
                                      std::to_string(col) + " (" + system.labels()[col] + ")");
        }
        if (pivot != col) {
            std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(col * n),
                             a.begin() + static_cast<std::ptrdiff_t>((col + 1) * n),
                             a.begin() + static_cast<std::ptrdiff_t>(pivot * n));
            std::swap(x[col], x[pivot]);
        }
        const double d = a[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / d;
            if (f == 0.0) continue;
            a[r * n + col] = 0.0;
            for (std::size_t c = col + 1; c < n; ++c) {
                a[r * n + c] -= f * a[col * n + c];
            }
            x[r] -= f * x[col];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        double acc = x[i];
        for (std::size_t c = i + 1; c < n; ++c) {
            acc -= a[i * n + c] * x[c];
        }
        x[i] = acc / a[i * n + i];
    }
    return x;
}

std::vector<double> solve_iterative(const ReducedSystem& system, const IterativeOptions& options) {
    const std::size_t n = system.dimension();
    const std::vector<double>& b = system.rhs();
    const double bnorm = norm2(b);
    std::vector<double> x = b;
    if (bnorm == 0.0) {
        return x;
    }
    std::vector<double> r(n);
    system.multiply(x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    double residual = norm2(r) / bnorm;
    if (residual < options.tolerance) {
        return x;
    }

    const std::vector<double> shadow = r;
    std::vector<double> p(n, 0.0), v(n, 0.0), s(n), t(n);
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    for (std::size_t it = 1; it <= options.max_iterations; ++it) {
        const double rho_next = dot(shadow, r);
        if (std::abs(rho_next) < 1e-300) {
            throw ConvergenceError(it, residual);
        }
        const double beta = (rho_next / rho) * (alpha / omega);
        rho = rho_next;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        system.multiply(p, v);
        const double sv = dot(shadow, v);
        if (sv == 0.0) {
            throw ConvergenceError(it, residual);
        }
        alpha = rho / sv;
        for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        if (norm2(s) / bnorm < options.tolerance) {
            for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
            return x;
        }
        system.multiply(s, t);
        const double tt = dot(t, t);
        omega = tt == 0.0 ? 0.0 : dot(t, s) / tt;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i] + omega * s[i];
            r[i] = s[i] - omega * t[i];
        }
        residual = norm2(r) / bnorm;
        if (residual < options.tolerance) {
            return x;
        }
        if (omega == 0.0) {
            throw ConvergenceError(it, residual);
        }
    }
    throw ConvergenceError(options.max_iterations, residual);
}

QuasiDist mitigate_m3(const Counts& counts, const std::vector<QubitCalibration>& cal,
                      M3Method method, const IterativeOptions& options) {
    const ReducedSystem system(counts, cal);
    std::vector<double> x;
    try {
        x = method == M3Method::Direct ? solve_direct(system) : solve_iterative(system, options);
    } catch (const SingularSystemError& e) {
        throw SingularSystemError(std::string(e.what()) + "; worst calibration " +
                                  worst_calibration(cal));
    }
    const double total = std::accumulate(x.begin(), x.end(), 0.0);
    if (!std::isfinite(total) || std::abs(total) < 1e-300) {
        throw SingularSystemError("mitigated vector has no mass; worst calibration " +
                                  worst_calibration(cal));
    }
    Table<double> out;
    out.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out.emplace_back(system.labels()[i], x[i] / total);
    }
    return QuasiDist(std::move(out));
}

ProbDist quasi_to_nearest_probs(const QuasiDist& q) {
    double positive = 0.0;
    for (const auto& [key, v] : q.entries()) {
        if (v > 0.0) positive += v;
    }
    if (!(positive > 0.0)) {
        throw DomainError("quasi-distribution has no positive entry");
    }
    Table<double> out;
    out.reserve(q.entries().size());
    for (const auto& [key, v] : q.entries()) {
        out.emplace_back(key, v > 0.0 ? v / positive : 0.0);
    }
    return ProbDist(std::move(out));
}

}  // namespace qmitigate
