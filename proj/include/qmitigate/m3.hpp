#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qmitigate/dist.hpp"
#include "qmitigate/noise.hpp"

namespace qmitigate {

enum class M3Method { Direct, Iterative };

M3Method parse_m3_method(std::string_view text);
std::string to_string(M3Method method);

/// Readout rates estimated from an all-|0> and an all-|1> circuit run under
/// `noise`.
std::vector<QubitCalibration> calibrate(const NoiseProfile& noise, int qubits,
                                        std::uint64_t shots, std::uint64_t seed);

/// Assignment matrix restricted to the observed bitstrings. Entry (i, j) is
/// the probability of reading states[i] when states[j] was prepared.
class ReducedSystem {
  public:
    ReducedSystem(const Counts& counts, const std::vector<QubitCalibration>& cal);

    std::size_t dimension() const { return states_.size(); }
    const std::vector<BitString>& labels() const { return labels_; }
    const std::vector<double>& rhs() const { return rhs_; }

    double element(std::size_t row, std::size_t col) const;
    /// y = A x without materializing A.
    void multiply(const std::vector<double>& x, std::vector<double>& y) const;
    /// Row-major dense copy of A.
    std::vector<double> dense() const;

  private:
    std::vector<BitString> labels_;
    std::vector<std::uint64_t> states_;
    std::vector<double> rhs_;
    // confusion_[k][observed][true] for qubit k.
    std::vector<std::array<std::array<double, 2>, 2>> confusion_;
};

class SingularSystemError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(std::size_t iterations, double residual);
    double residual() const { return residual_; }

  private:
    double residual_;
};

struct IterativeOptions {
    std::size_t max_iterations = 1000;
    double tolerance = 1e-8;
};

/// Dense LU with partial pivoting.
std::vector<double> solve_direct(const ReducedSystem& system);

/// Unpreconditioned BiCGSTAB on the matrix-free product.
std::vector<double> solve_iterative(const ReducedSystem& system, const IterativeOptions& options = {});

QuasiDist mitigate_m3(const Counts& counts, const std::vector<QubitCalibration>& cal,
                      M3Method method = M3Method::Direct, const IterativeOptions& options = {});

/// Clips negatives and renormalizes. Not the L2-nearest projection.
ProbDist quasi_to_nearest_probs(const QuasiDist& q);

}  // namespace qmitigate
