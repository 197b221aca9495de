#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace qmitigate {

// Measured outcome label. The character at position k from the right is qubit
// (or classical bit) k.
using BitString = std::string;

class DomainError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Sorted, key-unique list of (bitstring, value) pairs. Missing keys are
/// implicit zeros everywhere in this library.
template <typename V>
using Table = std::vector<std::pair<BitString, V>>;

void validate_bitstring(std::string_view s);

/// Throws DomainError unless every key is a valid bitstring of one common
/// width and keys are unique. Sorts `table` in place.
template <typename V>
void normalize_table(Table<V>& table);

template <typename V>
const V* find_value(const Table<V>& table, std::string_view key);

/// Constructor tag: the table's keys were taken in order from an already
/// validated table, so key checks are skipped. Values are still checked.
struct KeysValidated {};
inline constexpr KeysValidated keys_validated{};

class Counts {
  public:
    Counts() = default;
    /// `shots` must equal the sum of all tallies.
    Counts(Table<std::uint64_t> entries, std::uint64_t shots);
    /// Shots inferred as the sum of tallies.
    explicit Counts(Table<std::uint64_t> entries);
    Counts(Table<std::uint64_t> entries, std::uint64_t shots, KeysValidated);

    const Table<std::uint64_t>& entries() const { return entries_; }
    std::uint64_t shots() const { return shots_; }
    std::size_t width() const { return entries_.empty() ? 0 : entries_.front().first.size(); }
    std::uint64_t get(std::string_view key) const;
    /// Number of outcomes with a non-zero tally.
    std::size_t support_size() const;

    friend bool operator==(const Counts&, const Counts&) = default;

  private:
    Table<std::uint64_t> entries_;
    std::uint64_t shots_ = 0;
};

/// Non-negative, sums to one within 1e-9.
class ProbDist {
  public:
    ProbDist() = default;
    explicit ProbDist(Table<double> entries);
    ProbDist(Table<double> entries, KeysValidated);

    const Table<double>& entries() const { return entries_; }
    std::size_t width() const { return entries_.empty() ? 0 : entries_.front().first.size(); }
    double get(std::string_view key) const;

  private:
    Table<double> entries_;
};

/// Sums to one within 1e-9; entries may be negative.
class QuasiDist {
  public:
    QuasiDist() = default;
    explicit QuasiDist(Table<double> entries);

    const Table<double>& entries() const { return entries_; }
    std::size_t width() const { return entries_.empty() ? 0 : entries_.front().first.size(); }
    double get(std::string_view key) const;

  private:
    Table<double> entries_;
};

inline constexpr double kSumTolerance = 1e-9;

ProbDist counts_to_probs(const Counts& counts);

/// Largest-remainder rounding of probs * shots. Ties go to the
/// lexicographically smaller bitstring.
Counts probs_to_counts(const ProbDist& probs, std::uint64_t shots);

/// (sum_i sqrt(p_i q_i))^2
double hellinger_fidelity(const ProbDist& p, const ProbDist& q);

/// 0.5 * sum_i |p_i - q_i|
double total_variation(const ProbDist& p, const ProbDist& q);

double success_probability(const ProbDist& p, std::string_view target);

/// sum_x p(x) * (-1)^popcount(x & mask)
double parity_expectation(const ProbDist& p, std::string_view mask);
double parity_expectation(const QuasiDist& q, std::string_view mask);

// Provider-agnostic counts format: {"shots": N, "counts": {"<bits>": n}}.
nlohmann::json counts_to_json(const Counts& counts);
Counts counts_from_json(const nlohmann::json& j);
nlohmann::json table_to_json(const Table<double>& table);
Table<double> table_from_json(const nlohmann::json& j);

}  // namespace qmitigate
