#include "qmitigate/dist.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qmitigate {

void validate_bitstring(std::string_view s) {
    if (s.empty()) {
        throw DomainError("bitstring must be non-empty");
    }
    for (char c : s) {
        if (c != '0' && c != '1') {
            throw DomainError("bitstring '" + std::string(s) + "' contains a character other than 0/1");
        }
    }
}

template <typename V>
void normalize_table(Table<V>& table) {
    if (table.empty()) {
        return;
    }
    if (!std::is_sorted(table.begin(), table.end(),
                        [](const auto& a, const auto& b) { return a.first < b.first; })) {
        std::sort(table.begin(), table.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    }
    const std::size_t width = table.front().first.size();
    for (std::size_t i = 0; i < table.size(); ++i) {
        validate_bitstring(table[i].first);
        if (table[i].first.size() != width) {
            throw DomainError("bitstrings of mixed width: '" + table.front().first + "' and '" +
                              table[i].first + "'");
        }
        if (i > 0 && table[i].first == table[i - 1].first) {
            throw DomainError("duplicate bitstring '" + table[i].first + "'");
        }
    }
}

template void normalize_table<std::uint64_t>(Table<std::uint64_t>&);
template void normalize_table<double>(Table<double>&);

template <typename V>
const V* find_value(const Table<V>& table, std::string_view key) {
    auto it = std::lower_bound(table.begin(), table.end(), key,
                               [](const auto& e, std::string_view k) { return e.first < k; });
    if (it == table.end() || it->first != key) {
        return nullptr;
    }
    return &it->second;
}

template const std::uint64_t* find_value<std::uint64_t>(const Table<std::uint64_t>&, std::string_view);
template const double* find_value<double>(const Table<double>&, std::string_view);

namespace {

std::uint64_t tally(const Table<std::uint64_t>& entries) {
    return std::accumulate(entries.begin(), entries.end(), std::uint64_t{0},
                           [](std::uint64_t acc, const auto& e) { return acc + e.second; });
}

double mass(const Table<double>& entries) {
    // Kahan summation.
    double sum = 0.0;
    double comp = 0.0;
    for (const auto& [key, v] : entries) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

void check_width(std::size_t width, std::string_view other, const char* what) {
    if (width != 0 && other.size() != width) {
        throw DomainError(std::string(what) + " '" + std::string(other) + "' has width " +
                          std::to_string(other.size()) + ", distribution has width " +
                          std::to_string(width));
    }
}

}  // namespace

Counts::Counts(Table<std::uint64_t> entries, std::uint64_t shots)
    : entries_(std::move(entries)), shots_(shots) {
    if (shots_ == 0) {
        throw DomainError("shots must be positive");
    }
    normalize_table(entries_);
    const std::uint64_t total = tally(entries_);
    if (total != shots_) {
        throw DomainError("counts sum to " + std::to_string(total) + " but shots = " +
                          std::to_string(shots_));
    }
}

Counts::Counts(Table<std::uint64_t> entries, std::uint64_t shots, KeysValidated)
    : entries_(std::move(entries)), shots_(shots) {
    if (shots_ == 0) {
        throw DomainError("shots must be positive");
    }
    const std::uint64_t total = tally(entries_);
    if (total != shots_) {
        throw DomainError("counts sum to " + std::to_string(total) + " but shots = " +
                          std::to_string(shots_));
    }
}

Counts::Counts(Table<std::uint64_t> entries) : entries_(std::move(entries)) {
    normalize_table(entries_);
    shots_ = tally(entries_);
    if (shots_ == 0) {
        throw DomainError("shots must be positive");
    }
}

std::uint64_t Counts::get(std::string_view key) const {
    const auto* v = find_value(entries_, key);
    return v ? *v : 0;
}

std::size_t Counts::support_size() const {
    return static_cast<std::size_t>(
        std::count_if(entries_.begin(), entries_.end(), [](const auto& e) { return e.second > 0; }));
}

ProbDist::ProbDist(Table<double> entries) : ProbDist(std::move(entries), keys_validated) {
    normalize_table(entries_);
}

ProbDist::ProbDist(Table<double> entries, KeysValidated) : entries_(std::move(entries)) {
    for (const auto& [key, v] : entries_) {
        if (!(v >= 0.0) || v > 1.0 + kSumTolerance) {
            throw DomainError("probability of '" + key + "' is " + std::to_string(v) +
                              ", outside [0,1]");
        }
    }
    const double total = mass(entries_);
    if (std::abs(total - 1.0) > kSumTolerance) {
        throw DomainError("probabilities sum to " + std::to_string(total));
    }
}

double ProbDist::get(std::string_view key) const {
    const auto* v = find_value(entries_, key);
    return v ? *v : 0.0;
}

QuasiDist::QuasiDist(Table<double> entries) : entries_(std::move(entries)) {
    normalize_table(entries_);
    for (const auto& [key, v] : entries_) {
        if (!std::isfinite(v)) {
            throw DomainError("quasi-probability of '" + key + "' is not finite");
        }
    }
    const double total = mass(entries_);
    if (std::abs(total - 1.0) > kSumTolerance) {
        throw DomainError("quasi-probabilities sum to " + std::to_string(total));
    }
}

double QuasiDist::get(std::string_view key) const {
    const auto* v = find_value(entries_, key);
    return v ? *v : 0.0;
}

ProbDist counts_to_probs(const Counts& counts) {
    if (counts.shots() == 0) {
        throw DomainError("counts_to_probs: shots = 0");
    }
    const double shots = static_cast<double>(counts.shots());
    Table<double> out;
    out.reserve(counts.entries().size());
    for (const auto& [key, n] : counts.entries()) {
        out.emplace_back(key, static_cast<double>(n) / shots);
    }
    const double total = mass(out);
    if (total != 1.0) {
        for (auto& e : out) {
            e.second /= total;
        }
    }
    return ProbDist(std::move(out), keys_validated);
}

Counts probs_to_counts(const ProbDist& probs, std::uint64_t shots) {
    if (shots == 0) {
        throw DomainError("probs_to_counts: shots = 0");
    }
    const auto& entries = probs.entries();
    Table<std::uint64_t> out;
    out.reserve(entries.size());
    std::vector<double> remainder(entries.size());
    std::uint64_t assigned = 0;
    const double total = static_cast<double>(shots);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const double exact = entries[i].second * total;
        double whole = std::floor(exact);
        double rem = exact - whole;
        // Snap remainders within 1e-9 of an integer.
        if (rem > 1.0 - 1e-9) {
            whole += 1.0;
            rem = 0.0;
        } else if (rem < 1e-9) {
            rem = 0.0;
        }
        out.emplace_back(entries[i].first, static_cast<std::uint64_t>(whole));
        remainder[i] = rem;
        assigned += static_cast<std::uint64_t>(whole);
    }

    // Rank by remainder; equal remainders favour the smaller key.
    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (assigned < shots) {
        const std::uint64_t missing = shots - assigned;
        auto larger = [&](std::size_t a, std::size_t b) {
            return remainder[a] != remainder[b] ? remainder[a] > remainder[b] : a < b;
        };
        if (missing < order.size()) {
            std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(missing),
                             order.end(), larger);
            for (std::uint64_t k = 0; k < missing; ++k) {
                ++out[order[k]].second;
            }
        } else {
            std::sort(order.begin(), order.end(), larger);
            for (std::uint64_t k = 0; k < missing; ++k) {
                ++out[order[k % order.size()]].second;
            }
        }
    } else if (assigned > shots) {
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return remainder[a] != remainder[b] ? remainder[a] < remainder[b] : a > b;
        });
        std::uint64_t excess = assigned - shots;
        for (std::size_t k = 0; excess > 0; k = (k + 1) % order.size()) {
            if (out[order[k]].second > 0) {
                --out[order[k]].second;
                --excess;
            }
        }
    }
    return Counts(std::move(out), shots, keys_validated);
}

double hellinger_fidelity(const ProbDist& p, const ProbDist& q) {
    const auto& a = p.entries();
    const auto& b = q.entries();
    double overlap = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first < b[j].first) {
            ++i;
        } else if (b[j].first < a[i].first) {
            ++j;
        } else {
            overlap += std::sqrt(a[i].second * b[j].second);
            ++i;
            ++j;
        }
    }
    return std::min(1.0, overlap * overlap);
}

double total_variation(const ProbDist& p, const ProbDist& q) {
    const auto& a = p.entries();
    const auto& b = q.entries();
    double sum = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            sum += a[i++].second;
        } else if (i == a.size() || b[j].first < a[i].first) {
            sum += b[j++].second;
        } else {
            sum += std::abs(a[i++].second - b[j++].second);
        }
    }
    return 0.5 * sum;
}

double success_probability(const ProbDist& p, std::string_view target) {
    validate_bitstring(target);
    check_width(p.width(), target, "target");
    return p.get(target);
}

namespace {

double parity_of(const Table<double>& entries, std::size_t width, std::string_view mask) {
    validate_bitstring(mask);
    check_width(width, mask, "mask");
    double out = 0.0;
    for (const auto& [key, v] : entries) {
        bool odd = false;
        for (std::size_t k = 0; k < mask.size(); ++k) {
            odd ^= (mask[k] == '1' && key[k] == '1');
        }
        out += odd ? -v : v;
    }
    return out;
}

}  // namespace

double parity_expectation(const ProbDist& p, std::string_view mask) {
    return parity_of(p.entries(), p.width(), mask);
}

double parity_expectation(const QuasiDist& q, std::string_view mask) {
    return parity_of(q.entries(), q.width(), mask);
}

nlohmann::json counts_to_json(const Counts& counts) {
    nlohmann::json tallies = nlohmann::json::object();
    for (const auto& [key, n] : counts.entries()) {
        tallies[key] = n;
    }
    return {{"shots", counts.shots()}, {"counts", tallies}};
}

Counts counts_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("counts") || !j.at("counts").is_object()) {
        throw DomainError(R"(counts JSON must be an object with a "counts" object)");
    }
    Table<std::uint64_t> entries;
    for (const auto& [key, value] : j.at("counts").items()) {
        if (!value.is_number_integer() || value.get<std::int64_t>() < 0) {
            throw DomainError("count for '" + key + "' must be a non-negative integer");
        }
        entries.emplace_back(key, value.get<std::uint64_t>());
    }
    if (j.contains("shots")) {
        return Counts(std::move(entries), j.at("shots").get<std::uint64_t>());
    }
    return Counts(std::move(entries));
}

nlohmann::json table_to_json(const Table<double>& table) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [key, v] : table) {
        out[key] = v;
    }
    return out;
}

Table<double> table_from_json(const nlohmann::json& j) {
    Table<double> out;
    for (const auto& [key, value] : j.items()) {
        out.emplace_back(key, value.get<double>());
    }
    normalize_table(out);
    return out;
}

}  // namespace qmitigate
