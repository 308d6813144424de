#pragma once

// Statistical reductions over trial outcomes: success fractions with Wilson
// score intervals, summary statistics with nearest-rank quantiles, and the
// chi-square uniformity test backing the RNG acceptance checks.
//
// Accumulators merge associatively and commutatively, so per-worker partials
// can be combined in any order without changing the result.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace coupons {

// Two-sided normal quantiles used throughout: 95% for reported intervals,
// 99.9% for acceptance checks against exact oracle values.
inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ999 = 3.2905267314919255;

// Wilson score interval for `successes` out of `trials`, clipped to [0, 1].
// Valid near success probabilities of 0 and 1, where the normal
// approximation interval is not.
[[nodiscard]] std::pair<double, double> wilson_interval(std::int64_t successes,
                                                        std::int64_t trials,
                                                        double z);

struct SuccessSummary {
    std::int64_t trials = 0;
    std::int64_t successes = 0;
    double fraction = 0.0;
    double wilson_low = 0.0;
    double wilson_high = 0.0;
    double z = kZ95;
};

[[nodiscard]] SuccessSummary make_success_summary(std::int64_t successes,
                                                  std::int64_t trials,
                                                  double z = kZ95);

struct SuccessAccumulator {
    std::int64_t trials = 0;
    std::int64_t successes = 0;

    void add(bool success) {
        ++trials;
        successes += success ? 1 : 0;
    }
    void merge(const SuccessAccumulator& other) {
        trials += other.trials;
        successes += other.successes;
    }
    [[nodiscard]] SuccessSummary summary(double z = kZ95) const {
        return make_success_summary(successes, trials, z);
    }
};

struct SummaryStats {
    static constexpr std::array<double, 5> kQuantileLevels = {0.05, 0.25, 0.5,
                                                              0.75, 0.95};
    std::int64_t count = 0;
    double mean = 0.0;
    double stddev = 0.0;  // population standard deviation
    double min = 0.0;
    double max = 0.0;
    std::array<double, 5> quantiles = {};  // nearest-rank at kQuantileLevels
};

// Nearest-rank quantiles: the ceil(q * count)-th order statistic (1-based).
// Mean and deviation are computed over the sorted multiset, so any merge
// order over a partition of the data produces identical output.
// Throws std::invalid_argument on empty input.
[[nodiscard]] SummaryStats summarize(std::span<const double> values);

struct ValuesAccumulator {
    std::vector<double> values;

    void add(double v) { values.push_back(v); }
    void merge(const ValuesAccumulator& other) {
        values.insert(values.end(), other.values.begin(), other.values.end());
    }
    [[nodiscard]] SummaryStats summary() const { return summarize(values); }
};

// p-value of the chi-square goodness-of-fit statistic for `observed` counts
// against the uniform distribution over the categories (k - 1 degrees of
// freedom). Requires >= 2 categories and a positive total count.
[[nodiscard]] double chi_square_uniform(std::span<const std::int64_t> observed);

}  // namespace coupons
