#include "coupons/stats.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coupons {

std::pair<double, double> wilson_interval(std::int64_t successes,
                                          std::int64_t trials, double z) {
    if (trials < 1) {
        throw std::domain_error("wilson_interval: trials must be >= 1");
    }
    if (successes < 0 || successes > trials) {
        throw std::domain_error("wilson_interval: successes outside [0, trials]");
    }
    if (!(z > 0.0)) {
        throw std::domain_error("wilson_interval: z must be positive");
    }
    const double t = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / t;
    const double z2_over_t = z * z / t;
    const double denom = 1.0 + z2_over_t;
    const double center = (phat + z2_over_t / 2.0) / denom;
    const double half =
        z * std::sqrt(phat * (1.0 - phat) / t + z * z / (4.0 * t * t)) / denom;
    double low = std::clamp(center - half, 0.0, 1.0);
    double high = std::clamp(center + half, 0.0, 1.0);
    // The exact endpoints at the boundary counts; center-half can land one
    // ulp off zero and must not exclude a true p of 0 or 1.
    if (successes == 0) low = 0.0;
    if (successes == trials) high = 1.0;
    return {low, high};
}

SuccessSummary make_success_summary(std::int64_t successes, std::int64_t trials,
                                    double z) {
    const auto [low, high] = wilson_interval(successes, trials, z);
    return SuccessSummary{trials,
                          successes,
                          static_cast<double>(successes) /
                              static_cast<double>(trials),
                          low,
                          high,
                          z};
}

SummaryStats summarize(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("summarize: values must be non-empty");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const auto count = static_cast<std::int64_t>(sorted.size());

    double sum = 0.0;
    for (const double v : sorted) sum += v;
    const double mean = sum / static_cast<double>(count);
    double sq = 0.0;
    for (const double v : sorted) sq += (v - mean) * (v - mean);

    SummaryStats stats;
    stats.count = count;
    stats.mean = mean;
    stats.stddev = std::sqrt(sq / static_cast<double>(count));
    stats.min = sorted.front();
    stats.max = sorted.back();
    for (std::size_t i = 0; i < SummaryStats::kQuantileLevels.size(); ++i) {
        const double q = SummaryStats::kQuantileLevels[i];
        auto rank = static_cast<std::int64_t>(
            std::ceil(q * static_cast<double>(count)));
        rank = std::clamp<std::int64_t>(rank, 1, count);
        stats.quantiles[i] = sorted[static_cast<std::size_t>(rank - 1)];
    }
    return stats;
}

double chi_square_uniform(std::span<const std::int64_t> observed) {
    if (observed.size() < 2) {
        throw std::domain_error("chi_square_uniform: need at least 2 categories");
    }
    std::int64_t total = 0;
    for (const auto count : observed) {
        if (count < 0) {
            throw std::domain_error("chi_square_uniform: counts must be >= 0");
        }
        total += count;
    }
    if (total < 1) {
        throw std::domain_error("chi_square_uniform: total count must be >= 1");
    }
    const double expected =
        static_cast<double>(total) / static_cast<double>(observed.size());
    double statistic = 0.0;
    for (const auto count : observed) {
        const double diff = static_cast<double>(count) - expected;
        statistic += diff * diff / expected;
    }
    const double half_df = static_cast<double>(observed.size() - 1) / 2.0;
    // Upper tail of the chi-square distribution.
    return boost::math::gamma_q(half_df, statistic / 2.0);
}

}  // namespace coupons
