#include "coupons/variants.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace coupons {

UntilCompleteResult samples_until_m_sets(std::int64_t n, std::int64_t m,
                                         RngStream& rng) {
    if (n < 1) {
        throw std::domain_error("samples_until_m_sets: n must be >= 1");
    }
    if (m < 1) {
        throw std::domain_error("samples_until_m_sets: m must be >= 1");
    }
    std::vector<std::int64_t> counts(static_cast<std::size_t>(n), 0);
    std::int64_t deficient_types = n;
    std::int64_t draws = 0;
    while (deficient_types > 0) {
        const auto coupon = rng.below(static_cast<std::uint64_t>(n));
        ++draws;
        if (++counts[static_cast<std::size_t>(coupon)] == m) {
            --deficient_types;
        }
    }
    return UntilCompleteResult{draws};
}

UntilCompleteResult samples_until_complete(std::int64_t n, RngStream& rng) {
    return samples_until_m_sets(n, 1, rng);
}

std::vector<double> empirical_cdf(std::span<const UntilCompleteResult> results,
                                  std::span<const std::int64_t> thresholds) {
    if (results.empty()) {
        throw std::invalid_argument("empirical_cdf: results must be non-empty");
    }
    std::vector<std::int64_t> sorted;
    sorted.reserve(results.size());
    for (const auto& r : results) sorted.push_back(r.samples_used);
    std::sort(sorted.begin(), sorted.end());

    std::vector<double> fractions;
    fractions.reserve(thresholds.size());
    for (const auto t : thresholds) {
        const auto at_most =
            std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin();
        fractions.push_back(static_cast<double>(at_most) /
                            static_cast<double>(sorted.size()));
    }
    return fractions;
}

}  // namespace coupons
