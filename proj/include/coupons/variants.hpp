#pragma once

// Run-until-complete variants: the classic single collector (sample until
// every type has been seen) and the m-full-sets variant (a single sampling
// stream until every type has been drawn at least m times).

#include <cstdint>
#include <span>
#include <vector>

#include "coupons/rng.hpp"

namespace coupons {

struct UntilCompleteResult {
    std::int64_t samples_used = 0;
};

// Draws uniform coupons until all n types have been seen at least once.
[[nodiscard]] UntilCompleteResult samples_until_complete(std::int64_t n,
                                                         RngStream& rng);

// Draws uniform coupons until every type has been drawn at least m times.
// With m = 1 this consumes the identical draw sequence as
// samples_until_complete and returns the identical count.
[[nodiscard]] UntilCompleteResult samples_until_m_sets(std::int64_t n,
                                                       std::int64_t m,
                                                       RngStream& rng);

// For each threshold t, the fraction of results with samples_used <= t.
// Throws std::invalid_argument on empty results.
[[nodiscard]] std::vector<double> empirical_cdf(
    std::span<const UntilCompleteResult> results,
    std::span<const std::int64_t> thresholds);

}  // namespace coupons
