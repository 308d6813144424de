#pragma once

// Closed-form round-count bounds and limit expressions used for experiment
// design and acceptance checks. All formulas are taken with natural
// logarithms; upper bounds are ceiled into usable round counts (and clamped
// to >= 1), lower-bound regime thresholds are floored.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string_view>

namespace coupons {

namespace detail {

inline void check_sizes(std::int64_t n, std::int64_t m) {
    if (n < 1 || m < 1) {
        throw std::domain_error("bounds: n and m must be >= 1");
    }
}

inline std::int64_t ceil_clamped(double value) {
    const auto r = static_cast<std::int64_t>(std::ceil(value));
    return r < 1 ? 1 : r;
}

}  // namespace detail

// Samples per collector after which every collector completes without any
// exchanges, except with probability at most 1/(mn): ceil(2 n ln(mn)).
inline std::int64_t rc_no_exchange_ub(std::int64_t n, std::int64_t m) {
    detail::check_sizes(n, m);
    return detail::ceil_clamped(2.0 * static_cast<double>(n) *
                                std::log(static_cast<double>(m) * static_cast<double>(n)));
}

// Samples per collector after which every coupon type has at least m copies
// globally (so unlimited exchanging could finish every collection), except
// with probability at most 1/n: ceil(16 (n + n ln n / m)).
inline std::int64_t rc_unlimited_ub(std::int64_t n, std::int64_t m) {
    detail::check_sizes(n, m);
    const double nd = static_cast<double>(n);
    return detail::ceil_clamped(16.0 * (nd + nd * std::log(nd) / static_cast<double>(m)));
}

// Collection rounds required by the surplus-to-needy exchange guarantee:
// ceil(36 (n + n ln n / m)).
inline std::int64_t rc_main_ub(std::int64_t n, std::int64_t m) {
    detail::check_sizes(n, m);
    const double nd = static_cast<double>(n);
    return detail::ceil_clamped(36.0 * (nd + nd * std::log(nd) / static_cast<double>(m)));
}

// Interactions that finish every collection under surplus-to-needy, given
// rc_main_ub collection rounds, except with probability at most 1/(mn):
// ceil(6 m ln(mn)).
inline std::int64_t re_main_ub(std::int64_t n, std::int64_t m) {
    detail::check_sizes(n, m);
    return detail::ceil_clamped(6.0 * static_cast<double>(m) *
                                std::log(static_cast<double>(m) * static_cast<double>(n)));
}

// Lower-bound regime thresholds. Runs at or below these values are expected
// to fail; they parameterize the stress presets, not recommendations.

// floor(n ln n / 4): collection rounds below which no single collector
// completes with constant probability.
inline std::int64_t quarter_n_ln_n(std::int64_t n) {
    detail::check_sizes(n, 1);
    const double nd = static_cast<double>(n);
    return static_cast<std::int64_t>(std::floor(nd * std::log(nd) / 4.0));
}

// floor(n log2 m / 4): without exchanges, success probability at most
// exp(-sqrt(m)) at this many collection rounds.
inline std::int64_t quarter_n_log2_m(std::int64_t n, std::int64_t m) {
    detail::check_sizes(n, m);
    return static_cast<std::int64_t>(
        std::floor(static_cast<double>(n) * std::log2(static_cast<double>(m)) / 4.0));
}

// floor(m log2 n / 8): interactions below which some collector is left out
// with probability at least 1/sqrt(n).
inline std::int64_t eighth_m_log2_n(std::int64_t n, std::int64_t m) {
    detail::check_sizes(n, m);
    return static_cast<std::int64_t>(
        std::floor(static_cast<double>(m) * std::log2(static_cast<double>(n)) / 8.0));
}

// floor(m log2 m / 16): interactions below which some needy collector is
// never paired, with probability 1 - o(1).
inline std::int64_t sixteenth_m_log2_m(std::int64_t n, std::int64_t m) {
    detail::check_sizes(n, m);
    return static_cast<std::int64_t>(
        std::floor(static_cast<double>(m) * std::log2(static_cast<double>(m)) / 16.0));
}

// floor(m log2(mn) / 16): the combined necessity threshold.
inline std::int64_t sixteenth_m_log2_mn(std::int64_t n, std::int64_t m) {
    detail::check_sizes(n, m);
    return static_cast<std::int64_t>(std::floor(
        static_cast<double>(m) *
        std::log2(static_cast<double>(m) * static_cast<double>(n)) / 16.0));
}

// Limit law of the classic single collector around n ln n:
//   P(X <= n(ln n - c)) -> exp(-exp(c))
//   P(X >= n(ln n + c)) -> 1 - exp(-exp(-c))
inline double er_limit_lower(double c) { return std::exp(-std::exp(c)); }
inline double er_limit_upper(double c) { return 1.0 - std::exp(-std::exp(-c)); }

// Expected samples from a single stream until m full sets are assembled:
// n (ln n + (m-1) ln ln n). The additive O(n) term is intentionally omitted;
// consumers allow +-3n of slack. Requires n >= 3 so that ln ln n > 0.
inline double newman_shepp_expectation(std::int64_t n, std::int64_t m) {
    if (n < 3) {
        throw std::domain_error("newman_shepp_expectation: n must be >= 3");
    }
    if (m < 1) {
        throw std::domain_error("newman_shepp_expectation: m must be >= 1");
    }
    const double nd = static_cast<double>(n);
    return nd * (std::log(nd) +
                 static_cast<double>(m - 1) * std::log(std::log(nd)));
}

struct BoundReport {
    std::int64_t n = 0;
    std::int64_t m = 0;
    std::int64_t rc_no_exchange_ub = 0;
    std::int64_t rc_unlimited_ub = 0;
    std::int64_t rc_main_ub = 0;
    std::int64_t re_main_ub = 0;

    static constexpr std::string_view kRcNoExchangeFormula = "ceil(2*n*ln(m*n))";
    static constexpr std::string_view kRcUnlimitedFormula = "ceil(16*(n + n*ln(n)/m))";
    static constexpr std::string_view kRcMainFormula = "ceil(36*(n + n*ln(n)/m))";
    static constexpr std::string_view kReMainFormula = "ceil(6*m*ln(m*n))";
};

inline BoundReport make_bound_report(std::int64_t n, std::int64_t m) {
    detail::check_sizes(n, m);
    return BoundReport{n,
                       m,
                       rc_no_exchange_ub(n, m),
                       rc_unlimited_ub(n, m),
                       rc_main_ub(n, m),
                       re_main_ub(n, m)};
}

}  // namespace coupons
