#pragma once

// Exact success probabilities on small instances, computed in arbitrary
// precision rational arithmetic. These serve as ground truth for validating
// the Monte Carlo engine; no floating point enters the core computations.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

#include "coupons/simulation.hpp"

namespace coupons {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// A probability in [0, 1] held as a rational in lowest terms.
struct ExactProbability {
    BigRational value;

    [[nodiscard]] BigInt numerator() const {
        return boost::multiprecision::numerator(value);
    }
    [[nodiscard]] BigInt denominator() const {
        return boost::multiprecision::denominator(value);
    }
    // Decimal rendering only; the rational is the result. Emits the given
    // number of significant digits (>= 15 for reporting), rounding half up.
    [[nodiscard]] std::string decimal(unsigned significant_digits = 17) const;
    [[nodiscard]] double to_double() const {
        return value.convert_to<double>();
    }
};

inline constexpr std::uint64_t kDefaultEnumerationBudget = 100'000'000;

// Raised when an instance would exceed its enumeration budget. Never a
// silent approximation: the caller either raises the budget or gives up.
class EnumerationBudgetExceeded : public std::runtime_error {
public:
    EnumerationBudgetExceeded(std::uint64_t required_steps, std::uint64_t budget);

    [[nodiscard]] std::uint64_t required_steps() const { return required_steps_; }
    [[nodiscard]] std::uint64_t budget() const { return budget_; }

private:
    std::uint64_t required_steps_;
    std::uint64_t budget_;
};

// P(one collector drawing r_c uniform samples over n types sees every type),
// by inclusion-exclusion: sum_{k=0}^{n} (-1)^k C(n,k) ((n-k)/n)^{r_c}.
[[nodiscard]] ExactProbability exact_single_collector_success(std::int64_t n,
                                                              std::int64_t r_c);

// P(all m independent collectors each see every type in r_c samples):
// the single-collector probability raised to the m-th power.
[[nodiscard]] ExactProbability exact_no_exchange_success(std::int64_t n,
                                                         std::int64_t m,
                                                         std::int64_t r_c);

// P(total_draws uniform draws over n types yield every type at least m
// times), via the recurrence N(c, t) = sum_{j=m}^{t} C(t, j) N(c-1, t-j)
// with N(0, 0) = 1 and N(0, t > 0) = 0, returning N(n, T) / n^T.
[[nodiscard]] ExactProbability exact_all_coupons_at_least_m(
    std::int64_t n, std::int64_t m, std::int64_t total_draws,
    std::uint64_t budget = kDefaultEnumerationBudget);

// Exhaustive oracle for the full two-phase process: enumerates every joint
// collection outcome (compositions of r_c into n parts per collector, with
// multinomial weights) and every interaction pair sequence (each unordered
// pair sequence has probability (2/(m(m-1)))^{r_e}), applying the strategy
// deterministically. Returns P(every collector ends complete).
[[nodiscard]] ExactProbability exact_two_phase_success(
    std::int64_t n, std::int64_t m, std::int64_t r_c, std::int64_t r_e,
    StrategyId strategy, std::uint64_t budget = kDefaultEnumerationBudget);

}  // namespace coupons
