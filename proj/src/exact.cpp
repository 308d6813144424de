#include "coupons/exact.hpp"

#include <cstddef>
#include <sstream>
#include <utility>
#include <vector>

namespace coupons {

namespace {

// Integer power with ipow(0, 0) = 1, the convention the inclusion-exclusion
// sum relies on for the k = n, r_c = 0 term.
BigInt ipow(BigInt base, std::int64_t exponent) {
    BigInt result = 1;
    while (exponent > 0) {
        if (exponent & 1) result *= base;
        base *= base;
        exponent >>= 1;
    }
    return result;
}

// Pascal's triangle: rows 0..max_row inclusive.
std::vector<std::vector<BigInt>> binomial_table(std::int64_t max_row) {
    std::vector<std::vector<BigInt>> table(static_cast<std::size_t>(max_row) + 1);
    for (std::size_t t = 0; t <= static_cast<std::size_t>(max_row); ++t) {
        table[t].resize(t + 1);
        table[t][0] = 1;
        table[t][t] = 1;
        for (std::size_t j = 1; j < t; ++j) {
            table[t][j] = table[t - 1][j - 1] + table[t - 1][j];
        }
    }
    return table;
}

std::uint64_t saturated_u64(const BigInt& value) {
    static const BigInt kMax = BigInt(~std::uint64_t{0});
    return value > kMax ? ~std::uint64_t{0} : value.convert_to<std::uint64_t>();
}

}  // namespace

EnumerationBudgetExceeded::EnumerationBudgetExceeded(std::uint64_t required_steps,
                                                     std::uint64_t budget)
    : std::runtime_error([&] {
          std::ostringstream msg;
          msg << "enumeration budget exceeded: instance needs about "
              << required_steps << " elementary steps, budget is " << budget;
          return msg.str();
      }()),
      required_steps_(required_steps),
      budget_(budget) {}

std::string ExactProbability::decimal(unsigned significant_digits) const {
    if (significant_digits == 0) significant_digits = 1;
    const BigInt num = numerator();
    const BigInt den = denominator();
    if (num == 0) return "0";
    if (num == den) return "1";

    std::string out = "0.";
    BigInt rem = num;
    unsigned significant = 0;
    bool seen_nonzero = false;
    while (significant < significant_digits) {
        rem *= 10;
        const BigInt digit = rem / den;
        rem %= den;
        out.push_back(static_cast<char>('0' + digit.convert_to<int>()));
        if (digit != 0) seen_nonzero = true;
        if (seen_nonzero) ++significant;
    }
    // Round half up on the next digit, carrying leftward as needed.
    rem *= 10;
    if (rem / den >= 5) {
        for (auto it = out.rbegin(); it != out.rend(); ++it) {
            if (*it == '.') continue;
            if (*it != '9') {
                ++*it;
                break;
            }
            *it = '0';
        }
    }
    return out;
}

ExactProbability exact_single_collector_success(std::int64_t n, std::int64_t r_c) {
    if (n < 1) {
        throw std::domain_error("exact_single_collector_success: n must be >= 1");
    }
    if (r_c < 0) {
        throw std::domain_error("exact_single_collector_success: r_c must be >= 0");
    }
    // sum_{k=0}^{n} (-1)^k C(n,k) (n-k)^{r_c}, over the common denominator n^{r_c}.
    BigInt numerator = 0;
    BigInt binom = 1;  // C(n, k), updated incrementally
    for (std::int64_t k = 0; k <= n; ++k) {
        const BigInt term = binom * ipow(BigInt(n - k), r_c);
        if (k % 2 == 0) {
            numerator += term;
        } else {
            numerator -= term;
        }
        binom = binom * (n - k) / (k + 1);
    }
    return ExactProbability{BigRational(numerator, ipow(BigInt(n), r_c))};
}

ExactProbability exact_no_exchange_success(std::int64_t n, std::int64_t m,
                                           std::int64_t r_c) {
    if (m < 1) {
        throw std::domain_error("exact_no_exchange_success: m must be >= 1");
    }
    const ExactProbability single = exact_single_collector_success(n, r_c);
    // Collectors are independent, so the joint probability is a power.
    return ExactProbability{BigRational(ipow(single.numerator(), m),
                                        ipow(single.denominator(), m))};
}

ExactProbability exact_all_coupons_at_least_m(std::int64_t n, std::int64_t m,
                                              std::int64_t total_draws,
                                              std::uint64_t budget) {
    if (n < 1) {
        throw std::domain_error("exact_all_coupons_at_least_m: n must be >= 1");
    }
    if (m < 0 || total_draws < 0) {
        throw std::domain_error(
            "exact_all_coupons_at_least_m: m and total_draws must be >= 0");
    }
    const BigInt steps =
        BigInt(n) * BigInt(total_draws + 1) * BigInt(total_draws + 1);
    if (steps > budget) {
        throw EnumerationBudgetExceeded(saturated_u64(steps), budget);
    }

    const auto binom = binomial_table(total_draws);

    // N(c, t): sequences of t labeled draws over c labeled types with every
    // type drawn at least m times. Rolling over c.
    std::vector<BigInt> prev(static_cast<std::size_t>(total_draws) + 1);
    std::vector<BigInt> cur(static_cast<std::size_t>(total_draws) + 1);
    prev[0] = 1;
    for (std::int64_t c = 1; c <= n; ++c) {
        for (std::int64_t t = 0; t <= total_draws; ++t) {
            BigInt acc = 0;
            for (std::int64_t j = m; j <= t; ++j) {
                acc += binom[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)] *
                       prev[static_cast<std::size_t>(t - j)];
            }
            cur[static_cast<std::size_t>(t)] = std::move(acc);
        }
        std::swap(prev, cur);
    }
    return ExactProbability{BigRational(prev[static_cast<std::size_t>(total_draws)],
                                        ipow(BigInt(n), total_draws))};
}

namespace {

// Exhaustive enumerator for the two-phase process. Collection outcomes are
// enumerated as compositions of r_c into n parts per collector (weighted by
// multinomial coefficients); interaction sequences are walked depth-first
// with undo, counting the sequences that end with every collector complete.
class TwoPhaseEnumerator {
public:
    TwoPhaseEnumerator(std::int64_t n, std::int64_t m, std::int64_t r_c,
                       std::int64_t r_e, StrategyId strategy)
        : n_(n), m_(m), r_c_(r_c), r_e_(r_e), strategy_(strategy),
          state_(CountMatrix::Zero(n, m)),
          column_coeff_(static_cast<std::size_t>(m), BigInt(1)) {
        for (std::int32_t i = 0; i < m; ++i) {
            for (std::int32_t j = i + 1; j < m; ++j) {
                pairs_.emplace_back(i, j);
            }
        }
        factorial_.resize(static_cast<std::size_t>(r_c) + 1);
        factorial_[0] = 1;
        for (std::int64_t k = 1; k <= r_c; ++k) {
            factorial_[static_cast<std::size_t>(k)] =
                factorial_[static_cast<std::size_t>(k - 1)] * k;
        }
    }

    ExactProbability run() {
        enumerate_collector(0);
        const BigInt denominator =
            ipow(BigInt(n_), m_ * r_c_) *
            ipow(BigInt(static_cast<std::int64_t>(pairs_.size())), r_e_);
        return ExactProbability{BigRational(success_weight_, denominator)};
    }

private:
    void enumerate_collector(std::int64_t collector) {
        if (collector == m_) {
            on_collection_leaf();
            return;
        }
        fill_column(collector, 0, r_c_, factorial_[static_cast<std::size_t>(r_c_)]);
    }

    // Assign counts to state_(coupon.., collector); coeff carries
    // r_c! / prod(assigned counts!) so far.
    void fill_column(std::int64_t collector, std::int64_t coupon,
                     std::int64_t remaining, BigInt coeff) {
        if (coupon == n_ - 1) {
            state_(coupon, collector) = remaining;
            column_coeff_[static_cast<std::size_t>(collector)] =
                coeff / factorial_[static_cast<std::size_t>(remaining)];
            enumerate_collector(collector + 1);
            return;
        }
        for (std::int64_t v = 0; v <= remaining; ++v) {
            state_(coupon, collector) = v;
            fill_column(collector, coupon + 1, remaining - v,
                        coeff / factorial_[static_cast<std::size_t>(v)]);
        }
    }

    void on_collection_leaf() {
        // Global per-coupon totals are conserved by every strategy, so a
        // coupon with zero copies anywhere can never be repaired.
        if ((state_.rowwise().sum() == 0).any()) return;

        BigInt weight = 1;
        for (const auto& coeff : column_coeff_) weight *= coeff;
        success_weight_ += weight * count_successful_sequences(r_e_);
    }

    BigInt count_successful_sequences(std::int64_t remaining) {
        if ((state_ > 0).all()) {
            // Complete states are absorbing: no strategy moves a giver below
            // one copy and none fires without a zero-count receiver.
            return ipow(BigInt(static_cast<std::int64_t>(pairs_.size())), remaining);
        }
        if (remaining == 0) return 0;
        if (strategy_ == StrategyId::Null) return 0;  // state can never change

        BigInt total = 0;
        for (const auto& [i, j] : pairs_) {
            auto transfers =
                apply_strategy(strategy_, state_.col(i), state_.col(j));
            for (auto& t : transfers) {
                t.from = (t.from == 0) ? i : j;
                t.to = (t.to == 0) ? i : j;
                --state_(t.coupon, t.from);
                ++state_(t.coupon, t.to);
            }
            total += count_successful_sequences(remaining - 1);
            for (auto it = transfers.rbegin(); it != transfers.rend(); ++it) {
                ++state_(it->coupon, it->from);
                --state_(it->coupon, it->to);
            }
        }
        return total;
    }

    std::int64_t n_, m_, r_c_, r_e_;
    StrategyId strategy_;
    std::vector<std::pair<std::int32_t, std::int32_t>> pairs_;
    std::vector<BigInt> factorial_;
    CountMatrix state_;
    std::vector<BigInt> column_coeff_;
    BigInt success_weight_ = 0;
};

}  // namespace

ExactProbability exact_two_phase_success(std::int64_t n, std::int64_t m,
                                         std::int64_t r_c, std::int64_t r_e,
                                         StrategyId strategy,
                                         std::uint64_t budget) {
    if (n < 1 || m < 1) {
        throw std::domain_error("exact_two_phase_success: n and m must be >= 1");
    }
    if (r_c < 0 || r_e < 0) {
        throw std::domain_error(
            "exact_two_phase_success: r_c and r_e must be >= 0");
    }
    if (r_e > 0 && m < 2) {
        throw std::domain_error(
            "exact_two_phase_success: interactions require at least two collectors");
    }

    const auto binom = binomial_table(r_c + n);
    const BigInt compositions_per_collector =
        binom[static_cast<std::size_t>(r_c + n - 1)][static_cast<std::size_t>(n - 1)];
    const std::int64_t pair_count = m * (m - 1) / 2;
    const BigInt estimated_steps = ipow(compositions_per_collector, m) *
                                   ipow(BigInt(pair_count), r_e) *
                                   BigInt(n * m + n * std::max<std::int64_t>(r_e, 1));
    if (estimated_steps > budget) {
        throw EnumerationBudgetExceeded(saturated_u64(estimated_steps), budget);
    }

    TwoPhaseEnumerator enumerator(n, m, r_c, r_e, strategy);
    return enumerator.run();
}

}  // namespace coupons
