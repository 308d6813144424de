#include <doctest.h>

#include <string>

#include "coupons/exact.hpp"
#include "coupons/stats.hpp"
#include "support/oracles.hpp"

using namespace coupons;

TEST_CASE("single collector success: frozen small values") {
    CHECK(exact_single_collector_success(1, 1).value == BigRational(1));
    CHECK(exact_single_collector_success(1, 0).value == BigRational(0));
    CHECK(exact_single_collector_success(2, 2).value == BigRational(1, 2));
    CHECK(exact_single_collector_success(3, 3).value == BigRational(2, 9));
    CHECK(exact_single_collector_success(2, 3).value == BigRational(3, 4));
    CHECK_THROWS_AS(exact_single_collector_success(0, 3), std::domain_error);
    CHECK_THROWS_AS(exact_single_collector_success(2, -1), std::domain_error);
}

TEST_CASE("single collector success matches raw sequence enumeration") {
    for (std::int64_t n = 1; n <= 4; ++n) {
        for (std::int64_t r = 0; r <= 6; ++r) {
            CHECK(exact_single_collector_success(n, r).value ==
                  testsupport::brute_coverage_probability(n, 1, r));
        }
    }
}

TEST_CASE("no-exchange success is the single-collector power") {
    CHECK(exact_no_exchange_success(2, 2, 2).value == BigRational(1, 4));
    CHECK(exact_no_exchange_success(1, 10, 1).value == BigRational(1));
    CHECK(exact_no_exchange_success(2, 1, 3).value == BigRational(3, 4));
    for (std::int64_t n = 1; n <= 3; ++n) {
        for (std::int64_t m = 1; m <= 3; ++m) {
            for (std::int64_t r = 0; r <= 5; ++r) {
                const auto single = exact_single_collector_success(n, r).value;
                BigRational power(1);
                for (std::int64_t k = 0; k < m; ++k) power *= single;
                CHECK(exact_no_exchange_success(n, m, r).value == power);
            }
        }
    }
    CHECK_THROWS_AS(exact_no_exchange_success(2, 0, 2), std::domain_error);
}

TEST_CASE("all-coupons-at-least-m: frozen values and brute force") {
    CHECK(exact_all_coupons_at_least_m(1, 3, 3).value == BigRational(1));
    CHECK(exact_all_coupons_at_least_m(2, 2, 4).value == BigRational(3, 8));
    CHECK(exact_all_coupons_at_least_m(2, 1, 2).value == BigRational(1, 2));
    CHECK(exact_all_coupons_at_least_m(3, 2, 4).value == BigRational(0));
    CHECK(exact_all_coupons_at_least_m(2, 0, 0).value == BigRational(1));

    for (std::int64_t n = 1; n <= 3; ++n) {
        for (std::int64_t m = 0; m <= 3; ++m) {
            for (std::int64_t t = 0; t <= 7; ++t) {
                CHECK(exact_all_coupons_at_least_m(n, m, t).value ==
                      testsupport::brute_coverage_probability(n, m, t));
            }
        }
    }
}

TEST_CASE("all-coupons-at-least-m reduces to the single-collector oracle at m=1") {
    for (std::int64_t n = 1; n <= 4; ++n) {
        for (std::int64_t t = 0; t <= 6; ++t) {
            CHECK(exact_all_coupons_at_least_m(n, 1, t).value ==
                  exact_single_collector_success(n, t).value);
        }
    }
}

TEST_CASE("oracle values are monotone in the draw counts") {
    BigRational prev(-1);
    for (std::int64_t t = 0; t <= 10; ++t) {
        const auto p = exact_all_coupons_at_least_m(3, 2, t).value;
        CHECK(p >= prev);
        prev = p;
    }
    prev = BigRational(-1);
    for (std::int64_t r = 0; r <= 8; ++r) {
        const auto p = exact_single_collector_success(3, r).value;
        CHECK(p >= prev);
        prev = p;
    }
}

TEST_CASE("enumeration budget guards reject oversized instances") {
    CHECK_THROWS_AS(exact_all_coupons_at_least_m(100, 2, 100000),
                    EnumerationBudgetExceeded);
    CHECK_THROWS_AS(
        exact_two_phase_success(6, 4, 20, 10, StrategyId::SurplusToNeedy),
        EnumerationBudgetExceeded);
    try {
        exact_all_coupons_at_least_m(100, 2, 100000);
        FAIL("expected EnumerationBudgetExceeded");
    } catch (const EnumerationBudgetExceeded& e) {
        CHECK(e.required_steps() > e.budget());
        CHECK(e.budget() == kDefaultEnumerationBudget);
    }
}

TEST_CASE("two-phase oracle: trivial and frozen values") {
    CHECK(exact_two_phase_success(1, 2, 1, 0, StrategyId::Null).value ==
          BigRational(1));
    CHECK(exact_two_phase_success(2, 2, 2, 0, StrategyId::Null).value ==
          BigRational(1, 4));
    // Hand enumeration: both complete after collection (1/4), or opposite
    // doubles (2 * 1/16) repaired by the one forced interaction.
    CHECK(exact_two_phase_success(2, 2, 2, 1, StrategyId::SurplusToNeedy).value ==
          BigRational(3, 8));
    // One sample each can never cover two coupon types.
    for (std::int64_t re = 0; re <= 3; ++re) {
        CHECK(exact_two_phase_success(2, 2, 1, re, StrategyId::SurplusToNeedy)
                  .value == BigRational(0));
    }
}

TEST_CASE("two-phase oracle with re=0 or Null reduces to no-exchange") {
    for (std::int64_t n = 1; n <= 3; ++n) {
        for (std::int64_t m = 1; m <= 2; ++m) {
            for (std::int64_t rc = 0; rc <= 4; ++rc) {
                const auto expected = exact_no_exchange_success(n, m, rc).value;
                CHECK(exact_two_phase_success(n, m, rc, 0,
                                              StrategyId::SurplusToNeedy)
                          .value == expected);
                const std::int64_t re = m >= 2 ? 3 : 0;
                CHECK(exact_two_phase_success(n, m, rc, re, StrategyId::Null)
                          .value == expected);
            }
        }
    }
}

TEST_CASE("two-phase success is monotone in interactions under repair") {
    BigRational prev(-1);
    for (std::int64_t re = 0; re <= 4; ++re) {
        const auto p =
            exact_two_phase_success(2, 2, 2, re, StrategyId::SurplusToNeedy).value;
        CHECK(p >= prev);
        prev = p;
    }
    // Three collectors, real pair branching.
    prev = BigRational(-1);
    for (std::int64_t re = 0; re <= 3; ++re) {
        const auto p =
            exact_two_phase_success(2, 3, 2, re, StrategyId::SurplusToNeedy).value;
        CHECK(p >= prev);
        prev = p;
    }
}

TEST_CASE("two-phase oracle agrees with Monte Carlo at three collectors") {
    const double exact =
        exact_two_phase_success(2, 3, 2, 2, StrategyId::SurplusToNeedy)
            .to_double();
    const std::int64_t trials = 20000;
    std::int64_t successes = 0;
    const PhasePlan plan{2, 2, StrategyId::SurplusToNeedy};
    for (std::int64_t i = 0; i < trials; ++i) {
        RngStream rng =
            RngStream::substream(0x3C0LL, static_cast<std::uint64_t>(i));
        successes += run_trial(2, 3, plan, rng).all_complete ? 1 : 0;
    }
    const auto [low, high] = wilson_interval(successes, trials, kZ999);
    CHECK(low <= exact);
    CHECK(exact <= high);
}

TEST_CASE("two-phase oracle rejects invalid shapes") {
    CHECK_THROWS_AS(exact_two_phase_success(0, 2, 1, 0, StrategyId::Null),
                    std::domain_error);
    CHECK_THROWS_AS(exact_two_phase_success(2, 1, 1, 1, StrategyId::Null),
                    std::domain_error);
    CHECK_THROWS_AS(exact_two_phase_success(2, 2, -1, 0, StrategyId::Null),
                    std::domain_error);
}

TEST_CASE("probabilities are reduced and in range") {
    const auto p = exact_two_phase_success(2, 2, 2, 1, StrategyId::SurplusToNeedy);
    CHECK(p.numerator() == 3);
    CHECK(p.denominator() == 8);
    CHECK(p.value >= 0);
    CHECK(p.value <= 1);
}

TEST_CASE("decimal rendering carries at least the asked significant digits") {
    CHECK(ExactProbability{BigRational(3, 8)}.decimal() == "0.37500000000000000");
    CHECK(ExactProbability{BigRational(1, 3)}.decimal() == "0.33333333333333333");
    CHECK(ExactProbability{BigRational(2, 3)}.decimal() == "0.66666666666666667");
    CHECK(ExactProbability{BigRational(1)}.decimal() == "1");
    CHECK(ExactProbability{BigRational(0)}.decimal() == "0");
    // Rounding can carry all the way into the integer digit.
    CHECK(ExactProbability{BigRational(999999, 1000000)}.decimal(5) == "1.00000");
    CHECK(ExactProbability{BigRational(1, 1024)}.decimal(5) == "0.00097656");
    CHECK(ExactProbability{BigRational(1023, 1024)}.decimal(4) == "0.9990");
}
