#include <doctest.h>

#include <vector>

#include "coupons/rng.hpp"
#include "coupons/stats.hpp"

using namespace coupons;

TEST_CASE("wilson interval closed-form endpoints") {
    const auto [low0, high0] = wilson_interval(0, 100, 1.96);
    CHECK(low0 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(high0 == doctest::Approx(1.96 * 1.96 / (100 + 1.96 * 1.96)).epsilon(1e-9));

    const auto [low1, high1] = wilson_interval(100, 100, 1.96);
    CHECK(high1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(low1 == doctest::Approx(1.0 - 1.96 * 1.96 / (100 + 1.96 * 1.96)).epsilon(1e-9));

    const auto [low_half, high_half] = wilson_interval(50, 100, 1.96);
    CHECK(low_half < 0.5);
    CHECK(high_half > 0.5);
    CHECK((0.5 - low_half) == doctest::Approx(high_half - 0.5).epsilon(1e-9));
}

TEST_CASE("wilson interval rejects bad arguments") {
    CHECK_THROWS_AS(wilson_interval(0, 0, 1.96), std::domain_error);
    CHECK_THROWS_AS(wilson_interval(-1, 10, 1.96), std::domain_error);
    CHECK_THROWS_AS(wilson_interval(11, 10, 1.96), std::domain_error);
    CHECK_THROWS_AS(wilson_interval(5, 10, 0.0), std::domain_error);
}

TEST_CASE("wilson coverage at p=0.5 stays near nominal") {
    // 1000 repetitions of 1000 fair-coin trials at z for 95%.
    int covered = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        RngStream rng = RngStream::substream(0x5151, static_cast<std::uint64_t>(rep));
        std::int64_t successes = 0;
        for (int i = 0; i < 1000; ++i) successes += rng.below(2);
        const auto [low, high] = wilson_interval(successes, 1000, kZ95);
        if (low <= 0.5 && 0.5 <= high) ++covered;
    }
    CHECK(covered >= 930);
}

TEST_CASE("summarize on tiny inputs") {
    const std::vector<double> single = {5.0};
    const auto s = summarize(single);
    CHECK(s.count == 1);
    CHECK(s.mean == 5.0);
    CHECK(s.stddev == 0.0);
    CHECK(s.min == 5.0);
    CHECK(s.max == 5.0);
    for (const double q : s.quantiles) CHECK(q == 5.0);

    const std::vector<double> four = {1.0, 2.0, 3.0, 4.0};
    const auto s4 = summarize(four);
    CHECK(s4.quantiles[2] == 2.0);  // nearest rank: ceil(0.5*4) = 2nd
    CHECK(s4.quantiles[0] == 1.0);
    CHECK(s4.quantiles[4] == 4.0);

    CHECK_THROWS_AS(summarize(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("summaries ignore merge order over a partition") {
    RngStream rng(0xBEEF);
    ValuesAccumulator all, a, b, c;
    for (int i = 0; i < 5000; ++i) {
        const double v = rng.unit() * 100.0;
        all.add(v);
        (i % 3 == 0 ? a : i % 3 == 1 ? b : c).add(v);
    }
    ValuesAccumulator left;   // (a + b) + c
    left.merge(a);
    left.merge(b);
    left.merge(c);
    ValuesAccumulator right;  // c + (b + a)
    right.merge(c);
    right.merge(b);
    right.merge(a);

    const auto s_all = all.summary();
    for (const auto& s : {left.summary(), right.summary()}) {
        CHECK(s.count == s_all.count);
        CHECK(s.mean == s_all.mean);
        CHECK(s.stddev == s_all.stddev);
        CHECK(s.min == s_all.min);
        CHECK(s.max == s_all.max);
        CHECK(s.quantiles == s_all.quantiles);
    }

    SuccessAccumulator sa, sb, merged_one, merged_two;
    for (int i = 0; i < 100; ++i) (i % 2 ? sa : sb).add(i % 3 == 0);
    merged_one.merge(sa);
    merged_one.merge(sb);
    merged_two.merge(sb);
    merged_two.merge(sa);
    CHECK(merged_one.trials == merged_two.trials);
    CHECK(merged_one.successes == merged_two.successes);
}

TEST_CASE("quantiles are ordered and bounded") {
    RngStream rng(4);
    for (int round = 0; round < 50; ++round) {
        std::vector<double> values;
        const auto count = 1 + rng.below(200);
        values.reserve(count);
        for (std::uint64_t i = 0; i < count; ++i) {
            values.push_back(rng.unit() * 50.0 - 25.0);
        }
        const auto s = summarize(values);
        CHECK(s.min <= s.quantiles.front());
        CHECK(s.quantiles.back() <= s.max);
        for (std::size_t i = 1; i < s.quantiles.size(); ++i) {
            CHECK(s.quantiles[i] >= s.quantiles[i - 1]);
        }
    }
}

TEST_CASE("chi-square uniformity p-values") {
    const std::vector<std::int64_t> uniform = {250, 250, 250, 250};
    CHECK(chi_square_uniform(uniform) == doctest::Approx(1.0));

    const std::vector<std::int64_t> degenerate = {1000000, 0};
    CHECK(chi_square_uniform(degenerate) < 1e-12);

    CHECK_THROWS_AS(chi_square_uniform(std::vector<std::int64_t>{5}),
                    std::domain_error);
    CHECK_THROWS_AS(chi_square_uniform(std::vector<std::int64_t>{0, 0}),
                    std::domain_error);
    CHECK_THROWS_AS(chi_square_uniform(std::vector<std::int64_t>{3, -1}),
                    std::domain_error);
}

TEST_CASE("chi-square test rarely rejects true uniform data") {
    int accepted = 0;
    for (int rep = 0; rep < 100; ++rep) {
        RngStream rng = RngStream::substream(0xC8C8, static_cast<std::uint64_t>(rep));
        std::vector<std::int64_t> counts(10, 0);
        for (int i = 0; i < 1000000; ++i) ++counts[rng.below(10)];
        if (chi_square_uniform(counts) > 0.001) ++accepted;
    }
    CHECK(accepted >= 99);
}

TEST_CASE("success summary wires counts through the interval") {
    const auto summary = make_success_summary(25, 100, kZ95);
    CHECK(summary.trials == 100);
    CHECK(summary.successes == 25);
    CHECK(summary.fraction == doctest::Approx(0.25));
    CHECK(summary.wilson_low <= summary.fraction);
    CHECK(summary.fraction <= summary.wilson_high);
    CHECK(summary.wilson_low >= 0.0);
    CHECK(summary.wilson_high <= 1.0);
}
