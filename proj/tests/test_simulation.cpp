#include <doctest.h>

#include <array>
#include <vector>

#include "coupons/exact.hpp"
#include "coupons/simulation.hpp"
#include "coupons/stats.hpp"
#include "support/trace_checks.hpp"

using namespace coupons;

namespace {

CouponCounts make_counts(std::initializer_list<Count> values) {
    CouponCounts counts(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (const auto v : values) counts[i++] = v;
    return counts;
}

Population make_population(std::initializer_list<std::initializer_list<Count>> collectors) {
    const auto m = static_cast<Eigen::Index>(collectors.size());
    const auto n = static_cast<Eigen::Index>(collectors.begin()->size());
    Population pop{CountMatrix::Zero(n, m)};
    Eigen::Index c = 0;
    for (const auto& collector : collectors) {
        Eigen::Index i = 0;
        for (const auto v : collector) pop.counts(i++, c) = v;
        ++c;
    }
    return pop;
}

}  // namespace

TEST_CASE("new_population starts empty with every pair missing") {
    const Population pop = new_population(4, 3);
    CHECK(pop.coupon_types() == 4);
    CHECK(pop.collectors() == 3);
    CHECK(missing_pairs(pop) == 12);
    CHECK((pop.counts == 0).all());

    CHECK(missing_pairs(new_population(1, 1)) == 1);
    CHECK_THROWS_AS(new_population(0, 2), std::domain_error);
    CHECK_THROWS_AS(new_population(3, 0), std::domain_error);
}

TEST_CASE("collection phase adds exactly rounds samples per collector") {
    RngStream rng(11);
    Population pop = new_population(1, 2);
    run_collection_phase(pop, 3, rng);
    CHECK(pop.counts(0, 0) == 3);
    CHECK(pop.counts(0, 1) == 3);

    Population untouched = new_population(2, 1);
    run_collection_phase(untouched, 0, rng);
    CHECK((untouched.counts == 0).all());

    Population additive = new_population(5, 3);
    run_collection_phase(additive, 7, rng);
    run_collection_phase(additive, 4, rng);
    for (Eigen::Index c = 0; c < 3; ++c) {
        CHECK(additive.counts.col(c).sum() == 11);
    }
    CHECK_THROWS_AS(run_collection_phase(additive, -1, rng), std::domain_error);
}

TEST_CASE("collection draws are uniform over coupon types") {
    RngStream rng(0xC011EC7ULL);
    Population pop = new_population(2, 1);
    run_collection_phase(pop, 1000000, rng);
    const std::vector<std::int64_t> counts = {pop.counts(0, 0), pop.counts(1, 0)};
    CHECK(chi_square_uniform(counts) > 0.001);
}

TEST_CASE("sample_pair covers the single pair and rejects m < 2") {
    RngStream rng(3);
    for (int i = 0; i < 50; ++i) {
        const auto [a, b] = sample_pair(2, rng);
        CHECK(a == 0);
        CHECK(b == 1);
    }
    CHECK_THROWS_AS(sample_pair(1, rng), std::domain_error);
}

TEST_CASE("sample_pair is uniform over unordered pairs") {
    RngStream rng(0xAB1EULL);
    std::vector<std::int64_t> counts(3, 0);  // {0,1}, {0,2}, {1,2}
    for (int i = 0; i < 1000000; ++i) {
        const auto [a, b] = sample_pair(3, rng);
        CHECK(a < b);
        if (a == 0 && b == 1) ++counts[0];
        else if (a == 0 && b == 2) ++counts[1];
        else ++counts[2];
    }
    CHECK(chi_square_uniform(counts) > 0.001);
}

TEST_CASE("surplus-to-needy moves exactly the forced transfers") {
    const auto a = make_counts({3, 0, 1});
    const auto b = make_counts({0, 1, 1});
    const auto transfers = apply_strategy(StrategyId::SurplusToNeedy, a, b);
    REQUIRE(transfers.size() == 1);
    CHECK(transfers[0].coupon == 0);
    CHECK(transfers[0].from == 0);
    CHECK(transfers[0].to == 1);
}

TEST_CASE("surplus-to-needy fires in both directions in one interaction") {
    const auto a = make_counts({2, 0});
    const auto b = make_counts({0, 2});
    const auto transfers = apply_strategy(StrategyId::SurplusToNeedy, a, b);
    REQUIRE(transfers.size() == 2);
    CHECK(transfers[0].coupon == 0);
    CHECK(transfers[0].from == 0);
    CHECK(transfers[1].coupon == 1);
    CHECK(transfers[1].from == 1);
}

TEST_CASE("a lone copy is never given away") {
    // Both sides hold one copy of coupon 0; nobody holds two, so no rule fires.
    const auto a = make_counts({1, 2});
    const auto b = make_counts({1, 0});
    const auto transfers = apply_strategy(StrategyId::SurplusToNeedy, a, b);
    REQUIRE(transfers.size() == 1);
    CHECK(transfers[0].coupon == 1);
}

TEST_CASE("null strategy never transfers") {
    const auto a = make_counts({5, 0, 2});
    const auto b = make_counts({0, 0, 9});
    CHECK(apply_strategy(StrategyId::Null, a, b).empty());
}

TEST_CASE("mutual barter swaps one-for-one, greedily by coupon index") {
    const auto a = make_counts({2, 0});
    const auto b = make_counts({0, 2});
    const auto swap = apply_strategy(StrategyId::MutualBarter, a, b);
    REQUIRE(swap.size() == 2);
    CHECK(swap[0].coupon == 0);
    CHECK(swap[0].from == 0);
    CHECK(swap[1].coupon == 1);
    CHECK(swap[1].from == 1);

    // Only one barter is possible: the second candidate sees updated counts.
    const auto a2 = make_counts({3, 0, 0});
    const auto b2 = make_counts({0, 2, 2});
    const auto transfers = apply_strategy(StrategyId::MutualBarter, a2, b2);
    CHECK(transfers.size() == 2);

    // Surplus on one side only: barter requires mutual need.
    const auto a3 = make_counts({4, 0});
    const auto b3 = make_counts({1, 1});
    CHECK(apply_strategy(StrategyId::MutualBarter, a3, b3).empty());
}

TEST_CASE("apply_strategy rejects mismatched lengths and keeps givers above zero") {
    const auto a = make_counts({1, 2});
    const auto b = make_counts({1});
    CHECK_THROWS_AS(apply_strategy(StrategyId::Null, a, b),
                    std::invalid_argument);

    RngStream rng(99);
    for (int round = 0; round < 2000; ++round) {
        const auto n = static_cast<Eigen::Index>(1 + rng.below(5));
        CouponCounts x(n), y(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            x[i] = static_cast<Count>(rng.below(4));
            y[i] = static_cast<Count>(rng.below(4));
        }
        for (const auto& t : apply_strategy(StrategyId::SurplusToNeedy, x, y)) {
            auto& giver = t.from == 0 ? x : y;
            auto& taker = t.to == 0 ? x : y;
            CHECK(giver[t.coupon] >= 2);
            CHECK(taker[t.coupon] == 0);
            --giver[t.coupon];
            ++taker[t.coupon];
            CHECK(giver[t.coupon] >= 1);
        }
    }
}

TEST_CASE("exchange phase commits forced transfers") {
    RngStream rng(5);
    Population pop = make_population({{2}, {0}});
    run_exchange_phase(pop, 1, StrategyId::SurplusToNeedy, rng);
    CHECK(pop.counts(0, 0) == 1);
    CHECK(pop.counts(0, 1) == 1);
    CHECK(is_complete(pop));

    Population two = make_population({{2, 2}, {0, 0}});
    run_exchange_phase(two, 1, StrategyId::SurplusToNeedy, rng);
    CHECK((two.counts == 1).all());
}

TEST_CASE("exchange phase edge cases") {
    RngStream rng(6);
    Population pop = make_population({{1, 0}, {0, 2}});
    const auto before = pop.counts.eval();
    run_exchange_phase(pop, 0, StrategyId::SurplusToNeedy, rng);
    CHECK((pop.counts == before).all());

    Population lone = new_population(2, 1);
    CHECK_THROWS_AS(
        run_exchange_phase(lone, 1, StrategyId::SurplusToNeedy, rng),
        std::domain_error);
    run_exchange_phase(lone, 0, StrategyId::SurplusToNeedy, rng);  // fine
}

TEST_CASE("missing_pairs counts zero-count (coupon, collector) pairs") {
    CHECK(missing_pairs(new_population(4, 3)) == 12);
    const Population pop = make_population({{1, 0}, {0, 2}});
    CHECK(missing_pairs(pop) == 2);
    const Population full = make_population({{1, 1}, {1, 1}});
    CHECK(missing_pairs(full) == 0);
    CHECK(is_complete(full));
    const Population tall = make_population({{5}});
    CHECK(is_complete(tall));
}

TEST_CASE("run_trial composes the phases") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        RngStream rng = RngStream::substream(123, seed);
        const auto outcome = run_trial(1, 1, PhasePlan{1, 0}, rng);
        CHECK(outcome.all_complete);
        CHECK(outcome.missing_pairs_final == 0);
        CHECK(outcome.per_collector_complete == std::vector<bool>{true});
    }
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        RngStream rng = RngStream::substream(124, seed);
        const auto outcome = run_trial(
            1, 2, PhasePlan{0, 5, StrategyId::SurplusToNeedy}, rng);
        CHECK_FALSE(outcome.all_complete);
        CHECK(outcome.missing_pairs_after_collection == 2);
        CHECK(outcome.missing_pairs_final == 2);
    }
}

TEST_CASE("trial outcome fields are mutually consistent") {
    RngStream meta(2024);
    for (int t = 0; t < 300; ++t) {
        const auto n = static_cast<std::int64_t>(1 + meta.below(5));
        const auto m = static_cast<std::int64_t>(2 + meta.below(4));
        const PhasePlan plan{static_cast<std::int64_t>(meta.below(10)),
                             static_cast<std::int64_t>(meta.below(12)),
                             StrategyId::SurplusToNeedy};
        RngStream rng = RngStream::substream(55, static_cast<std::uint64_t>(t));
        const auto outcome = run_trial(n, m, plan, rng);
        CHECK(outcome.missing_pairs_final <= outcome.missing_pairs_after_collection);
        CHECK(outcome.missing_pairs_after_collection <= n * m);
        bool each = true;
        for (const bool c : outcome.per_collector_complete) each = each && c;
        CHECK(outcome.all_complete == each);
        CHECK(outcome.all_complete == (outcome.missing_pairs_final == 0));
    }
}

TEST_CASE("run_trial agrees with the exact oracle at n=2, m=2, rc=2") {
    const std::int64_t trials = 20000;
    std::int64_t successes = 0;
    for (std::int64_t i = 0; i < trials; ++i) {
        RngStream rng = RngStream::substream(0x0FACE, static_cast<std::uint64_t>(i));
        successes += run_trial(2, 2, PhasePlan{2, 0, StrategyId::Null}, rng)
                         .all_complete
                         ? 1
                         : 0;
    }
    const auto [low, high] = wilson_interval(successes, trials, kZ999);
    const double exact = exact_no_exchange_success(2, 2, 2).to_double();
    CHECK(exact == doctest::Approx(0.25));
    CHECK(low <= exact);
    CHECK(exact <= high);
}

TEST_CASE("exchange traces satisfy every per-interaction invariant") {
    RngStream meta(0xBADA55ULL);
    for (int t = 0; t < 400; ++t) {
        const auto n = static_cast<std::int64_t>(1 + meta.below(5));
        const auto m = static_cast<std::int64_t>(2 + meta.below(4));
        const auto rc = static_cast<std::int64_t>(meta.below(12));
        const auto re = static_cast<std::int64_t>(meta.below(20));
        const auto strategy =
            std::array{StrategyId::SurplusToNeedy, StrategyId::MutualBarter,
                       StrategyId::Null}[meta.below(3)];

        RngStream rng = RngStream::substream(777, static_cast<std::uint64_t>(t));
        Population pop = new_population(n, m);
        run_collection_phase(pop, rc, rng);
        const Population after_collection{pop.counts.eval()};
        const auto trace = run_exchange_phase(pop, re, strategy, rng, true);
        REQUIRE(trace.has_value());
        CHECK(trace->size() == static_cast<std::size_t>(re));

        const auto report = testsupport::replay_exchange_checks(
            after_collection, *trace, strategy, pop);
        INFO("invariant violation: ", report.detail);
        CHECK(report.ok);
    }
}

TEST_CASE("identical plans and seeds reproduce outcomes bit for bit") {
    const PhasePlan plan{6, 9, StrategyId::SurplusToNeedy};
    RngStream a = RngStream::substream(31337, 5);
    RngStream b = RngStream::substream(31337, 5);
    const auto first = run_trial(4, 3, plan, a, true);
    const auto second = run_trial(4, 3, plan, b, true);
    CHECK(first.all_complete == second.all_complete);
    CHECK(first.missing_pairs_after_collection ==
          second.missing_pairs_after_collection);
    CHECK(first.missing_pairs_final == second.missing_pairs_final);
    REQUIRE(first.trace.has_value());
    REQUIRE(second.trace.has_value());
    REQUIRE(first.trace->size() == second.trace->size());
    for (std::size_t i = 0; i < first.trace->size(); ++i) {
        const auto& x = (*first.trace)[i];
        const auto& y = (*second.trace)[i];
        CHECK(x.first == y.first);
        CHECK(x.second == y.second);
        REQUIRE(x.transfers.size() == y.transfers.size());
        for (std::size_t k = 0; k < x.transfers.size(); ++k) {
            CHECK(x.transfers[k].coupon == y.transfers[k].coupon);
            CHECK(x.transfers[k].from == y.transfers[k].from);
            CHECK(x.transfers[k].to == y.transfers[k].to);
        }
    }
}

TEST_CASE("strategy names round-trip") {
    for (const auto s : {StrategyId::SurplusToNeedy, StrategyId::MutualBarter,
                         StrategyId::Null}) {
        CHECK(parse_strategy(to_string(s)) == s);
    }
    CHECK_FALSE(parse_strategy("Telepathy").has_value());
}
