#pragma once

// The two-phase process over a population of collectors: a collection phase
// in which each of the m collectors draws r_c coupons uniformly at random
// (with replacement) from n types, followed by an exchange phase of r_e
// sequential interactions between uniformly random unordered collector pairs.
//
// State is a dense n x m count matrix: coupon types down the rows, collectors
// across the columns, so one collector's counts form a contiguous column.

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "coupons/rng.hpp"

namespace coupons {

using Count = std::int64_t;
using CouponCounts = Eigen::Array<Count, Eigen::Dynamic, 1>;
using CountMatrix = Eigen::Array<Count, Eigen::Dynamic, Eigen::Dynamic>;

// Swap rule applied inside one pairwise interaction.
//   SurplusToNeedy: a side holding >= 2 copies of a coupon gives one copy to
//                   a side holding 0 copies, per coupon, in both directions.
//   MutualBarter:   one-for-one swaps where each side has a surplus the other
//                   side is missing entirely.
//   Null:           no coupons move.
enum class StrategyId { SurplusToNeedy, MutualBarter, Null };

[[nodiscard]] std::string_view to_string(StrategyId strategy);
[[nodiscard]] std::optional<StrategyId> parse_strategy(std::string_view name);

struct Population {
    CountMatrix counts;  // (n coupon types) x (m collectors)

    [[nodiscard]] std::int64_t coupon_types() const { return counts.rows(); }
    [[nodiscard]] std::int64_t collectors() const { return counts.cols(); }
};

struct PhasePlan {
    std::int64_t collection_rounds = 0;  // r_c, samples per collector
    std::int64_t exchange_rounds = 0;    // r_e, pairwise interactions
    StrategyId strategy = StrategyId::SurplusToNeedy;
};

// One coupon moving between the two collectors of an interaction. In the
// output of apply_strategy, from/to are 0 for the first argument and 1 for
// the second; run_exchange_phase rewrites them to population indices before
// committing and recording.
struct Transfer {
    std::int32_t coupon = 0;
    std::int32_t from = 0;
    std::int32_t to = 0;
};

struct InteractionRecord {
    std::int64_t round = 0;    // interaction index in [0, r_e)
    std::int32_t first = 0;    // smaller collector index of the pair
    std::int32_t second = 0;   // larger collector index of the pair
    std::vector<Transfer> transfers;
};

using Trace = std::vector<InteractionRecord>;

struct TrialOutcome {
    bool all_complete = false;
    std::vector<bool> per_collector_complete;
    std::int64_t missing_pairs_after_collection = 0;
    std::int64_t missing_pairs_final = 0;
    std::optional<Trace> trace;
};

// All-zero population. Throws std::domain_error unless n >= 1 and m >= 1.
[[nodiscard]] Population new_population(std::int64_t coupon_types,
                                        std::int64_t collectors);

// Adds `rounds` uniform samples (with replacement) to every collector.
// Additive: existing counts are kept. Collectors draw in index order, each
// performing its draws consecutively.
void run_collection_phase(Population& pop, std::int64_t rounds, RngStream& rng);

// Uniform unordered pair {i, j} with i < j over all m(m-1)/2 pairs.
// Throws std::domain_error if fewer than two collectors exist.
[[nodiscard]] std::pair<std::int32_t, std::int32_t> sample_pair(
    std::int64_t collectors, RngStream& rng);

// The transfers the strategy performs between count vectors a and b. Pure:
// the arguments are not modified. Coupons are scanned in ascending index
// order. Under SurplusToNeedy every emitted transfer has a giver holding
// >= 2 copies and a receiver holding 0 copies at the moment it fires.
[[nodiscard]] std::vector<Transfer> apply_strategy(
    StrategyId strategy, const Eigen::Ref<const CouponCounts>& a,
    const Eigen::Ref<const CouponCounts>& b);

// Runs `rounds` sequential interactions: draw a uniform pair, compute the
// strategy's transfers, commit them. Per-coupon totals over the population
// are conserved. Returns the interaction trace when record_trace is set.
// Throws std::domain_error if rounds > 0 with fewer than two collectors.
std::optional<Trace> run_exchange_phase(Population& pop, std::int64_t rounds,
                                        StrategyId strategy, RngStream& rng,
                                        bool record_trace = false);

// Number of (coupon, collector) pairs where the collector holds zero copies.
// Zero means every collector owns a full set.
[[nodiscard]] std::int64_t missing_pairs(const Population& pop);

[[nodiscard]] bool is_complete(const Population& pop);

// Fresh population -> collection phase -> exchange phase -> outcome.
[[nodiscard]] TrialOutcome run_trial(std::int64_t coupon_types,
                                     std::int64_t collectors,
                                     const PhasePlan& plan, RngStream& rng,
                                     bool record_trace = false);

}  // namespace coupons
