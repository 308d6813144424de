#include "coupons/simulation.hpp"

#include <stdexcept>

namespace coupons {

std::string_view to_string(StrategyId strategy) {
    switch (strategy) {
        case StrategyId::SurplusToNeedy: return "SurplusToNeedy";
        case StrategyId::MutualBarter: return "MutualBarter";
        case StrategyId::Null: return "Null";
    }
    return "Unknown";
}

std::optional<StrategyId> parse_strategy(std::string_view name) {
    if (name == "SurplusToNeedy") return StrategyId::SurplusToNeedy;
    if (name == "MutualBarter") return StrategyId::MutualBarter;
    if (name == "Null") return StrategyId::Null;
    return std::nullopt;
}

Population new_population(std::int64_t coupon_types, std::int64_t collectors) {
    if (coupon_types < 1) {
        throw std::domain_error("new_population: coupon type count must be >= 1");
    }
    if (collectors < 1) {
        throw std::domain_error("new_population: collector count must be >= 1");
    }
    return Population{CountMatrix::Zero(coupon_types, collectors)};
}

void run_collection_phase(Population& pop, std::int64_t rounds, RngStream& rng) {
    if (rounds < 0) {
        throw std::domain_error("run_collection_phase: rounds must be >= 0");
    }
    const auto n = static_cast<std::uint64_t>(pop.coupon_types());
    const auto m = pop.collectors();
    for (std::int64_t collector = 0; collector < m; ++collector) {
        for (std::int64_t draw = 0; draw < rounds; ++draw) {
            ++pop.counts(static_cast<Eigen::Index>(rng.below(n)), collector);
        }
    }
}

std::pair<std::int32_t, std::int32_t> sample_pair(std::int64_t collectors,
                                                  RngStream& rng) {
    if (collectors < 2) {
        throw std::domain_error("sample_pair: need at least two collectors");
    }
    // Uniform ordered pair (i, j != i) collapses to a uniform unordered pair.
    const auto m = static_cast<std::uint64_t>(collectors);
    const auto i = static_cast<std::int32_t>(rng.below(m));
    auto j = static_cast<std::int32_t>(rng.below(m - 1));
    if (j >= i) ++j;
    return i < j ? std::pair{i, j} : std::pair{j, i};
}

std::vector<Transfer> apply_strategy(StrategyId strategy,
                                     const Eigen::Ref<const CouponCounts>& a,
                                     const Eigen::Ref<const CouponCounts>& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("apply_strategy: count vectors differ in length");
    }
    const auto n = static_cast<std::int32_t>(a.size());
    std::vector<Transfer> transfers;

    switch (strategy) {
        case StrategyId::Null:
            break;

        case StrategyId::SurplusToNeedy:
            for (std::int32_t c = 0; c < n; ++c) {
                if (a[c] >= 2 && b[c] == 0) {
                    transfers.push_back({c, 0, 1});
                } else if (b[c] >= 2 && a[c] == 0) {
                    transfers.push_back({c, 1, 0});
                }
            }
            break;

        case StrategyId::MutualBarter: {
            // Greedy over ascending (i, j): a trades a surplus copy of i for
            // a surplus copy of j whenever each side lacks what the other
            // spares. Later pairs see the updated counts.
            CouponCounts ca = a;
            CouponCounts cb = b;
            for (std::int32_t i = 0; i < n; ++i) {
                for (std::int32_t j = 0; j < n; ++j) {
                    if (i == j) continue;
                    if (ca[i] >= 2 && ca[j] == 0 && cb[j] >= 2 && cb[i] == 0) {
                        transfers.push_back({i, 0, 1});
                        transfers.push_back({j, 1, 0});
                        --ca[i]; ++cb[i];
                        --cb[j]; ++ca[j];
                    }
                }
            }
            break;
        }
    }
    return transfers;
}

std::optional<Trace> run_exchange_phase(Population& pop, std::int64_t rounds,
                                        StrategyId strategy, RngStream& rng,
                                        bool record_trace) {
    if (rounds < 0) {
        throw std::domain_error("run_exchange_phase: rounds must be >= 0");
    }
    if (rounds > 0 && pop.collectors() < 2) {
        throw std::domain_error(
            "run_exchange_phase: interactions require at least two collectors");
    }
    std::optional<Trace> trace;
    if (record_trace) trace.emplace();

    for (std::int64_t round = 0; round < rounds; ++round) {
        const auto [i, j] = sample_pair(pop.collectors(), rng);
        auto transfers =
            apply_strategy(strategy, pop.counts.col(i), pop.counts.col(j));
        for (auto& t : transfers) {
            t.from = (t.from == 0) ? i : j;
            t.to = (t.to == 0) ? i : j;
            --pop.counts(t.coupon, t.from);
            ++pop.counts(t.coupon, t.to);
        }
        if (trace) {
            trace->push_back({round, i, j, std::move(transfers)});
        }
    }
    return trace;
}

std::int64_t missing_pairs(const Population& pop) {
    return (pop.counts == 0).count();
}

bool is_complete(const Population& pop) { return missing_pairs(pop) == 0; }

TrialOutcome run_trial(std::int64_t coupon_types, std::int64_t collectors,
                       const PhasePlan& plan, RngStream& rng,
                       bool record_trace) {
    Population pop = new_population(coupon_types, collectors);
    run_collection_phase(pop, plan.collection_rounds, rng);

    TrialOutcome outcome;
    outcome.missing_pairs_after_collection = missing_pairs(pop);
    outcome.trace = run_exchange_phase(pop, plan.exchange_rounds, plan.strategy,
                                       rng, record_trace);
    outcome.missing_pairs_final = missing_pairs(pop);
    outcome.per_collector_complete.resize(static_cast<std::size_t>(collectors));
    for (std::int64_t c = 0; c < collectors; ++c) {
        outcome.per_collector_complete[static_cast<std::size_t>(c)] =
            (pop.counts.col(c) > 0).all();
    }
    outcome.all_complete = outcome.missing_pairs_final == 0;
    return outcome;
}

}  // namespace coupons
