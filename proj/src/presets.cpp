#include <cmath>

#include "coupons/bounds.hpp"
#include "coupons/experiment.hpp"

namespace coupons {

namespace {

std::int64_t floor_nonneg(double value) {
    const auto f = static_cast<std::int64_t>(std::floor(value));
    return f < 0 ? 0 : f;
}

}  // namespace

const std::vector<RegimePreset>& preset_regimes() {
    static const std::vector<RegimePreset> presets = {
        {"no-exchange-ub",
         "collection only: rc = ceil(2 n ln(mn)); every collector completes "
         "from its own samples",
         "succeeds w.h.p.", StrategyId::Null},
        {"no-exchange-lb",
         "collection only: rc = floor(n log2(m)/4); success probability at "
         "most exp(-sqrt(m))",
         "fails w.h.p.", StrategyId::Null},
        {"unlimited-ub",
         "rc = ceil(16(n + n ln(n)/m)) puts m copies of every coupon in "
         "circulation; ample interactions (re = ceil(6 m ln(mn))) stand in "
         "for unlimited exchanging",
         "succeeds w.h.p.", StrategyId::SurplusToNeedy},
        {"unlimited-lb",
         "rc = ceil(16(n + n ln(n)/m))/32, below the m*n total-sample floor "
         "at these scales; no amount of exchanging can finish",
         "fails w.h.p.", StrategyId::SurplusToNeedy},
        {"thm1-ub",
         "rc = ceil(36(n + n ln(n)/m)), re = ceil(6 m ln(mn)), "
         "surplus-to-needy",
         "succeeds w.h.p.", StrategyId::SurplusToNeedy},
        {"re-lb-logn",
         "rc = floor(n ln(n)/4) (too few samples to finish alone), "
         "re = floor(m log2(n)/8); some collector is likely never paired",
         "fails w.h.p.", StrategyId::SurplusToNeedy},
        {"re-lb-logm",
         "rc = floor(n ln(n)/4), re = floor(m log2(m)/16); some needy "
         "collector is likely never paired",
         "fails w.h.p.", StrategyId::SurplusToNeedy},
        {"re-lb-combined",
         "rc = floor(n ln(n)/4), re = floor(m log2(mn)/16); below the "
         "combined necessity threshold",
         "fails w.h.p.", StrategyId::SurplusToNeedy},
        {"conjecture-probe",
         "rc = ceil(36(n + n ln(n)/m)), re swept over {m, m ln(m), m ln(n), "
         "m ln(mn)}; probes how many interactions constant-probability "
         "success really needs",
         "exploratory", StrategyId::SurplusToNeedy},
    };
    return presets;
}

const RegimePreset* find_preset(std::string_view name) {
    for (const auto& preset : preset_regimes()) {
        if (preset.name == name) return &preset;
    }
    return nullptr;
}

ResolvedRegime resolve_regime(const RegimePreset& preset, std::int64_t n,
                              std::int64_t m) {
    const std::string_view name = preset.name;
    if (name == "no-exchange-ub") {
        return {rc_no_exchange_ub(n, m), {0}};
    }
    if (name == "no-exchange-lb") {
        return {quarter_n_log2_m(n, m), {0}};
    }
    if (name == "unlimited-ub") {
        return {rc_unlimited_ub(n, m), {re_main_ub(n, m)}};
    }
    if (name == "unlimited-lb") {
        return {rc_unlimited_ub(n, m) / 32, {re_main_ub(n, m)}};
    }
    if (name == "thm1-ub") {
        return {rc_main_ub(n, m), {re_main_ub(n, m)}};
    }
    if (name == "re-lb-logn") {
        return {quarter_n_ln_n(n), {eighth_m_log2_n(n, m)}};
    }
    if (name == "re-lb-logm") {
        return {quarter_n_ln_n(n), {sixteenth_m_log2_m(n, m)}};
    }
    if (name == "re-lb-combined") {
        return {quarter_n_ln_n(n), {sixteenth_m_log2_mn(n, m)}};
    }
    if (name == "conjecture-probe") {
        const double md = static_cast<double>(m);
        const double nd = static_cast<double>(n);
        return {rc_main_ub(n, m),
                {m, floor_nonneg(md * std::log(md)),
                 floor_nonneg(md * std::log(nd)),
                 floor_nonneg(md * std::log(md * nd))}};
    }
    throw ConfigError("unknown regime preset '" + std::string(name) + "'");
}

}  // namespace coupons
