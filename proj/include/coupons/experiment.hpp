#pragma once

// Experiment harness: JSON configuration, trial scheduling across workers,
// regime presets, and CSV/JSON result emission. Outputs are byte-identical
// for identical configurations regardless of worker count, because trial i
// always draws from the sub-stream keyed by (master seed, i).

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "coupons/simulation.hpp"
#include "coupons/stats.hpp"

namespace coupons {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

enum class OutputFormat { Csv, Json };

[[nodiscard]] std::string_view to_string(OutputFormat format);
[[nodiscard]] std::optional<OutputFormat> parse_format(std::string_view name);

// A round count given either explicitly or as a named preset resolved
// through the bound formulas: no_exchange_ub, unlimited_ub, main_ub,
// main_re_ub, quarter_nlogn, quarter_nlog2m.
using RoundSpec = std::variant<std::int64_t, std::string>;

// Resolves a preset name at (n, m). Throws ConfigError on unknown names.
[[nodiscard]] std::int64_t resolve_round_preset(std::string_view name,
                                                std::int64_t n, std::int64_t m);
[[nodiscard]] std::int64_t resolve_round_spec(const RoundSpec& spec,
                                              std::int64_t n, std::int64_t m);

struct ExperimentConfig {
    std::int64_t n = 0;
    std::int64_t m = 0;
    RoundSpec rc_spec = std::int64_t{0};
    RoundSpec re_spec = std::int64_t{0};
    std::int64_t rc = 0;  // resolved
    std::int64_t re = 0;  // resolved
    StrategyId strategy = StrategyId::SurplusToNeedy;
    std::int64_t trials = 0;
    std::uint64_t master_seed = 0;
    bool trace = false;
    std::optional<double> target_failure;  // informational metadata only
    std::optional<std::string> out_path;
    OutputFormat format = OutputFormat::Csv;
    int workers = 1;
};

// Parses and validates a JSON configuration document, resolving round
// presets. Errors name the offending field.
[[nodiscard]] ExperimentConfig parse_config(std::string_view json_text);

// Validates ranges and resolves presets on an already-populated config.
void finalize_config(ExperimentConfig& config);

struct TrialRow {
    std::int64_t trial_index = 0;
    bool completed = false;
    std::int64_t missing_after_collection = 0;
    std::int64_t missing_final = 0;
    std::int32_t collectors_complete = 0;  // count of complete collectors
};

struct ExperimentResult {
    ExperimentConfig config;
    SuccessSummary summary;
    std::vector<TrialRow> rows;
    std::vector<Trace> traces;  // aligned with rows when config.trace is set
};

// Runs exactly config.trials trials, trial i seeded by substream
// (master_seed, i), fanned out over config.workers threads.
[[nodiscard]] ExperimentResult run_experiment(const ExperimentConfig& config);

// Serialized outputs. The CSV carries a '#'-prefixed metadata preamble and
// the fixed column header; the JSON summary object holds exactly the keys
// n,m,rc,re,strategy,trials,successes,fraction,wilson_low,wilson_high,seed,
// generator,version (with a trailing "trials" array in trace mode).
[[nodiscard]] std::string trial_rows_csv(const ExperimentResult& result);
[[nodiscard]] std::string summary_json(const ExperimentResult& result,
                                       bool include_trials = false);

// Writes via a temporary file and an atomic rename; interrupted runs never
// leave a partial output at `path`.
void atomic_write_file(const std::filesystem::path& path,
                       std::string_view content);

// Writes the configured output (if out_path is set) and returns the summary
// JSON line for stdout reporting.
std::string write_experiment_output(const ExperimentResult& result);

// --- Sweeps -----------------------------------------------------------

enum class MRuleKind { Explicit, Const, LogN, SqrtN, LinearN };

struct MRule {
    MRuleKind kind = MRuleKind::Explicit;
    std::int64_t const_value = 1;  // used by Const
};

[[nodiscard]] std::int64_t resolve_m_rule(const MRule& rule, std::int64_t n);

struct SweepSpec {
    std::vector<std::int64_t> n_values;
    std::vector<std::int64_t> m_values;  // used when m_rule.kind == Explicit
    MRule m_rule;
    RoundSpec rc_spec = std::int64_t{0};
    std::vector<double> rc_multipliers = {1.0};
    RoundSpec re_spec = std::int64_t{0};
    std::vector<double> re_multipliers = {1.0};
    StrategyId strategy = StrategyId::SurplusToNeedy;
    std::int64_t trials_per_cell = 0;
    std::uint64_t master_seed = 0;
    std::optional<std::string> out_path;
    OutputFormat format = OutputFormat::Csv;
    int workers = 1;
};

[[nodiscard]] SweepSpec parse_sweep_spec(std::string_view json_text);

struct SweepCell {
    std::int64_t n = 0;
    std::int64_t m = 0;
    std::int64_t rc = 0;
    std::int64_t re = 0;
    StrategyId strategy = StrategyId::SurplusToNeedy;
    std::uint64_t cell_seed = 0;  // rerunning this cell alone with this seed
                                  // reproduces its row exactly
    SuccessSummary summary;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepCell> cells;
};

// Number of cells the sweep grid expands to; reported before execution.
[[nodiscard]] std::int64_t sweep_cell_count(const SweepSpec& spec);

// Seed for one cell, derived from the master seed and the resolved cell
// coordinates so cells are reproducible in isolation.
[[nodiscard]] std::uint64_t derive_cell_seed(std::uint64_t master_seed,
                                             std::int64_t n, std::int64_t m,
                                             std::int64_t rc, std::int64_t re,
                                             StrategyId strategy);

[[nodiscard]] SweepResult run_sweep(const SweepSpec& spec);

[[nodiscard]] std::string sweep_csv(const SweepResult& result);
[[nodiscard]] std::string sweep_json(const SweepResult& result);
std::string write_sweep_output(const SweepResult& result);

// --- Regime presets ----------------------------------------------------

// Named experiment presets, one per analyzed regime, each binding
// (r_c, r_e, strategy) with the qualitative outcome the analysis predicts.
struct RegimePreset {
    std::string_view name;
    std::string_view description;
    std::string_view expected;  // "succeeds w.h.p." / "fails w.h.p." / ...
    StrategyId strategy = StrategyId::SurplusToNeedy;
};

struct ResolvedRegime {
    std::int64_t rc = 0;
    std::vector<std::int64_t> re_values;  // usually one; a probe sweeps several
};

[[nodiscard]] const std::vector<RegimePreset>& preset_regimes();
[[nodiscard]] const RegimePreset* find_preset(std::string_view name);
[[nodiscard]] ResolvedRegime resolve_regime(const RegimePreset& preset,
                                            std::int64_t n, std::int64_t m);

}  // namespace coupons
