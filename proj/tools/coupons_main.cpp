// Command-line front end: simulate | sweep | bounds | oracle | until-complete
// | presets. Exit codes: 0 success, 1 configuration/validation error,
// 2 I/O error, 3 oracle enumeration budget exceeded.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <fstream>
#include <sstream>
#include <thread>
#include <vector>

#include "coupons/bounds.hpp"
#include "coupons/exact.hpp"
#include "coupons/experiment.hpp"
#include "coupons/stats.hpp"
#include "coupons/variants.hpp"
#include "coupons/version.hpp"

namespace {

using coupons::ConfigError;
using coupons::IoError;
using OrderedJson = nlohmann::ordered_json;

// "829" -> integer, anything else -> preset name for the config document.
OrderedJson round_flag_value(const std::string& text) {
    std::int64_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec == std::errc() && ptr == end) return value;
    return text;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream content;
    content << in.rdbuf();
    return content.str();
}

void emit(const std::optional<std::string>& out_path, const std::string& text) {
    if (out_path) {
        coupons::atomic_write_file(*out_path, text);
    } else {
        std::cout << text;
    }
}

void print_line(const std::string& text) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
}

// --- simulate ------------------------------------------------------------

struct SimulateArgs {
    std::string config_file;
    std::string preset;
    std::int64_t n = 0;
    std::int64_t m = 0;
    std::string rc;
    std::string re;
    std::string strategy;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    bool trace = false;
    double target_failure = -1.0;
    std::string out;
    std::string format;
    int workers = 0;
};

void add_simulate(CLI::App& app) {
    auto args = std::make_shared<SimulateArgs>();
    auto* cmd = app.add_subcommand(
        "simulate", "run one experiment and report the success summary");
    cmd->add_option("--config", args->config_file,
                    "JSON config document (flags override its fields)");
    cmd->add_option("--preset", args->preset,
                    "regime preset supplying rc/re/strategy (see `presets`)");
    auto* n_opt = cmd->add_option("--n", args->n, "coupon types");
    auto* m_opt = cmd->add_option("--m", args->m, "collectors");
    auto* rc_opt = cmd->add_option("--rc", args->rc,
                                   "collection rounds (integer or preset)");
    auto* re_opt = cmd->add_option("--re", args->re,
                                   "exchange interactions (integer or preset)");
    auto* st_opt = cmd->add_option("--strategy", args->strategy,
                                   "SurplusToNeedy | MutualBarter | Null");
    auto* tr_opt = cmd->add_option("--trials", args->trials, "trial count");
    auto* se_opt = cmd->add_option("--seed", args->seed, "64-bit master seed");
    auto* tf_opt = cmd->add_option("--target-failure", args->target_failure,
                                   "failure-probability target (metadata only)");
    auto* ou_opt = cmd->add_option("--out", args->out, "output file path");
    auto* fo_opt = cmd->add_option("--format", args->format, "csv | json");
    auto* wo_opt = cmd->add_option("--workers", args->workers, "worker threads");
    auto* trace_flag = cmd->add_flag("--trace", args->trace,
                                     "record interaction traces (json format)");

    cmd->callback([args, n_opt, m_opt, rc_opt, re_opt, st_opt, tr_opt, se_opt,
                   tf_opt, ou_opt, fo_opt, wo_opt, trace_flag] {
        OrderedJson doc = OrderedJson::object();
        if (!args->config_file.empty()) {
            doc = OrderedJson::parse(read_file(args->config_file), nullptr, false);
            if (doc.is_discarded()) {
                throw ConfigError("invalid JSON in '" + args->config_file + "'");
            }
        }
        if (n_opt->count()) doc["n"] = args->n;
        if (m_opt->count()) doc["m"] = args->m;
        if (!args->preset.empty()) {
            const auto* preset = coupons::find_preset(args->preset);
            if (preset == nullptr) {
                throw ConfigError("unknown preset '" + args->preset + "'");
            }
            if (!doc.contains("n") || !doc.contains("m")) {
                throw ConfigError("--preset requires --n and --m");
            }
            const auto resolved = coupons::resolve_regime(
                *preset, doc["n"].get<std::int64_t>(),
                doc["m"].get<std::int64_t>());
            if (resolved.re_values.size() > 1) {
                throw ConfigError("preset '" + args->preset +
                                  "' sweeps re; use the sweep subcommand");
            }
            doc["rc"] = resolved.rc;
            doc["re"] = resolved.re_values.front();
            doc["strategy"] = std::string(coupons::to_string(preset->strategy));
        }
        if (rc_opt->count()) doc["rc"] = round_flag_value(args->rc);
        if (re_opt->count()) doc["re"] = round_flag_value(args->re);
        if (st_opt->count()) doc["strategy"] = args->strategy;
        if (tr_opt->count()) doc["trials"] = args->trials;
        if (se_opt->count()) doc["seed"] = args->seed;
        if (trace_flag->count()) doc["trace"] = true;
        if (tf_opt->count()) doc["target_failure"] = args->target_failure;
        if (ou_opt->count()) doc["out"] = args->out;
        if (fo_opt->count()) doc["format"] = args->format;
        if (wo_opt->count()) doc["workers"] = args->workers;

        const auto config = coupons::parse_config(doc.dump());
        const auto result = coupons::run_experiment(config);
        std::cout << coupons::write_experiment_output(result) << "\n";
    });
}

// --- sweep ---------------------------------------------------------------

struct SweepArgs {
    std::string config_file;
    std::string preset;
    std::vector<std::int64_t> n_values;
    std::vector<std::int64_t> m_values;
    std::string m_rule;
    std::int64_t m_value = 0;
    std::string rc;
    std::string re;
    std::vector<double> rc_multipliers;
    std::vector<double> re_multipliers;
    std::string strategy;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    std::string out;
    std::string format;
    int workers = 0;
};

void run_preset_sweep(const SweepArgs& args) {
    const auto* preset = coupons::find_preset(args.preset);
    if (preset == nullptr) {
        throw ConfigError("unknown preset '" + args.preset + "'");
    }
    if (args.n_values.empty() || args.m_values.empty()) {
        throw ConfigError("--preset sweeps require --n and --m");
    }
    if (args.trials < 1) throw ConfigError("--trials must be >= 1");

    coupons::SweepResult result;
    result.spec.master_seed = args.seed;
    result.spec.trials_per_cell = args.trials;
    result.spec.strategy = preset->strategy;
    if (!args.out.empty()) result.spec.out_path = args.out;
    if (!args.format.empty()) {
        const auto parsed = coupons::parse_format(args.format);
        if (!parsed) throw ConfigError("unknown format '" + args.format + "'");
        result.spec.format = *parsed;
    }

    std::int64_t cell_count = 0;
    for (const auto n : args.n_values) {
        for (const auto m : args.m_values) {
            cell_count += static_cast<std::int64_t>(
                coupons::resolve_regime(*preset, n, m).re_values.size());
        }
    }
    std::cerr << "sweep: " << cell_count << " cells\n";

    for (const auto n : args.n_values) {
        for (const auto m : args.m_values) {
            const auto resolved = coupons::resolve_regime(*preset, n, m);
            for (const auto re : resolved.re_values) {
                coupons::ExperimentConfig config;
                config.n = n;
                config.m = m;
                config.rc_spec = resolved.rc;
                config.re_spec = re;
                config.rc = resolved.rc;
                config.re = re;
                config.strategy = preset->strategy;
                config.trials = args.trials;
                config.master_seed = coupons::derive_cell_seed(
                    args.seed, n, m, resolved.rc, re, preset->strategy);
                config.workers = args.workers > 0 ? args.workers : 1;
                const auto cell = coupons::run_experiment(config);
                result.cells.push_back({n, m, resolved.rc, re, preset->strategy,
                                        config.master_seed, cell.summary});
            }
        }
    }
    print_line(coupons::write_sweep_output(result));
}

void add_sweep(CLI::App& app) {
    auto args = std::make_shared<SweepArgs>();
    auto* cmd = app.add_subcommand(
        "sweep", "run a grid of experiments, one summary row per cell");
    cmd->add_option("--config", args->config_file, "JSON sweep document");
    cmd->add_option("--preset", args->preset,
                    "regime preset expanded over the (n, m) grid");
    auto* n_opt = cmd->add_option("--n", args->n_values, "coupon type counts");
    auto* m_opt = cmd->add_option("--m", args->m_values, "collector counts");
    auto* mr_opt = cmd->add_option("--m-rule", args->m_rule,
                                   "const | log_n | sqrt_n | linear_n");
    auto* mv_opt = cmd->add_option("--m-value", args->m_value,
                                   "m for the const rule");
    auto* rc_opt = cmd->add_option("--rc", args->rc,
                                   "collection rounds (integer or preset)");
    auto* re_opt = cmd->add_option("--re", args->re,
                                   "interactions (integer or preset)");
    auto* rcm_opt = cmd->add_option("--rc-multipliers", args->rc_multipliers,
                                    "multipliers applied to the rc base");
    auto* rem_opt = cmd->add_option("--re-multipliers", args->re_multipliers,
                                    "multipliers applied to the re base");
    auto* st_opt = cmd->add_option("--strategy", args->strategy,
                                   "SurplusToNeedy | MutualBarter | Null");
    auto* tr_opt = cmd->add_option("--trials", args->trials, "trials per cell");
    auto* se_opt = cmd->add_option("--seed", args->seed, "64-bit master seed");
    auto* ou_opt = cmd->add_option("--out", args->out, "output file path");
    auto* fo_opt = cmd->add_option("--format", args->format, "csv | json");
    auto* wo_opt = cmd->add_option("--workers", args->workers, "worker threads");

    cmd->callback([args, n_opt, m_opt, mr_opt, mv_opt, rc_opt, re_opt, rcm_opt,
                   rem_opt, st_opt, tr_opt, se_opt, ou_opt, fo_opt, wo_opt] {
        if (!args->preset.empty()) {
            run_preset_sweep(*args);
            return;
        }
        OrderedJson doc = OrderedJson::object();
        if (!args->config_file.empty()) {
            doc = OrderedJson::parse(read_file(args->config_file), nullptr, false);
            if (doc.is_discarded()) {
                throw ConfigError("invalid JSON in '" + args->config_file + "'");
            }
        }
        if (n_opt->count()) doc["n_values"] = args->n_values;
        if (m_opt->count()) doc["m_values"] = args->m_values;
        if (mr_opt->count()) doc["m_rule"] = args->m_rule;
        if (mv_opt->count()) doc["m_value"] = args->m_value;
        if (rc_opt->count()) doc["rc"] = round_flag_value(args->rc);
        if (re_opt->count()) doc["re"] = round_flag_value(args->re);
        if (rcm_opt->count()) doc["rc_multipliers"] = args->rc_multipliers;
        if (rem_opt->count()) doc["re_multipliers"] = args->re_multipliers;
        if (st_opt->count()) doc["strategy"] = args->strategy;
        if (tr_opt->count()) doc["trials"] = args->trials;
        if (se_opt->count()) doc["seed"] = args->seed;
        if (ou_opt->count()) doc["out"] = args->out;
        if (fo_opt->count()) doc["format"] = args->format;
        if (wo_opt->count()) doc["workers"] = args->workers;

        const auto spec = coupons::parse_sweep_spec(doc.dump());
        std::cerr << "sweep: " << coupons::sweep_cell_count(spec) << " cells\n";
        const auto result = coupons::run_sweep(spec);
        print_line(coupons::write_sweep_output(result));
    });
}

// --- bounds --------------------------------------------------------------

void add_bounds(CLI::App& app) {
    struct BoundsArgs {
        std::int64_t n = 0;
        std::int64_t m = 0;
        std::vector<double> c_values = {-1.0, 0.0, 1.0};
        std::string format = "text";
        std::string out;
    };
    auto args = std::make_shared<BoundsArgs>();
    auto* cmd = app.add_subcommand(
        "bounds", "evaluate the closed-form round bounds and limit laws");
    cmd->add_option("--n", args->n, "coupon types")->required();
    cmd->add_option("--m", args->m, "collectors")->required();
    cmd->add_option("--c", args->c_values, "limit-law offsets to evaluate");
    cmd->add_option("--format", args->format, "text | json");
    cmd->add_option("--out", args->out, "output file path");

    cmd->callback([args] {
        const auto report = coupons::make_bound_report(args->n, args->m);
        OrderedJson out;
        out["n"] = report.n;
        out["m"] = report.m;
        out["rc_no_exchange_ub"] = report.rc_no_exchange_ub;
        out["rc_unlimited_ub"] = report.rc_unlimited_ub;
        out["rc_main_ub"] = report.rc_main_ub;
        out["re_main_ub"] = report.re_main_ub;
        out["formulas"] = {
            {"rc_no_exchange_ub", coupons::BoundReport::kRcNoExchangeFormula},
            {"rc_unlimited_ub", coupons::BoundReport::kRcUnlimitedFormula},
            {"rc_main_ub", coupons::BoundReport::kRcMainFormula},
            {"re_main_ub", coupons::BoundReport::kReMainFormula},
        };
        out["thresholds"] = {
            {"quarter_nlogn", coupons::quarter_n_ln_n(args->n)},
            {"quarter_nlog2m", coupons::quarter_n_log2_m(args->n, args->m)},
            {"eighth_mlog2n", coupons::eighth_m_log2_n(args->n, args->m)},
            {"sixteenth_mlog2m", coupons::sixteenth_m_log2_m(args->n, args->m)},
            {"sixteenth_mlog2mn", coupons::sixteenth_m_log2_mn(args->n, args->m)},
        };
        OrderedJson limits = OrderedJson::array();
        for (const double c : args->c_values) {
            limits.push_back({{"c", c},
                              {"lower", coupons::er_limit_lower(c)},
                              {"upper", coupons::er_limit_upper(c)}});
        }
        out["er_limits"] = std::move(limits);
        if (args->n >= 3) {
            OrderedJson expectations = OrderedJson::array();
            for (const std::int64_t m : {std::int64_t{1}, args->m}) {
                expectations.push_back(
                    {{"m", m},
                     {"expected_samples",
                      coupons::newman_shepp_expectation(args->n, m)}});
            }
            out["newman_shepp"] = std::move(expectations);
        }

        if (args->format == "json") {
            emit(args->out.empty() ? std::nullopt
                                   : std::optional<std::string>(args->out),
                 out.dump(2) + "\n");
            return;
        }
        if (args->format != "text") {
            throw ConfigError("unknown format '" + args->format +
                              "' (expected text or json)");
        }
        std::ostringstream table;
        table << "bounds for n=" << report.n << ", m=" << report.m << "\n";
        table << "  rc_no_exchange_ub  " << std::setw(10)
              << report.rc_no_exchange_ub << "   "
              << coupons::BoundReport::kRcNoExchangeFormula << "\n";
        table << "  rc_unlimited_ub    " << std::setw(10)
              << report.rc_unlimited_ub << "   "
              << coupons::BoundReport::kRcUnlimitedFormula << "\n";
        table << "  rc_main_ub         " << std::setw(10) << report.rc_main_ub
              << "   " << coupons::BoundReport::kRcMainFormula << "\n";
        table << "  re_main_ub         " << std::setw(10) << report.re_main_ub
              << "   " << coupons::BoundReport::kReMainFormula << "\n";
        table << "lower-bound thresholds\n";
        table << "  quarter_nlogn      " << std::setw(10)
              << coupons::quarter_n_ln_n(args->n) << "\n";
        table << "  quarter_nlog2m     " << std::setw(10)
              << coupons::quarter_n_log2_m(args->n, args->m) << "\n";
        table << "limit law\n";
        for (const double c : args->c_values) {
            table << "  c=" << c << "  lower=" << coupons::er_limit_lower(c)
                  << "  upper=" << coupons::er_limit_upper(c) << "\n";
        }
        if (args->n >= 3) {
            table << "until-m-sets expectation (m=" << args->m << ")  "
                  << coupons::newman_shepp_expectation(args->n, args->m) << "\n";
        }
        emit(args->out.empty() ? std::nullopt
                               : std::optional<std::string>(args->out),
             table.str());
    });
}

// --- oracle --------------------------------------------------------------

void add_oracle(CLI::App& app) {
    struct OracleArgs {
        std::string kind;
        std::int64_t n = 0;
        std::int64_t m = 1;
        std::int64_t rc = 0;
        std::int64_t re = 0;
        std::int64_t draws = 0;
        std::string strategy = "SurplusToNeedy";
        std::uint64_t budget = coupons::kDefaultEnumerationBudget;
        unsigned digits = 17;
        std::string format = "text";
    };
    auto args = std::make_shared<OracleArgs>();
    auto* cmd = app.add_subcommand(
        "oracle", "exact success probabilities on small instances");
    cmd->add_option("--kind", args->kind,
                    "single | no-exchange | at-least-m | two-phase")
        ->required();
    cmd->add_option("--n", args->n, "coupon types")->required();
    cmd->add_option("--m", args->m, "collectors (copies for at-least-m)");
    cmd->add_option("--rc", args->rc, "collection rounds per collector");
    cmd->add_option("--re", args->re, "exchange interactions");
    cmd->add_option("--draws", args->draws, "total draws (at-least-m)");
    cmd->add_option("--strategy", args->strategy,
                    "SurplusToNeedy | MutualBarter | Null");
    cmd->add_option("--budget", args->budget, "enumeration budget in steps");
    cmd->add_option("--digits", args->digits, "significant digits to render");
    cmd->add_option("--format", args->format, "text | json");

    cmd->callback([args] {
        coupons::ExactProbability probability;
        if (args->kind == "single") {
            probability = coupons::exact_single_collector_success(args->n, args->rc);
        } else if (args->kind == "no-exchange") {
            probability =
                coupons::exact_no_exchange_success(args->n, args->m, args->rc);
        } else if (args->kind == "at-least-m") {
            probability = coupons::exact_all_coupons_at_least_m(
                args->n, args->m, args->draws, args->budget);
        } else if (args->kind == "two-phase") {
            const auto strategy = coupons::parse_strategy(args->strategy);
            if (!strategy) {
                throw ConfigError("unknown strategy '" + args->strategy + "'");
            }
            probability = coupons::exact_two_phase_success(
                args->n, args->m, args->rc, args->re, *strategy, args->budget);
        } else {
            throw ConfigError("unknown oracle kind '" + args->kind + "'");
        }

        const auto numerator = probability.numerator().str();
        const auto denominator = probability.denominator().str();
        const auto decimal = probability.decimal(args->digits);
        if (args->format == "json") {
            OrderedJson out;
            out["kind"] = args->kind;
            out["n"] = args->n;
            out["m"] = args->m;
            out["numerator"] = numerator;
            out["denominator"] = denominator;
            out["decimal"] = decimal;
            std::cout << out.dump(2) << "\n";
        } else {
            std::cout << "probability = " << numerator << "/" << denominator
                      << "\ndecimal     = " << decimal << "\n";
        }
    });
}

// --- until-complete ------------------------------------------------------

void add_until_complete(CLI::App& app) {
    struct UntilArgs {
        std::vector<std::int64_t> n_values;
        std::int64_t m = 1;
        std::string m_rule;
        std::int64_t m_value = 0;
        std::int64_t trials = 0;
        std::uint64_t seed = 0;
        std::vector<std::int64_t> thresholds;
        int workers = 1;
        std::string out;
        std::string format = "text";
    };
    auto args = std::make_shared<UntilArgs>();
    auto* cmd = app.add_subcommand(
        "until-complete",
        "sample until full sets are assembled; reports draw-count statistics");
    cmd->add_option("--n", args->n_values, "coupon types (repeatable)")
        ->required();
    cmd->add_option("--m", args->m, "full sets required per type");
    cmd->add_option("--m-rule", args->m_rule,
                    "grow m with n: const | log_n | sqrt_n | linear_n");
    cmd->add_option("--m-value", args->m_value, "m for the const rule");
    cmd->add_option("--trials", args->trials, "trial count")->required();
    cmd->add_option("--seed", args->seed, "64-bit master seed");
    cmd->add_option("--thresholds", args->thresholds,
                    "report the empirical CDF at these draw counts");
    cmd->add_option("--workers", args->workers, "worker threads");
    cmd->add_option("--out", args->out, "output file path");
    cmd->add_option("--format", args->format, "text | csv | json");

    cmd->callback([args] {
        if (args->trials < 1) throw ConfigError("--trials must be >= 1");
        const int workers = std::max(1, args->workers);

        coupons::MRule rule;
        if (!args->m_rule.empty()) {
            if (args->m_rule == "const") {
                rule = {coupons::MRuleKind::Const,
                        args->m_value > 0 ? args->m_value : args->m};
            } else if (args->m_rule == "log_n") {
                rule = {coupons::MRuleKind::LogN, 0};
            } else if (args->m_rule == "sqrt_n") {
                rule = {coupons::MRuleKind::SqrtN, 0};
            } else if (args->m_rule == "linear_n") {
                rule = {coupons::MRuleKind::LinearN, 0};
            } else {
                throw ConfigError("unknown m rule '" + args->m_rule + "'");
            }
        }

        OrderedJson rows = OrderedJson::array();
        std::ostringstream csv;
        csv << "# seed=" << args->seed << "\n";
        csv << "# trials=" << args->trials << "\n";
        csv << "# generator=" << coupons::RngStream::kGeneratorId << "\n";
        csv << "# version=" << coupons::kVersion << "\n";
        csv << "n,m,trials,mean,stddev,min,q05,q25,q50,q75,q95,max,"
               "mean_over_n\n";

        for (const auto n : args->n_values) {
            const std::int64_t m =
                args->m_rule.empty() ? args->m : coupons::resolve_m_rule(rule, n);

            std::vector<coupons::UntilCompleteResult> results(
                static_cast<std::size_t>(args->trials));
            const std::uint64_t run_seed = coupons::splitmix64_at(
                args->seed, static_cast<std::uint64_t>(n) * 131 +
                                static_cast<std::uint64_t>(m));
            auto work = [&](int worker) {
                const std::int64_t begin = args->trials * worker / workers;
                const std::int64_t end = args->trials * (worker + 1) / workers;
                for (std::int64_t i = begin; i < end; ++i) {
                    auto rng = coupons::RngStream::substream(
                        run_seed, static_cast<std::uint64_t>(i));
                    results[static_cast<std::size_t>(i)] =
                        coupons::samples_until_m_sets(n, m, rng);
                }
            };
            if (workers == 1) {
                work(0);
            } else {
                std::vector<std::thread> pool;
                for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
                for (auto& t : pool) t.join();
            }

            std::vector<double> values;
            values.reserve(results.size());
            for (const auto& r : results) {
                values.push_back(static_cast<double>(r.samples_used));
            }
            const auto stats = coupons::summarize(values);

            OrderedJson row;
            row["n"] = n;
            row["m"] = m;
            row["trials"] = args->trials;
            row["mean"] = stats.mean;
            row["stddev"] = stats.stddev;
            row["min"] = stats.min;
            row["quantiles"] = {{"q05", stats.quantiles[0]},
                                {"q25", stats.quantiles[1]},
                                {"q50", stats.quantiles[2]},
                                {"q75", stats.quantiles[3]},
                                {"q95", stats.quantiles[4]}};
            row["max"] = stats.max;
            row["mean_over_n"] = stats.mean / static_cast<double>(n);
            if (!args->thresholds.empty()) {
                const auto cdf = coupons::empirical_cdf(results, args->thresholds);
                OrderedJson points = OrderedJson::array();
                for (std::size_t i = 0; i < cdf.size(); ++i) {
                    points.push_back({{"threshold", args->thresholds[i]},
                                      {"fraction", cdf[i]}});
                }
                row["cdf"] = std::move(points);
            }
            rows.push_back(row);

            csv << n << ',' << m << ',' << args->trials << ',' << stats.mean
                << ',' << stats.stddev << ',' << stats.min << ','
                << stats.quantiles[0] << ',' << stats.quantiles[1] << ','
                << stats.quantiles[2] << ',' << stats.quantiles[3] << ','
                << stats.quantiles[4] << ',' << stats.max << ','
                << stats.mean / static_cast<double>(n) << '\n';
        }

        const std::optional<std::string> out_path =
            args->out.empty() ? std::nullopt
                              : std::optional<std::string>(args->out);
        if (args->format == "json") {
            OrderedJson out;
            out["seed"] = args->seed;
            out["generator"] = coupons::RngStream::kGeneratorId;
            out["version"] = coupons::kVersion;
            out["rows"] = std::move(rows);
            emit(out_path, out.dump(2) + "\n");
        } else if (args->format == "csv") {
            emit(out_path, csv.str());
        } else if (args->format == "text") {
            std::ostringstream text;
            for (const auto& row : rows) {
                text << "n=" << row["n"] << " m=" << row["m"]
                     << " trials=" << row["trials"] << " mean=" << row["mean"]
                     << " sd=" << row["stddev"]
                     << " mean/n=" << row["mean_over_n"] << "\n";
                if (row.contains("cdf")) {
                    for (const auto& point : row["cdf"]) {
                        text << "  P(X <= " << point["threshold"]
                             << ") = " << point["fraction"] << "\n";
                    }
                }
            }
            emit(out_path, text.str());
        } else {
            throw ConfigError("unknown format '" + args->format + "'");
        }
    });
}

// --- presets -------------------------------------------------------------

void add_presets(CLI::App& app) {
    struct PresetArgs {
        std::int64_t n = 0;
        std::int64_t m = 0;
        std::string format = "text";
    };
    auto args = std::make_shared<PresetArgs>();
    auto* cmd = app.add_subcommand(
        "presets", "list the named experiment regimes");
    auto* n_opt = cmd->add_option("--n", args->n, "resolve rc/re at this n");
    auto* m_opt = cmd->add_option("--m", args->m, "resolve rc/re at this m");
    cmd->add_option("--format", args->format, "text | json");

    cmd->callback([args, n_opt, m_opt] {
        const bool resolve = n_opt->count() > 0 && m_opt->count() > 0;
        if (args->format == "json") {
            OrderedJson out = OrderedJson::array();
            for (const auto& preset : coupons::preset_regimes()) {
                OrderedJson entry;
                entry["name"] = preset.name;
                entry["description"] = preset.description;
                entry["expected"] = preset.expected;
                entry["strategy"] = coupons::to_string(preset.strategy);
                if (resolve) {
                    const auto r =
                        coupons::resolve_regime(preset, args->n, args->m);
                    entry["rc"] = r.rc;
                    entry["re"] = r.re_values;
                }
                out.push_back(std::move(entry));
            }
            std::cout << out.dump(2) << "\n";
            return;
        }
        if (args->format != "text") {
            throw ConfigError("unknown format '" + args->format + "'");
        }
        for (const auto& preset : coupons::preset_regimes()) {
            std::cout << preset.name << "  [" << preset.expected << "]\n    "
                      << preset.description << "\n    strategy: "
                      << coupons::to_string(preset.strategy);
            if (resolve) {
                const auto r = coupons::resolve_regime(preset, args->n, args->m);
                std::cout << "  rc=" << r.rc << "  re=";
                for (std::size_t i = 0; i < r.re_values.size(); ++i) {
                    std::cout << (i ? "," : "") << r.re_values[i];
                }
            }
            std::cout << "\n";
        }
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"distributed coupon collecting: simulation, exact oracles, "
                 "bound tables and experiment harness"};
    app.require_subcommand(1);
    add_simulate(app);
    add_sweep(app);
    add_bounds(app);
    add_oracle(app);
    add_until_complete(app);
    add_presets(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const coupons::EnumerationBudgetExceeded& e) {
        std::cerr << "oracle error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
