#include "coupons/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "coupons/bounds.hpp"
#include "coupons/version.hpp"

namespace coupons {

using OrderedJson = nlohmann::ordered_json;

std::string_view to_string(OutputFormat format) {
    return format == OutputFormat::Csv ? "csv" : "json";
}

std::optional<OutputFormat> parse_format(std::string_view name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    return std::nullopt;
}

std::int64_t resolve_round_preset(std::string_view name, std::int64_t n,
                                  std::int64_t m) {
    if (name == "no_exchange_ub") return rc_no_exchange_ub(n, m);
    if (name == "unlimited_ub") return rc_unlimited_ub(n, m);
    if (name == "main_ub") return rc_main_ub(n, m);
    if (name == "main_re_ub") return re_main_ub(n, m);
    if (name == "quarter_nlogn") return quarter_n_ln_n(n);
    if (name == "quarter_nlog2m") return quarter_n_log2_m(n, m);
    throw ConfigError("unknown round preset '" + std::string(name) + "'");
}

std::int64_t resolve_round_spec(const RoundSpec& spec, std::int64_t n,
                                std::int64_t m) {
    if (const auto* value = std::get_if<std::int64_t>(&spec)) {
        return *value;
    }
    return resolve_round_preset(std::get<std::string>(spec), n, m);
}

namespace {

void validate_config(const ExperimentConfig& config) {
    if (config.n < 1) throw ConfigError("field 'n' must be >= 1");
    if (config.m < 1) throw ConfigError("field 'm' must be >= 1");
    if (config.rc < 0) throw ConfigError("field 'rc' must resolve to >= 0");
    if (config.re < 0) throw ConfigError("field 're' must resolve to >= 0");
    if (config.m < 2 && config.re > 0) {
        throw ConfigError("field 're': interactions require m >= 2");
    }
    if (config.trials < 1) throw ConfigError("field 'trials' must be >= 1");
    if (config.workers < 1) throw ConfigError("field 'workers' must be >= 1");
    if (config.trace && config.format == OutputFormat::Csv) {
        throw ConfigError("field 'trace': trace output requires json format");
    }
    if (config.target_failure &&
        (*config.target_failure < 0.0 || *config.target_failure > 1.0)) {
        throw ConfigError("field 'target_failure' must be in [0, 1]");
    }
}

RoundSpec round_spec_from_json(const nlohmann::json& value,
                               const std::string& field) {
    if (value.is_number_integer()) {
        const auto v = value.get<std::int64_t>();
        if (v < 0) throw ConfigError("field '" + field + "' must be >= 0");
        return RoundSpec{v};
    }
    if (value.is_string()) {
        return RoundSpec{value.get<std::string>()};
    }
    throw ConfigError("field '" + field +
                      "' must be an integer or a preset name");
}

std::int64_t positive_int_from_json(const nlohmann::json& value,
                                    const std::string& field) {
    if (!value.is_number_integer() || value.get<std::int64_t>() < 1) {
        throw ConfigError("field '" + field + "' must be a positive integer");
    }
    return value.get<std::int64_t>();
}

std::uint64_t seed_from_json(const nlohmann::json& value,
                             const std::string& field) {
    if (!value.is_number_unsigned()) {
        throw ConfigError("field '" + field +
                          "' must be a non-negative 64-bit integer");
    }
    return value.get<std::uint64_t>();
}

StrategyId strategy_from_json(const nlohmann::json& value) {
    if (!value.is_string()) {
        throw ConfigError("field 'strategy' must be a string");
    }
    const auto parsed = parse_strategy(value.get<std::string>());
    if (!parsed) {
        throw ConfigError("unknown strategy '" + value.get<std::string>() +
                          "' (expected SurplusToNeedy, MutualBarter or Null)");
    }
    return *parsed;
}

OutputFormat format_from_json(const nlohmann::json& value) {
    if (!value.is_string()) throw ConfigError("field 'format' must be a string");
    const auto parsed = parse_format(value.get<std::string>());
    if (!parsed) {
        throw ConfigError("unknown format '" + value.get<std::string>() +
                          "' (expected csv or json)");
    }
    return *parsed;
}

nlohmann::json parse_json_document(std::string_view text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace

void finalize_config(ExperimentConfig& config) {
    if (config.n < 1) throw ConfigError("field 'n' must be >= 1");
    if (config.m < 1) throw ConfigError("field 'm' must be >= 1");
    config.rc = resolve_round_spec(config.rc_spec, config.n, config.m);
    config.re = resolve_round_spec(config.re_spec, config.n, config.m);
    validate_config(config);
}

ExperimentConfig parse_config(std::string_view json_text) {
    const auto doc = parse_json_document(json_text);
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");

    static const std::vector<std::string> known = {
        "n",     "m",    "rc",     "re",  "strategy", "trials",
        "seed",  "trace", "target_failure", "out", "format", "workers"};
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError("unknown field '" + key + "'");
        }
    }
    for (const auto* required : {"n", "m", "rc", "re", "trials", "seed"}) {
        if (!doc.contains(required)) {
            throw ConfigError(std::string("missing required field '") +
                              required + "'");
        }
    }

    ExperimentConfig config;
    config.n = positive_int_from_json(doc.at("n"), "n");
    config.m = positive_int_from_json(doc.at("m"), "m");
    config.rc_spec = round_spec_from_json(doc.at("rc"), "rc");
    config.re_spec = round_spec_from_json(doc.at("re"), "re");
    config.trials = positive_int_from_json(doc.at("trials"), "trials");
    config.master_seed = seed_from_json(doc.at("seed"), "seed");
    if (doc.contains("strategy")) {
        config.strategy = strategy_from_json(doc.at("strategy"));
    }
    if (doc.contains("trace")) {
        if (!doc.at("trace").is_boolean()) {
            throw ConfigError("field 'trace' must be a boolean");
        }
        config.trace = doc.at("trace").get<bool>();
    }
    if (doc.contains("target_failure")) {
        if (!doc.at("target_failure").is_number()) {
            throw ConfigError("field 'target_failure' must be a number");
        }
        config.target_failure = doc.at("target_failure").get<double>();
    }
    if (doc.contains("out")) {
        if (!doc.at("out").is_string()) {
            throw ConfigError("field 'out' must be a string");
        }
        config.out_path = doc.at("out").get<std::string>();
    }
    if (doc.contains("format")) {
        config.format = format_from_json(doc.at("format"));
    }
    if (doc.contains("workers")) {
        config.workers = static_cast<int>(
            positive_int_from_json(doc.at("workers"), "workers"));
    }
    finalize_config(config);
    return config;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    validate_config(config);

    ExperimentResult result;
    result.config = config;
    const std::int64_t trials = config.trials;
    result.rows.resize(static_cast<std::size_t>(trials));
    if (config.trace) result.traces.resize(static_cast<std::size_t>(trials));

    const int workers = static_cast<int>(
        std::clamp<std::int64_t>(config.workers, 1, trials));
    std::vector<SuccessAccumulator> partials(static_cast<std::size_t>(workers));

    const PhasePlan plan{config.rc, config.re, config.strategy};
    auto work = [&](int worker) {
        const std::int64_t begin = trials * worker / workers;
        const std::int64_t end = trials * (worker + 1) / workers;
        auto& partial = partials[static_cast<std::size_t>(worker)];
        for (std::int64_t i = begin; i < end; ++i) {
            RngStream rng = RngStream::substream(config.master_seed,
                                                 static_cast<std::uint64_t>(i));
            TrialOutcome outcome =
                run_trial(config.n, config.m, plan, rng, config.trace);
            std::int32_t complete = 0;
            for (const bool c : outcome.per_collector_complete) {
                complete += c ? 1 : 0;
            }
            result.rows[static_cast<std::size_t>(i)] =
                TrialRow{i, outcome.all_complete,
                         outcome.missing_pairs_after_collection,
                         outcome.missing_pairs_final, complete};
            if (config.trace) {
                result.traces[static_cast<std::size_t>(i)] =
                    std::move(*outcome.trace);
            }
            partial.add(outcome.all_complete);
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }

    SuccessAccumulator merged;
    for (const auto& partial : partials) merged.merge(partial);
    result.summary = merged.summary(kZ95);
    return result;
}

namespace {

void append_metadata_preamble(std::ostringstream& out,
                              const ExperimentConfig& config) {
    out << "# n=" << config.n << "\n";
    out << "# m=" << config.m << "\n";
    out << "# rc=" << config.rc << "\n";
    out << "# re=" << config.re << "\n";
    out << "# strategy=" << to_string(config.strategy) << "\n";
    out << "# trials=" << config.trials << "\n";
    out << "# seed=" << config.master_seed << "\n";
    if (config.target_failure) {
        out << "# target_failure=" << *config.target_failure << "\n";
    }
    out << "# generator=" << RngStream::kGeneratorId << "\n";
    out << "# version=" << kVersion << "\n";
}

OrderedJson trace_to_json(const Trace& trace) {
    OrderedJson records = OrderedJson::array();
    for (const auto& record : trace) {
        OrderedJson transfers = OrderedJson::array();
        for (const auto& t : record.transfers) {
            transfers.push_back(OrderedJson{
                {"coupon", t.coupon}, {"from", t.from}, {"to", t.to}});
        }
        records.push_back(OrderedJson{{"round", record.round},
                                      {"pair", {record.first, record.second}},
                                      {"transfers", std::move(transfers)}});
    }
    return records;
}

OrderedJson summary_object(const ExperimentConfig& config,
                           const SuccessSummary& summary) {
    OrderedJson out;
    out["n"] = config.n;
    out["m"] = config.m;
    out["rc"] = config.rc;
    out["re"] = config.re;
    out["strategy"] = to_string(config.strategy);
    out["trials"] = summary.trials;
    out["successes"] = summary.successes;
    out["fraction"] = summary.fraction;
    out["wilson_low"] = summary.wilson_low;
    out["wilson_high"] = summary.wilson_high;
    out["seed"] = config.master_seed;
    out["generator"] = RngStream::kGeneratorId;
    out["version"] = kVersion;
    return out;
}

}  // namespace

std::string trial_rows_csv(const ExperimentResult& result) {
    std::ostringstream out;
    append_metadata_preamble(out, result.config);
    out << "trial_index,completed,missing_after_collection,missing_final,"
           "collectors_complete\n";
    for (const auto& row : result.rows) {
        out << row.trial_index << ',' << (row.completed ? 1 : 0) << ','
            << row.missing_after_collection << ',' << row.missing_final << ','
            << row.collectors_complete << '\n';
    }
    return out.str();
}

std::string summary_json(const ExperimentResult& result, bool include_trials) {
    OrderedJson out = summary_object(result.config, result.summary);
    if (include_trials) {
        OrderedJson records = OrderedJson::array();
        for (const auto& row : result.rows) {
            OrderedJson entry;
            entry["trial_index"] = row.trial_index;
            entry["completed"] = row.completed;
            entry["missing_after_collection"] = row.missing_after_collection;
            entry["missing_final"] = row.missing_final;
            entry["collectors_complete"] = row.collectors_complete;
            if (result.config.trace) {
                entry["trace"] = trace_to_json(
                    result.traces[static_cast<std::size_t>(row.trial_index)]);
            }
            records.push_back(std::move(entry));
        }
        out["trial_records"] = std::move(records);
    }
    return out.dump(2) + "\n";
}

void atomic_write_file(const std::filesystem::path& path,
                       std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open '" + tmp.string() + "' for writing");
        }
        out.write(content.data(),
                  static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoError("failed writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        throw IoError("failed renaming '" + tmp.string() + "' to '" +
                      path.string() + "': " + ec.message());
    }
}

std::string write_experiment_output(const ExperimentResult& result) {
    const auto& config = result.config;
    if (config.out_path) {
        const std::string content = config.format == OutputFormat::Csv
                                        ? trial_rows_csv(result)
                                        : summary_json(result, config.trace);
        atomic_write_file(*config.out_path, content);
    }
    OrderedJson line = summary_object(config, result.summary);
    return line.dump();
}

// --- Sweeps -------------------------------------------------------------

std::int64_t resolve_m_rule(const MRule& rule, std::int64_t n) {
    switch (rule.kind) {
        case MRuleKind::Explicit:
            throw ConfigError("m rule: explicit m values carry no rule");
        case MRuleKind::Const:
            return rule.const_value;
        case MRuleKind::LogN:
            return std::max<std::int64_t>(
                1, static_cast<std::int64_t>(
                       std::ceil(std::log(static_cast<double>(n)))));
        case MRuleKind::SqrtN:
            return std::max<std::int64_t>(
                1, static_cast<std::int64_t>(
                       std::ceil(std::sqrt(static_cast<double>(n)))));
        case MRuleKind::LinearN:
            return n;
    }
    throw ConfigError("m rule: unknown kind");
}

SweepSpec parse_sweep_spec(std::string_view json_text) {
    const auto doc = parse_json_document(json_text);
    if (!doc.is_object()) throw ConfigError("sweep spec must be a JSON object");

    static const std::vector<std::string> known = {
        "n_values", "m_values", "m_rule",  "m_value",       "rc",
        "rc_multipliers", "re", "re_multipliers", "strategy", "trials",
        "seed",     "out",      "format",  "workers"};
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError("unknown field '" + key + "'");
        }
    }
    for (const auto* required : {"n_values", "rc", "re", "trials", "seed"}) {
        if (!doc.contains(required)) {
            throw ConfigError(std::string("missing required field '") +
                              required + "'");
        }
    }

    SweepSpec spec;
    if (!doc.at("n_values").is_array() || doc.at("n_values").empty()) {
        throw ConfigError("field 'n_values' must be a non-empty array");
    }
    for (const auto& v : doc.at("n_values")) {
        spec.n_values.push_back(positive_int_from_json(v, "n_values"));
    }

    const bool has_m_values = doc.contains("m_values");
    const bool has_m_rule = doc.contains("m_rule");
    if (has_m_values == has_m_rule) {
        throw ConfigError("exactly one of 'm_values' and 'm_rule' is required");
    }
    if (has_m_values) {
        if (!doc.at("m_values").is_array() || doc.at("m_values").empty()) {
            throw ConfigError("field 'm_values' must be a non-empty array");
        }
        for (const auto& v : doc.at("m_values")) {
            spec.m_values.push_back(positive_int_from_json(v, "m_values"));
        }
        spec.m_rule.kind = MRuleKind::Explicit;
    } else {
        if (!doc.at("m_rule").is_string()) {
            throw ConfigError("field 'm_rule' must be a string");
        }
        const auto rule = doc.at("m_rule").get<std::string>();
        if (rule == "const") {
            spec.m_rule.kind = MRuleKind::Const;
            if (!doc.contains("m_value")) {
                throw ConfigError("m_rule 'const' requires field 'm_value'");
            }
            spec.m_rule.const_value =
                positive_int_from_json(doc.at("m_value"), "m_value");
        } else if (rule == "log_n") {
            spec.m_rule.kind = MRuleKind::LogN;
        } else if (rule == "sqrt_n") {
            spec.m_rule.kind = MRuleKind::SqrtN;
        } else if (rule == "linear_n") {
            spec.m_rule.kind = MRuleKind::LinearN;
        } else {
            throw ConfigError("unknown m_rule '" + rule +
                              "' (expected const, log_n, sqrt_n or linear_n)");
        }
    }

    spec.rc_spec = round_spec_from_json(doc.at("rc"), "rc");
    spec.re_spec = round_spec_from_json(doc.at("re"), "re");
    for (const auto* field : {"rc_multipliers", "re_multipliers"}) {
        if (!doc.contains(field)) continue;
        const auto& arr = doc.at(field);
        if (!arr.is_array() || arr.empty()) {
            throw ConfigError(std::string("field '") + field +
                              "' must be a non-empty array of numbers");
        }
        std::vector<double> multipliers;
        for (const auto& v : arr) {
            if (!v.is_number() || v.get<double>() < 0.0) {
                throw ConfigError(std::string("field '") + field +
                                  "' entries must be non-negative numbers");
            }
            multipliers.push_back(v.get<double>());
        }
        if (std::string_view(field) == "rc_multipliers") {
            spec.rc_multipliers = std::move(multipliers);
        } else {
            spec.re_multipliers = std::move(multipliers);
        }
    }
    if (doc.contains("strategy")) {
        spec.strategy = strategy_from_json(doc.at("strategy"));
    }
    spec.trials_per_cell = positive_int_from_json(doc.at("trials"), "trials");
    spec.master_seed = seed_from_json(doc.at("seed"), "seed");
    if (doc.contains("out")) {
        if (!doc.at("out").is_string()) {
            throw ConfigError("field 'out' must be a string");
        }
        spec.out_path = doc.at("out").get<std::string>();
    }
    if (doc.contains("format")) {
        spec.format = format_from_json(doc.at("format"));
    }
    if (doc.contains("workers")) {
        spec.workers = static_cast<int>(
            positive_int_from_json(doc.at("workers"), "workers"));
    }
    return spec;
}

std::int64_t sweep_cell_count(const SweepSpec& spec) {
    const auto m_count = spec.m_rule.kind == MRuleKind::Explicit
                             ? static_cast<std::int64_t>(spec.m_values.size())
                             : 1;
    return static_cast<std::int64_t>(spec.n_values.size()) * m_count *
           static_cast<std::int64_t>(spec.rc_multipliers.size()) *
           static_cast<std::int64_t>(spec.re_multipliers.size());
}

std::uint64_t derive_cell_seed(std::uint64_t master_seed, std::int64_t n,
                               std::int64_t m, std::int64_t rc, std::int64_t re,
                               StrategyId strategy) {
    std::uint64_t seed = master_seed;
    seed = splitmix64_at(seed, static_cast<std::uint64_t>(n));
    seed = splitmix64_at(seed, static_cast<std::uint64_t>(m));
    seed = splitmix64_at(seed, static_cast<std::uint64_t>(rc));
    seed = splitmix64_at(seed, static_cast<std::uint64_t>(re));
    seed = splitmix64_at(seed, static_cast<std::uint64_t>(strategy));
    return seed;
}

namespace {

std::int64_t scaled_rounds(std::int64_t base, double multiplier) {
    const auto scaled = std::llround(multiplier * static_cast<double>(base));
    return scaled < 0 ? 0 : scaled;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
    if (spec.n_values.empty()) {
        throw ConfigError("field 'n_values' must be non-empty");
    }
    if (spec.trials_per_cell < 1) {
        throw ConfigError("field 'trials' must be >= 1");
    }

    // Expand and validate every cell before any trial runs.
    struct CellParams {
        std::int64_t n, m, rc, re;
    };
    std::vector<CellParams> cells;
    for (const auto n : spec.n_values) {
        std::vector<std::int64_t> ms =
            spec.m_rule.kind == MRuleKind::Explicit
                ? spec.m_values
                : std::vector<std::int64_t>{resolve_m_rule(spec.m_rule, n)};
        for (const auto m : ms) {
            const auto rc_base = resolve_round_spec(spec.rc_spec, n, m);
            const auto re_base = resolve_round_spec(spec.re_spec, n, m);
            for (const auto rc_mult : spec.rc_multipliers) {
                for (const auto re_mult : spec.re_multipliers) {
                    const auto rc = scaled_rounds(rc_base, rc_mult);
                    const auto re = scaled_rounds(re_base, re_mult);
                    if (m < 2 && re > 0) {
                        throw ConfigError(
                            "sweep cell with m = 1 cannot run interactions");
                    }
                    cells.push_back({n, m, rc, re});
                }
            }
        }
    }

    SweepResult result;
    result.spec = spec;
    result.cells.reserve(cells.size());
    for (const auto& cell : cells) {
        ExperimentConfig config;
        config.n = cell.n;
        config.m = cell.m;
        config.rc_spec = cell.rc;
        config.re_spec = cell.re;
        config.rc = cell.rc;
        config.re = cell.re;
        config.strategy = spec.strategy;
        config.trials = spec.trials_per_cell;
        config.master_seed = derive_cell_seed(spec.master_seed, cell.n, cell.m,
                                              cell.rc, cell.re, spec.strategy);
        config.workers = spec.workers;
        const auto experiment = run_experiment(config);
        result.cells.push_back(SweepCell{cell.n, cell.m, cell.rc, cell.re,
                                         spec.strategy, config.master_seed,
                                         experiment.summary});
    }
    return result;
}

std::string sweep_csv(const SweepResult& result) {
    std::ostringstream out;
    out << "# master_seed=" << result.spec.master_seed << "\n";
    out << "# trials_per_cell=" << result.spec.trials_per_cell << "\n";
    out << "# generator=" << RngStream::kGeneratorId << "\n";
    out << "# version=" << kVersion << "\n";
    out << "n,m,rc,re,strategy,trials,successes,fraction,wilson_low,"
           "wilson_high,cell_seed\n";
    for (const auto& cell : result.cells) {
        std::ostringstream row;
        row.precision(17);
        row << cell.n << ',' << cell.m << ',' << cell.rc << ',' << cell.re
            << ',' << to_string(cell.strategy) << ',' << cell.summary.trials
            << ',' << cell.summary.successes << ',' << cell.summary.fraction
            << ',' << cell.summary.wilson_low << ',' << cell.summary.wilson_high
            << ',' << cell.cell_seed << '\n';
        out << row.str();
    }
    return out.str();
}

std::string sweep_json(const SweepResult& result) {
    OrderedJson out;
    out["master_seed"] = result.spec.master_seed;
    out["trials_per_cell"] = result.spec.trials_per_cell;
    out["generator"] = RngStream::kGeneratorId;
    out["version"] = kVersion;
    OrderedJson cells = OrderedJson::array();
    for (const auto& cell : result.cells) {
        OrderedJson entry;
        entry["n"] = cell.n;
        entry["m"] = cell.m;
        entry["rc"] = cell.rc;
        entry["re"] = cell.re;
        entry["strategy"] = to_string(cell.strategy);
        entry["trials"] = cell.summary.trials;
        entry["successes"] = cell.summary.successes;
        entry["fraction"] = cell.summary.fraction;
        entry["wilson_low"] = cell.summary.wilson_low;
        entry["wilson_high"] = cell.summary.wilson_high;
        entry["cell_seed"] = cell.cell_seed;
        cells.push_back(std::move(entry));
    }
    out["cells"] = std::move(cells);
    return out.dump(2) + "\n";
}

std::string write_sweep_output(const SweepResult& result) {
    const std::string content = result.spec.format == OutputFormat::Csv
                                    ? sweep_csv(result)
                                    : sweep_json(result);
    if (!result.spec.out_path) {
        return content;
    }
    atomic_write_file(*result.spec.out_path, content);
    std::ostringstream line;
    line << "{\"cells\": " << result.cells.size() << ", \"out\": \""
         << *result.spec.out_path << "\"}";
    return line.str();
}

}  // namespace coupons
