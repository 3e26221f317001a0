// dreadfuzz: score and rank software security threats with a
// conventional DREAD average and a fuzzy risk model.
//
// Exit codes: 0 success, 1 bad input or failed validation, 2 I/O error.

#include <cstddef>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dreadfuzz/catalog.hpp"
#include "dreadfuzz/dread.hpp"
#include "dreadfuzz/dsl.hpp"
#include "dreadfuzz/errors.hpp"
#include "dreadfuzz/fuzzy.hpp"
#include "dreadfuzz/hash.hpp"
#include "dreadfuzz/text.hpp"

namespace {

using namespace dreadfuzz;

constexpr const char* kEmbeddedLabel = "<embedded:dread.frb>";

struct GlobalOptions {
    std::string rulebase_path;
    std::string defuzz;
    int resolution = 0;
    std::string format = "text";
    bool no_timestamp = false;

    CLI::Option* rulebase_opt = nullptr;
    CLI::Option* defuzz_opt = nullptr;
    CLI::Option* resolution_opt = nullptr;
};

// The rulebase in effect plus everything derived from it once.
struct LoadedRulebase {
    fuzzy::RuleBase rulebase;
    std::string path_label;
    std::string canonical;
    std::string sha256;
    dsl::ConfigOverrides overrides;
    std::optional<dsl::SourceMap> source_map;
    std::vector<dsl::Diagnostic> parse_diagnostics;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw Error(ErrorKind::Io, "cannot read '" + path + "'");
    }
    return buffer.str();
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    out << content;
    if (!out) {
        throw Error(ErrorKind::Io, "cannot write '" + out_path + "'");
    }
}

void print_diagnostic(const std::string& path, const dsl::Diagnostic& d) {
    std::ostream& os = std::cerr;
    os << path;
    if (d.loc.line > 0) {
        os << ':' << d.loc.line;
        if (d.loc.column > 0) os << ':' << d.loc.column;
    }
    os << ": " << (d.severity == dsl::Severity::Error ? "error" : "warning")
       << ": [" << d.code << "] " << d.message << '\n';
}

// Loads --rulebase / DREADFUZZ_RULEBASE, or falls back to the embedded
// default. Parse failures print their diagnostics and throw.
LoadedRulebase load_rulebase(const GlobalOptions& opts) {
    if (opts.rulebase_path.empty()) {
        LoadedRulebase loaded{dread::default_rulebase(), kEmbeddedLabel,
                              "", "", {}, std::nullopt, {}};
        loaded.canonical = dsl::serialize_rulebase(loaded.rulebase);
        loaded.sha256 = hash::sha256_hex(loaded.canonical);
        return loaded;
    }

    const std::string content = read_file(opts.rulebase_path);
    dsl::ParseResult parsed = dsl::parse_rulebase(content);
    if (!parsed.ok()) {
        for (const dsl::Diagnostic& d : parsed.diagnostics) {
            print_diagnostic(opts.rulebase_path, d);
        }
        throw Error(ErrorKind::Parse,
                    "rulebase '" + opts.rulebase_path + "' has errors");
    }
    LoadedRulebase loaded{std::move(*parsed.rulebase),
                          opts.rulebase_path,
                          "",
                          "",
                          parsed.overrides,
                          std::move(parsed.source_map),
                          std::move(parsed.diagnostics)};
    loaded.canonical = dsl::serialize_rulebase(loaded.rulebase);
    loaded.sha256 = hash::sha256_hex(loaded.canonical);
    return loaded;
}

// Defaults, then file directives, then explicit command-line flags.
fuzzy::InferenceConfig effective_config(const GlobalOptions& opts,
                                        const LoadedRulebase& loaded) {
    fuzzy::InferenceConfig config;
    loaded.overrides.apply(config);
    if (opts.defuzz_opt != nullptr && opts.defuzz_opt->count() > 0) {
        config.defuzz = fuzzy::defuzz_method_from_string(opts.defuzz);
    }
    if (opts.resolution_opt != nullptr && opts.resolution_opt->count() > 0) {
        config.resolution = opts.resolution;
    }
    config.validate();
    return config;
}

catalog::ReportFormat report_format(const std::string& name) {
    if (name == "text") return catalog::ReportFormat::Text;
    if (name == "json") return catalog::ReportFormat::Json;
    if (name == "csv") return catalog::ReportFormat::Csv;
    throw Error(ErrorKind::Validation,
                "unknown format '" + name + "' (expected text, json or csv)");
}

dread::DreadScores parse_scores(const std::string& text) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string part =
            text.substr(pos, comma == std::string::npos ? std::string::npos
                                                        : comma - pos);
        try {
            std::size_t used = 0;
            values.push_back(std::stod(part, &used));
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw Error(ErrorKind::Validation,
                        "'" + part + "' is not a number in --scores");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (values.size() != 5) {
        throw Error(ErrorKind::Validation,
                    "--scores takes five comma-separated values "
                    "(damage,reproducibility,exploitability,users,"
                    "discoverability)");
    }
    return {values[0], values[1], values[2], values[3], values[4]};
}

catalog::ReportMeta make_meta(const GlobalOptions& opts,
                              const LoadedRulebase& loaded,
                              const fuzzy::InferenceConfig& config) {
    catalog::ReportMeta meta;
    meta.rulebase_path = loaded.path_label;
    meta.rulebase_sha256 = loaded.sha256;
    meta.config = config;
    if (!opts.no_timestamp) meta.timestamp = text::iso8601_utc_now();
    return meta;
}

nlohmann::json scores_json(const dread::DreadScores& s) {
    return {{"damage_potential", s.damage_potential},
            {"reproducibility", s.reproducibility},
            {"exploitability", s.exploitability},
            {"affected_users", s.affected_users},
            {"discoverability", s.discoverability}};
}

nlohmann::json meta_json(const catalog::ReportMeta& meta) {
    nlohmann::json out;
    out["rulebase"] = {{"path", meta.rulebase_path},
                       {"sha256", meta.rulebase_sha256}};
    out["config"] = {{"defuzz", std::string(fuzzy::to_string(meta.config.defuzz))},
                     {"resolution", meta.config.resolution}};
    out["timestamp"] = meta.timestamp.has_value() ? nlohmann::json(*meta.timestamp)
                                                  : nlohmann::json(nullptr);
    return out;
}

int run_assess(const GlobalOptions& opts, const std::string& catalog_path,
               const std::string& scores_text, const std::string& out_path) {
    if (catalog_path.empty() == scores_text.empty()) {
        throw Error(ErrorKind::Validation,
                    "assess needs exactly one of --catalog or --scores");
    }
    const LoadedRulebase loaded = load_rulebase(opts);
    const fuzzy::InferenceConfig config = effective_config(opts, loaded);
    const catalog::ReportFormat format = report_format(opts.format);
    const catalog::ReportMeta meta = make_meta(opts, loaded, config);

    if (!catalog_path.empty()) {
        const std::vector<catalog::ThreatRecord> records =
            catalog::load_catalog(catalog_path);
        const catalog::RankedReport report = catalog::rank(
            catalog::assess_catalog(records, loaded.rulebase, config), meta);
        write_output(out_path, catalog::emit_report(report, format));
        return 0;
    }

    const dread::DreadScores scores = parse_scores(scores_text);
    const dread::Assessment a = dread::assess(scores, loaded.rulebase, config);
    const catalog::Action action = catalog::action_hint(a.fuzzy_value);

    std::string out;
    switch (format) {
        case catalog::ReportFormat::Text: {
            out += "total: " + text::to_minimal_string(a.conventional.total) + "\n";
            out += "average: " + text::format_fixed2(a.conventional.average) + "\n";
            out += "rating: " + std::string(dread::to_string(a.conventional.rating)) +
                   "\n";
            out += "fuzzy_value: " + text::format_fixed2(a.fuzzy_value) + "\n";
            out += "fuzzy_band: " + a.fuzzy_band.name + " (" +
                   std::to_string(a.fuzzy_band.index) + " of 7)\n";
            out += "action: " + std::string(catalog::to_string(action)) + "\n";
            break;
        }
        case catalog::ReportFormat::Json: {
            nlohmann::json doc = meta_json(meta);
            doc["scores"] = scores_json(scores);
            doc["total"] = a.conventional.total;
            doc["average"] = a.conventional.average;
            doc["rating"] = std::string(dread::to_string(a.conventional.rating));
            doc["fuzzy_value"] = a.fuzzy_value;
            doc["fuzzy_band"] = {{"index", a.fuzzy_band.index},
                                 {"name", a.fuzzy_band.name}};
            nlohmann::json fired = nlohmann::json::array();
            for (const fuzzy::FiredRule& f : a.fired) {
                fired.push_back(
                    {{"rule", f.rule_index}, {"activation", f.activation}});
            }
            doc["fired"] = std::move(fired);
            doc["action"] = std::string(catalog::to_string(action));
            out = doc.dump(2) + "\n";
            break;
        }
        case catalog::ReportFormat::Csv: {
            out = "total,average,rating,fuzzy_value,fuzzy_band,action\n";
            out += text::to_minimal_string(a.conventional.total) + "," +
                   text::format_fixed2(a.conventional.average) + "," +
                   std::string(dread::to_string(a.conventional.rating)) + "," +
                   text::format_fixed2(a.fuzzy_value) + "," +
                   a.fuzzy_band.name + "," +
                   std::string(catalog::to_string(action)) + "\n";
            break;
        }
    }
    write_output(out_path, out);
    return 0;
}

int run_explain(const GlobalOptions& opts, const std::string& scores_text) {
    const LoadedRulebase loaded = load_rulebase(opts);
    const fuzzy::InferenceConfig config = effective_config(opts, loaded);
    const dread::DreadScores scores = parse_scores(scores_text);
    const dread::ConventionalResult conv = dread::conventional_score(scores);

    std::map<std::string, double> crisp;
    const std::vector<fuzzy::LinguisticVariable>& inputs =
        loaded.rulebase.inputs();
    {
        const auto values = scores.as_array();
        crisp[std::string(dread::kDamagePotential)] = values[0];
        crisp[std::string(dread::kReproducibility)] = values[1];
        crisp[std::string(dread::kExploitability)] = values[2];
        crisp[std::string(dread::kAffectedUsers)] = values[3];
        crisp[std::string(dread::kDiscoverability)] = values[4];
    }
    const fuzzy::InferenceResult inference =
        fuzzy::infer(loaded.rulebase, config, crisp);
    const dread::FuzzyBand band =
        dread::label_band(loaded.rulebase.output(), inference.crisp);
    const catalog::Action action = catalog::action_hint(inference.crisp);

    const bool json_format = opts.format == "json";
    if (!json_format && opts.format != "text") {
        throw Error(ErrorKind::Validation,
                    "explain supports only the text and json formats");
    }

    if (json_format) {
        nlohmann::json doc = meta_json(
            make_meta(opts, loaded, config));
        doc["scores"] = scores_json(scores);
        doc["total"] = conv.total;
        doc["average"] = conv.average;
        doc["rating"] = std::string(dread::to_string(conv.rating));
        nlohmann::json fuzzified = nlohmann::json::array();
        for (const fuzzy::LinguisticVariable& v : inputs) {
            const fuzzy::FuzzifiedInput fi = fuzzy::fuzzify(v, crisp.at(v.name()));
            nlohmann::json degrees = nlohmann::json::object();
            for (const auto& [term, degree] : fi.degrees) {
                if (degree > 0.0) degrees[term] = degree;
            }
            fuzzified.push_back({{"variable", v.name()},
                                 {"value", crisp.at(v.name())},
                                 {"degrees", std::move(degrees)}});
        }
        doc["fuzzified"] = std::move(fuzzified);
        nlohmann::json fired = nlohmann::json::array();
        for (const fuzzy::FiredRule& f : inference.fired) {
            fired.push_back(
                {{"rule", f.rule_index},
                 {"text", dsl::serialize_rule(loaded.rulebase.rules()[f.rule_index])},
                 {"activation", f.activation}});
        }
        doc["fired"] = std::move(fired);
        doc["fuzzy_value"] = inference.crisp;
        doc["fuzzy_band"] = {{"index", band.index}, {"name", band.name}};
        doc["action"] = std::string(catalog::to_string(action));
        std::cout << doc.dump(2) << "\n";
        return 0;
    }

    std::cout << "rulebase: " << loaded.path_label << "\n";
    std::cout << "sha256: " << loaded.sha256 << "\n";
    std::cout << "defuzz: " << fuzzy::to_string(config.defuzz)
              << "  resolution: " << config.resolution << "\n\n";
    std::cout << "total: " << text::to_minimal_string(conv.total)
              << "  average: " << text::format_fixed2(conv.average)
              << "  rating: " << dread::to_string(conv.rating) << "\n\n";
    for (const fuzzy::LinguisticVariable& v : inputs) {
        const fuzzy::FuzzifiedInput fi = fuzzy::fuzzify(v, crisp.at(v.name()));
        std::cout << v.name() << " = "
                  << text::to_minimal_string(crisp.at(v.name())) << "\n";
        bool any = false;
        for (const auto& [term, degree] : fi.degrees) {
            if (degree > 0.0) {
                std::cout << "  " << term << ": "
                          << text::to_minimal_string(degree) << "\n";
                any = true;
            }
        }
        if (!any) std::cout << "  (no term activated)\n";
    }
    std::cout << "\nfired rules:\n";
    for (const fuzzy::FiredRule& f : inference.fired) {
        std::cout << "  [" << f.rule_index << "] "
                  << dsl::serialize_rule(loaded.rulebase.rules()[f.rule_index])
                  << "  (activation "
                  << text::to_minimal_string(f.activation) << ")\n";
    }
    std::cout << "\nfuzzy_value: " << text::format_fixed2(inference.crisp)
              << "  band: " << band.name << " (" << band.index << " of "
              << loaded.rulebase.output().terms().size() << ")\n";
    std::cout << "action: " << catalog::to_string(action) << "\n";
    return 0;
}

int run_validate(const GlobalOptions& opts) {
    int errors = 0;
    int warnings = 0;
    const auto count = [&](const std::vector<dsl::Diagnostic>& diags,
                           const std::string& path) {
        for (const dsl::Diagnostic& d : diags) {
            print_diagnostic(path, d);
            (d.severity == dsl::Severity::Error ? errors : warnings) += 1;
        }
    };

    if (opts.rulebase_path.empty()) {
        const fuzzy::RuleBase rb = dread::default_rulebase();
        count(dsl::validate(rb, nullptr), kEmbeddedLabel);
    } else {
        const std::string content = read_file(opts.rulebase_path);
        dsl::ParseResult parsed = dsl::parse_rulebase(content);
        count(parsed.diagnostics, opts.rulebase_path);
        if (parsed.ok()) {
            count(dsl::validate(*parsed.rulebase, &parsed.source_map),
                  opts.rulebase_path);
        }
    }
    std::cerr << errors << " error" << (errors == 1 ? "" : "s") << ", "
              << warnings << " warning" << (warnings == 1 ? "" : "s") << "\n";
    return errors > 0 ? 1 : 0;
}

int run_gen_rules(const std::string& out_path, bool curated,
                  bool variables_only) {
    if (curated && variables_only) {
        throw Error(ErrorKind::Validation,
                    "--curated and --variables-only are mutually exclusive");
    }
    if (curated) {
        write_output(out_path, dsl::serialize_rulebase(dread::default_rulebase()));
    } else if (variables_only) {
        write_output(out_path,
                     dsl::serialize_rulebase(dread::variables_only_rulebase()));
    } else {
        const dread::Variables vars = dread::dread_variables();
        const fuzzy::RuleBase generated(vars.inputs, vars.output,
                                        dread::generate_rules());
        write_output(out_path, dsl::serialize_rulebase(generated));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    GlobalOptions opts;
    CLI::App app{"threat prioritization with conventional and fuzzy DREAD"};
    app.require_subcommand(1);
    app.fallthrough();

    opts.rulebase_opt =
        app.add_option("--rulebase", opts.rulebase_path,
                       "rulebase file (.frb), embedded default when omitted")
            ->envname("DREADFUZZ_RULEBASE");
    opts.defuzz_opt = app.add_option(
        "--defuzz", opts.defuzz, "defuzzification method: coa|boa|mom|som|lom");
    opts.resolution_opt = app.add_option(
        "--resolution", opts.resolution, "output grid resolution (minimum 101)");
    app.add_option("--format", opts.format, "output format: text|json|csv")
        ->capture_default_str();
    app.add_flag("--no-timestamp", opts.no_timestamp,
                 "omit the timestamp from reports");

    std::string catalog_path;
    std::string scores_text;
    std::string assess_out;
    CLI::App* assess =
        app.add_subcommand("assess", "score one threat or a whole catalog");
    assess->add_option("--catalog", catalog_path, "threat catalog (.csv or .json)");
    assess->add_option("--scores", scores_text,
                       "five comma-separated scores, e.g. 9,6,8,9,6");
    assess->add_option("--out", assess_out, "write to a file instead of stdout");

    std::string explain_scores;
    CLI::App* explain = app.add_subcommand(
        "explain", "show fuzzification, fired rules and defuzzification");
    explain->add_option("--scores", explain_scores,
                        "five comma-separated scores, e.g. 9,6,8,9,6")
        ->required();

    CLI::App* validate =
        app.add_subcommand("validate", "check a rulebase and report diagnostics");

    std::string gen_out;
    bool gen_curated = false;
    bool gen_variables_only = false;
    CLI::App* gen_rules = app.add_subcommand(
        "gen-rules", "emit the generated baseline rulebase as text");
    gen_rules->add_option("--out", gen_out, "write to a file instead of stdout");
    gen_rules->add_flag("--curated", gen_curated,
                        "emit the curated default rulebase the tool embeds");
    gen_rules->add_flag("--variables-only", gen_variables_only,
                        "emit only the variable declarations, no rules");

    try {
        app.parse(argc, argv);
        if (assess->parsed()) return run_assess(opts, catalog_path, scores_text, assess_out);
        if (explain->parsed()) return run_explain(opts, explain_scores);
        if (validate->parsed()) return run_validate(opts);
        if (gen_rules->parsed()) {
            return run_gen_rules(gen_out, gen_curated, gen_variables_only);
        }
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const dreadfuzz::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == ErrorKind::Io ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
