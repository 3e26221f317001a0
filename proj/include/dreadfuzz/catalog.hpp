#pragma once

// Threat catalogs and ranked reports. A catalog is a list of threats
// with DREAD scores (CSV or JSON on disk); a report assesses each
// threat, orders them by fuzzy risk and attaches a handling action.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dreadfuzz/dread.hpp"
#include "dreadfuzz/fuzzy.hpp"

namespace dreadfuzz::catalog {

struct ThreatRecord {
    std::string id;           // unique within a catalog, never empty
    std::string title;
    dread::DreadScores scores;
    std::string stride_tag;   // optional, empty when absent
    std::string description;  // optional, empty when absent
};

enum class CatalogFormat {
    Csv,
    Json,
};

// CSV columns: id,title,damage_potential,reproducibility,exploitability,
// affected_users,discoverability[,stride_tag[,description]] with a
// header row; RFC 4180 quoting. JSON: array of objects with the same
// field names.
std::vector<ThreatRecord> parse_catalog_csv(std::string_view text);
std::vector<ThreatRecord> parse_catalog_json(std::string_view text);
std::string serialize_catalog_csv(const std::vector<ThreatRecord>& records);

// Reads a file; format deduced from the extension (.csv / .json) unless
// given. Throws Error{Io} on read failure, Error{Parse}/{Validation} on
// bad content.
std::vector<ThreatRecord> load_catalog(const std::string& path,
                                       std::optional<CatalogFormat> format = {});

enum class Action {
    Accept,
    Transfer,
    Remove,
    Mitigate,
};

std::string_view to_string(Action action);
Action action_from_string(std::string_view name);

// Maps fuzzy risk values to actions: cuts split [0, 50] into
// cuts.size() + 1 bands, actions[i] handles the i-th band, a value
// equal to a cut falls upward.
struct ActionPolicy {
    std::vector<double> cuts;     // strictly increasing
    std::vector<Action> actions;  // cuts.size() + 1, lowest band first

    static ActionPolicy default_policy();

    void validate() const;
    Action classify(double value) const;
};

// Default-policy convenience.
Action action_hint(double fuzzy_value);

struct Assessment {
    std::string id;
    std::string title;
    dread::DreadScores scores;
    dread::ConventionalResult conventional;
    double fuzzy_value;
    dread::FuzzyBand fuzzy_band;
    std::vector<fuzzy::FiredRule> fired;
    Action action;
};

// Assesses every record against one rulebase. Per-record failures
// (out-of-range scores) propagate with the threat id prefixed.
std::vector<Assessment> assess_catalog(
    const std::vector<ThreatRecord>& records, const fuzzy::RuleBase& rulebase,
    const fuzzy::InferenceConfig& config,
    const ActionPolicy& policy = ActionPolicy::default_policy());

struct ReportMeta {
    std::string rulebase_path;     // file path or "<embedded:dread.frb>"
    std::string rulebase_sha256;   // hash of the canonical serialization
    fuzzy::InferenceConfig config;
    std::optional<std::string> timestamp;  // absent when suppressed
};

struct RankedReport {
    ReportMeta meta;
    std::vector<Assessment> threats;  // rank order, highest risk first
};

// Sorts by fuzzy value descending, conventional total descending, id
// ascending. Throws Error{Validation} on an empty list.
RankedReport rank(std::vector<Assessment> assessments, ReportMeta meta);

enum class ReportFormat {
    Text,
    Json,
    Csv,
};

// Text: metadata header plus aligned table. Json: lossless, see
// report_from_json. Csv: id,total,average,rating,fuzzy_value,
// fuzzy_band,action.
std::string emit_report(const RankedReport& report, ReportFormat format);

// Inverse of emit_report(Json). Throws Error{Parse} on malformed input.
RankedReport report_from_json(std::string_view text);

}  // namespace dreadfuzz::catalog
