#include "dreadfuzz/catalog.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "csv_util.hpp"
#include "dreadfuzz/errors.hpp"
#include "dreadfuzz/text.hpp"

namespace dreadfuzz::catalog {
namespace {

constexpr const char* kScoreColumns[] = {
    "damage_potential", "reproducibility", "exploitability",
    "affected_users", "discoverability",
};

double parse_score(const std::string& field, const char* column, int line) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr != end || !std::isfinite(value)) {
        throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": '" +
                                          field + "' is not a number for " +
                                          column);
    }
    return value;
}

void assign_score(dread::DreadScores& scores, std::size_t index, double value) {
    switch (index) {
        case 0: scores.damage_potential = value; break;
        case 1: scores.reproducibility = value; break;
        case 2: scores.exploitability = value; break;
        case 3: scores.affected_users = value; break;
        case 4: scores.discoverability = value; break;
    }
}

// Shared by the CSV and JSON readers: ids must be present, unique and
// the scores in range.
void check_records(const std::vector<ThreatRecord>& records) {
    std::set<std::string_view> ids;
    for (const ThreatRecord& r : records) {
        if (r.id.empty()) {
            throw Error(ErrorKind::Validation,
                        "catalog contains a threat with an empty id");
        }
        if (!ids.insert(r.id).second) {
            throw Error(ErrorKind::Validation,
                        "catalog lists threat '" + r.id + "' twice");
        }
        try {
            r.scores.validate();
        } catch (const Error& e) {
            throw Error(e.kind(), "threat '" + r.id + "': " + e.what());
        }
    }
}

}  // namespace

std::vector<ThreatRecord> parse_catalog_csv(std::string_view text) {
    if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

    std::vector<csv::Row> rows;
    int bad_line = 0;
    if (!csv::split(text, rows, bad_line)) {
        throw Error(ErrorKind::Parse, "line " + std::to_string(bad_line) +
                                          ": unterminated quoted field");
    }
    if (rows.empty()) {
        throw Error(ErrorKind::Parse, "catalog is empty, expected a header row");
    }

    const std::vector<std::string>& header = rows[0].fields;
    std::vector<std::string> expected = {
        "id",           "title",       "damage_potential",
        "reproducibility", "exploitability", "affected_users",
        "discoverability", "stride_tag", "description"};
    if (header.size() >= 7 && header.size() < expected.size()) {
        expected.resize(header.size());
    }
    if (header != expected) {
        throw Error(ErrorKind::Parse,
                    "unexpected CSV header, want id,title,damage_potential,"
                    "reproducibility,exploitability,affected_users,"
                    "discoverability[,stride_tag[,description]]");
    }

    std::vector<ThreatRecord> records;
    records.reserve(rows.size());
    for (std::size_t ri = 1; ri < rows.size(); ++ri) {
        const csv::Row& row = rows[ri];
        if (row.fields.size() != header.size()) {
            throw Error(ErrorKind::Parse,
                        "line " + std::to_string(row.line) + ": expected " +
                            std::to_string(header.size()) + " fields, found " +
                            std::to_string(row.fields.size()));
        }
        ThreatRecord record;
        record.id = row.fields[0];
        record.title = row.fields[1];
        for (std::size_t s = 0; s < 5; ++s) {
            assign_score(record.scores, s,
                         parse_score(row.fields[2 + s], kScoreColumns[s],
                                     row.line));
        }
        if (row.fields.size() >= 8) record.stride_tag = row.fields[7];
        if (row.fields.size() >= 9) record.description = row.fields[8];
        records.push_back(std::move(record));
    }
    check_records(records);
    return records;
}

std::vector<ThreatRecord> parse_catalog_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, e.what());
    }
    if (!doc.is_array()) {
        throw Error(ErrorKind::Parse, "catalog JSON must be an array of threats");
    }

    std::vector<ThreatRecord> records;
    records.reserve(doc.size());
    try {
        for (const nlohmann::json& item : doc) {
            ThreatRecord record;
            record.id = item.at("id").get<std::string>();
            record.title = item.at("title").get<std::string>();
            for (std::size_t s = 0; s < 5; ++s) {
                assign_score(record.scores, s,
                             item.at(kScoreColumns[s]).get<double>());
            }
            record.stride_tag = item.value("stride_tag", std::string());
            record.description = item.value("description", std::string());
            records.push_back(std::move(record));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, e.what());
    }
    check_records(records);
    return records;
}

std::string serialize_catalog_csv(const std::vector<ThreatRecord>& records) {
    std::string out =
        "id,title,damage_potential,reproducibility,exploitability,"
        "affected_users,discoverability,stride_tag,description\n";
    for (const ThreatRecord& r : records) {
        out += csv::quote(r.id);
        out += ',';
        out += csv::quote(r.title);
        for (double v : r.scores.as_array()) {
            out += ',';
            out += text::to_minimal_string(v);
        }
        out += ',';
        out += csv::quote(r.stride_tag);
        out += ',';
        out += csv::quote(r.description);
        out += '\n';
    }
    return out;
}

std::vector<ThreatRecord> load_catalog(const std::string& path,
                                       std::optional<CatalogFormat> format) {
    CatalogFormat effective;
    if (format.has_value()) {
        effective = *format;
    } else {
        const std::size_t dot = path.rfind('.');
        const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
        if (ext == ".csv") {
            effective = CatalogFormat::Csv;
        } else if (ext == ".json") {
            effective = CatalogFormat::Json;
        } else {
            throw Error(ErrorKind::Validation,
                        "cannot deduce catalog format from '" + path +
                            "', expected a .csv or .json file");
        }
    }

    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open catalog '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw Error(ErrorKind::Io, "cannot read catalog '" + path + "'");
    }
    const std::string content = buffer.str();
    return effective == CatalogFormat::Csv ? parse_catalog_csv(content)
                                           : parse_catalog_json(content);
}

std::string_view to_string(Action action) {
    switch (action) {
        case Action::Accept: return "accept";
        case Action::Transfer: return "transfer";
        case Action::Remove: return "remove";
        case Action::Mitigate: return "mitigate";
    }
    return "?";
}

Action action_from_string(std::string_view name) {
    if (name == "accept") return Action::Accept;
    if (name == "transfer") return Action::Transfer;
    if (name == "remove") return Action::Remove;
    if (name == "mitigate") return Action::Mitigate;
    throw Error(ErrorKind::Parse, "unknown action '" + std::string(name) + "'");
}

ActionPolicy ActionPolicy::default_policy() {
    return {{14.0, 28.0, 35.0},
            {Action::Accept, Action::Transfer, Action::Remove, Action::Mitigate}};
}

void ActionPolicy::validate() const {
    if (actions.size() != cuts.size() + 1) {
        throw Error(ErrorKind::Validation,
                    "action policy needs exactly one action more than cuts");
    }
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        if (!std::isfinite(cuts[i]) || (i > 0 && cuts[i - 1] >= cuts[i])) {
            throw Error(ErrorKind::Validation,
                        "action policy cuts must be finite and strictly "
                        "increasing");
        }
    }
}

Action ActionPolicy::classify(double value) const {
    std::size_t index = 0;
    for (double cut : cuts) {
        if (value >= cut) ++index;
    }
    return actions[index];
}

Action action_hint(double fuzzy_value) {
    return ActionPolicy::default_policy().classify(fuzzy_value);
}

std::vector<Assessment> assess_catalog(const std::vector<ThreatRecord>& records,
                                       const fuzzy::RuleBase& rulebase,
                                       const fuzzy::InferenceConfig& config,
                                       const ActionPolicy& policy) {
    policy.validate();
    std::vector<Assessment> out;
    out.reserve(records.size());
    for (const ThreatRecord& record : records) {
        try {
            dread::Assessment a = dread::assess(record.scores, rulebase, config);
            out.push_back({record.id, record.title, record.scores,
                           a.conventional, a.fuzzy_value, std::move(a.fuzzy_band),
                           std::move(a.fired), policy.classify(a.fuzzy_value)});
        } catch (const Error& e) {
            throw Error(e.kind(), "threat '" + record.id + "': " + e.what());
        }
    }
    return out;
}

}  // namespace dreadfuzz::catalog
