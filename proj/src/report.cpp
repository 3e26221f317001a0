#include <algorithm>
#include <cstddef>
#include <iterator>
#include <string>
#include <vector>

#include <json.hpp>

#include "csv_util.hpp"
#include "dreadfuzz/catalog.hpp"
#include "dreadfuzz/errors.hpp"
#include "dreadfuzz/text.hpp"

namespace dreadfuzz::catalog {
namespace {

using nlohmann::json;

dread::Rating rating_from_string(std::string_view name) {
    if (name == "Low") return dread::Rating::Low;
    if (name == "Medium") return dread::Rating::Medium;
    if (name == "High") return dread::Rating::High;
    throw Error(ErrorKind::Parse, "unknown rating '" + std::string(name) + "'");
}

std::string emit_text(const RankedReport& report) {
    std::string out = "threat risk report\n";
    out += "rulebase: " + report.meta.rulebase_path + "\n";
    out += "sha256: " + report.meta.rulebase_sha256 + "\n";
    out += "defuzz: " + std::string(fuzzy::to_string(report.meta.config.defuzz)) +
           "  resolution: " + std::to_string(report.meta.config.resolution) +
           "\n";
    if (report.meta.timestamp.has_value()) {
        out += "generated: " + *report.meta.timestamp + "\n";
    }
    out += "\n";

    static constexpr const char* kHeader[] = {
        "rank", "id", "title", "dp", "re", "ex", "au", "di",
        "total", "avg", "rating", "fuzzy", "band", "fired", "action",
    };
    constexpr std::size_t kColumns = std::size(kHeader);

    std::vector<std::vector<std::string>> cells;
    cells.reserve(report.threats.size());
    for (std::size_t i = 0; i < report.threats.size(); ++i) {
        const Assessment& t = report.threats[i];
        std::vector<std::string> row;
        row.reserve(kColumns);
        row.push_back(std::to_string(i + 1));
        row.push_back(t.id);
        row.push_back(t.title);
        for (double v : t.scores.as_array()) {
            row.push_back(text::to_minimal_string(v));
        }
        row.push_back(text::to_minimal_string(t.conventional.total));
        row.push_back(text::format_fixed2(t.conventional.average));
        row.push_back(std::string(dread::to_string(t.conventional.rating)));
        row.push_back(text::format_fixed2(t.fuzzy_value));
        row.push_back(t.fuzzy_band.name);
        row.push_back(std::to_string(t.fired.size()));
        row.push_back(std::string(to_string(t.action)));
        cells.push_back(std::move(row));
    }

    std::size_t width[kColumns];
    for (std::size_t c = 0; c < kColumns; ++c) {
        width[c] = std::string_view(kHeader[c]).size();
        for (const auto& row : cells) {
            width[c] = std::max(width[c], row[c].size());
        }
    }
    const auto append_row = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < kColumns; ++c) {
            out += row[c];
            if (c + 1 < kColumns) {
                out.append(width[c] - row[c].size() + 2, ' ');
            }
        }
        out += '\n';
    };
    append_row({kHeader, kHeader + kColumns});
    for (const auto& row : cells) append_row(row);
    return out;
}

json scores_to_json(const dread::DreadScores& scores) {
    return json{{"damage_potential", scores.damage_potential},
                {"reproducibility", scores.reproducibility},
                {"exploitability", scores.exploitability},
                {"affected_users", scores.affected_users},
                {"discoverability", scores.discoverability}};
}

std::string emit_json(const RankedReport& report) {
    json doc;
    doc["rulebase"] = {{"path", report.meta.rulebase_path},
                       {"sha256", report.meta.rulebase_sha256}};
    doc["config"] = {
        {"defuzz", std::string(fuzzy::to_string(report.meta.config.defuzz))},
        {"resolution", report.meta.config.resolution}};
    doc["timestamp"] = report.meta.timestamp.has_value()
                           ? json(*report.meta.timestamp)
                           : json(nullptr);

    json threats = json::array();
    for (std::size_t i = 0; i < report.threats.size(); ++i) {
        const Assessment& t = report.threats[i];
        json fired = json::array();
        for (const fuzzy::FiredRule& f : t.fired) {
            fired.push_back({{"rule", f.rule_index}, {"activation", f.activation}});
        }
        threats.push_back(
            {{"rank", i + 1},
             {"id", t.id},
             {"title", t.title},
             {"scores", scores_to_json(t.scores)},
             {"total", t.conventional.total},
             {"average", t.conventional.average},
             {"rating", std::string(dread::to_string(t.conventional.rating))},
             {"fuzzy_value", t.fuzzy_value},
             {"fuzzy_band",
              {{"index", t.fuzzy_band.index}, {"name", t.fuzzy_band.name}}},
             {"fired", std::move(fired)},
             {"action", std::string(to_string(t.action))}});
    }
    doc["threats"] = std::move(threats);
    return doc.dump(2) + "\n";
}

std::string emit_csv(const RankedReport& report) {
    std::string out = "id,total,average,rating,fuzzy_value,fuzzy_band,action\n";
    for (const Assessment& t : report.threats) {
        out += csv::quote(t.id);
        out += ',';
        out += text::to_minimal_string(t.conventional.total);
        out += ',';
        out += text::format_fixed2(t.conventional.average);
        out += ',';
        out += dread::to_string(t.conventional.rating);
        out += ',';
        out += text::format_fixed2(t.fuzzy_value);
        out += ',';
        out += csv::quote(t.fuzzy_band.name);
        out += ',';
        out += to_string(t.action);
        out += '\n';
    }
    return out;
}

}  // namespace

RankedReport rank(std::vector<Assessment> assessments, ReportMeta meta) {
    if (assessments.empty()) {
        throw Error(ErrorKind::Validation, "nothing to rank, the catalog is empty");
    }
    std::sort(assessments.begin(), assessments.end(),
              [](const Assessment& a, const Assessment& b) {
                  if (a.fuzzy_value != b.fuzzy_value) {
                      return a.fuzzy_value > b.fuzzy_value;
                  }
                  if (a.conventional.total != b.conventional.total) {
                      return a.conventional.total > b.conventional.total;
                  }
                  return a.id < b.id;
              });
    return {std::move(meta), std::move(assessments)};
}

std::string emit_report(const RankedReport& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::Text: return emit_text(report);
        case ReportFormat::Json: return emit_json(report);
        case ReportFormat::Csv: return emit_csv(report);
    }
    throw Error(ErrorKind::Validation, "unknown report format");
}

RankedReport report_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Parse, e.what());
    }

    RankedReport report;
    try {
        report.meta.rulebase_path = doc.at("rulebase").at("path").get<std::string>();
        report.meta.rulebase_sha256 =
            doc.at("rulebase").at("sha256").get<std::string>();
        report.meta.config.defuzz = fuzzy::defuzz_method_from_string(
            doc.at("config").at("defuzz").get<std::string>());
        report.meta.config.resolution = doc.at("config").at("resolution").get<int>();
        if (!doc.at("timestamp").is_null()) {
            report.meta.timestamp = doc.at("timestamp").get<std::string>();
        }
        for (const json& item : doc.at("threats")) {
            Assessment t;
            t.id = item.at("id").get<std::string>();
            t.title = item.at("title").get<std::string>();
            const json& scores = item.at("scores");
            t.scores.damage_potential = scores.at("damage_potential").get<double>();
            t.scores.reproducibility = scores.at("reproducibility").get<double>();
            t.scores.exploitability = scores.at("exploitability").get<double>();
            t.scores.affected_users = scores.at("affected_users").get<double>();
            t.scores.discoverability = scores.at("discoverability").get<double>();
            t.conventional.total = item.at("total").get<double>();
            t.conventional.average = item.at("average").get<double>();
            t.conventional.rating =
                rating_from_string(item.at("rating").get<std::string>());
            t.fuzzy_value = item.at("fuzzy_value").get<double>();
            t.fuzzy_band.index = item.at("fuzzy_band").at("index").get<int>();
            t.fuzzy_band.name = item.at("fuzzy_band").at("name").get<std::string>();
            for (const json& f : item.at("fired")) {
                t.fired.push_back({f.at("rule").get<std::size_t>(),
                                   f.at("activation").get<double>()});
            }
            t.action = action_from_string(item.at("action").get<std::string>());
            report.threats.push_back(std::move(t));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Parse, e.what());
    } catch (const Error& e) {
        throw Error(ErrorKind::Parse, e.what());
    }
    return report;
}

}  // namespace dreadfuzz::catalog
