#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include <dreadfuzz/catalog.hpp>
#include <dreadfuzz/dread.hpp>
#include <dreadfuzz/errors.hpp>
#include <dreadfuzz/hash.hpp>

#include "helpers.hpp"

using dreadfuzz::ErrorKind;
namespace catalog = dreadfuzz::catalog;
using catalog::Action;
using catalog::ActionPolicy;
using catalog::ThreatRecord;

namespace {

const std::string kDataDir = DREADFUZZ_DATA_DIR;

std::vector<catalog::Assessment> assess_gwis() {
    const auto records = catalog::load_catalog(kDataDir + "/gwis.csv");
    const auto rb = dreadfuzz::dread::default_rulebase();
    return catalog::assess_catalog(records, rb, {});
}

catalog::ReportMeta sample_meta() {
    catalog::ReportMeta meta;
    meta.rulebase_path = "<embedded:dread.frb>";
    meta.rulebase_sha256 = "0123abcd";
    meta.timestamp = "2026-08-22T10:00:00Z";
    return meta;
}

// The nine catalog ids in their expected rank order.
const std::vector<std::string> kRankedIds = {
    "blind-sql-injection",
    "login-page-sql-injection",
    "unencrypted-login-request",
    "application-error",
    "inadequate-account-lockout",
    "permanent-cookie-session-info",
    "session-information-not-updated",
    "unencrypted-password-parameter",
    "unencrypted-viewstate-parameter",
};

// Writes content to a fresh temp file and returns its path.
std::string temp_file(const std::string& name, const std::string& content) {
    const auto path =
        (std::filesystem::temp_directory_path() / name).string();
    FILE* f = std::fopen(path.c_str(), "wb");
    REQUIRE(f != nullptr);
    REQUIRE(std::fwrite(content.data(), 1, content.size(), f) == content.size());
    std::fclose(f);
    return path;
}

}  // namespace

TEST_SUITE("catalog") {

TEST_CASE("CSV parsing accepts 7, 8 and 9 column layouts") {
    const char* seven =
        "id,title,damage_potential,reproducibility,exploitability,"
        "affected_users,discoverability\n"
        "t1,First,1,2,3,4,5\n";
    auto records = catalog::parse_catalog_csv(seven);
    REQUIRE(records.size() == 1);
    CHECK(records[0].id == "t1");
    CHECK(records[0].scores.exploitability == 3.0);
    CHECK(records[0].stride_tag.empty());
    CHECK(records[0].description.empty());

    const char* eight =
        "id,title,damage_potential,reproducibility,exploitability,"
        "affected_users,discoverability,stride_tag\n"
        "t1,First,1,2,3,4,5,spoofing\n";
    records = catalog::parse_catalog_csv(eight);
    REQUIRE(records.size() == 1);
    CHECK(records[0].stride_tag == "spoofing");

    const char* nine =
        "id,title,damage_potential,reproducibility,exploitability,"
        "affected_users,discoverability,stride_tag,description\n"
        "t1,First,1,2,3,4,5,tampering,Something bad\n"
        "t2,Second,5,4,3,2,1,,\n";
    records = catalog::parse_catalog_csv(nine);
    REQUIRE(records.size() == 2);
    CHECK(records[0].description == "Something bad");
    CHECK(records[1].stride_tag.empty());
}

TEST_CASE("CSV quoting, CRLF and BOM are handled") {
    const std::string text =
        "\xEF\xBB\xBFid,title,damage_potential,reproducibility,exploitability,"
        "affected_users,discoverability,stride_tag,description\r\n"
        "t1,\"Comma, included\",1,2,3,4,5,,\"He said \"\"boom\"\"\"\r\n"
        "t2,\"Two\nlines\",5,4,3,2,1,,\r\n";
    const auto records = catalog::parse_catalog_csv(text);
    REQUIRE(records.size() == 2);
    CHECK(records[0].title == "Comma, included");
    CHECK(records[0].description == "He said \"boom\"");
    CHECK(records[1].title == "Two\nlines");
}

TEST_CASE("CSV parse failures carry line numbers") {
    CHECK_ERROR(catalog::parse_catalog_csv(""), ErrorKind::Parse, "empty");
    CHECK_ERROR(catalog::parse_catalog_csv("id,name\nx,y\n"), ErrorKind::Parse,
                "header");
    const char* short_row =
        "id,title,damage_potential,reproducibility,exploitability,"
        "affected_users,discoverability\n"
        "t1,First,1,2,3\n";
    CHECK_ERROR(catalog::parse_catalog_csv(short_row), ErrorKind::Parse, "line 2");
    const char* bad_score =
        "id,title,damage_potential,reproducibility,exploitability,"
        "affected_users,discoverability\n"
        "t1,First,1,2,x,4,5\n";
    CHECK_ERROR(catalog::parse_catalog_csv(bad_score), ErrorKind::Parse, "line 2");
    const char* open_quote =
        "id,title,damage_potential,reproducibility,exploitability,"
        "affected_users,discoverability\n"
        "t1,\"First,1,2,3,4,5\n";
    CHECK_ERROR(catalog::parse_catalog_csv(open_quote), ErrorKind::Parse, "quote");
}

TEST_CASE("record validation applies to every source format") {
    const char* range =
        "id,title,damage_potential,reproducibility,exploitability,"
        "affected_users,discoverability\n"
        "t1,First,1,2,11,4,5\n";
    CHECK_ERROR(catalog::parse_catalog_csv(range), ErrorKind::Range,
                "threat 't1'");
    const char* dup =
        "id,title,damage_potential,reproducibility,exploitability,"
        "affected_users,discoverability\n"
        "t1,First,1,2,3,4,5\nt1,Again,1,2,3,4,5\n";
    CHECK_ERROR(catalog::parse_catalog_csv(dup), ErrorKind::Validation, "t1");
    const char* anon =
        "id,title,damage_potential,reproducibility,exploitability,"
        "affected_users,discoverability\n"
        ",First,1,2,3,4,5\n";
    CHECK_ERROR(catalog::parse_catalog_csv(anon), ErrorKind::Validation, "");
}

TEST_CASE("JSON catalogs mirror the CSV fields") {
    const char* text = R"([
        {"id": "t1", "title": "First", "damage_potential": 1,
         "reproducibility": 2, "exploitability": 3, "affected_users": 4,
         "discoverability": 5, "stride_tag": "spoofing",
         "description": "Plain"},
        {"id": "t2", "title": "Second", "damage_potential": 5,
         "reproducibility": 4, "exploitability": 3, "affected_users": 2,
         "discoverability": 1}
    ])";
    const auto records = catalog::parse_catalog_json(text);
    REQUIRE(records.size() == 2);
    CHECK(records[0].stride_tag == "spoofing");
    CHECK(records[1].description.empty());
    CHECK(records[1].scores.damage_potential == 5.0);

    CHECK_ERROR(catalog::parse_catalog_json("{}"), ErrorKind::Parse, "array");
    CHECK_ERROR(catalog::parse_catalog_json("not json"), ErrorKind::Parse, "");
    CHECK_ERROR(catalog::parse_catalog_json(R"([{"id": "x"}])"), ErrorKind::Parse,
                "");
    CHECK_ERROR(catalog::parse_catalog_json(
                    R"([{"id": "x", "title": "t", "damage_potential": "high",
                         "reproducibility": 2, "exploitability": 3,
                         "affected_users": 4, "discoverability": 5}])"),
                ErrorKind::Parse, "");
}

TEST_CASE("CSV serialization round-trips awkward field content") {
    std::vector<ThreatRecord> records(2);
    records[0] = {"t1", "He said \"boom\", twice", {1, 2, 3, 4, 5},
                  "tampering", "Line one\nline two"};
    records[1] = {"t2", "Plain", {9.5, 0, 10, 0.25, 5}, "", ""};
    const std::string text = catalog::serialize_catalog_csv(records);
    const auto parsed = catalog::parse_catalog_csv(text);
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0].title == records[0].title);
    CHECK(parsed[0].description == records[0].description);
    CHECK(parsed[0].stride_tag == "tampering");
    CHECK(parsed[1].scores.damage_potential == 9.5);
    CHECK(parsed[1].scores.affected_users == 0.25);
}

TEST_CASE("load_catalog deduces the format from the extension") {
    const std::string csv_path = temp_file(
        "dreadfuzz_test_cat.csv",
        "id,title,damage_potential,reproducibility,exploitability,"
        "affected_users,discoverability\nt1,First,1,2,3,4,5\n");
    CHECK(catalog::load_catalog(csv_path).size() == 1);

    const std::string json_path = temp_file(
        "dreadfuzz_test_cat.json",
        R"([{"id": "t1", "title": "T", "damage_potential": 1,
             "reproducibility": 2, "exploitability": 3, "affected_users": 4,
             "discoverability": 5}])");
    CHECK(catalog::load_catalog(json_path).size() == 1);

    const std::string odd_path = temp_file(
        "dreadfuzz_test_cat.data",
        "id,title,damage_potential,reproducibility,exploitability,"
        "affected_users,discoverability\nt1,First,1,2,3,4,5\n");
    CHECK_ERROR(catalog::load_catalog(odd_path), ErrorKind::Validation, "");
    CHECK(catalog::load_catalog(odd_path, catalog::CatalogFormat::Csv).size() ==
          1);

    CHECK_ERROR(catalog::load_catalog("/nonexistent/nowhere.csv"), ErrorKind::Io,
                "cannot open");
}

TEST_CASE("action policy bands and names") {
    CHECK(catalog::to_string(Action::Accept) == "accept");
    CHECK(catalog::to_string(Action::Transfer) == "transfer");
    CHECK(catalog::to_string(Action::Remove) == "remove");
    CHECK(catalog::to_string(Action::Mitigate) == "mitigate");
    CHECK(catalog::action_from_string("mitigate") == Action::Mitigate);
    CHECK_ERROR(catalog::action_from_string("panic"), ErrorKind::Parse, "panic");

    const ActionPolicy policy = ActionPolicy::default_policy();
    CHECK_NOTHROW(policy.validate());
    CHECK(policy.classify(0.0) == Action::Accept);
    CHECK(policy.classify(13.99) == Action::Accept);
    CHECK(policy.classify(14.0) == Action::Transfer);  // a cut falls upward
    CHECK(policy.classify(27.9) == Action::Transfer);
    CHECK(policy.classify(28.0) == Action::Remove);
    CHECK(policy.classify(34.9) == Action::Remove);
    CHECK(policy.classify(35.0) == Action::Mitigate);
    CHECK(policy.classify(50.0) == Action::Mitigate);
    CHECK(catalog::action_hint(19.0) == Action::Transfer);
    CHECK(catalog::action_hint(39.0) == Action::Mitigate);

    ActionPolicy bad = policy;
    bad.cuts = {14, 14, 35};
    CHECK_ERROR(bad.validate(), ErrorKind::Validation, "");
    bad = policy;
    bad.actions.pop_back();
    CHECK_ERROR(bad.validate(), ErrorKind::Validation, "");
}

TEST_CASE("assess_catalog keeps input order and tags failures with the id") {
    const auto assessments = assess_gwis();
    REQUIRE(assessments.size() == 9);
    CHECK(assessments[0].id == "blind-sql-injection");
    CHECK(assessments[0].title == "Blind SQL Injection");
    CHECK(assessments[0].conventional.total == 38.0);
    CHECK(std::abs(assessments[0].fuzzy_value - 39.0) < 1e-6);
    CHECK(assessments[0].action == Action::Mitigate);
    CHECK(assessments[2].id == "unencrypted-login-request");
    CHECK(std::abs(assessments[2].fuzzy_value - 32.5) < 1e-6);
    CHECK(assessments[2].action == Action::Remove);
    CHECK(assessments[3].action == Action::Transfer);

    std::vector<ThreatRecord> bad(1);
    bad[0] = {"rogue", "Rogue", {11, 0, 0, 0, 0}, "", ""};
    const auto rb = dreadfuzz::dread::default_rulebase();
    CHECK_ERROR(catalog::assess_catalog(bad, rb, {}), ErrorKind::Range,
                "threat 'rogue'");
}

TEST_CASE("ranking orders by fuzzy value, then total, then id") {
    const auto ranked = catalog::rank(assess_gwis(), sample_meta());
    REQUIRE(ranked.threats.size() == 9);
    for (std::size_t i = 0; i < 9; ++i) {
        CAPTURE(i);
        CHECK(ranked.threats[i].id == kRankedIds[i]);
    }
    CHECK(ranked.meta.rulebase_sha256 == "0123abcd");

    CHECK_ERROR(catalog::rank({}, sample_meta()), ErrorKind::Validation, "empty");
}

TEST_CASE("ranking is invariant under input permutation") {
    auto assessments = assess_gwis();
    std::mt19937_64 rng(20260816);
    for (int iter = 0; iter < 5; ++iter) {
        std::shuffle(assessments.begin(), assessments.end(), rng);
        const auto ranked = catalog::rank(assessments, sample_meta());
        for (std::size_t i = 0; i < 9; ++i) {
            REQUIRE(ranked.threats[i].id == kRankedIds[i]);
        }
    }
}

TEST_CASE("tie-breaking falls back to the conventional total") {
    // Same fuzzy value by construction, different totals.
    auto assessments = assess_gwis();
    std::vector<catalog::Assessment> pair = {assessments[3], assessments[4]};
    pair[0].conventional.total = 12.0;
    pair[1].conventional.total = 15.0;
    const auto ranked = catalog::rank(pair, sample_meta());
    CHECK(ranked.threats[0].conventional.total == 15.0);
    CHECK(ranked.threats[1].conventional.total == 12.0);
}

TEST_CASE("text report carries the metadata header and every threat") {
    const auto report = catalog::rank(assess_gwis(), sample_meta());
    const std::string text = catalog::emit_report(report, catalog::ReportFormat::Text);
    CHECK(text.find("rulebase: <embedded:dread.frb>") != std::string::npos);
    CHECK(text.find("sha256: 0123abcd") != std::string::npos);
    CHECK(text.find("defuzz: coa") != std::string::npos);
    CHECK(text.find("generated: 2026-08-22T10:00:00Z") != std::string::npos);
    for (const auto& id : kRankedIds) {
        CHECK(text.find(id) != std::string::npos);
    }
    CHECK(text.find("mitigate") != std::string::npos);
}

TEST_CASE("CSV report is a frozen summary table") {
    auto report = catalog::rank(assess_gwis(), sample_meta());
    const std::string csv = catalog::emit_report(report, catalog::ReportFormat::Csv);
    const std::string expected =
        "id,total,average,rating,fuzzy_value,fuzzy_band,action\n"
        "blind-sql-injection,38,7.60,High,39.00,High,mitigate\n"
        "login-page-sql-injection,38,7.60,High,39.00,High,mitigate\n"
        "unencrypted-login-request,26,5.20,Medium,32.50,S_W_High,remove\n"
        "application-error,11,2.20,Low,19.00,S_W_Low,transfer\n"
        "inadequate-account-lockout,11,2.20,Low,19.00,S_W_Low,transfer\n"
        "permanent-cookie-session-info,11,2.20,Low,19.00,S_W_Low,transfer\n"
        "session-information-not-updated,11,2.20,Low,19.00,S_W_Low,transfer\n"
        "unencrypted-password-parameter,11,2.20,Low,19.00,S_W_Low,transfer\n"
        "unencrypted-viewstate-parameter,11,2.20,Low,19.00,S_W_Low,transfer\n";
    CHECK(csv == expected);
}

TEST_CASE("JSON report round-trips losslessly") {
    const auto report = catalog::rank(assess_gwis(), sample_meta());
    const std::string text = catalog::emit_report(report, catalog::ReportFormat::Json);
    const catalog::RankedReport back = catalog::report_from_json(text);
    CHECK(catalog::emit_report(back, catalog::ReportFormat::Json) == text);

    CHECK(back.meta.rulebase_path == report.meta.rulebase_path);
    CHECK(back.meta.config.resolution == 1001);
    REQUIRE(back.threats.size() == 9);
    CHECK(back.threats[0].id == "blind-sql-injection");
    CHECK(back.threats[0].scores.damage_potential == 9.0);
    CHECK(back.threats[0].fuzzy_band.index == 6);
    CHECK(back.threats[0].fired.size() == 2);

    // Suppressed timestamps survive the round trip as null.
    auto no_ts = catalog::rank(assess_gwis(), sample_meta());
    no_ts.meta.timestamp.reset();
    const std::string text2 =
        catalog::emit_report(no_ts, catalog::ReportFormat::Json);
    CHECK(!catalog::report_from_json(text2).meta.timestamp.has_value());

    CHECK_ERROR(catalog::report_from_json("]["), ErrorKind::Parse, "");
    CHECK_ERROR(catalog::report_from_json("{}"), ErrorKind::Parse, "");
}

TEST_CASE("report JSON values match the library computation") {
    const auto report = catalog::rank(assess_gwis(), sample_meta());
    const auto doc = nlohmann::json::parse(
        catalog::emit_report(report, catalog::ReportFormat::Json));
    REQUIRE(doc.at("threats").size() == 9);
    const auto& first = doc.at("threats").at(0);
    CHECK(first.at("rank") == 1);
    CHECK(first.at("id") == "blind-sql-injection");
    CHECK(first.at("rating") == "High");
    CHECK(first.at("fuzzy_band").at("name") == "High");
    CHECK(std::abs(first.at("fuzzy_value").get<double>() - 39.0) < 1e-6);
    CHECK(doc.at("rulebase").at("path") == "<embedded:dread.frb>");
}

}  // TEST_SUITE
