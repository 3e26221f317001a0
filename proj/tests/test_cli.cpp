#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include <json.hpp>

#include <dreadfuzz/dread.hpp>
#include <dreadfuzz/dsl.hpp>
#include <dreadfuzz/hash.hpp>

#include "helpers.hpp"

namespace {

const std::string kCli = DREADFUZZ_CLI;
const std::string kDataDir = DREADFUZZ_DATA_DIR;
const std::string kGwis = kDataDir + "/gwis.csv";

std::string write_temp(const std::string& name, const std::string& content) {
    const auto path = (std::filesystem::temp_directory_path() / name).string();
    FILE* f = std::fopen(path.c_str(), "wb");
    REQUIRE(f != nullptr);
    REQUIRE(std::fwrite(content.data(), 1, content.size(), f) == content.size());
    std::fclose(f);
    return path;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help exits 0, a missing subcommand exits 1") {
    const auto help = run_cmd(kCli + " --help 2>&1");
    CHECK(help.exit_code == 0);
    CHECK(help.out.find("assess") != std::string::npos);
    CHECK(help.out.find("validate") != std::string::npos);

    CHECK(run_cmd(kCli + " 2>/dev/null").exit_code == 1);
    CHECK(run_cmd(kCli + " frobnicate 2>/dev/null").exit_code == 1);
}

TEST_CASE("assess --scores prints the dual rating") {
    const auto r = run_cmd(kCli + " assess --scores 9,6,8,9,6");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("total: 38") != std::string::npos);
    CHECK(r.out.find("average: 7.60") != std::string::npos);
    CHECK(r.out.find("rating: High") != std::string::npos);
    CHECK(r.out.find("fuzzy_value: 39.00") != std::string::npos);
    CHECK(r.out.find("fuzzy_band: High (6 of 7)") != std::string::npos);
    CHECK(r.out.find("action: mitigate") != std::string::npos);
}

TEST_CASE("assess --scores emits machine-readable JSON") {
    const auto r = run_cmd(kCli +
                           " assess --scores 6,4,6,5,5 --format json"
                           " --no-timestamp");
    REQUIRE(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc.at("total") == 26.0);
    CHECK(doc.at("average") == 5.2);
    CHECK(doc.at("rating") == "Medium");
    CHECK(std::abs(doc.at("fuzzy_value").get<double>() - 32.5) < 1e-6);
    CHECK(doc.at("fuzzy_band").at("name") == "S_W_High");
    CHECK(doc.at("fuzzy_band").at("index") == 5);
    CHECK(doc.at("action") == "remove");
    CHECK(doc.at("timestamp").is_null());
    CHECK(doc.at("config").at("resolution") == 1001);
    CHECK(doc.at("scores").at("reproducibility") == 4.0);
    REQUIRE(doc.at("fired").size() == 1);
    CHECK(doc.at("fired").at(0).at("rule") == 2187);

    // The reported hash is the hash of the embedded rulebase text.
    const std::string expected_sha = dreadfuzz::hash::sha256_hex(
        dreadfuzz::dsl::serialize_rulebase(dreadfuzz::dread::default_rulebase()));
    CHECK(doc.at("rulebase").at("path") == "<embedded:dread.frb>");
    CHECK(doc.at("rulebase").at("sha256") == expected_sha);
}

TEST_CASE("assess rejects malformed or out-of-range scores") {
    CHECK(run_cmd(kCli + " assess --scores 1,2,3 2>/dev/null").exit_code == 1);
    CHECK(run_cmd(kCli + " assess --scores 1,2,3,4,x 2>/dev/null").exit_code == 1);
    CHECK(run_cmd(kCli + " assess --scores 11,0,0,0,0 2>/dev/null").exit_code == 1);
    const auto err = run_cmd(kCli + " assess --scores 11,0,0,0,0 2>&1 >/dev/null");
    CHECK(err.out.find("damage_potential") != std::string::npos);
}

TEST_CASE("assess needs exactly one input source") {
    CHECK(run_cmd(kCli + " assess 2>/dev/null").exit_code == 1);
    CHECK(run_cmd(kCli + " assess --scores 1,2,3,4,5 --catalog " + kGwis +
                  " 2>/dev/null")
              .exit_code == 1);
}

TEST_CASE("assess --catalog produces the ranked CSV") {
    const auto r = run_cmd(kCli + " assess --catalog " + kGwis +
                           " --format csv --no-timestamp");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("id,total,average,rating,fuzzy_value,fuzzy_band,action\n") ==
          0);
    CHECK(r.out.find("\nblind-sql-injection,38,7.60,High,39.00,High,mitigate\n") !=
          std::string::npos);
    // 1 header + 9 threats
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 10);
}

TEST_CASE("missing catalog file exits 2") {
    CHECK(run_cmd(kCli + " assess --catalog /no/such/file.csv 2>/dev/null")
              .exit_code == 2);
}

TEST_CASE("--out writes the report to a file") {
    const auto out_path =
        (std::filesystem::temp_directory_path() / "dreadfuzz_report.json")
            .string();
    std::filesystem::remove(out_path);
    const auto r = run_cmd(kCli + " assess --catalog " + kGwis +
                           " --format json --no-timestamp --out " + out_path);
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());
    const auto doc = nlohmann::json::parse(slurp(out_path));
    CHECK(doc.at("threats").size() == 9);
    CHECK(doc.at("threats").at(0).at("id") == "blind-sql-injection");
}

TEST_CASE("a custom rulebase arrives via flag or environment") {
    const std::string rb_path = write_temp(
        "dreadfuzz_cli_rb.frb",
        dreadfuzz::dsl::serialize_rulebase(dreadfuzz::dread::default_rulebase()));

    const auto via_flag = run_cmd(kCli + " assess --scores 9,6,8,9,6" +
                                  " --rulebase " + rb_path +
                                  " --format json --no-timestamp");
    REQUIRE(via_flag.exit_code == 0);
    CHECK(nlohmann::json::parse(via_flag.out).at("rulebase").at("path") ==
          rb_path);

    const auto via_env = run_cmd("DREADFUZZ_RULEBASE=" + rb_path + " " + kCli +
                                 " assess --scores 9,6,8,9,6 --format json"
                                 " --no-timestamp");
    REQUIRE(via_env.exit_code == 0);
    CHECK(nlohmann::json::parse(via_env.out).at("rulebase").at("path") == rb_path);

    // An explicit flag beats the environment.
    const auto both = run_cmd("DREADFUZZ_RULEBASE=/does/not/exist.frb " + kCli +
                              " assess --scores 9,6,8,9,6 --rulebase " + rb_path +
                              " --format json --no-timestamp");
    REQUIRE(both.exit_code == 0);
    CHECK(nlohmann::json::parse(both.out).at("rulebase").at("path") == rb_path);
}

TEST_CASE("a broken rulebase file prints diagnostics and exits 1") {
    const std::string bad = write_temp("dreadfuzz_cli_bad.frb",
                                       "variable A range 10 0 {\n"
                                       "  term T tri 0 1 2\n"
                                       "}\n");
    const auto r = run_cmd(kCli + " assess --scores 1,2,3,4,5 --rulebase " + bad +
                           " 2>&1 >/dev/null");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("bad-range") != std::string::npos);
    CHECK(r.out.find(":1:") != std::string::npos);  // line 1 in the path:line:col prefix
    CHECK(r.out.find("error") != std::string::npos);

    CHECK(run_cmd(kCli + " assess --scores 1,2,3,4,5 --rulebase /no/file.frb"
                         " 2>/dev/null")
              .exit_code == 2);
}

TEST_CASE("backend forcing via environment") {
    const auto scalar = run_cmd("DREADFUZZ_BACKEND=scalar " + kCli +
                                " assess --scores 6,4,6,5,5 --format json"
                                " --no-timestamp");
    REQUIRE(scalar.exit_code == 0);
    CHECK(std::abs(nlohmann::json::parse(scalar.out).at("fuzzy_value").get<double>() -
                   32.5) < 1e-6);
    CHECK(run_cmd("DREADFUZZ_BACKEND=quantum " + kCli +
                  " assess --scores 1,2,3,4,5 2>/dev/null")
              .exit_code == 1);
}

TEST_CASE("defuzzifier and resolution flags reach the engine") {
    const auto probe = [&](const std::string& flags) {
        const auto r =
            run_cmd(kCli + " assess --scores 6,4,6,5,5 " + flags);
        REQUIRE(r.exit_code == 0);
        const auto pos = r.out.find("fuzzy_value: ");
        REQUIRE(pos != std::string::npos);
        return r.out.substr(pos + 13, r.out.find('\n', pos) - pos - 13);
    };
    // The plateau of the S_W_High consequent truncated at 0.4 spans
    // [29.8, 35.2]; its last grid point rounds off the plateau, so the
    // maxima land on 29.80 and 35.15.
    CHECK(probe("--defuzz som") == "29.80");
    CHECK(probe("--defuzz lom") == "35.15");
    CHECK(probe("--defuzz mom") == "32.48");
    CHECK(probe("--defuzz boa") == "32.50");
    CHECK(probe("--resolution 101") == "32.50");

    CHECK(run_cmd(kCli + " assess --scores 1,2,3,4,5 --defuzz centroid"
                         " 2>/dev/null")
              .exit_code == 1);
    const auto r = run_cmd(kCli + " assess --scores 1,2,3,4,5 --resolution 100"
                                  " 2>&1 >/dev/null");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("resolution below minimum 101") != std::string::npos);
}

TEST_CASE("directives in a rulebase yield to explicit flags") {
    std::string text =
        dreadfuzz::dsl::serialize_rulebase(dreadfuzz::dread::default_rulebase());
    text += "\ndefuzz som\nresolution 501\n";
    const std::string rb_path = write_temp("dreadfuzz_cli_dir.frb", text);

    const auto defaulted = run_cmd(kCli + " assess --scores 6,4,6,5,5" +
                                   " --rulebase " + rb_path +
                                   " --format json --no-timestamp");
    REQUIRE(defaulted.exit_code == 0);
    auto doc = nlohmann::json::parse(defaulted.out);
    CHECK(doc.at("config").at("defuzz") == "som");
    CHECK(doc.at("config").at("resolution") == 501);

    const auto flagged = run_cmd(kCli + " assess --scores 6,4,6,5,5" +
                                 " --rulebase " + rb_path +
                                 " --defuzz coa --format json --no-timestamp");
    REQUIRE(flagged.exit_code == 0);
    doc = nlohmann::json::parse(flagged.out);
    CHECK(doc.at("config").at("defuzz") == "coa");
    CHECK(doc.at("config").at("resolution") == 501);
}

TEST_CASE("validate lints the embedded and external rulebases") {
    const auto ok = run_cmd(kCli + " validate 2>&1");
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("0 errors, 0 warnings") != std::string::npos);

    const std::string warny = write_temp("dreadfuzz_cli_warn.frb",
                                         "variable A range 0 10 {\n"
                                         "  term Lo tri 0 0 10\n"
                                         "  term Hi tri 0 10 10\n"
                                         "}\n"
                                         "output O range 0 1 {\n"
                                         "  term T tri 0 0.5 1\n"
                                         "}\n"
                                         "rule IF A IS Lo THEN O IS T\n");
    const auto warned = run_cmd(kCli + " validate --rulebase " + warny + " 2>&1");
    CHECK(warned.exit_code == 0);
    CHECK(warned.out.find("unused-term") != std::string::npos);
    CHECK(warned.out.find("warning") != std::string::npos);

    const std::string broken = write_temp("dreadfuzz_cli_broken.frb",
                                          "output O range 0 1 {\n"
                                          "  term T tri 0 0.5 1\n"
                                          "}\n");
    const auto failed = run_cmd(kCli + " validate --rulebase " + broken + " 2>&1");
    CHECK(failed.exit_code == 1);
    CHECK(failed.out.find("missing-input") != std::string::npos);
}

TEST_CASE("gen-rules reproduces the shipped artifacts") {
    const auto curated = run_cmd(kCli + " gen-rules --curated");
    REQUIRE(curated.exit_code == 0);
    CHECK(curated.out == slurp(kDataDir + "/dread.frb"));

    const auto vars = run_cmd(kCli + " gen-rules --variables-only");
    REQUIRE(vars.exit_code == 0);
    CHECK(vars.out == slurp(kDataDir + "/dread-variables.frb"));

    const auto plain = run_cmd(kCli + " gen-rules");
    REQUIRE(plain.exit_code == 0);
    CHECK(plain.out != curated.out);  // overrides change four consequents
    const auto parsed = dreadfuzz::dsl::parse_rulebase(plain.out);
    REQUIRE(parsed.ok());
    CHECK(parsed.rulebase->rules().size() == 3125);

    CHECK(run_cmd(kCli + " gen-rules --curated --variables-only 2>/dev/null")
              .exit_code == 1);
}

TEST_CASE("explain shows degrees, fired rules and the verdict") {
    const auto r = run_cmd(kCli + " explain --scores 9,6,8,9,6");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("DamagePotential = 9") != std::string::npos);
    CHECK(r.out.find("Catastrophic: 1") != std::string::npos);
    CHECK(r.out.find("fired rules:") != std::string::npos);
    CHECK(r.out.find("[2972]") != std::string::npos);
    CHECK(r.out.find("(activation 0.4)") != std::string::npos);
    CHECK(r.out.find("THEN RiskLevel IS High") != std::string::npos);
    CHECK(r.out.find("band: High (6 of 7)") != std::string::npos);
    CHECK(r.out.find("action: mitigate") != std::string::npos);

    const auto j = run_cmd(kCli + " explain --scores 9,6,8,9,6 --format json");
    REQUIRE(j.exit_code == 0);
    const auto doc = nlohmann::json::parse(j.out);
    CHECK(doc.at("fuzzified").size() == 5);
    CHECK(doc.at("fired").at(0).at("text").get<std::string>().find("THEN") !=
          std::string::npos);

    CHECK(run_cmd(kCli + " explain --scores 1,2,3,4,5 --format csv 2>/dev/null")
              .exit_code == 1);
    CHECK(run_cmd(kCli + " explain 2>/dev/null").exit_code == 1);
}

TEST_CASE("unknown report formats are rejected") {
    CHECK(run_cmd(kCli + " assess --scores 1,2,3,4,5 --format yaml 2>/dev/null")
              .exit_code == 1);
}

}  // TEST_SUITE
