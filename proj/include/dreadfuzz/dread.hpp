#pragma once

// DREAD threat scoring: five categories rated 0..10, a conventional
// average with Low/Medium/High banding, and a fuzzy risk level on a
// 0..50 universe driven by a generated-plus-curated rulebase.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "dreadfuzz/fuzzy.hpp"

namespace dreadfuzz::dread {

// Canonical variable names used across rulebases, CSV columns and CLI
// flags.
inline constexpr std::string_view kDamagePotential = "DamagePotential";
inline constexpr std::string_view kReproducibility = "Reproducibility";
inline constexpr std::string_view kExploitability = "Exploitability";
inline constexpr std::string_view kAffectedUsers = "AffectedUsers";
inline constexpr std::string_view kDiscoverability = "Discoverability";
inline constexpr std::string_view kRiskLevel = "RiskLevel";

struct DreadScores {
    double damage_potential = 0.0;
    double reproducibility = 0.0;
    double exploitability = 0.0;
    double affected_users = 0.0;
    double discoverability = 0.0;

    // Throws Error{Range} naming the first field outside [0, 10].
    void validate() const;

    double total() const {
        return damage_potential + reproducibility + exploitability +
               affected_users + discoverability;
    }

    // DamagePotential, Reproducibility, Exploitability, AffectedUsers,
    // Discoverability order.
    std::array<double, 5> as_array() const {
        return {damage_potential, reproducibility, exploitability,
                affected_users, discoverability};
    }
};

struct Variables {
    std::vector<fuzzy::LinguisticVariable> inputs;  // the five DREAD categories
    fuzzy::LinguisticVariable output;               // RiskLevel over [0, 50]
};

// Five-term input partitions over [0, 10] and the seven-term RiskLevel
// partition over [0, 50].
Variables dread_variables();

// Full 3125-rule cross product. Each pattern maps the sum of its term
// indices s in [0, 20] onto the seven output terms by rounding
// s * 6 / 20 half-up.
std::vector<fuzzy::Rule> generate_rules();

// Generated rules with a small curated set of overrides layered on
// top. This is the rulebase the CLI embeds.
fuzzy::RuleBase default_rulebase();

// Variable declarations only, no rules; starting point for authoring a
// custom rulebase.
fuzzy::RuleBase variables_only_rulebase();

enum class Rating {
    Low,     // total <  20
    Medium,  // 20 <= total <= 30
    High,    // total >  30
};

std::string_view to_string(Rating rating);

struct ConventionalResult {
    double total;
    double average;  // total / 5
    Rating rating;
};

ConventionalResult conventional_score(const DreadScores& scores);

// Older two-factor model kept for comparison output.
struct LegacyRiskInputs {
    double impact;       // 0..10
    double probability;  // 0..10
};

// impact * probability; throws Error{Range} outside [0, 10].
double legacy_risk(const LegacyRiskInputs& inputs);

// Output term whose membership is highest at a crisp value. index is
// 1-based position in the output partition; ties take the higher index.
struct FuzzyBand {
    int index;
    std::string name;
};

FuzzyBand label_band(const fuzzy::LinguisticVariable& output, double crisp);

struct Assessment {
    ConventionalResult conventional;
    double fuzzy_value;
    FuzzyBand fuzzy_band;
    std::vector<fuzzy::FiredRule> fired;
};

// Validates scores, runs both models over the given rulebase.
Assessment assess(const DreadScores& scores, const fuzzy::RuleBase& rulebase,
                  const fuzzy::InferenceConfig& config);

}  // namespace dreadfuzz::dread
