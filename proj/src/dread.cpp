#include "dreadfuzz/dread.hpp"

#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "dreadfuzz/errors.hpp"
#include "dreadfuzz/text.hpp"

namespace dreadfuzz::dread {
namespace {

using fuzzy::LinguisticVariable;
using fuzzy::MembershipFunction;
using fuzzy::Rule;
using fuzzy::RuleTerm;
using fuzzy::Term;

Term tri(const char* name, double a, double b, double c) {
    return {name, MembershipFunction::triangular(a, b, c)};
}

Term trap(const char* name, double a, double b, double c, double d) {
    return {name, MembershipFunction::trapezoidal(a, b, c, d)};
}

// Five-term partitions over [0, 10]. Each interior term peaks at the
// centre of its interval; the edge terms hold a plateau out to the
// universe boundary. Term supports overlap so every score activates at
// least one term.
std::vector<LinguisticVariable> input_variables() {
    std::vector<LinguisticVariable> vars;
    vars.emplace_back(std::string(kDamagePotential), 0.0, 10.0,
                      std::vector<Term>{
                          trap("Negligible", 0, 0, 1, 2),
                          tri("Slight", 1, 2.5, 4),
                          tri("Moderate", 3, 4.5, 6),
                          tri("Almost", 5, 6.5, 8),
                          trap("Catastrophic", 7, 8.5, 10, 10),
                      });
    vars.emplace_back(std::string(kReproducibility), 0.0, 10.0,
                      std::vector<Term>{
                          trap("Probably", 0, 0, 1.25, 2.5),
                          tri("Likelihood", 1.5, 2.75, 4),
                          tri("Satisfiable", 3.5, 4.75, 6),
                          tri("Critical", 5.5, 6.75, 8),
                          trap("Vital", 7.5, 8.75, 10, 10),
                      });
    vars.emplace_back(std::string(kExploitability), 0.0, 10.0,
                      std::vector<Term>{
                          trap("Least", 0, 0, 1.5, 3),
                          tri("Slight", 2, 3.5, 5),
                          tri("Moderate", 4, 5.5, 7),
                          tri("Almost", 6, 7.5, 9),
                          trap("Extreme", 8, 9, 10, 10),
                      });
    vars.emplace_back(std::string(kAffectedUsers), 0.0, 10.0,
                      std::vector<Term>{
                          trap("Noticeable", 0, 0, 1, 2),
                          tri("Satisfactory", 1, 2.5, 4),
                          tri("Average", 3, 4.5, 6),
                          tri("Disturbing", 5, 6.5, 8),
                          trap("Unbearable", 7, 8.5, 10, 10),
                      });
    vars.emplace_back(std::string(kDiscoverability), 0.0, 10.0,
                      std::vector<Term>{
                          trap("Least", 0, 0, 1, 2),
                          tri("Slight", 1.5, 3.25, 5),
                          tri("Moderate", 3.5, 5.25, 7),
                          tri("Almost", 5.5, 7.25, 9),
                          trap("Extreme", 7.5, 8.75, 10, 10),
                      });
    return vars;
}

LinguisticVariable output_variable() {
    return LinguisticVariable(std::string(kRiskLevel), 0.0, 50.0,
                              std::vector<Term>{
                                  trap("VeryLow", 0, 0, 5, 10),
                                  tri("Low", 7, 12, 17),
                                  tri("S_W_Low", 14, 19, 24),
                                  tri("Medium", 21, 26, 31),
                                  tri("S_W_High", 28, 32.5, 37),
                                  tri("High", 35, 39, 43),
                                  trap("VeryHigh", 40, 45, 50, 50),
                              });
}

struct Override {
    std::size_t terms[5];  // term index per input, declaration order
    std::size_t output;    // output term index
};

// Curated consequents layered over the generated base: judgment calls
// for score patterns where the index-sum heuristic is too coarse (a
// catastrophic-and-widespread threat that is merely satisfiable to
// reproduce still rates at least S_W_High, and at the top of the
// scale it crosses into VeryHigh).
constexpr Override kOverrides[] = {
    {{4, 2, 3, 4, 2}, 4},  // -> S_W_High
    {{4, 2, 3, 4, 3}, 5},  // -> High
    {{4, 3, 4, 4, 2}, 5},  // -> High
    {{4, 3, 4, 4, 3}, 6},  // -> VeryHigh
    {{4, 3, 3, 4, 2}, 5},  // -> High
    {{4, 3, 3, 4, 3}, 5},  // -> High
    {{3, 2, 2, 2, 2}, 4},  // -> S_W_High
    {{1, 0, 1, 1, 1}, 2},  // -> S_W_Low
};

Rule make_rule(const std::vector<LinguisticVariable>& inputs,
               const LinguisticVariable& output, const std::size_t terms[5],
               std::size_t output_term) {
    Rule rule;
    rule.antecedents.reserve(5);
    for (std::size_t vi = 0; vi < 5; ++vi) {
        rule.antecedents.push_back(
            {inputs[vi].name(), inputs[vi].terms()[terms[vi]].name});
    }
    rule.consequent = {output.name(), output.terms()[output_term].name};
    return rule;
}

}  // namespace

Variables dread_variables() { return {input_variables(), output_variable()}; }

std::vector<Rule> generate_rules() {
    const std::vector<LinguisticVariable> inputs = input_variables();
    const LinguisticVariable output = output_variable();

    std::vector<Rule> rules;
    rules.reserve(5 * 5 * 5 * 5 * 5);
    std::size_t terms[5] = {0, 0, 0, 0, 0};
    for (terms[0] = 0; terms[0] < 5; ++terms[0])
        for (terms[1] = 0; terms[1] < 5; ++terms[1])
            for (terms[2] = 0; terms[2] < 5; ++terms[2])
                for (terms[3] = 0; terms[3] < 5; ++terms[3])
                    for (terms[4] = 0; terms[4] < 5; ++terms[4]) {
                        const std::size_t s =
                            terms[0] + terms[1] + terms[2] + terms[3] + terms[4];
                        // round(s * 6 / 20) with ties up, in exact integers
                        const std::size_t category = (6 * s + 10) / 20;
                        rules.push_back(make_rule(inputs, output, terms, category));
                    }
    return rules;
}

fuzzy::RuleBase default_rulebase() {
    std::vector<LinguisticVariable> inputs = input_variables();
    LinguisticVariable output = output_variable();
    std::vector<Rule> rules = generate_rules();

    for (const Override& o : kOverrides) {
        // Generation order: innermost loop is the last variable.
        const std::size_t index =
            (((o.terms[0] * 5 + o.terms[1]) * 5 + o.terms[2]) * 5 + o.terms[3]) *
                5 +
            o.terms[4];
        rules[index].consequent.term = output.terms()[o.output].name;
    }
    return fuzzy::RuleBase(std::move(inputs), std::move(output),
                           std::move(rules));
}

fuzzy::RuleBase variables_only_rulebase() {
    return fuzzy::RuleBase(input_variables(), output_variable(), {});
}

void DreadScores::validate() const {
    const std::pair<const char*, double> fields[] = {
        {"damage_potential", damage_potential},
        {"reproducibility", reproducibility},
        {"exploitability", exploitability},
        {"affected_users", affected_users},
        {"discoverability", discoverability},
    };
    for (const auto& [name, value] : fields) {
        if (!(value >= 0.0 && value <= 10.0)) {
            throw Error(ErrorKind::Range,
                        std::string("score '") + name + "' must be in [0, 10] (got " +
                            text::to_minimal_string(value) + ")");
        }
    }
}

std::string_view to_string(Rating rating) {
    switch (rating) {
        case Rating::Low: return "Low";
        case Rating::Medium: return "Medium";
        case Rating::High: return "High";
    }
    return "?";
}

ConventionalResult conventional_score(const DreadScores& scores) {
    scores.validate();
    const double total = scores.total();
    Rating rating = Rating::Medium;
    if (total < 20.0) {
        rating = Rating::Low;
    } else if (total > 30.0) {
        rating = Rating::High;
    }
    return {total, total / 5.0, rating};
}

double legacy_risk(const LegacyRiskInputs& inputs) {
    const std::pair<const char*, double> fields[] = {
        {"impact", inputs.impact},
        {"probability", inputs.probability},
    };
    for (const auto& [name, value] : fields) {
        if (!(value >= 0.0 && value <= 10.0)) {
            throw Error(ErrorKind::Range,
                        std::string(name) + " must be in [0, 10] (got " +
                            text::to_minimal_string(value) + ")");
        }
    }
    return inputs.impact * inputs.probability;
}

FuzzyBand label_band(const fuzzy::LinguisticVariable& output, double crisp) {
    if (!(crisp >= output.lo() && crisp <= output.hi())) {
        throw Error(ErrorKind::Range,
                    "value " + text::to_minimal_string(crisp) +
                        " is outside the range of '" + output.name() + "'");
    }
    const std::vector<Term>& terms = output.terms();
    std::size_t best = 0;
    double best_degree = -1.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const double d = terms[i].mf.evaluate(crisp);
        if (d >= best_degree) {  // ties resolve to the higher band
            best = i;
            best_degree = d;
        }
    }
    if (best_degree <= 0.0) {
        throw Error(ErrorKind::Validation,
                    "no term of '" + output.name() + "' covers value " +
                        text::to_minimal_string(crisp));
    }
    return {static_cast<int>(best) + 1, terms[best].name};
}

Assessment assess(const DreadScores& scores, const fuzzy::RuleBase& rulebase,
                  const fuzzy::InferenceConfig& config) {
    Assessment result;
    result.conventional = conventional_score(scores);

    // Custom rulebases must keep the standard variable names; infer
    // rejects the mismatch otherwise.
    std::map<std::string, double> crisp;
    crisp[std::string(kDamagePotential)] = scores.damage_potential;
    crisp[std::string(kReproducibility)] = scores.reproducibility;
    crisp[std::string(kExploitability)] = scores.exploitability;
    crisp[std::string(kAffectedUsers)] = scores.affected_users;
    crisp[std::string(kDiscoverability)] = scores.discoverability;

    fuzzy::InferenceResult inference = fuzzy::infer(rulebase, config, crisp);
    result.fuzzy_value = inference.crisp;
    result.fuzzy_band = label_band(rulebase.output(), inference.crisp);
    result.fired = std::move(inference.fired);
    return result;
}

}  // namespace dreadfuzz::dread
