#include "dreadfuzz/fuzzy.hpp"

#include <cmath>
#include <map>
#include <string>

#include "dreadfuzz/errors.hpp"
#include "dreadfuzz/text.hpp"

namespace dreadfuzz::fuzzy {
namespace {

void require_finite_ordered(const char* what, const std::vector<double>& ps) {
    for (double p : ps) {
        if (!std::isfinite(p)) {
            throw Error(ErrorKind::Validation,
                        std::string(what) + " parameters must be finite");
        }
    }
    for (std::size_t i = 1; i < ps.size(); ++i) {
        if (ps[i - 1] > ps[i]) {
            throw Error(ErrorKind::Validation,
                        std::string(what) + " parameters must be non-decreasing: " +
                            text::to_minimal_string(ps[i - 1]) + " > " +
                            text::to_minimal_string(ps[i]));
        }
    }
}

}  // namespace

MembershipFunction MembershipFunction::triangular(double a, double b, double c) {
    require_finite_ordered("triangular", {a, b, c});
    return MembershipFunction(MfKind::Triangular, kernels::Trapezoid{a, b, b, c});
}

MembershipFunction MembershipFunction::trapezoidal(double a, double b, double c,
                                                   double d) {
    require_finite_ordered("trapezoidal", {a, b, c, d});
    return MembershipFunction(MfKind::Trapezoidal, kernels::Trapezoid{a, b, c, d});
}

std::vector<double> MembershipFunction::params() const {
    if (kind_ == MfKind::Triangular) {
        return {shape_.a, shape_.b, shape_.d};
    }
    return {shape_.a, shape_.b, shape_.c, shape_.d};
}

LinguisticVariable::LinguisticVariable(std::string name, double lo, double hi,
                                       std::vector<Term> terms)
    : name_(std::move(name)), lo_(lo), hi_(hi), terms_(std::move(terms)) {
    if (name_.empty()) {
        throw Error(ErrorKind::Validation, "variable name must not be empty");
    }
    if (!std::isfinite(lo_) || !std::isfinite(hi_) || lo_ >= hi_) {
        throw Error(ErrorKind::Validation,
                    "variable '" + name_ + "' needs a finite range with lo < hi");
    }
    if (terms_.empty()) {
        throw Error(ErrorKind::Validation,
                    "variable '" + name_ + "' has no terms");
    }
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        const Term& t = terms_[i];
        if (t.name.empty()) {
            throw Error(ErrorKind::Validation,
                        "variable '" + name_ + "' has an unnamed term");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (terms_[j].name == t.name) {
                throw Error(ErrorKind::Validation,
                            "variable '" + name_ + "' declares term '" + t.name +
                                "' twice");
            }
        }
        if (t.mf.support_lo() < lo_ || t.mf.support_hi() > hi_) {
            throw Error(ErrorKind::Validation,
                        "term '" + t.name + "' of variable '" + name_ +
                            "' lies outside the range [" +
                            text::to_minimal_string(lo_) + ", " +
                            text::to_minimal_string(hi_) + "]");
        }
    }
}

const Term* LinguisticVariable::find_term(std::string_view term_name) const {
    for (const Term& t : terms_) {
        if (t.name == term_name) return &t;
    }
    return nullptr;
}

std::size_t LinguisticVariable::term_index(std::string_view term_name) const {
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (terms_[i].name == term_name) return i;
    }
    throw Error(ErrorKind::Reference, "variable '" + name_ + "' has no term '" +
                                          std::string(term_name) + "'");
}

std::optional<double> FuzzifiedInput::degree(std::string_view term_name) const {
    for (const auto& [name, value] : degrees) {
        if (name == term_name) return value;
    }
    return std::nullopt;
}

RuleBase::RuleBase(std::vector<LinguisticVariable> inputs,
                   LinguisticVariable output, std::vector<Rule> rules)
    : inputs_(std::move(inputs)), output_(std::move(output)),
      rules_(std::move(rules)) {
    if (inputs_.empty()) {
        throw Error(ErrorKind::Validation,
                    "rulebase needs at least one input variable");
    }
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
        if (inputs_[i].name() == output_.name()) {
            throw Error(ErrorKind::Validation,
                        "output variable '" + output_.name() +
                            "' collides with an input variable");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (inputs_[j].name() == inputs_[i].name()) {
                throw Error(ErrorKind::Validation,
                            "input variable '" + inputs_[i].name() +
                                "' is declared twice");
            }
        }
    }

    indexed_.reserve(rules_.size());
    std::map<std::vector<std::size_t>, std::size_t> seen_patterns;
    for (std::size_t r = 0; r < rules_.size(); ++r) {
        const Rule& rule = rules_[r];
        const std::string label = "rule " + std::to_string(r + 1);
        if (rule.antecedents.empty()) {
            throw Error(ErrorKind::Validation, label + " has no antecedents");
        }
        if (!std::isfinite(rule.weight) || rule.weight < 0.0 ||
            rule.weight > 1.0) {
            throw Error(ErrorKind::Validation,
                        label + " weight " + text::to_minimal_string(rule.weight) +
                            " is outside [0, 1]");
        }

        IndexedRule indexed;
        indexed.input_term.assign(inputs_.size(), IndexedRule::kUnused);
        for (const RuleTerm& ant : rule.antecedents) {
            const std::size_t vi = input_index_or_throw(label, ant.variable);
            if (indexed.input_term[vi] != IndexedRule::kUnused) {
                throw Error(ErrorKind::Validation,
                            label + " constrains variable '" + ant.variable +
                                "' twice");
            }
            indexed.input_term[vi] = term_index_or_throw(label, inputs_[vi], ant.term);
        }
        if (rule.consequent.variable != output_.name()) {
            throw Error(ErrorKind::Validation,
                        label + " concludes on '" + rule.consequent.variable +
                            "', not the output variable '" + output_.name() + "'");
        }
        indexed.output_term = term_index_or_throw(label, output_, rule.consequent.term);
        indexed.weight = rule.weight;

        const auto [it, inserted] = seen_patterns.emplace(indexed.input_term, r);
        if (!inserted) {
            throw Error(ErrorKind::Validation,
                        "rules " + std::to_string(it->second + 1) + " and " +
                            std::to_string(r + 1) +
                            " share one antecedent pattern");
        }
        indexed_.push_back(std::move(indexed));
    }
}

std::size_t RuleBase::input_index_or_throw(const std::string& label,
                                           std::string_view name) const {
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
        if (inputs_[i].name() == name) return i;
    }
    throw Error(ErrorKind::Validation, label + " references unknown variable '" +
                                           std::string(name) + "'");
}

std::size_t RuleBase::term_index_or_throw(const std::string& label,
                                          const LinguisticVariable& variable,
                                          std::string_view term) const {
    const Term* t = variable.find_term(term);
    if (t == nullptr) {
        throw Error(ErrorKind::Validation, label + " references unknown term '" +
                                               std::string(term) +
                                               "' of variable '" +
                                               variable.name() + "'");
    }
    return static_cast<std::size_t>(t - variable.terms().data());
}

const LinguisticVariable* RuleBase::find_variable(std::string_view name) const {
    for (const LinguisticVariable& v : inputs_) {
        if (v.name() == name) return &v;
    }
    if (output_.name() == name) return &output_;
    return nullptr;
}

std::size_t RuleBase::input_index(std::string_view name) const {
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
        if (inputs_[i].name() == name) return i;
    }
    throw Error(ErrorKind::Reference,
                "no input variable named '" + std::string(name) + "'");
}

std::string_view to_string(DefuzzMethod method) {
    switch (method) {
        case DefuzzMethod::Coa: return "coa";
        case DefuzzMethod::Boa: return "boa";
        case DefuzzMethod::Mom: return "mom";
        case DefuzzMethod::Som: return "som";
        case DefuzzMethod::Lom: return "lom";
    }
    return "?";
}

DefuzzMethod defuzz_method_from_string(std::string_view name) {
    if (name == "coa") return DefuzzMethod::Coa;
    if (name == "boa") return DefuzzMethod::Boa;
    if (name == "mom") return DefuzzMethod::Mom;
    if (name == "som") return DefuzzMethod::Som;
    if (name == "lom") return DefuzzMethod::Lom;
    throw Error(ErrorKind::Validation,
                "unknown defuzzification method '" + std::string(name) +
                    "' (expected coa, boa, mom, som or lom)");
}

void InferenceConfig::validate() const {
    if (resolution < 101) {
        throw Error(ErrorKind::Validation,
                    "resolution below minimum 101 (got " +
                        std::to_string(resolution) + ")");
    }
}

}  // namespace dreadfuzz::fuzzy
