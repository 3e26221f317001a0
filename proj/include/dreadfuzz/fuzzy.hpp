#pragma once

// Mamdani inference core: linguistic variables over closed real
// intervals, weighted IF/AND/THEN rules, min implication, max
// aggregation on a uniform grid, five defuzzifiers.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dreadfuzz/kernels.hpp"

namespace dreadfuzz::fuzzy {

enum class MfKind {
    Triangular,
    Trapezoidal,
};

// Piecewise-linear membership function. Parameters are validated to be
// finite and non-decreasing at construction. Triangles are stored as
// degenerate trapezoids (b == c) but remember their kind so they
// serialize back as written.
class MembershipFunction {
public:
    static MembershipFunction triangular(double a, double b, double c);
    static MembershipFunction trapezoidal(double a, double b, double c, double d);

    MfKind kind() const noexcept { return kind_; }
    const kernels::Trapezoid& shape() const noexcept { return shape_; }

    // 3 values for a triangle, 4 for a trapezoid.
    std::vector<double> params() const;

    double evaluate(double x) const { return kernels::trapezoid_eval(shape_, x); }

    double support_lo() const noexcept { return shape_.a; }
    double support_hi() const noexcept { return shape_.d; }

private:
    MembershipFunction(MfKind kind, kernels::Trapezoid shape)
        : kind_(kind), shape_(shape) {}

    MfKind kind_;
    kernels::Trapezoid shape_;
};

struct Term {
    std::string name;
    MembershipFunction mf;
};

// Named variable over [lo, hi] with uniquely named terms whose supports
// lie inside the universe.
class LinguisticVariable {
public:
    LinguisticVariable(std::string name, double lo, double hi,
                       std::vector<Term> terms);

    const std::string& name() const noexcept { return name_; }
    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }

    // nullptr when the term does not exist.
    const Term* find_term(std::string_view term_name) const;

    // Throws Error{Reference} when the term does not exist.
    std::size_t term_index(std::string_view term_name) const;

private:
    std::string name_;
    double lo_;
    double hi_;
    std::vector<Term> terms_;
};

// Per-term membership degrees of one crisp value, in term declaration
// order (zero degrees included).
struct FuzzifiedInput {
    std::string variable;
    std::vector<std::pair<std::string, double>> degrees;

    std::optional<double> degree(std::string_view term_name) const;
};

struct RuleTerm {
    std::string variable;
    std::string term;
};

// IF a1 AND a2 ... THEN consequent, connective fixed to AND (min).
struct Rule {
    std::vector<RuleTerm> antecedents;
    RuleTerm consequent;
    double weight = 1.0;
};

// Validated rule set over a fixed set of input variables and a single
// output variable. Construction rejects unknown names, empty or
// per-variable-duplicated antecedents, weights outside [0, 1], and two
// rules sharing one antecedent pattern.
class RuleBase {
public:
    RuleBase(std::vector<LinguisticVariable> inputs, LinguisticVariable output,
             std::vector<Rule> rules);

    const std::vector<LinguisticVariable>& inputs() const noexcept { return inputs_; }
    const LinguisticVariable& output() const noexcept { return output_; }
    const std::vector<Rule>& rules() const noexcept { return rules_; }

    // Inputs then output; nullptr when the name matches neither.
    const LinguisticVariable* find_variable(std::string_view name) const;

    // Throws Error{Reference} for names that are not input variables.
    std::size_t input_index(std::string_view name) const;

    // Name-free view of rules() used by the engine, same order.
    struct IndexedRule {
        static constexpr std::size_t kUnused = static_cast<std::size_t>(-1);

        std::vector<std::size_t> input_term;  // per input variable, kUnused if absent
        std::size_t output_term;
        double weight;
    };

    const std::vector<IndexedRule>& indexed_rules() const noexcept { return indexed_; }

private:
    std::size_t input_index_or_throw(const std::string& label,
                                     std::string_view name) const;
    std::size_t term_index_or_throw(const std::string& label,
                                    const LinguisticVariable& variable,
                                    std::string_view term) const;

    std::vector<LinguisticVariable> inputs_;
    LinguisticVariable output_;
    std::vector<Rule> rules_;
    std::vector<IndexedRule> indexed_;
};

enum class DefuzzMethod {
    Coa,  // centre of area (centroid)
    Boa,  // bisector of area
    Mom,  // mean of maxima
    Som,  // smallest of maxima
    Lom,  // largest of maxima
};

std::string_view to_string(DefuzzMethod method);

// Accepts the lowercase names "coa", "boa", "mom", "som", "lom";
// throws Error{Validation} otherwise.
DefuzzMethod defuzz_method_from_string(std::string_view name);

struct InferenceConfig {
    DefuzzMethod defuzz = DefuzzMethod::Coa;
    int resolution = 1001;  // grid points across the output universe

    // Throws Error{Validation} when resolution < 101.
    void validate() const;
};

// Aggregated output membership sampled on the uniform grid
// x_i = lo + i * step, i in [0, resolution).
struct AggregatedSet {
    std::string variable;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> degrees;

    double step() const {
        return (hi - lo) / static_cast<double>(degrees.size() - 1);
    }
    double x_at(std::size_t i) const {
        return lo + static_cast<double>(i) * step();
    }
};

struct FiredRule {
    std::size_t rule_index;  // position in RuleBase::rules()
    double activation;       // weighted antecedent degree, > 0
};

struct InferenceResult {
    double crisp;
    std::vector<FiredRule> fired;  // rule order, zero activations omitted
    AggregatedSet aggregated;
};

double eval_mf(const MembershipFunction& mf, double x);

// Throws Error{Range} when x lies outside the variable's universe.
FuzzifiedInput fuzzify(const LinguisticVariable& variable, double x);

// Weighted activation of one rule: weight * min of antecedent degrees.
// Throws Error{Reference} when a rule name is missing from the inputs.
double fire_rule(const Rule& rule, const std::vector<FuzzifiedInput>& inputs);

// Full Mamdani pass. crisp_inputs must provide exactly the rulebase's
// input variables; throws Error{Reference} on extra or missing names and
// Error{NoActivation} when no rule fires.
InferenceResult infer(const RuleBase& rulebase, const InferenceConfig& config,
                      const std::map<std::string, double>& crisp_inputs);

// Throws Error{NoActivation} when the set is identically zero.
double defuzzify(const AggregatedSet& set, DefuzzMethod method);

}  // namespace dreadfuzz::fuzzy
