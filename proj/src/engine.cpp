// Mamdani pipeline: fuzzify crisp inputs, fire rules with min AND and
// multiplicative weights, truncate each fired consequent at its
// activation, aggregate by pointwise max on a uniform grid, defuzzify.

#include <cstddef>
#include <optional>
#include <vector>

#include "dreadfuzz/errors.hpp"
#include "dreadfuzz/fuzzy.hpp"
#include "dreadfuzz/kernels.hpp"
#include "dreadfuzz/text.hpp"

namespace dreadfuzz::fuzzy {
namespace {

[[noreturn]] void throw_no_activation() {
    throw Error(ErrorKind::NoActivation,
                "aggregated membership is identically zero, no rule fired");
}

}  // namespace

double eval_mf(const MembershipFunction& mf, double x) { return mf.evaluate(x); }

FuzzifiedInput fuzzify(const LinguisticVariable& variable, double x) {
    if (!(x >= variable.lo() && x <= variable.hi())) {
        throw Error(ErrorKind::Range,
                    "value " + text::to_minimal_string(x) + " for variable '" +
                        variable.name() + "' is outside [" +
                        text::to_minimal_string(variable.lo()) + ", " +
                        text::to_minimal_string(variable.hi()) + "]");
    }
    FuzzifiedInput result;
    result.variable = variable.name();
    result.degrees.reserve(variable.terms().size());
    for (const Term& t : variable.terms()) {
        result.degrees.emplace_back(t.name, t.mf.evaluate(x));
    }
    return result;
}

double fire_rule(const Rule& rule, const std::vector<FuzzifiedInput>& inputs) {
    if (rule.antecedents.empty()) {
        throw Error(ErrorKind::Validation, "rule has no antecedents");
    }
    double activation = 1.0;
    for (const RuleTerm& ant : rule.antecedents) {
        const FuzzifiedInput* found = nullptr;
        for (const FuzzifiedInput& fi : inputs) {
            if (fi.variable == ant.variable) {
                found = &fi;
                break;
            }
        }
        if (found == nullptr) {
            throw Error(ErrorKind::Reference,
                        "no fuzzified input for variable '" + ant.variable + "'");
        }
        const std::optional<double> degree = found->degree(ant.term);
        if (!degree.has_value()) {
            throw Error(ErrorKind::Reference,
                        "variable '" + ant.variable + "' has no term '" +
                            ant.term + "'");
        }
        activation = *degree < activation ? *degree : activation;
    }
    return rule.weight * activation;
}

InferenceResult infer(const RuleBase& rulebase, const InferenceConfig& config,
                      const std::map<std::string, double>& crisp_inputs) {
    config.validate();

    const std::vector<LinguisticVariable>& inputs = rulebase.inputs();
    for (const auto& [name, value] : crisp_inputs) {
        (void)value;
        bool known = false;
        for (const LinguisticVariable& v : inputs) {
            if (v.name() == name) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw Error(ErrorKind::Reference,
                        "unexpected input variable '" + name + "'");
        }
    }

    // Degrees per input variable, aligned with term indices.
    std::vector<std::vector<double>> degrees(inputs.size());
    for (std::size_t vi = 0; vi < inputs.size(); ++vi) {
        const auto it = crisp_inputs.find(inputs[vi].name());
        if (it == crisp_inputs.end()) {
            throw Error(ErrorKind::Reference,
                        "missing input variable '" + inputs[vi].name() + "'");
        }
        const FuzzifiedInput fi = fuzzify(inputs[vi], it->second);
        degrees[vi].reserve(fi.degrees.size());
        for (const auto& [term, degree] : fi.degrees) {
            (void)term;
            degrees[vi].push_back(degree);
        }
    }

    const LinguisticVariable& output = rulebase.output();
    const std::size_t n = static_cast<std::size_t>(config.resolution);
    const double step =
        (output.hi() - output.lo()) / static_cast<double>(n - 1);
    const kernels::Ops& ops = kernels::active();

    InferenceResult result;
    result.aggregated.variable = output.name();
    result.aggregated.lo = output.lo();
    result.aggregated.hi = output.hi();
    result.aggregated.degrees.assign(n, 0.0);

    // Consequent membership grids, sampled once per referenced term.
    std::vector<std::vector<double>> sampled(output.terms().size());
    const std::vector<RuleBase::IndexedRule>& rules = rulebase.indexed_rules();
    for (std::size_t r = 0; r < rules.size(); ++r) {
        const RuleBase::IndexedRule& rule = rules[r];
        double activation = 1.0;
        for (std::size_t vi = 0; vi < rule.input_term.size(); ++vi) {
            const std::size_t ti = rule.input_term[vi];
            if (ti == RuleBase::IndexedRule::kUnused) continue;
            const double d = degrees[vi][ti];
            activation = d < activation ? d : activation;
        }
        activation *= rule.weight;
        if (activation <= 0.0) continue;

        result.fired.push_back({r, activation});
        std::vector<double>& grid = sampled[rule.output_term];
        if (grid.empty()) {
            grid.resize(n);
            ops.mf_sample_grid(grid.data(), n, output.lo(), step,
                               output.terms()[rule.output_term].mf.shape());
        }
        ops.clip_max_accumulate(result.aggregated.degrees.data(), grid.data(),
                                n, activation);
    }

    result.crisp = defuzzify(result.aggregated, config.defuzz);
    return result;
}

double defuzzify(const AggregatedSet& set, DefuzzMethod method) {
    const std::size_t n = set.degrees.size();
    if (n < 2) {
        throw Error(ErrorKind::Validation,
                    "aggregated set needs at least two samples");
    }
    const double step = set.step();
    const kernels::Ops& ops = kernels::active();
    const double* mu = set.degrees.data();

    switch (method) {
        case DefuzzMethod::Coa: {
            const kernels::MomentSums sums = ops.moment_sums(mu, n, set.lo, step);
            if (sums.mass <= 0.0) throw_no_activation();
            return sums.weighted / sums.mass;
        }
        case DefuzzMethod::Boa: {
            const kernels::MomentSums sums = ops.moment_sums(mu, n, set.lo, step);
            if (sums.mass <= 0.0) throw_no_activation();
            const double half = sums.mass / 2.0;
            double cumulative = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                cumulative += mu[i];
                if (cumulative >= half) return set.x_at(i);
            }
            return set.hi;  // unreachable, guards accumulation error
        }
        case DefuzzMethod::Mom:
        case DefuzzMethod::Som:
        case DefuzzMethod::Lom:
            break;
    }

    const double peak = ops.max_degree(mu, n);
    if (peak <= 0.0) throw_no_activation();

    // Truncation writes the exact activation level onto plateau points,
    // so comparing against the peak bitwise is sound.
    if (method == DefuzzMethod::Som) {
        for (std::size_t i = 0; i < n; ++i) {
            if (mu[i] == peak) return set.x_at(i);
        }
    }
    if (method == DefuzzMethod::Lom) {
        for (std::size_t i = n; i-- > 0;) {
            if (mu[i] == peak) return set.x_at(i);
        }
    }
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (mu[i] == peak) {
            sum += set.x_at(i);
            ++count;
        }
    }
    return sum / static_cast<double>(count);
}

}  // namespace dreadfuzz::fuzzy
