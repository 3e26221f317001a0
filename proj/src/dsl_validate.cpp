// Lint for structurally valid rulebases. Everything here is a warning:
// the rulebase works, but some part of it is probably not what the
// author intended.

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "dreadfuzz/dsl.hpp"
#include "dreadfuzz/text.hpp"

namespace dreadfuzz::dsl {
namespace {

using fuzzy::LinguisticVariable;
using fuzzy::RuleBase;

int line_of_variable(const SourceMap* sm, const std::string& name) {
    if (sm == nullptr) return 0;
    for (const auto& [var, line] : sm->variables) {
        if (var == name) return line;
    }
    return 0;
}

void warn(std::vector<Diagnostic>& out, int line, const char* code,
          std::string message) {
    out.push_back({Severity::Warning, {line, 0}, code, std::move(message)});
}

void check_unused_terms(const RuleBase& rb, const SourceMap* sm,
                        std::vector<Diagnostic>& out) {
    std::vector<std::vector<bool>> used_input(rb.inputs().size());
    for (std::size_t vi = 0; vi < rb.inputs().size(); ++vi) {
        used_input[vi].assign(rb.inputs()[vi].terms().size(), false);
    }
    std::vector<bool> used_output(rb.output().terms().size(), false);

    for (const RuleBase::IndexedRule& rule : rb.indexed_rules()) {
        for (std::size_t vi = 0; vi < rule.input_term.size(); ++vi) {
            if (rule.input_term[vi] != RuleBase::IndexedRule::kUnused) {
                used_input[vi][rule.input_term[vi]] = true;
            }
        }
        used_output[rule.output_term] = true;
    }

    const auto report = [&](const LinguisticVariable& var,
                            const std::vector<bool>& used) {
        for (std::size_t ti = 0; ti < used.size(); ++ti) {
            if (!used[ti]) {
                warn(out, line_of_variable(sm, var.name()), "unused-term",
                     "term '" + var.terms()[ti].name + "' of variable '" +
                         var.name() + "' is never used by a rule");
            }
        }
    };
    for (std::size_t vi = 0; vi < rb.inputs().size(); ++vi) {
        report(rb.inputs()[vi], used_input[vi]);
    }
    report(rb.output(), used_output);
}

void check_coverage(const LinguisticVariable& var, const SourceMap* sm,
                    std::vector<Diagnostic>& out) {
    constexpr std::size_t kSamples = 1001;
    const double step = (var.hi() - var.lo()) / double(kSamples - 1);

    bool in_gap = false;
    double gap_start = 0.0;
    double gap_end = 0.0;
    const auto flush = [&]() {
        if (!in_gap) return;
        warn(out, line_of_variable(sm, var.name()), "coverage-gap",
             "no term of '" + var.name() + "' covers [" +
                 text::to_minimal_string(gap_start) + ", " +
                 text::to_minimal_string(gap_end) + "]");
        in_gap = false;
    };

    for (std::size_t i = 0; i < kSamples; ++i) {
        const double x = var.lo() + double(i) * step;
        double best = 0.0;
        for (const fuzzy::Term& t : var.terms()) {
            const double d = t.mf.evaluate(x);
            best = d > best ? d : best;
        }
        if (best <= 0.0) {
            if (!in_gap) {
                in_gap = true;
                gap_start = x;
            }
            gap_end = x;
        } else {
            flush();
        }
    }
    flush();
}

// Probes the crisp tuples made of each term's peak midpoint and reports
// the first combination no rule fires for. Skipped for rule-less bases
// and when the tuple space is too large to enumerate.
void check_rule_gaps(const RuleBase& rb, std::vector<Diagnostic>& out) {
    constexpr std::size_t kMaxTuples = 100000;

    const std::vector<LinguisticVariable>& inputs = rb.inputs();
    std::size_t tuple_count = 1;
    for (const LinguisticVariable& v : inputs) {
        if (v.terms().size() > kMaxTuples / tuple_count) return;
        tuple_count *= v.terms().size();
    }

    // reps[vi][k]: peak midpoint of term k; degrees[vi][k][t]: membership
    // of term t at that point.
    std::vector<std::vector<double>> reps(inputs.size());
    std::vector<std::vector<std::vector<double>>> degrees(inputs.size());
    for (std::size_t vi = 0; vi < inputs.size(); ++vi) {
        const auto& terms = inputs[vi].terms();
        reps[vi].resize(terms.size());
        degrees[vi].resize(terms.size());
        for (std::size_t k = 0; k < terms.size(); ++k) {
            const kernels::Trapezoid& shape = terms[k].mf.shape();
            const double rep = (shape.b + shape.c) / 2.0;
            reps[vi][k] = rep;
            degrees[vi][k].resize(terms.size());
            for (std::size_t t = 0; t < terms.size(); ++t) {
                degrees[vi][k][t] = terms[t].mf.evaluate(rep);
            }
        }
    }

    // Tuples whose exact pattern appears as a liable rule never need the
    // full scan below.
    std::set<std::vector<std::size_t>> firing_patterns;
    for (const RuleBase::IndexedRule& rule : rb.indexed_rules()) {
        if (rule.weight > 0.0) firing_patterns.insert(rule.input_term);
    }

    std::vector<std::size_t> tuple(inputs.size(), 0);
    std::size_t misses = 0;
    std::string first_example;
    for (std::size_t n = 0; n < tuple_count; ++n) {
        bool covered = firing_patterns.count(tuple) > 0;
        if (!covered) {
            for (const RuleBase::IndexedRule& rule : rb.indexed_rules()) {
                if (rule.weight <= 0.0) continue;
                double act = 1.0;
                for (std::size_t vi = 0; vi < inputs.size(); ++vi) {
                    const std::size_t ti = rule.input_term[vi];
                    if (ti == RuleBase::IndexedRule::kUnused) continue;
                    const double d = degrees[vi][tuple[vi]][ti];
                    act = d < act ? d : act;
                    if (act <= 0.0) break;
                }
                if (act > 0.0) {
                    covered = true;
                    break;
                }
            }
        }
        if (!covered) {
            ++misses;
            if (first_example.empty()) {
                for (std::size_t vi = 0; vi < inputs.size(); ++vi) {
                    if (vi > 0) first_example += ", ";
                    first_example += inputs[vi].name() + "=" +
                                     text::to_minimal_string(reps[vi][tuple[vi]]);
                }
            }
        }
        // advance odometer
        for (std::size_t vi = inputs.size(); vi-- > 0;) {
            if (++tuple[vi] < inputs[vi].terms().size()) break;
            tuple[vi] = 0;
        }
    }

    if (misses > 0) {
        std::string message = "no rule fires at " + first_example;
        if (misses > 1) {
            message += " (" + std::to_string(misses - 1) +
                       " further uncovered combinations)";
        }
        warn(out, 0, "rule-gap", std::move(message));
    }
}

}  // namespace

std::vector<Diagnostic> validate(const fuzzy::RuleBase& rulebase,
                                 const SourceMap* source_map) {
    std::vector<Diagnostic> out;

    for (const LinguisticVariable& v : rulebase.inputs()) {
        check_coverage(v, source_map, out);
    }
    check_coverage(rulebase.output(), source_map, out);

    if (rulebase.rules().empty()) {
        warn(out, 0, "no-rules", "rulebase declares no rules");
        return out;
    }
    check_unused_terms(rulebase, source_map, out);
    check_rule_gaps(rulebase, out);
    return out;
}

}  // namespace dreadfuzz::dsl
