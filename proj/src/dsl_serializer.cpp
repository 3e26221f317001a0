#include <string>

#include "dreadfuzz/dsl.hpp"
#include "dreadfuzz/text.hpp"

namespace dreadfuzz::dsl {
namespace {

void append_block(std::string& out, const char* keyword,
                  const fuzzy::LinguisticVariable& variable) {
    out += keyword;
    out += ' ';
    out += variable.name();
    out += " range ";
    out += text::to_minimal_string(variable.lo());
    out += ' ';
    out += text::to_minimal_string(variable.hi());
    out += " {\n";
    for (const fuzzy::Term& term : variable.terms()) {
        out += "  term ";
        out += term.name;
        out += term.mf.kind() == fuzzy::MfKind::Triangular ? " tri" : " trap";
        for (double p : term.mf.params()) {
            out += ' ';
            out += text::to_minimal_string(p);
        }
        out += '\n';
    }
    out += "}\n";
}

}  // namespace

std::string serialize_rule(const fuzzy::Rule& rule) {
    std::string out = "rule IF ";
    for (std::size_t i = 0; i < rule.antecedents.size(); ++i) {
        if (i > 0) out += " AND ";
        out += rule.antecedents[i].variable;
        out += " IS ";
        out += rule.antecedents[i].term;
    }
    out += " THEN ";
    out += rule.consequent.variable;
    out += " IS ";
    out += rule.consequent.term;
    if (rule.weight != 1.0) {
        out += " weight ";
        out += text::to_minimal_string(rule.weight);
    }
    return out;
}

std::string serialize_rulebase(const fuzzy::RuleBase& rulebase) {
    std::string out;
    for (const fuzzy::LinguisticVariable& v : rulebase.inputs()) {
        append_block(out, "variable", v);
        out += '\n';
    }
    append_block(out, "output", rulebase.output());
    if (!rulebase.rules().empty()) {
        out += '\n';
        for (const fuzzy::Rule& rule : rulebase.rules()) {
            out += serialize_rule(rule);
            out += '\n';
        }
    }
    return out;
}

}  // namespace dreadfuzz::dsl
