// Recursive-descent-free, line-oriented parser. Each line is tokenized
// on whitespace ('{' and '}' self-delimit, '#' cuts a comment) and
// dispatched on its first keyword. Declarations must precede the rules
// that use them. The parser keeps going after an error so one pass
// reports everything; the rulebase is only materialized when no
// error-severity diagnostic was raised.

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dreadfuzz/dsl.hpp"
#include "dreadfuzz/errors.hpp"
#include "dreadfuzz/fuzzy.hpp"

namespace dreadfuzz::dsl {
namespace {

struct Token {
    std::string text;
    int column;  // 1-based byte offset
};

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        const char c = line[i];
        if (c == '#') break;
        if (std::isspace(static_cast<unsigned char>(c)) != 0) {
            ++i;
            continue;
        }
        if (c == '{' || c == '}') {
            out.push_back({std::string(1, c), static_cast<int>(i) + 1});
            ++i;
            continue;
        }
        const std::size_t start = i;
        while (i < line.size()) {
            const char d = line[i];
            if (std::isspace(static_cast<unsigned char>(d)) != 0 || d == '#' ||
                d == '{' || d == '}') {
                break;
            }
            ++i;
        }
        out.push_back({std::string(line.substr(start, i - start)),
                       static_cast<int>(start) + 1});
    }
    return out;
}

bool is_reserved(std::string_view s) {
    static constexpr std::string_view kKeywords[] = {
        "variable", "output", "term",   "rule",  "range",
        "tri",      "trap",   "IF",     "IS",    "AND",
        "OR",       "THEN",   "weight", "defuzz", "resolution",
    };
    for (std::string_view k : kKeywords) {
        if (s == k) return true;
    }
    return false;
}

bool is_valid_name(std::string_view s) {
    if (s.empty() || is_reserved(s)) return false;
    if (std::isalpha(static_cast<unsigned char>(s[0])) == 0 && s[0] != '_') {
        return false;
    }
    for (char c : s) {
        if (std::isalnum(static_cast<unsigned char>(c)) == 0 && c != '_' &&
            c != '-') {
            return false;
        }
    }
    return true;
}

bool parse_double(const std::string& text, double& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc() && res.ptr == end && std::isfinite(out);
}

bool parse_int(const std::string& text, int& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc() && res.ptr == end;
}

struct PendingVariable {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    int line = 0;
    bool is_output = false;
    bool discard = false;  // duplicate declaration, parse but drop
    std::vector<fuzzy::Term> terms;
};

struct PendingRule {
    fuzzy::Rule rule;
    int line = 0;
};

class Parser {
public:
    explicit Parser(std::string_view source) : source_(source) {}

    ParseResult run() {
        std::size_t pos = 0;
        int line_no = 0;
        while (pos <= source_.size()) {
            const std::size_t nl = source_.find('\n', pos);
            std::string_view line =
                source_.substr(pos, nl == std::string_view::npos ? source_.size() - pos
                                                                 : nl - pos);
            ++line_no;
            if (line_no == 1 && line.substr(0, 3) == "\xEF\xBB\xBF") {
                line.remove_prefix(3);
            }
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            handle_line(line_no, tokenize(line));
            if (nl == std::string_view::npos) break;
            pos = nl + 1;
        }
        finish();
        return std::move(result_);
    }

private:
    void error(int line, int column, const char* code, std::string message) {
        result_.diagnostics.push_back(
            {Severity::Error, {line, column}, code, std::move(message)});
    }

    void warning(int line, int column, const char* code, std::string message) {
        result_.diagnostics.push_back(
            {Severity::Warning, {line, column}, code, std::move(message)});
    }

    PendingVariable* find_variable(std::string_view name) {
        for (PendingVariable& v : variables_) {
            if (!v.discard && v.name == name) return &v;
        }
        if (open_ && !open_->discard && open_->name == name) return &*open_;
        return nullptr;
    }

    void handle_line(int line, std::vector<Token> tokens) {
        if (tokens.empty()) return;
        if (open_) {
            handle_block_line(line, tokens);
            return;
        }
        const std::string& head = tokens[0].text;
        if (head == "variable" || head == "output") {
            handle_header(line, tokens);
        } else if (head == "rule") {
            handle_rule(line, tokens);
        } else if (head == "defuzz") {
            handle_defuzz(line, tokens);
        } else if (head == "resolution") {
            handle_resolution(line, tokens);
        } else if (head == "term") {
            error(line, tokens[0].column, "syntax",
                  "'term' is only valid inside a variable block");
        } else {
            error(line, tokens[0].column, "syntax",
                  "unknown keyword '" + head + "'");
        }
    }

    void handle_header(int line, const std::vector<Token>& tokens) {
        const bool is_output = tokens[0].text == "output";
        PendingVariable pending;
        pending.line = line;
        pending.is_output = is_output;

        if (tokens.size() < 2 || !is_valid_name(tokens[1].text)) {
            error(line, tokens.size() < 2 ? tokens[0].column : tokens[1].column,
                  tokens.size() < 2 ? "syntax" : "bad-name",
                  tokens.size() < 2
                      ? "expected a variable name after '" + tokens[0].text + "'"
                      : "'" + tokens[1].text + "' is not a valid name");
            skip_block_if_opened(tokens, pending);
            return;
        }
        pending.name = tokens[1].text;

        if (tokens.size() < 6 || tokens[2].text != "range" ||
            tokens[5].text != "{" || tokens.size() > 6) {
            error(line, tokens[0].column, "syntax",
                  "expected '" + tokens[0].text + " " + pending.name +
                      " range <lo> <hi> {'");
            skip_block_if_opened(tokens, pending);
            return;
        }
        if (!parse_double(tokens[3].text, pending.lo) ||
            !parse_double(tokens[4].text, pending.hi)) {
            error(line, tokens[3].column, "syntax", "expected two numbers after 'range'");
            skip_block_if_opened(tokens, pending);
            return;
        }
        if (pending.lo >= pending.hi) {
            error(line, tokens[3].column, "bad-range",
                  "range of '" + pending.name + "' needs lo < hi");
            pending.discard = true;
        }
        if (find_variable(pending.name) != nullptr) {
            error(line, tokens[1].column, "duplicate-variable",
                  "variable '" + pending.name + "' is already declared");
            pending.discard = true;
        }
        if (is_output && have_output_ && !pending.discard) {
            error(line, tokens[1].column, "multiple-output",
                  "a second output variable is not allowed");
            pending.discard = true;
        }
        open_ = std::move(pending);
    }

    // A malformed header that still contains '{' opens a block, so the
    // term lines that follow are consumed instead of re-diagnosed.
    void skip_block_if_opened(const std::vector<Token>& tokens,
                              PendingVariable& pending) {
        for (const Token& t : tokens) {
            if (t.text == "{") {
                pending.discard = true;
                open_ = std::move(pending);
                return;
            }
        }
    }

    void handle_block_line(int line, const std::vector<Token>& tokens) {
        if (tokens[0].text == "}") {
            if (tokens.size() > 1) {
                error(line, tokens[1].column, "syntax",
                      "unexpected tokens after '}'");
            }
            close_block(line);
            return;
        }
        if (tokens[0].text != "term") {
            error(line, tokens[0].column, "syntax",
                  "expected 'term' or '}' inside a variable block");
            return;
        }
        if (tokens.size() < 3) {
            error(line, tokens[0].column, "syntax",
                  "expected 'term <name> tri|trap <params>'");
            return;
        }
        if (!is_valid_name(tokens[1].text)) {
            error(line, tokens[1].column, "bad-name",
                  "'" + tokens[1].text + "' is not a valid term name");
            return;
        }
        const std::string& name = tokens[1].text;
        for (const fuzzy::Term& t : open_->terms) {
            if (t.name == name) {
                error(line, tokens[1].column, "duplicate-term",
                      "term '" + name + "' is already declared in '" +
                          open_->name + "'");
                return;
            }
        }

        const std::string& kind = tokens[2].text;
        const std::size_t want = kind == "tri" ? 3 : kind == "trap" ? 4 : 0;
        if (want == 0) {
            error(line, tokens[2].column, "syntax",
                  "expected 'tri' or 'trap', found '" + kind + "'");
            return;
        }
        if (tokens.size() != 3 + want) {
            error(line, tokens[2].column, "syntax",
                  "'" + kind + "' takes " + std::to_string(want) + " parameters");
            return;
        }
        double params[4] = {0, 0, 0, 0};
        for (std::size_t i = 0; i < want; ++i) {
            if (!parse_double(tokens[3 + i].text, params[i])) {
                error(line, tokens[3 + i].column, "syntax",
                      "'" + tokens[3 + i].text + "' is not a number");
                return;
            }
        }
        try {
            fuzzy::MembershipFunction mf =
                want == 3 ? fuzzy::MembershipFunction::triangular(params[0],
                                                                  params[1],
                                                                  params[2])
                          : fuzzy::MembershipFunction::trapezoidal(
                                params[0], params[1], params[2], params[3]);
            if (!open_->discard &&
                (mf.support_lo() < open_->lo || mf.support_hi() > open_->hi)) {
                error(line, tokens[3].column, "term-outside-universe",
                      "term '" + name + "' lies outside the range of '" +
                          open_->name + "'");
                return;
            }
            open_->terms.push_back({name, mf});
        } catch (const Error& e) {
            error(line, tokens[3].column, "bad-params", e.what());
        }
    }

    void close_block(int line) {
        PendingVariable pending = std::move(*open_);
        open_.reset();
        if (pending.terms.empty() && !pending.discard) {
            error(pending.line, 1, "empty-variable",
                  "variable '" + pending.name + "' declares no terms");
            return;
        }
        if (pending.discard) return;
        (void)line;
        if (pending.is_output) have_output_ = true;
        result_.source_map.variables.emplace_back(pending.name, pending.line);
        variables_.push_back(std::move(pending));
    }

    void handle_rule(int line, const std::vector<Token>& tokens) {
        for (const Token& t : tokens) {
            if (t.text == "OR") {
                error(line, t.column, "or-unsupported",
                      "OR is reserved, rules combine antecedents with AND");
                return;
            }
        }

        std::size_t i = 1;
        const auto expect = [&](std::string_view word) {
            if (i < tokens.size() && tokens[i].text == word) {
                ++i;
                return true;
            }
            const int col = i < tokens.size() ? tokens[i].column
                                              : tokens.back().column + 1;
            error(line, col, "syntax",
                  "expected '" + std::string(word) + "' in rule");
            return false;
        };
        const auto take_name = [&](const char* what, std::string& out, int& col) {
            if (i >= tokens.size() || !is_valid_name(tokens[i].text)) {
                const int c = i < tokens.size() ? tokens[i].column
                                                : tokens.back().column + 1;
                error(line, c, "syntax",
                      std::string("expected a ") + what + " name in rule");
                return false;
            }
            out = tokens[i].text;
            col = tokens[i].column;
            ++i;
            return true;
        };

        if (!expect("IF")) return;

        fuzzy::Rule rule;
        std::vector<std::pair<int, int>> antecedent_columns;
        while (true) {
            fuzzy::RuleTerm ant;
            int var_col = 0;
            int term_col = 0;
            if (!take_name("variable", ant.variable, var_col)) return;
            if (!expect("IS")) return;
            if (!take_name("term", ant.term, term_col)) return;
            rule.antecedents.push_back(std::move(ant));
            antecedent_columns.emplace_back(var_col, term_col);
            if (i < tokens.size() && tokens[i].text == "AND") {
                ++i;
                continue;
            }
            break;
        }
        if (!expect("THEN")) return;
        int cons_var_col = 0;
        int cons_term_col = 0;
        if (!take_name("variable", rule.consequent.variable, cons_var_col)) return;
        if (!expect("IS")) return;
        if (!take_name("term", rule.consequent.term, cons_term_col)) return;
        if (i < tokens.size() && tokens[i].text == "weight") {
            ++i;
            if (i >= tokens.size() || !parse_double(tokens[i].text, rule.weight)) {
                error(line, i < tokens.size() ? tokens[i].column
                                              : tokens.back().column + 1,
                      "bad-weight", "expected a number after 'weight'");
                return;
            }
            if (rule.weight < 0.0 || rule.weight > 1.0) {
                error(line, tokens[i].column, "bad-weight",
                      "weight must be in [0, 1]");
                return;
            }
            ++i;
        }
        if (i < tokens.size()) {
            error(line, tokens[i].column, "syntax",
                  "unexpected token '" + tokens[i].text + "' after rule");
            return;
        }

        if (!check_rule_semantics(line, rule, antecedent_columns, cons_var_col,
                                  cons_term_col)) {
            return;
        }
        rules_.push_back({std::move(rule), line});
    }

    bool check_rule_semantics(int line, const fuzzy::Rule& rule,
                              const std::vector<std::pair<int, int>>& ant_cols,
                              int cons_var_col, int cons_term_col) {
        bool ok = true;
        std::map<std::string, std::string> pattern;
        for (std::size_t a = 0; a < rule.antecedents.size(); ++a) {
            const fuzzy::RuleTerm& ant = rule.antecedents[a];
            const PendingVariable* var = find_variable(ant.variable);
            if (var == nullptr) {
                error(line, ant_cols[a].first, "unknown-variable",
                      "unknown variable '" + ant.variable + "'");
                ok = false;
                continue;
            }
            if (var->is_output) {
                error(line, ant_cols[a].first, "bad-antecedent",
                      "output variable '" + ant.variable +
                          "' cannot appear in IF");
                ok = false;
                continue;
            }
            bool term_found = false;
            for (const fuzzy::Term& t : var->terms) {
                if (t.name == ant.term) {
                    term_found = true;
                    break;
                }
            }
            if (!term_found) {
                error(line, ant_cols[a].second, "unknown-term",
                      "variable '" + ant.variable + "' has no term '" +
                          ant.term + "'");
                ok = false;
            }
            if (!pattern.emplace(ant.variable, ant.term).second) {
                error(line, ant_cols[a].first, "duplicate-antecedent",
                      "rule constrains '" + ant.variable + "' twice");
                ok = false;
            }
        }

        const PendingVariable* out = find_variable(rule.consequent.variable);
        if (out == nullptr) {
            error(line, cons_var_col, "unknown-variable",
                  "unknown variable '" + rule.consequent.variable + "'");
            return false;
        }
        if (!out->is_output) {
            error(line, cons_var_col, "bad-consequent",
                  "rule must conclude on the output variable, not '" +
                      rule.consequent.variable + "'");
            return false;
        }
        bool cons_term_found = false;
        for (const fuzzy::Term& t : out->terms) {
            if (t.name == rule.consequent.term) {
                cons_term_found = true;
                break;
            }
        }
        if (!cons_term_found) {
            error(line, cons_term_col, "unknown-term",
                  "variable '" + rule.consequent.variable + "' has no term '" +
                      rule.consequent.term + "'");
            return false;
        }
        if (!ok) return false;

        const auto [it, inserted] = seen_patterns_.emplace(pattern, rules_.size());
        if (!inserted) {
            const PendingRule& other = rules_[it->second];
            const bool same = other.rule.consequent.term == rule.consequent.term &&
                              other.rule.weight == rule.weight;
            error(line, ant_cols[0].first,
                  same ? "duplicate-rule" : "conflicting-rules",
                  same ? "rule repeats the rule on line " +
                             std::to_string(other.line)
                       : "rule contradicts the rule on line " +
                             std::to_string(other.line) +
                             " (same IF, different THEN)");
            return false;
        }
        return true;
    }

    void handle_defuzz(int line, const std::vector<Token>& tokens) {
        if (tokens.size() != 2) {
            error(line, tokens[0].column, "bad-directive",
                  "expected 'defuzz <coa|boa|mom|som|lom>'");
            return;
        }
        try {
            const fuzzy::DefuzzMethod method =
                fuzzy::defuzz_method_from_string(tokens[1].text);
            if (result_.overrides.defuzz.has_value()) {
                warning(line, tokens[0].column, "duplicate-directive",
                        "defuzz was already set, the last value wins");
            }
            result_.overrides.defuzz = method;
        } catch (const Error& e) {
            error(line, tokens[1].column, "bad-directive", e.what());
        }
    }

    void handle_resolution(int line, const std::vector<Token>& tokens) {
        int value = 0;
        if (tokens.size() != 2 || !parse_int(tokens[1].text, value)) {
            error(line, tokens[0].column, "bad-directive",
                  "expected 'resolution <integer>'");
            return;
        }
        if (value < 101) {
            error(line, tokens[1].column, "bad-directive",
                  "resolution below minimum 101 (got " + tokens[1].text + ")");
            return;
        }
        if (result_.overrides.resolution.has_value()) {
            warning(line, tokens[0].column, "duplicate-directive",
                    "resolution was already set, the last value wins");
        }
        result_.overrides.resolution = value;
    }

    void finish() {
        if (open_) {
            error(open_->line, 1, "syntax",
                  "variable '" + open_->name + "' block is never closed");
            open_.reset();
        }
        bool have_input = false;
        for (const PendingVariable& v : variables_) {
            if (!v.is_output) have_input = true;
        }
        if (!have_output_) {
            error(0, 0, "missing-output", "document declares no output variable");
        }
        if (!have_input) {
            error(0, 0, "missing-input", "document declares no input variables");
        }
        for (const Diagnostic& d : result_.diagnostics) {
            if (d.severity == Severity::Error) return;
        }

        std::vector<fuzzy::LinguisticVariable> inputs;
        std::optional<fuzzy::LinguisticVariable> output;
        try {
            for (PendingVariable& v : variables_) {
                fuzzy::LinguisticVariable built(v.name, v.lo, v.hi,
                                                 std::move(v.terms));
                if (v.is_output) {
                    output.emplace(std::move(built));
                } else {
                    inputs.push_back(std::move(built));
                }
            }
            std::vector<fuzzy::Rule> rules;
            rules.reserve(rules_.size());
            for (PendingRule& r : rules_) {
                result_.source_map.rules.push_back(r.line);
                rules.push_back(std::move(r.rule));
            }
            result_.rulebase.emplace(std::move(inputs), std::move(*output),
                                     std::move(rules));
        } catch (const Error& e) {
            // Net for anything the per-line checks missed.
            error(0, 0, "invalid-rulebase", e.what());
            result_.rulebase.reset();
            result_.source_map.rules.clear();
        }
    }

    std::string_view source_;
    ParseResult result_;
    std::vector<PendingVariable> variables_;
    std::optional<PendingVariable> open_;
    std::vector<PendingRule> rules_;
    std::map<std::map<std::string, std::string>, std::size_t> seen_patterns_;
    bool have_output_ = false;
};

}  // namespace

ParseResult parse_rulebase(std::string_view source) {
    return Parser(source).run();
}

void ConfigOverrides::apply(fuzzy::InferenceConfig& config) const {
    if (defuzz.has_value()) config.defuzz = *defuzz;
    if (resolution.has_value()) config.resolution = *resolution;
}

}  // namespace dreadfuzz::dsl
