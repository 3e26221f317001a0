#pragma once

// Line-oriented text format for rulebases (.frb). A document declares
// input variables, one output variable, and rules:
//
//   variable Damage range 0 10 {
//     term Low tri 0 2 4
//     term High trap 6 8 10 10
//   }
//   output Risk range 0 50 { ... }
//   rule IF Damage IS High THEN Risk IS High weight 0.9
//   defuzz coa
//   resolution 1001
//
// '#' starts a comment, identifiers are case-sensitive, OR is reserved
// and rejected. serialize_rulebase emits a canonical form that
// re-parses byte-identically.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dreadfuzz/fuzzy.hpp"

namespace dreadfuzz::dsl {

struct Location {
    int line = 0;    // 1-based, 0 for document-level diagnostics
    int column = 0;  // 1-based byte offset in the line
};

enum class Severity {
    Error,
    Warning,
};

// code is a stable machine-readable slug ("syntax", "unknown-term",
// "coverage-gap", ...); message is for humans.
struct Diagnostic {
    Severity severity;
    Location loc;
    std::string code;
    std::string message;
};

// Engine settings a document may override via the defuzz / resolution
// directives. Absent fields mean "keep the caller's default".
struct ConfigOverrides {
    std::optional<fuzzy::DefuzzMethod> defuzz;
    std::optional<int> resolution;

    void apply(fuzzy::InferenceConfig& config) const;
};

// Source lines of the parsed declarations, for diagnostics that are
// raised after parsing (validate()).
struct SourceMap {
    std::vector<std::pair<std::string, int>> variables;  // name -> line
    std::vector<int> rules;                              // rule index -> line
};

struct ParseResult {
    std::optional<fuzzy::RuleBase> rulebase;  // set iff no error diagnostics
    ConfigOverrides overrides;
    std::vector<Diagnostic> diagnostics;
    SourceMap source_map;

    bool ok() const noexcept { return rulebase.has_value(); }
};

ParseResult parse_rulebase(std::string_view source);

// Canonical serialization: declaration order, two-space indent, minimal
// decimals, "weight w" only when w != 1. Directives are never emitted.
std::string serialize_rulebase(const fuzzy::RuleBase& rulebase);
std::string serialize_rule(const fuzzy::Rule& rule);

// Structural lint of an already-built rulebase: unused terms, input
// coverage gaps, crisp input tuples no rule covers. Locations resolve
// through source_map when given. Returns only warnings; hard errors are
// construction/parse failures.
std::vector<Diagnostic> validate(const fuzzy::RuleBase& rulebase,
                                 const SourceMap* source_map = nullptr);

}  // namespace dreadfuzz::dsl
