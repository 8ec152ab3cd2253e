#pragma once

#include <string>
#include <variant>
#include <vector>

#include "sliceq/errors.hpp"

namespace sliceq {

/// A word is a sequence of terminal tokens (tokens may be multi-character).
using Word = std::vector<std::string>;

std::string format_word(const Word& w);  // tokens joined by single spaces

struct TerminalRule {
    std::string head;
    std::string letter;
    friend auto operator<=>(const TerminalRule&, const TerminalRule&) = default;
};

struct BinaryRule {
    std::string head;
    std::string left;
    std::string right;
    friend auto operator<=>(const BinaryRule&, const BinaryRule&) = default;
};

using Rule = std::variant<TerminalRule, BinaryRule>;

/// Grammar in strict Chomsky normal form: every rule is either `head -> 'a'`
/// or `head -> left right`. No epsilon rules, no unit rules, so no word of
/// length 0 is ever generated. Values are immutable by convention: build one
/// with parse_grammar / normalize_to_cnf and treat it as read-only.
struct Grammar {
    std::vector<std::string> alphabet;      // sorted, unique terminal tokens
    std::vector<std::string> nonterminals;  // sorted, unique names
    std::vector<Rule> rules;                // sorted by serialized form
    std::string start;

    size_t size() const { return rules.size(); }  // |G| = number of rules
    friend bool operator==(const Grammar&, const Grammar&) = default;
};

/// One right-hand-side symbol of a general (not necessarily CNF) rule.
struct Symbol {
    bool is_terminal = false;
    std::string text;
    friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

struct GeneralRule {
    std::string head;
    std::vector<Symbol> rhs;  // may be empty (epsilon rule)
    friend auto operator<=>(const GeneralRule&, const GeneralRule&) = default;
};

/// Arbitrary context-free grammar, the input of normalize_to_cnf.
struct GeneralGrammar {
    std::vector<std::string> alphabet;
    std::vector<std::string> nonterminals;
    std::vector<GeneralRule> rules;
    std::string start;
};

enum class ViolationKind {
    epsilon_rule,
    unit_rule,
    malformed_rhs,
    undeclared_symbol,
    duplicate_rule,
    missing_start,
    symbol_clash,  // same token used as terminal and nonterminal
};

struct Violation {
    ViolationKind kind;
    std::string message;
};

/// Parses the grammar file format, accepting only strict CNF rule shapes.
/// Throws ParseError (with 1-based line/column) on any deviation.
Grammar parse_grammar(const std::string& text);

/// Parses the same file format but accepts arbitrary right-hand sides,
/// including empty ones (epsilon rules).
GeneralGrammar parse_general_grammar(const std::string& text);

/// Canonical text form: start line first, then one rule per line, lines
/// sorted lexicographically. parse_grammar(serialize(g)) == g.
std::string serialize(const Grammar& g);

/// Reports every way `g` fails to be a valid CNF grammar. Empty iff valid.
std::vector<Violation> validate_cnf(const GeneralGrammar& g);

/// Residual checks for the strict type (shape is guaranteed by construction):
/// declared symbols, unique rules, start membership, no terminal/nonterminal
/// name clash. Empty iff valid.
std::vector<Violation> validate(const Grammar& g);

struct NormalizeResult {
    Grammar grammar;
    bool derives_epsilon;  // whether the *input* generated the empty word
};

/// Converts a general grammar to strict CNF, preserving the number of
/// derivations of every word of length >= 1 (so unambiguity survives on every
/// slice). The empty word cannot be represented in CNF; whether the input
/// derived it is returned as a flag instead.
///
/// Throws NormalizeError when preservation is impossible: unit-rule cycles,
/// and any configuration where elimination would have to produce the same
/// CNF rule with multiplicity >= 2 (e.g. a symbol with two distinct epsilon
/// derivations that gets erased, or two unit chains reaching the same rule).
NormalizeResult normalize_to_cnf(const GeneralGrammar& g);

}  // namespace sliceq
