#include "sliceq/grammar.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <utility>

namespace sliceq {

std::string format_word(const Word& w) {
    std::string out;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) out += ' ';
        out += w[i];
    }
    return out;
}

namespace {

struct Token {
    enum Kind { ident, terminal, arrow, pipe } kind;
    std::string text;
    int column;  // 1-based
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Tokenizes one line. `#` starts a comment (outside quotes), `'...'` is a
// terminal token, `->` and `|` are punctuation, everything else is an
// identifier run.
std::vector<Token> scan_line(const std::string& line, int line_no) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (is_space(c)) {
            ++i;
            continue;
        }
        if (c == '#') break;
        int col = static_cast<int>(i) + 1;
        if (c == '\'') {
            size_t j = i + 1;
            std::string tok;
            while (j < line.size() && line[j] != '\'') {
                if (is_space(line[j]))
                    throw ParseError("terminal token must not contain whitespace", line_no, col);
                tok += line[j++];
            }
            if (j >= line.size())
                throw ParseError("unterminated terminal token", line_no, col);
            if (tok.empty())
                throw ParseError("terminal token must be non-empty", line_no, col);
            out.push_back({Token::terminal, tok, col});
            i = j + 1;
            continue;
        }
        if (c == '|') {
            out.push_back({Token::pipe, "|", col});
            ++i;
            continue;
        }
        if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
            out.push_back({Token::arrow, "->", col});
            i += 2;
            continue;
        }
        // identifier: runs until whitespace, quote, pipe, comment or an arrow
        std::string tok;
        while (i < line.size()) {
            char d = line[i];
            if (is_space(d) || d == '\'' || d == '|' || d == '#') break;
            if (d == '-' && i + 1 < line.size() && line[i + 1] == '>') break;
            tok += d;
            ++i;
        }
        out.push_back({Token::ident, tok, col});
    }
    return out;
}

std::string rhs_to_text(const std::vector<Symbol>& rhs) {
    std::string s;
    for (const auto& sym : rhs) {
        s += ' ';
        if (sym.is_terminal)
            s += "'" + sym.text + "'";
        else
            s += sym.text;
    }
    return s;
}

struct ParsedRule {
    GeneralRule rule;
    int line;
    int column;
};

struct ParsedFile {
    std::string start;
    std::vector<ParsedRule> rules;
};

// Shared parser for both the strict and the general format. When `strict`,
// every alternative must already have a CNF shape.
ParsedFile parse_file(const std::string& text, bool strict) {
    ParsedFile file;
    bool start_seen = false;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    std::set<std::pair<std::string, std::vector<Symbol>>> seen;

    while (std::getline(in, line)) {
        ++line_no;
        auto toks = scan_line(line, line_no);
        if (toks.empty()) continue;

        if (!start_seen) {
            if (toks[0].kind != Token::ident || toks[0].text != "start")
                throw ParseError("first line must be 'start <nonterminal>'", line_no,
                                 toks[0].column);
            if (toks.size() < 2 || toks[1].kind != Token::ident)
                throw ParseError("expected a nonterminal name after 'start'", line_no,
                                 toks.size() < 2 ? toks[0].column : toks[1].column);
            if (toks.size() > 2)
                throw ParseError("unexpected token after start declaration", line_no,
                                 toks[2].column);
            file.start = toks[1].text;
            start_seen = true;
            continue;
        }

        if (toks[0].kind != Token::ident)
            throw ParseError("rule head must be a nonterminal", line_no, toks[0].column);
        if (toks.size() < 2 || toks[1].kind != Token::arrow)
            throw ParseError("expected '->' after rule head", line_no,
                             toks.size() < 2 ? toks[0].column : toks[1].column);
        const std::string head = toks[0].text;

        // Split the remaining tokens into |-separated alternatives.
        std::vector<std::pair<std::vector<Symbol>, int>> alts;  // (rhs, column)
        alts.emplace_back(std::vector<Symbol>{}, toks.size() > 2 ? toks[2].column : toks[1].column);
        for (size_t k = 2; k < toks.size(); ++k) {
            const Token& t = toks[k];
            if (t.kind == Token::pipe) {
                int next_col = k + 1 < toks.size() ? toks[k + 1].column : t.column;
                alts.emplace_back(std::vector<Symbol>{}, next_col);
            } else if (t.kind == Token::arrow) {
                throw ParseError("unexpected '->'", line_no, t.column);
            } else {
                alts.back().first.push_back({t.kind == Token::terminal, t.text});
            }
        }

        for (auto& [rhs, col] : alts) {
            if (strict) {
                bool term_shape = rhs.size() == 1 && rhs[0].is_terminal;
                bool bin_shape =
                    rhs.size() == 2 && !rhs[0].is_terminal && !rhs[1].is_terminal;
                if (rhs.empty())
                    throw ParseError(
                        "empty right-hand side: Chomsky normal form has no epsilon rules",
                        line_no, col);
                if (rhs.size() == 1 && !rhs[0].is_terminal)
                    throw ParseError(
                        "unit rule: Chomsky normal form has no nonterminal-to-nonterminal rules",
                        line_no, col);
                if (!term_shape && !bin_shape)
                    throw ParseError(
                        "rule is not in Chomsky normal form: expected a quoted terminal "
                        "or two nonterminals",
                        line_no, col);
            }
            if (!seen.insert({head, rhs}).second)
                throw ParseError("duplicate rule '" + head + " ->" + rhs_to_text(rhs) + "'",
                                 line_no, col);
            file.rules.push_back({GeneralRule{head, std::move(rhs)}, line_no, col});
        }
    }

    if (!start_seen) throw ParseError("missing start declaration", 1, 1);

    // Implicit declarations: a nonterminal is declared by heading a rule or by
    // being the start symbol. Terminals are declared by being quoted.
    std::set<std::string> declared{file.start};
    for (const auto& pr : file.rules) declared.insert(pr.rule.head);
    std::set<std::string> letters;
    for (const auto& pr : file.rules)
        for (const auto& sym : pr.rule.rhs) {
            if (sym.is_terminal) {
                letters.insert(sym.text);
            } else if (!declared.count(sym.text)) {
                throw ParseError("undeclared nonterminal '" + sym.text + "'", pr.line,
                                 pr.column);
            }
        }
    for (const auto& pr : file.rules) {
        if (letters.count(pr.rule.head))
            throw ParseError("'" + pr.rule.head + "' is used both as a nonterminal and a terminal",
                             pr.line, pr.column);
    }
    if (letters.count(file.start))
        throw ParseError("'" + file.start + "' is used both as the start symbol and a terminal",
                         1, 1);
    return file;
}

std::vector<std::string> sorted_unique(std::set<std::string> s) {
    return {s.begin(), s.end()};
}

GeneralGrammar to_general(ParsedFile&& file) {
    GeneralGrammar g;
    g.start = file.start;
    std::set<std::string> letters, nts{file.start};
    for (auto& pr : file.rules) {
        nts.insert(pr.rule.head);
        for (const auto& sym : pr.rule.rhs)
            (sym.is_terminal ? letters : nts).insert(sym.text);
        g.rules.push_back(std::move(pr.rule));
    }
    g.alphabet = sorted_unique(std::move(letters));
    g.nonterminals = sorted_unique(std::move(nts));
    return g;
}

std::string rule_line(const Rule& r) {
    if (const auto* t = std::get_if<TerminalRule>(&r))
        return t->head + " -> '" + t->letter + "'";
    const auto& b = std::get<BinaryRule>(r);
    return b.head + " -> " + b.left + " " + b.right;
}

// Builds a strict Grammar from CNF-shaped general rules, deriving the symbol
// sets and sorting the rules into serialization order.
Grammar assemble(std::vector<GeneralRule> rules, const std::string& start) {
    Grammar g;
    g.start = start;
    std::set<std::string> letters, nts{start};
    for (auto& r : rules) {
        nts.insert(r.head);
        if (r.rhs.size() == 1) {
            letters.insert(r.rhs[0].text);
            g.rules.push_back(TerminalRule{r.head, r.rhs[0].text});
        } else {
            nts.insert(r.rhs[0].text);
            nts.insert(r.rhs[1].text);
            g.rules.push_back(BinaryRule{r.head, r.rhs[0].text, r.rhs[1].text});
        }
    }
    g.alphabet = sorted_unique(std::move(letters));
    g.nonterminals = sorted_unique(std::move(nts));
    std::sort(g.rules.begin(), g.rules.end(),
              [](const Rule& a, const Rule& b) { return rule_line(a) < rule_line(b); });
    return g;
}

}  // namespace

Grammar parse_grammar(const std::string& text) {
    ParsedFile file = parse_file(text, /*strict=*/true);
    std::vector<GeneralRule> rules;
    rules.reserve(file.rules.size());
    for (auto& pr : file.rules) rules.push_back(std::move(pr.rule));
    return assemble(std::move(rules), file.start);
}

GeneralGrammar parse_general_grammar(const std::string& text) {
    return to_general(parse_file(text, /*strict=*/false));
}

std::string serialize(const Grammar& g) {
    std::vector<std::string> lines;
    lines.reserve(g.rules.size());
    for (const auto& r : g.rules) lines.push_back(rule_line(r));
    std::sort(lines.begin(), lines.end());
    std::string out = "start " + g.start + "\n";
    for (const auto& l : lines) out += l + "\n";
    return out;
}

namespace {

void check_common(const std::vector<std::string>& alphabet,
                  const std::vector<std::string>& nonterminals, const std::string& start,
                  std::vector<Violation>& out) {
    std::set<std::string> letters(alphabet.begin(), alphabet.end());
    std::set<std::string> nts(nonterminals.begin(), nonterminals.end());
    if (start.empty() || !nts.count(start))
        out.push_back({ViolationKind::missing_start,
                       "start symbol '" + start + "' is not a declared nonterminal"});
    for (const auto& a : alphabet)
        if (nts.count(a))
            out.push_back({ViolationKind::symbol_clash,
                           "'" + a + "' is both a terminal token and a nonterminal name"});
}

void check_symbol(const std::set<std::string>& nts, const std::string& name,
                  std::vector<Violation>& out) {
    if (!nts.count(name))
        out.push_back({ViolationKind::undeclared_symbol,
                       "rule references undeclared nonterminal '" + name + "'"});
}

}  // namespace

std::vector<Violation> validate_cnf(const GeneralGrammar& g) {
    std::vector<Violation> out;
    check_common(g.alphabet, g.nonterminals, g.start, out);
    std::set<std::string> nts(g.nonterminals.begin(), g.nonterminals.end());
    std::set<std::string> letters(g.alphabet.begin(), g.alphabet.end());
    std::set<std::pair<std::string, std::vector<Symbol>>> seen;
    for (const auto& r : g.rules) {
        std::string id = r.head + " ->" + rhs_to_text(r.rhs);
        check_symbol(nts, r.head, out);
        for (const auto& sym : r.rhs) {
            if (sym.is_terminal) {
                if (!letters.count(sym.text))
                    out.push_back({ViolationKind::undeclared_symbol,
                                   "rule references undeclared terminal '" + sym.text + "'"});
            } else {
                check_symbol(nts, sym.text, out);
            }
        }
        if (r.rhs.empty())
            out.push_back({ViolationKind::epsilon_rule, "epsilon rule '" + id + "'"});
        else if (r.rhs.size() == 1 && !r.rhs[0].is_terminal)
            out.push_back({ViolationKind::unit_rule, "unit rule '" + id + "'"});
        else if (!(r.rhs.size() == 1 && r.rhs[0].is_terminal) &&
                 !(r.rhs.size() == 2 && !r.rhs[0].is_terminal && !r.rhs[1].is_terminal))
            out.push_back({ViolationKind::malformed_rhs,
                           "rule '" + id + "' is not a terminal or binary rule"});
        if (!seen.insert({r.head, r.rhs}).second)
            out.push_back({ViolationKind::duplicate_rule, "duplicate rule '" + id + "'"});
    }
    return out;
}

std::vector<Violation> validate(const Grammar& g) {
    std::vector<Violation> out;
    check_common(g.alphabet, g.nonterminals, g.start, out);
    std::set<std::string> nts(g.nonterminals.begin(), g.nonterminals.end());
    std::set<std::string> letters(g.alphabet.begin(), g.alphabet.end());
    std::set<std::string> seen;
    for (const auto& r : g.rules) {
        if (const auto* t = std::get_if<TerminalRule>(&r)) {
            check_symbol(nts, t->head, out);
            if (!letters.count(t->letter))
                out.push_back({ViolationKind::undeclared_symbol,
                               "rule references undeclared terminal '" + t->letter + "'"});
        } else {
            const auto& b = std::get<BinaryRule>(r);
            check_symbol(nts, b.head, out);
            check_symbol(nts, b.left, out);
            check_symbol(nts, b.right, out);
        }
        if (!seen.insert(rule_line(r)).second)
            out.push_back({ViolationKind::duplicate_rule, "duplicate rule '" + rule_line(r) + "'"});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

namespace {

// Saturating derivation-way counter: 0, 1, or 2 meaning "two or more".
int sat_add(int a, int b) { return std::min(2, a + b); }
int sat_mul(int a, int b) { return std::min(2, a * b); }

using RuleVec = std::vector<GeneralRule>;

std::string general_rule_text(const GeneralRule& r) {
    return r.head + " ->" + rhs_to_text(r.rhs);
}

// Number of distinct epsilon derivations per nonterminal, saturated at 2.
std::map<std::string, int> epsilon_ways(const RuleVec& rules) {
    std::map<std::string, int> ways;
    for (const auto& r : rules) ways.emplace(r.head, 0);
    bool changed = true;
    while (changed) {
        changed = false;
        std::map<std::string, int> next = ways;
        for (auto& [nt, w] : next) w = 0;
        for (const auto& r : rules) {
            int prod = 1;
            for (const auto& sym : r.rhs) {
                if (sym.is_terminal) {
                    prod = 0;
                    break;
                }
                auto it = ways.find(sym.text);
                prod = sat_mul(prod, it == ways.end() ? 0 : it->second);
                if (prod == 0) break;
            }
            next[r.head] = sat_add(next[r.head], prod);
        }
        if (next != ways) {
            ways = std::move(next);
            changed = true;
        }
    }
    return ways;
}

class NamePool {
public:
    explicit NamePool(const GeneralGrammar& g) {
        used_.insert(g.alphabet.begin(), g.alphabet.end());
        used_.insert(g.nonterminals.begin(), g.nonterminals.end());
    }
    std::string fresh(const std::string& base) {
        if (used_.insert(base).second) return base;
        for (int k = 2;; ++k) {
            std::string cand = base + "_" + std::to_string(k);
            if (used_.insert(cand).second) return cand;
        }
    }

private:
    std::set<std::string> used_;
};

RuleVec reachable_rules(const RuleVec& rules, const std::string& start) {
    std::set<std::string> reach{start};
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& r : rules) {
            if (!reach.count(r.head)) continue;
            for (const auto& sym : r.rhs)
                if (!sym.is_terminal && reach.insert(sym.text).second) changed = true;
        }
    }
    RuleVec out;
    for (const auto& r : rules)
        if (reach.count(r.head)) out.push_back(r);
    return out;
}

// Replaces terminals inside rules of length >= 2 with wrapper nonterminals.
RuleVec wrap_terminals(const RuleVec& rules, NamePool& pool) {
    std::map<std::string, std::string> wrapper;
    RuleVec out;
    RuleVec wrappers;
    for (const auto& r : rules) {
        if (r.rhs.size() < 2) {
            out.push_back(r);
            continue;
        }
        GeneralRule nr{r.head, {}};
        for (const auto& sym : r.rhs) {
            if (!sym.is_terminal) {
                nr.rhs.push_back(sym);
                continue;
            }
            auto it = wrapper.find(sym.text);
            if (it == wrapper.end()) {
                std::string name = pool.fresh("T_" + sym.text);
                it = wrapper.emplace(sym.text, name).first;
                wrappers.push_back({name, {Symbol{true, sym.text}}});
            }
            nr.rhs.push_back(Symbol{false, it->second});
        }
        out.push_back(std::move(nr));
    }
    out.insert(out.end(), wrappers.begin(), wrappers.end());
    return out;
}

// Splits rules with right-hand sides longer than 2 into chains of binary
// rules with fresh intermediate nonterminals (one chain per rule, so the
// derivation-tree correspondence is a bijection).
RuleVec binarize(const RuleVec& rules, NamePool& pool) {
    RuleVec out;
    for (const auto& r : rules) {
        if (r.rhs.size() <= 2) {
            out.push_back(r);
            continue;
        }
        std::string head = r.head;
        for (size_t i = 0; i + 2 < r.rhs.size(); ++i) {
            std::string tail = pool.fresh(r.head + "_" + std::to_string(i + 1));
            out.push_back({head, {r.rhs[i], Symbol{false, tail}}});
            head = tail;
        }
        out.push_back({head, {r.rhs[r.rhs.size() - 2], r.rhs.back()}});
    }
    return out;
}

// Removes epsilon rules. Every accepted output rule keeps multiplicity 1;
// anything that would need a duplicate CNF rule is rejected, because rule
// sets cannot carry multiplicities and derivation counts would change.
RuleVec eliminate_epsilon(const RuleVec& rules, const std::map<std::string, int>& eps) {
    auto ways = [&](const Symbol& s) {
        if (s.is_terminal) return 0;
        auto it = eps.find(s.text);
        return it == eps.end() ? 0 : it->second;
    };
    std::map<std::pair<std::string, std::vector<Symbol>>, int> weight;
    for (const auto& r : rules) {
        size_t k = r.rhs.size();  // 0, 1 or 2 at this point
        for (size_t mask = 0; mask < (size_t{1} << k); ++mask) {
            std::vector<Symbol> kept;
            int w = 1;
            for (size_t i = 0; i < k; ++i) {
                if (mask & (size_t{1} << i))
                    w = sat_mul(w, ways(r.rhs[i]));  // erase position i
                else
                    kept.push_back(r.rhs[i]);
            }
            if (w == 0 || kept.empty()) continue;
            int& slot = weight[{r.head, std::move(kept)}];
            slot = sat_add(slot, w);
        }
    }
    RuleVec out;
    for (auto& [key, w] : weight) {
        if (w >= 2)
            throw NormalizeError(
                "cannot preserve derivation counts: epsilon elimination would produce rule '" +
                general_rule_text({key.first, key.second}) + "' with multiplicity >= 2");
        out.push_back({key.first, key.second});
    }
    return out;
}

// Removes unit rules from an epsilon-free grammar, counting distinct unit
// chains. Cycles and chain multiplicities >= 2 are rejected.
RuleVec eliminate_units(const RuleVec& rules) {
    std::map<std::string, std::vector<std::string>> unit_edges;
    RuleVec payload;  // non-unit rules
    std::set<std::string> nts;
    for (const auto& r : rules) {
        nts.insert(r.head);
        if (r.rhs.size() == 1 && !r.rhs[0].is_terminal)
            unit_edges[r.head].push_back(r.rhs[0].text);
        else
            payload.push_back(r);
    }

    // DFS over unit edges: grey node re-entered means a unit cycle.
    std::map<std::string, int> colour;  // 0 white, 1 grey, 2 black
    std::map<std::string, std::map<std::string, int>> reach;  // A -> (C -> #chains)
    auto dfs = [&](auto&& self, const std::string& a) -> void {
        colour[a] = 1;
        auto& r = reach[a];
        r[a] = 1;
        for (const auto& b : unit_edges[a]) {
            if (colour[b] == 1)
                throw NormalizeError("unit-rule cycle through '" + b + "'");
            if (colour[b] == 0) self(self, b);
            for (const auto& [c, w] : reach[b]) r[c] = sat_add(r[c], w);
        }
        colour[a] = 2;
    };
    for (const auto& nt : nts)
        if (colour[nt] == 0) dfs(dfs, nt);

    std::map<std::pair<std::string, std::vector<Symbol>>, int> weight;
    for (const auto& [a, targets] : reach)
        for (const auto& [c, chains] : targets)
            for (const auto& r : payload) {
                if (r.head != c) continue;
                int& slot = weight[{a, r.rhs}];
                slot = sat_add(slot, chains);
            }
    RuleVec out;
    for (auto& [key, w] : weight) {
        if (w >= 2)
            throw NormalizeError(
                "cannot preserve derivation counts: unit-rule chains would produce rule '" +
                general_rule_text({key.first, key.second}) + "' with multiplicity >= 2");
        out.push_back({key.first, key.second});
    }
    return out;
}

// Drops rules involving unproductive symbols, then rules unreachable from the
// start symbol. Neither step changes derivations from the start symbol.
RuleVec prune_useless(const RuleVec& rules, const std::string& start) {
    std::set<std::string> productive;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& r : rules) {
            if (productive.count(r.head)) continue;
            bool ok = true;
            for (const auto& sym : r.rhs)
                if (!sym.is_terminal && !productive.count(sym.text)) ok = false;
            if (ok && productive.insert(r.head).second) changed = true;
        }
    }
    RuleVec alive;
    for (const auto& r : rules) {
        bool ok = productive.count(r.head) > 0;
        for (const auto& sym : r.rhs)
            if (!sym.is_terminal && !productive.count(sym.text)) ok = false;
        if (ok) alive.push_back(r);
    }
    return reachable_rules(alive, start);
}

}  // namespace

NormalizeResult normalize_to_cnf(const GeneralGrammar& g) {
    // Referential problems make count preservation meaningless; fail fast.
    for (const auto& v : validate_cnf(g)) {
        bool structural = v.kind == ViolationKind::undeclared_symbol ||
                          v.kind == ViolationKind::duplicate_rule ||
                          v.kind == ViolationKind::missing_start ||
                          v.kind == ViolationKind::symbol_clash;
        if (structural) throw NormalizeError(v.message);
    }

    NamePool pool(g);
    RuleVec rules = reachable_rules(g.rules, g.start);
    bool derives_epsilon = false;
    {
        auto eps = epsilon_ways(rules);
        derives_epsilon = eps[g.start] >= 1;
    }
    rules = wrap_terminals(rules, pool);
    rules = binarize(rules, pool);
    rules = eliminate_epsilon(rules, epsilon_ways(rules));
    rules = eliminate_units(rules);
    rules = prune_useless(rules, g.start);
    return {assemble(std::move(rules), g.start), derives_epsilon};
}

}  // namespace sliceq
