#include "sliceq/engine.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace sliceq {

namespace {

std::map<std::string, int> index_of(const std::vector<std::string>& names) {
    std::map<std::string, int> m;
    for (size_t k = 0; k < names.size(); ++k) m.emplace(names[k], static_cast<int>(k));
    return m;
}

}  // namespace

CompiledGrammar CompiledGrammar::build(const Grammar& g) { return build(g, g.alphabet); }

CompiledGrammar CompiledGrammar::build(const Grammar& g,
                                       const std::vector<std::string>& letters) {
    CompiledGrammar cg;
    cg.letters = letters;
    cg.nonterminals = g.nonterminals;
    auto letter_id = index_of(letters);
    auto nt_id = index_of(g.nonterminals);
    auto nt = [&](const std::string& name) { return nt_id.at(name); };
    cg.start = nt(g.start);
    for (const auto& r : g.rules) {
        if (const auto* t = std::get_if<TerminalRule>(&r)) {
            auto it = letter_id.find(t->letter);
            if (it == letter_id.end())
                throw Error("alphabet mismatch: letter '" + t->letter +
                            "' is not covered by the assignment");
            cg.term_rules.push_back({nt(t->head), it->second});
        } else {
            const auto& b = std::get<BinaryRule>(r);
            cg.bin_rules.push_back({nt(b.head), nt(b.left), nt(b.right)});
        }
    }
    return cg;
}

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::equal_whp: return "EQUAL_WHP";
        case Outcome::not_equal: return "NOT_EQUAL";
        case Outcome::empty_whp: return "EMPTY_WHP";
        case Outcome::nonempty: return "NONEMPTY";
    }
    return "?";
}

std::string Verdict::error_bound() const {
    if (outcome == Outcome::not_equal || outcome == Outcome::nonempty) return "0";
    return "(" + std::to_string(n) + "/" + field_size_string(field) + ")^" +
           std::to_string(rounds);
}

namespace {

std::vector<std::string> union_alphabet(const Grammar& g1, const Grammar& g2) {
    std::set<std::string> u(g1.alphabet.begin(), g1.alphabet.end());
    u.insert(g2.alphabet.begin(), g2.alphabet.end());
    return {u.begin(), u.end()};
}

void check_rounds(int rounds) {
    if (rounds < 1) throw Error("rounds must be at least 1");
}

// Shared round loop for the two-grammar drivers. Both grammars see the same
// random point each round; that is what makes the comparison a zero test of
// the difference polynomial.
template <class ValueFn>
Verdict run_rounds(int n, int rounds, uint64_t seed, FieldTag field, Outcome positive,
                   Outcome negative, ValueFn&& round_differs) {
    check_rounds(rounds);
    for (int round = 1; round <= rounds; ++round) {
        Rng rng(mix_seed(seed, static_cast<uint64_t>(round - 1)));
        if (round_differs(rng)) return {negative, rounds, round, seed, n, field};
    }
    return {positive, rounds, std::nullopt, seed, n, field};
}

}  // namespace

Verdict slice_equivalence(const Grammar& g1, const Grammar& g2, int n, int rounds,
                          uint64_t seed) {
    auto alpha = union_alphabet(g1, g2);
    return run_rounds(n, rounds, seed, FieldTag::p61, Outcome::equal_whp,
                      Outcome::not_equal, [&](Rng& rng) {
                          auto x = Assignment<Fp61>::random(alpha, n, rng);
                          return evaluate_slice(g1, n, x).value !=
                                 evaluate_slice(g2, n, x).value;
                      });
}

Verdict bounded_equivalence(const Grammar& g1, const Grammar& g2, int n, int rounds,
                            uint64_t seed) {
    auto alpha = union_alphabet(g1, g2);
    return run_rounds(n, rounds, seed, FieldTag::p61, Outcome::equal_whp,
                      Outcome::not_equal, [&](Rng& rng) {
                          auto x = Assignment<Fp61>::random(alpha, n, rng);
                          return evaluate_prefix(g1, n, x).value !=
                                 evaluate_prefix(g2, n, x).value;
                      });
}

Verdict gf2_slice_empty(const Grammar& g, int n, int rounds, uint64_t seed) {
    return run_rounds(n, rounds, seed, FieldTag::gf2_64, Outcome::empty_whp,
                      Outcome::nonempty, [&](Rng& rng) {
                          auto x = Assignment<Gf2_64>::random(g.alphabet, n, rng);
                          return evaluate_slice(g, n, x).value != Gf2_64::zero();
                      });
}

bool parse_membership(const Grammar& g, const Word& w) {
    if (w.empty()) return false;  // CNF generates no empty word
    auto x = word_like_assignment<Fp61>(g, w);
    return evaluate_slice(g, static_cast<int>(w.size()), x).value == Fp61::one();
}

}  // namespace sliceq
