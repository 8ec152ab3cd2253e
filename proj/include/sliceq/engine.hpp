#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sliceq/errors.hpp"
#include "sliceq/field.hpp"
#include "sliceq/grammar.hpp"

namespace sliceq {

/// Grammar lowered to integer ids against a fixed letter ordering. The letter
/// list may be a superset of the grammar's alphabet (shared alphabets for
/// two-grammar comparisons); every grammar letter must appear in it.
struct CompiledGrammar {
    std::vector<std::string> letters;
    std::vector<std::string> nonterminals;
    int start = 0;

    struct TermRule {
        int head;
        int letter;
    };
    struct BinRule {
        int head;
        int left;
        int right;
    };
    std::vector<TermRule> term_rules;
    std::vector<BinRule> bin_rules;

    static CompiledGrammar build(const Grammar& g);
    static CompiledGrammar build(const Grammar& g, const std::vector<std::string>& letters);
};

/// A total map (letter a, position i) -> field value for i in [1, n]: the
/// point at which slice polynomials are evaluated.
template <class F>
struct Assignment {
    std::vector<std::string> alphabet;  // sorted, unique
    int n = 0;
    std::vector<F> values;  // letter-major: values[letter * n + (i - 1)]

    F& at(int letter, int pos) { return values[static_cast<size_t>(letter) * n + pos - 1]; }
    const F& at(int letter, int pos) const {
        return values[static_cast<size_t>(letter) * n + pos - 1];
    }

    int letter_index(std::string_view token) const {
        for (size_t k = 0; k < alphabet.size(); ++k)
            if (alphabet[k] == token) return static_cast<int>(k);
        return -1;
    }

    static Assignment constant(std::vector<std::string> alphabet, int n, F v) {
        Assignment a;
        a.alphabet = std::move(alphabet);
        a.n = n;
        a.values.assign(a.alphabet.size() * static_cast<size_t>(n), v);
        return a;
    }

    static Assignment random(std::vector<std::string> alphabet, int n, Rng& rng) {
        Assignment a = constant(std::move(alphabet), n, F::zero());
        for (auto& v : a.values) v = F::sample(rng);
        return a;
    }

    /// Exactly one 1 per position: x_{w_i, i} = 1 and every other variable 0.
    static Assignment word_like(std::vector<std::string> alphabet, const Word& w) {
        if (w.empty()) throw Error("word-like assignment needs a non-empty word");
        Assignment a = constant(std::move(alphabet), static_cast<int>(w.size()), F::zero());
        for (size_t i = 0; i < w.size(); ++i) {
            int letter = a.letter_index(w[i]);
            if (letter < 0) throw Error("unknown letter '" + w[i] + "'");
            a.at(letter, static_cast<int>(i) + 1) = F::one();
        }
        return a;
    }
};

template <class F>
Assignment<F> word_like_assignment(const Grammar& g, const Word& w) {
    return Assignment<F>::word_like(g.alphabet, w);
}

/// Dense table of f_{[l,r)}(L(C)) values for 1 <= l < r <= n + 1, filled in
/// order of increasing span length. Also carries exact operation counts.
template <class F>
struct EvalTable {
    int n = 0;
    std::vector<std::string> nonterminals;
    int start = 0;
    uint64_t multiplications = 0;
    uint64_t additions = 0;

    const F& at(int l, int r, int nt) const {
        if (l < 1 || r <= l || r > n + 1 || nt < 0 ||
            nt >= static_cast<int>(nonterminals.size()))
            throw Error("span (" + std::to_string(l) + ", " + std::to_string(r) +
                        ") out of table range");
        return cells_[index(l, r, nt)];
    }
    const F& at(int l, int r, std::string_view name) const {
        for (size_t k = 0; k < nonterminals.size(); ++k)
            if (nonterminals[k] == name) return at(l, r, static_cast<int>(k));
        throw Error("unknown nonterminal '" + std::string(name) + "'");
    }

    F slice_value() const { return at(1, n + 1, start); }
    F prefix_value() const {  // sum of f_{[1,i)}(start) for i = 2 .. n+1
        F acc = F::zero();
        for (int r = 2; r <= n + 1; ++r) acc += at(1, r, start);
        return acc;
    }

    // Spans are stored (start, length)-major: rows of increasing length per
    // start position, which keeps the inner split loop on short strides.
    size_t index(int l, int r, int nt) const {
        return ((static_cast<size_t>(l - 1) * n) + static_cast<size_t>(r - l - 1)) *
                   nonterminals.size() +
               static_cast<size_t>(nt);
    }

private:
    template <class G>
    friend EvalTable<G> evaluate_table(const Grammar&, int, const Assignment<G>&);

    std::vector<F> cells_;
};

template <class F>
struct EvalResult {
    F value;
    uint64_t multiplications;
};

/// Runs the cubic dynamic program: base spans sum x_{a,l} over terminal
/// rules, longer spans sum products over binary rules and split points.
/// Exactly one field multiplication is spent per (rule, l, m, r), so the
/// multiplication counter equals C(n+1, 3) * |binary rules|.
template <class F>
EvalTable<F> evaluate_table(const Grammar& g, int n, const Assignment<F>& point);

/// Value of the degree-n slice polynomial f_{[1,n+1)}(L(start)) at `point`.
template <class F>
EvalResult<F> evaluate_slice(const Grammar& g, int n, const Assignment<F>& point);

/// Value of the length-1..n prefix sum at `point`, from the same table.
template <class F>
EvalResult<F> evaluate_prefix(const Grammar& g, int n, const Assignment<F>& point);

enum class Outcome { equal_whp, not_equal, empty_whp, nonempty };

std::string to_string(Outcome o);

/// Result of a randomized comparison. NOT_EQUAL / NONEMPTY are certain for
/// unambiguous inputs (one-sided error); the whp outcomes are wrong with
/// probability at most (n / |F|)^rounds.
struct Verdict {
    Outcome outcome;
    int rounds;
    std::optional<int> witness_round;  // 1-based round where values differed
    uint64_t seed;
    int n;
    FieldTag field;

    /// Exact bound as text, e.g. "(5/2305843009213693951)^2"; "0" when the
    /// outcome is certain.
    std::string error_bound() const;
};

inline constexpr int default_rounds = 2;

/// Are the n-slices of L(g1) and L(g2) equal? Samples `rounds` independent
/// uniform points over the union alphabet and compares slice values; both
/// grammars are always evaluated at the same point. For ambiguous grammars
/// this compares derivation counts mod p rather than sets.
Verdict slice_equivalence(const Grammar& g1, const Grammar& g2, int n,
                          int rounds = default_rounds, uint64_t seed = 0);

/// Do L(g1) and L(g2) differ on some word of length 1..n? Same driver over
/// prefix sums. Length 0 is CNF-invisible; use normalize_to_cnf's epsilon
/// flags for it.
Verdict bounded_equivalence(const Grammar& g1, const Grammar& g2, int n,
                            int rounds = default_rounds, uint64_t seed = 0);

/// Is the n-slice of the GF(2)-language of g (words with an odd number of
/// derivations) empty? Runs the DP over GF(2^64); any nonzero value is a
/// certain NONEMPTY.
Verdict gf2_slice_empty(const Grammar& g, int n, int rounds = default_rounds,
                        uint64_t seed = 0);

/// CYK parsing recovered as a special case: evaluates the slice polynomial at
/// the word-like point of w (over F_p) and tests for 1. For grammars that are
/// ambiguous on w the value is the derivation count mod p, so membership with
/// count = 0 mod p would be missed; unambiguity is the caller's contract.
/// The empty word is never generated by a CNF grammar, so |w| = 0 returns false.
bool parse_membership(const Grammar& g, const Word& w);

// ---------------------------------------------------------------------------
// Template implementation
// ---------------------------------------------------------------------------

template <class F>
EvalTable<F> evaluate_table(const Grammar& g, int n, const Assignment<F>& point) {
    if (n <= 0) throw Error("slice length must be positive");
    if (auto vs = validate(g); !vs.empty())
        throw Error("grammar fails CNF validation: " + vs.front().message);
    if (point.n != n) throw Error("assignment is for a different slice length");
    CompiledGrammar cg = CompiledGrammar::build(g, point.alphabet);

    EvalTable<F> t;
    t.n = n;
    t.nonterminals = cg.nonterminals;
    t.start = cg.start;
    const size_t nts = cg.nonterminals.size();
    t.cells_.assign(static_cast<size_t>(n) * n * nts, F::zero());

    auto cell = [&](int l, int len, int nt) -> F& {
        return t.cells_[((static_cast<size_t>(l - 1) * n) + static_cast<size_t>(len - 1)) * nts +
                        nt];
    };

    // Second, end-indexed copy of the table, kept only while filling: rows
    // (end position, length) make the right-hand reads of the split loop
    // walk backwards through adjacent rows instead of striding.
    std::vector<F> by_end(static_cast<size_t>(n) * n * nts, F::zero());
    auto end_row = [&](int m, int r) -> F* {
        return &by_end[((static_cast<size_t>(r - 2) * n) + static_cast<size_t>(r - m - 1)) *
                       nts];
    };

    for (int l = 1; l <= n; ++l)
        for (const auto& r : cg.term_rules) {
            F v = cell(l, 1, r.head) + point.at(r.letter, l);
            cell(l, 1, r.head) = v;
            end_row(l, l + 1)[r.head] = v;
            ++t.additions;
        }

    std::vector<F> acc(nts);
    for (int len = 2; len <= n; ++len)
        for (int l = 1; l + len <= n + 1; ++l) {
            int r = l + len;
            std::fill(acc.begin(), acc.end(), F::zero());
            for (int m = l + 1; m < r; ++m) {
                // all rules read from the same two span rows
                const F* left = &t.cells_[t.index(l, m, 0)];
                const F* right = end_row(m, r);
                for (const auto& rule : cg.bin_rules) {
                    acc[static_cast<size_t>(rule.head)] +=
                        left[rule.left] * right[rule.right];
                    ++t.multiplications;
                    ++t.additions;
                }
            }
            F* out_end = end_row(l, r);
            for (size_t nt = 0; nt < nts; ++nt) {
                cell(l, len, static_cast<int>(nt)) = acc[nt];
                out_end[nt] = acc[nt];
            }
        }
    return t;
}

template <class F>
EvalResult<F> evaluate_slice(const Grammar& g, int n, const Assignment<F>& point) {
    EvalTable<F> t = evaluate_table(g, n, point);
    return {t.slice_value(), t.multiplications};
}

template <class F>
EvalResult<F> evaluate_prefix(const Grammar& g, int n, const Assignment<F>& point) {
    EvalTable<F> t = evaluate_table(g, n, point);
    return {t.prefix_value(), t.multiplications};
}

}  // namespace sliceq
