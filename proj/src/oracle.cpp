#include "sliceq/oracle.hpp"

#include <algorithm>
#include <utility>

#include "sliceq/engine.hpp"

namespace sliceq {

namespace {

void require_positive(int n) {
    if (n <= 0) throw Error("slice length must be positive");
}

void require_valid(const Grammar& g) {
    if (auto vs = validate(g); !vs.empty())
        throw Error("grammar fails CNF validation: " + vs.front().message);
}

// |alphabet|^n with overflow clamping; anything that overflows u64 is larger
// than any budget.
uint64_t clamped_pow(uint64_t base, int n) {
    unsigned __int128 acc = 1;
    for (int i = 0; i < n; ++i) {
        acc *= base;
        if (acc > UINT64_MAX) return UINT64_MAX;
    }
    return static_cast<uint64_t>(acc);
}

void check_budget(const Grammar& g, int n, uint64_t budget) {
    uint64_t total = clamped_pow(g.alphabet.size(), n);
    if (total > budget)
        throw BudgetError("slice enumeration budget exceeded: |alphabet|^n = " +
                          (total == UINT64_MAX ? std::string("overflow")
                                               : std::to_string(total)) +
                          " > " + std::to_string(budget));
}

// Words of length len are encoded big-endian in base |alphabet|, so numeric
// order is lexicographic order (letter ids follow the sorted alphabet).
Word decode(uint64_t code, int len, const std::vector<std::string>& alphabet) {
    Word w(static_cast<size_t>(len));
    uint64_t base = alphabet.size();
    for (int i = len - 1; i >= 0; --i) {
        w[static_cast<size_t>(i)] = alphabet[code % base];
        code /= base;
    }
    return w;
}

// Saturating word-multiplicity counter. Only the 0 / 1 / "2 or more"
// distinction is consumed, so clamping at the top is harmless; exact values
// are recomputed with big integers where they are reported.
uint64_t sat_add(uint64_t a, uint64_t b) { return a > UINT64_MAX - b ? UINT64_MAX : a + b; }
uint64_t sat_mul(uint64_t a, uint64_t b) {
    if (a == 0 || b == 0) return 0;
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    return p > UINT64_MAX ? UINT64_MAX : static_cast<uint64_t>(p);
}

// sorted by code, unique codes
using CountVec = std::vector<std::pair<uint64_t, uint64_t>>;

void combine_counts(CountVec& v) {
    std::sort(v.begin(), v.end());
    CountVec out;
    for (const auto& [code, c] : v) {
        if (!out.empty() && out.back().first == code)
            out.back().second = sat_add(out.back().second, c);
        else
            out.emplace_back(code, c);
    }
    v = std::move(out);
}

// Per-(length, nonterminal) slice multiplicities, bottom-up over lengths.
std::vector<std::vector<CountVec>> slice_count_tables(const CompiledGrammar& cg, int n) {
    size_t nts = cg.nonterminals.size();
    uint64_t base = cg.letters.size();
    std::vector<std::vector<CountVec>> counts(static_cast<size_t>(n) + 1,
                                              std::vector<CountVec>(nts));
    for (const auto& r : cg.term_rules)
        counts[1][static_cast<size_t>(r.head)].emplace_back(static_cast<uint64_t>(r.letter), 1);
    for (auto& v : counts[1]) combine_counts(v);

    for (int len = 2; len <= n; ++len) {
        for (const auto& rule : cg.bin_rules) {
            auto& out = counts[static_cast<size_t>(len)][static_cast<size_t>(rule.head)];
            for (int j = 1; j < len; ++j) {
                const auto& left = counts[static_cast<size_t>(j)][static_cast<size_t>(rule.left)];
                const auto& right =
                    counts[static_cast<size_t>(len - j)][static_cast<size_t>(rule.right)];
                uint64_t shift = clamped_pow(base, len - j);
                for (const auto& [u, cu] : left)
                    for (const auto& [v, cv] : right)
                        out.emplace_back(u * shift + v, sat_mul(cu, cv));
            }
        }
        for (auto& v : counts[static_cast<size_t>(len)]) combine_counts(v);
    }
    return counts;
}

// Same DP over GF(2): keep only the words with odd multiplicity.
using ParitySet = std::vector<uint64_t>;  // sorted codes

void combine_parity(ParitySet& v) {
    std::sort(v.begin(), v.end());
    ParitySet out;
    for (size_t i = 0; i < v.size();) {
        size_t j = i;
        while (j < v.size() && v[j] == v[i]) ++j;
        if ((j - i) % 2 == 1) out.push_back(v[i]);
        i = j;
    }
    v = std::move(out);
}

std::vector<std::vector<ParitySet>> slice_parity_tables(const CompiledGrammar& cg, int n) {
    size_t nts = cg.nonterminals.size();
    uint64_t base = cg.letters.size();
    std::vector<std::vector<ParitySet>> odd(static_cast<size_t>(n) + 1,
                                            std::vector<ParitySet>(nts));
    for (const auto& r : cg.term_rules)
        odd[1][static_cast<size_t>(r.head)].push_back(static_cast<uint64_t>(r.letter));
    for (auto& v : odd[1]) combine_parity(v);

    for (int len = 2; len <= n; ++len) {
        for (const auto& rule : cg.bin_rules) {
            auto& out = odd[static_cast<size_t>(len)][static_cast<size_t>(rule.head)];
            for (int j = 1; j < len; ++j) {
                const auto& left = odd[static_cast<size_t>(j)][static_cast<size_t>(rule.left)];
                const auto& right =
                    odd[static_cast<size_t>(len - j)][static_cast<size_t>(rule.right)];
                uint64_t shift = clamped_pow(base, len - j);
                for (uint64_t u : left)
                    for (uint64_t v : right) out.push_back(u * shift + v);
            }
        }
        for (auto& v : odd[static_cast<size_t>(len)]) combine_parity(v);
    }
    return odd;
}

}  // namespace

SliceSet enumerate_slice(const Grammar& g, int n, uint64_t budget) {
    require_positive(n);
    require_valid(g);
    check_budget(g, n, budget);
    CompiledGrammar cg = CompiledGrammar::build(g);
    size_t nts = cg.nonterminals.size();
    uint64_t base = cg.letters.size();

    // plain set DP, one sorted code vector per (length, nonterminal)
    std::vector<std::vector<std::vector<uint64_t>>> sets(
        static_cast<size_t>(n) + 1, std::vector<std::vector<uint64_t>>(nts));
    for (const auto& r : cg.term_rules)
        sets[1][static_cast<size_t>(r.head)].push_back(static_cast<uint64_t>(r.letter));
    auto dedupe = [](std::vector<uint64_t>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    for (auto& v : sets[1]) dedupe(v);
    for (int len = 2; len <= n; ++len) {
        for (const auto& rule : cg.bin_rules) {
            auto& out = sets[static_cast<size_t>(len)][static_cast<size_t>(rule.head)];
            for (int j = 1; j < len; ++j) {
                const auto& left = sets[static_cast<size_t>(j)][static_cast<size_t>(rule.left)];
                const auto& right =
                    sets[static_cast<size_t>(len - j)][static_cast<size_t>(rule.right)];
                uint64_t shift = clamped_pow(base, len - j);
                for (uint64_t u : left)
                    for (uint64_t v : right) out.push_back(u * shift + v);
            }
        }
        for (auto& v : sets[static_cast<size_t>(len)]) dedupe(v);
    }

    SliceSet out{n, {}};
    for (uint64_t code : sets[static_cast<size_t>(n)][static_cast<size_t>(cg.start)])
        out.words.push_back(decode(code, n, cg.letters));
    return out;
}

BigInt count_derivations(const Grammar& g, const Word& w) {
    if (w.empty()) throw Error("derivation counting needs a non-empty word");
    require_valid(g);
    CompiledGrammar cg = CompiledGrammar::build(g);
    int n = static_cast<int>(w.size());
    std::vector<int> letter(w.size());
    for (size_t i = 0; i < w.size(); ++i) {
        auto it = std::find(cg.letters.begin(), cg.letters.end(), w[i]);
        if (it == cg.letters.end()) return 0;
        letter[i] = static_cast<int>(it - cg.letters.begin());
    }

    size_t nts = cg.nonterminals.size();
    auto idx = [&](int l, int len) {
        return (static_cast<size_t>(len - 1) * n + static_cast<size_t>(l - 1)) * nts;
    };
    std::vector<BigInt> count(static_cast<size_t>(n) * n * nts, 0);
    for (int l = 1; l <= n; ++l)
        for (const auto& r : cg.term_rules)
            if (r.letter == letter[static_cast<size_t>(l - 1)])
                count[idx(l, 1) + static_cast<size_t>(r.head)] += 1;
    for (int len = 2; len <= n; ++len)
        for (int l = 1; l + len <= n + 1; ++l)
            for (const auto& rule : cg.bin_rules) {
                BigInt acc = 0;
                for (int j = 1; j < len; ++j)
                    acc += count[idx(l, j) + static_cast<size_t>(rule.left)] *
                           count[idx(l + j, len - j) + static_cast<size_t>(rule.right)];
                count[idx(l, len) + static_cast<size_t>(rule.head)] += acc;
            }
    return count[idx(1, n) + static_cast<size_t>(cg.start)];
}

bool cyk_member(const Grammar& g, const Word& w) {
    if (w.empty()) return false;
    require_valid(g);
    CompiledGrammar cg = CompiledGrammar::build(g);
    int n = static_cast<int>(w.size());
    std::vector<int> letter(w.size());
    for (size_t i = 0; i < w.size(); ++i) {
        auto it = std::find(cg.letters.begin(), cg.letters.end(), w[i]);
        if (it == cg.letters.end()) return false;
        letter[i] = static_cast<int>(it - cg.letters.begin());
    }
    size_t nts = cg.nonterminals.size();
    auto idx = [&](int l, int len) {
        return (static_cast<size_t>(len - 1) * n + static_cast<size_t>(l - 1)) * nts;
    };
    std::vector<char> derives(static_cast<size_t>(n) * n * nts, 0);
    for (int l = 1; l <= n; ++l)
        for (const auto& r : cg.term_rules)
            if (r.letter == letter[static_cast<size_t>(l - 1)])
                derives[idx(l, 1) + static_cast<size_t>(r.head)] = 1;
    for (int len = 2; len <= n; ++len)
        for (int l = 1; l + len <= n + 1; ++l)
            for (const auto& rule : cg.bin_rules) {
                if (derives[idx(l, len) + static_cast<size_t>(rule.head)]) continue;
                for (int j = 1; j < len; ++j)
                    if (derives[idx(l, j) + static_cast<size_t>(rule.left)] &&
                        derives[idx(l + j, len - j) + static_cast<size_t>(rule.right)]) {
                        derives[idx(l, len) + static_cast<size_t>(rule.head)] = 1;
                        break;
                    }
            }
    return derives[idx(1, n) + static_cast<size_t>(cg.start)] != 0;
}

std::optional<AmbiguousWord> find_ambiguous_word(const Grammar& g, int n, uint64_t budget) {
    require_positive(n);
    require_valid(g);
    check_budget(g, n, budget);
    CompiledGrammar cg = CompiledGrammar::build(g);
    auto counts = slice_count_tables(cg, n);
    for (const auto& [code, c] : counts[static_cast<size_t>(n)][static_cast<size_t>(cg.start)])
        if (c >= 2) {
            Word w = decode(code, n, cg.letters);
            return AmbiguousWord{w, count_derivations(g, w)};  // exact count
        }
    return std::nullopt;
}

bool slice_unambiguous(const Grammar& g, int n, uint64_t budget) {
    return !find_ambiguous_word(g, n, budget).has_value();
}

bool exact_slice_equal(const Grammar& g1, const Grammar& g2, int n, uint64_t budget) {
    return enumerate_slice(g1, n, budget).words == enumerate_slice(g2, n, budget).words;
}

bool gf2_slice_nonempty_exact(const Grammar& g, int n, uint64_t budget) {
    require_positive(n);
    require_valid(g);
    check_budget(g, n, budget);
    CompiledGrammar cg = CompiledGrammar::build(g);
    auto odd = slice_parity_tables(cg, n);
    return !odd[static_cast<size_t>(n)][static_cast<size_t>(cg.start)].empty();
}

}  // namespace sliceq
