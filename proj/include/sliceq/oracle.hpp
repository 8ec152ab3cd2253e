#pragma once

#include <cstdint>
#include <optional>

#include <boost/multiprecision/cpp_int.hpp>

#include "sliceq/grammar.hpp"

namespace sliceq {

/// Exact arbitrary-precision derivation count; Catalan-style growth must
/// never overflow silently.
using BigInt = boost::multiprecision::cpp_int;

/// All length-n words of the grammar, sorted lexicographically by token
/// sequence, no duplicates.
struct SliceSet {
    int n;
    std::vector<Word> words;
};

inline constexpr uint64_t default_oracle_budget = 1'000'000;

/// The deliberately-naive baseline: materializes the n-slice by exhaustive
/// span enumeration. Refuses to start when |alphabet|^n exceeds `budget`
/// (throws BudgetError); there is no silent truncation.
SliceSet enumerate_slice(const Grammar& g, int n, uint64_t budget = default_oracle_budget);

/// Number of distinct parse trees of w from the start symbol (counting CYK).
/// Words with letters outside the alphabet simply have count 0.
BigInt count_derivations(const Grammar& g, const Word& w);

/// Classic boolean CYK membership test, kept as an implementation independent
/// of the field-evaluation path.
bool cyk_member(const Grammar& g, const Word& w);

struct AmbiguousWord {
    Word word;
    BigInt count;  // >= 2
};

/// Lexicographically least length-n word with two or more derivations, if any.
std::optional<AmbiguousWord> find_ambiguous_word(const Grammar& g, int n,
                                                 uint64_t budget = default_oracle_budget);

/// True iff every length-n word has at most one derivation (vacuously true
/// for empty slices).
bool slice_unambiguous(const Grammar& g, int n, uint64_t budget = default_oracle_budget);

/// Exact set equality of the two n-slices.
bool exact_slice_equal(const Grammar& g1, const Grammar& g2, int n,
                       uint64_t budget = default_oracle_budget);

/// True iff some length-n word has an odd number of derivations (membership
/// in the GF(2)-language).
bool gf2_slice_nonempty_exact(const Grammar& g, int n,
                              uint64_t budget = default_oracle_budget);

}  // namespace sliceq
