// Acceptance suite: drives every top-level requirement end to end and prints
// one PASS/FAIL line per criterion. Exit code is the number of failures.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "sliceq/circuit.hpp"
#include "sliceq/engine.hpp"
#include "sliceq/grammar.hpp"
#include "sliceq/oracle.hpp"
#include "../support/random_grammars.hpp"

using namespace sliceq;
namespace ts = sliceq::testsupport;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& msg) {
    if (!ok) throw Failure(msg);
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---- criterion 1: randomized slice equivalence vs the exact oracle --------

void criterion_oracle_agreement(std::string& detail) {
    auto t0 = Clock::now();
    std::mt19937_64 gen(20240601);
    int trials = 0, equal_cases = 0, not_equal_cases = 0;
    struct EqualCase {
        Grammar g1, g2;
        int n;
    };
    std::vector<EqualCase> equal_pool;  // oracle-confirmed equal at that n

    while (trials < 1000) {
        auto [g1, g2] = ts::random_grammar_pair(gen);
        int n = ts::uniform_int(gen, 1, 8);
        if (!slice_unambiguous(g1, n) || !slice_unambiguous(g2, n)) continue;
        ++trials;
        bool exact = exact_slice_equal(g1, g2, n);
        Verdict v = slice_equivalence(g1, g2, n, 2, gen());
        if (v.outcome == Outcome::not_equal) {
            ++not_equal_cases;
            require(!exact, "false NOT_EQUAL: one-sided error violated");
        } else {
            ++equal_cases;
            require(exact, "false EQUAL_WHP observed (probability <= (n/p)^2)");
        }
        if (exact && equal_pool.size() < 64) equal_pool.push_back({g1, g2, n});
    }
    require(not_equal_cases > 50, "generator produced too few unequal pairs");
    require(equal_cases > 50, "generator produced too few equal pairs");

    // >= 10^4 single-round comparisons on oracle-equal pairs: values must
    // coincide exactly every time (field equality, no tolerance)
    int rounds_done = 0;
    size_t pick = 0;
    while (rounds_done < 10000) {
        const auto& c = equal_pool[pick++ % equal_pool.size()];
        Verdict v = slice_equivalence(c.g1, c.g2, c.n, 4, gen());
        require(v.outcome == Outcome::equal_whp, "false NOT_EQUAL on oracle-equal pair");
        rounds_done += 4;
    }

    double secs = seconds_since(t0);
    require(secs < 60.0, "suite exceeded the 60 s desk-scale budget");
    std::ostringstream os;
    os << trials << " trials (" << equal_cases << " equal / " << not_equal_cases
       << " unequal), " << rounds_done << " extra one-sided rounds, " << std::fixed
       << std::setprecision(1) << secs << " s";
    detail = os.str();
}

// ---- criterion 2: prefix variant vs oracle over lengths 1..n --------------

void criterion_prefix_agreement(std::string& detail) {
    std::mt19937_64 gen(20240602);
    int trials = 0, unequal = 0;
    while (trials < 1000) {
        auto [g1, g2] = ts::random_grammar_pair(gen);
        int n = ts::uniform_int(gen, 1, 8);
        bool ok = true;
        for (int m = 1; m <= n && ok; ++m)
            ok = slice_unambiguous(g1, m) && slice_unambiguous(g2, m);
        if (!ok) continue;
        ++trials;
        bool exact = true;
        for (int m = 1; m <= n; ++m)
            if (!exact_slice_equal(g1, g2, m)) {
                exact = false;
                break;
            }
        Verdict v = bounded_equivalence(g1, g2, n, 2, gen());
        require((v.outcome == Outcome::equal_whp) == exact,
                "bounded_equivalence disagrees with the slice-by-slice oracle");
        unequal += !exact;
    }
    detail = std::to_string(trials) + " trials (" + std::to_string(unequal) + " unequal)";
}

// ---- criterion 3: parsing degeneration ------------------------------------

void criterion_parse_membership(std::string& detail) {
    std::mt19937_64 gen(20240603);
    int pairs = 0, members = 0;
    while (pairs < 500) {
        Grammar g = ts::random_cnf_grammar(gen);
        if (g.alphabet.empty()) continue;
        int len = ts::uniform_int(gen, 1, 8);
        Word w;
        if (ts::coin(gen, 0.5)) {
            auto words = enumerate_slice(g, len).words;
            if (words.empty()) continue;
            w = words[static_cast<size_t>(ts::uniform_int(
                gen, 0, static_cast<int>(words.size()) - 1))];
        } else {
            w = ts::random_word(gen, g.alphabet, len);
        }
        if (count_derivations(g, w) > 1) continue;  // membership contract needs unambiguity
        ++pairs;
        bool expect = cyk_member(g, w);
        require(parse_membership(g, w) == expect,
                "parse_membership disagrees with boolean CYK");
        members += expect;
    }
    detail = "500 (grammar, word) pairs, " + std::to_string(members) + " members";
}

// ---- criterion 4: GF(2) emptiness ------------------------------------------

void criterion_gf2(std::string& detail) {
    std::mt19937_64 gen(20240604);
    int nonempty_cases = 0;
    for (int t = 0; t < 500; ++t) {
        Grammar g = ts::random_cnf_grammar(gen);
        int n = ts::uniform_int(gen, 1, 6);
        bool exact_nonempty = gf2_slice_nonempty_exact(g, n);
        Verdict v = gf2_slice_empty(g, n, 2, gen());
        if (v.outcome == Outcome::nonempty) {
            require(exact_nonempty, "false NONEMPTY: one-sided error violated");
            ++nonempty_cases;
        } else {
            require(!exact_nonempty, "false EMPTY_WHP observed");
        }
    }
    detail = "500 grammars (" + std::to_string(nonempty_cases) + " nonempty)";
}

// ---- criterion 5: cubic complexity accounting ------------------------------

uint64_t closed_form_mults(const Grammar& g, int n) {
    uint64_t bins = 0;
    for (const auto& r : g.rules)
        if (std::holds_alternative<BinaryRule>(r)) ++bins;
    uint64_t m = static_cast<uint64_t>(n) + 1;
    return m * (m - 1) * (m - 2) / 6 * bins;
}

double best_eval_seconds(const Grammar& g, int n, int reps) {
    Rng rng(1);
    auto x = Assignment<Fp61>::random(g.alphabet, n, rng);
    double best = 1e100;
    for (int r = 0; r < reps; ++r) {
        auto t0 = Clock::now();
        volatile uint64_t sink = evaluate_slice(g, n, x).value.value();
        (void)sink;
        best = std::min(best, seconds_since(t0));
    }
    return best;
}

void criterion_complexity(std::string& detail) {
    std::mt19937_64 gen(20240605);
    for (int t = 0; t < 50; ++t) {
        Grammar g = ts::random_cnf_grammar(gen);
        int n = ts::uniform_int(gen, 1, 12);
        Rng rng(gen());
        auto x = Assignment<Fp61>::random(g.alphabet, n, rng);
        require(evaluate_slice(g, n, x).multiplications == closed_form_mults(g, n),
                "multiplication counter deviates from C(n+1,3) * |binary rules|");
    }

    // wall-clock growth on a fixed grammar: each doubling of n costs <= 10x
    Grammar fixed = parse_grammar(
        "start S\n"
        "S -> S S | A B | B A | 'a'\n"
        "A -> A B | B B | 'a'\n"
        "B -> A A | 'b'\n");
    double t64 = best_eval_seconds(fixed, 64, 15);
    double t128 = best_eval_seconds(fixed, 128, 7);
    double t256 = best_eval_seconds(fixed, 256, 3);
    require(t128 / t64 <= 10.0, "time(128)/time(64) above cubic margin");
    require(t256 / t128 <= 10.0, "time(256)/time(128) above cubic margin");

    // head-to-head at n = 20 over a 3-letter alphabet: enumeration refuses,
    // the field evaluation is immediate
    Grammar three = parse_grammar("start S\nS -> S S\nS -> 'a' | 'b' | 'c'\n");
    bool budget_hit = false;
    try {
        enumerate_slice(three, 20);
    } catch (const BudgetError&) {
        budget_hit = true;
    }
    require(budget_hit, "oracle enumeration unexpectedly fit the budget at n = 20");
    auto t0 = Clock::now();
    Rng rng(7);
    auto x = Assignment<Fp61>::random(three.alphabet, 20, rng);
    evaluate_slice(three, 20, x);
    double engine_ms = seconds_since(t0) * 1e3;
    require(engine_ms < 1000.0, "engine slow on the head-to-head instance");

    std::ostringstream os;
    os << "counter exact on 50 cases; doubling ratios " << std::fixed
       << std::setprecision(2) << t128 / t64 << "x and " << t256 / t128
       << "x; head-to-head n=20: oracle over budget, engine "
       << std::setprecision(3) << engine_ms << " ms";
    detail = os.str();
}

// ---- criterion 6: null-like annihilation -----------------------------------

void criterion_null_like(std::string& detail) {
    std::mt19937_64 gen(20240606);
    for (int t = 0; t < 200; ++t) {
        Grammar g = ts::random_cnf_grammar(gen);
        int n = ts::uniform_int(gen, 1, 8);
        Rng rng(gen());
        auto x = Assignment<Fp61>::random(g.alphabet, n, rng);
        int dead = ts::uniform_int(gen, 1, n);
        for (size_t a = 0; a < g.alphabet.size(); ++a)
            x.at(static_cast<int>(a), dead) = Fp61::zero();
        require(evaluate_slice(g, n, x).value == Fp61::zero(),
                "nonzero value on a null-like input");
    }
    detail = "200 grammars, all values exactly 0";
}

// ---- criterion 7: monotone circuits ----------------------------------------

bool boolean_dp(const Grammar& g, int n, const BoolInput& input) {
    CompiledGrammar cg = CompiledGrammar::build(g);
    size_t nts = cg.nonterminals.size();
    auto idx = [&](int l, int len, int nt) {
        return (static_cast<size_t>(len - 1) * n + static_cast<size_t>(l - 1)) * nts +
               static_cast<size_t>(nt);
    };
    std::vector<char> val(static_cast<size_t>(n) * n * nts, 0);
    for (int l = 1; l <= n; ++l)
        for (const auto& r : cg.term_rules)
            if (input.at({cg.letters[static_cast<size_t>(r.letter)], l}))
                val[idx(l, 1, r.head)] = 1;
    for (int len = 2; len <= n; ++len)
        for (int l = 1; l + len <= n + 1; ++l)
            for (const auto& rule : cg.bin_rules)
                for (int j = 1; j < len; ++j)
                    if (val[idx(l, j, rule.left)] && val[idx(l + j, len - j, rule.right)])
                        val[idx(l, len, rule.head)] = 1;
    return val[idx(1, n, cg.start)] != 0;
}

void criterion_circuits(std::string& detail) {
    // the permutations-of-three fixture: exactly six word-like inputs accepted
    Grammar p3 = parse_grammar(
        "start S\n"
        "S -> X1 Y1 | X2 Y2 | X3 Y3\n"
        "Y1 -> X2 X3 | X3 X2\n"
        "Y2 -> X1 X3 | X3 X1\n"
        "Y3 -> X1 X2 | X2 X1\n"
        "X1 -> '1'\nX2 -> '2'\nX3 -> '3'\n");
    MonotoneCircuit c3 = extract_circuit(p3, 3);
    std::set<Word> perms = {{"1", "2", "3"}, {"1", "3", "2"}, {"2", "1", "3"},
                            {"2", "3", "1"}, {"3", "1", "2"}, {"3", "2", "1"}};
    int accepted = 0;
    for (const auto& a : p3.alphabet)
        for (const auto& b : p3.alphabet)
            for (const auto& d : p3.alphabet) {
                Word w{a, b, d};
                bool got = eval_circuit(c3, word_like_input(p3.alphabet, w));
                require(got == (perms.count(w) > 0), "P3 circuit wrong on " + format_word(w));
                accepted += got;
            }
    require(accepted == 6, "P3 circuit accepts a wrong number of words");

    std::mt19937_64 gen(20240607);
    // agreement with the boolean-semiring DP on random 0/1 inputs
    for (int t = 0; t < 30; ++t) {
        Grammar g = ts::random_cnf_grammar(gen);
        int n = ts::uniform_int(gen, 1, 6);
        MonotoneCircuit c = extract_circuit(g, n);
        for (int k = 0; k < 200; ++k) {
            BoolInput in;
            for (const auto& a : g.alphabet)
                for (int i = 1; i <= n; ++i) in[{a, i}] = ts::coin(gen, 0.5);
            require(eval_circuit(c, in) == boolean_dp(g, n, in),
                    "circuit disagrees with the boolean DP");
        }
    }

    // word-like soundness and completeness against enumeration
    for (int t = 0; t < 20; ++t) {
        Grammar g = ts::random_cnf_grammar(gen, 2);
        int n = ts::uniform_int(gen, 1, 6);
        MonotoneCircuit c = extract_circuit(g, n);
        auto words = enumerate_slice(g, n).words;
        std::set<Word> in_slice(words.begin(), words.end());
        std::vector<Word> all{{}};
        for (int i = 0; i < n; ++i) {
            std::vector<Word> next;
            for (const auto& w : all)
                for (const auto& a : g.alphabet) {
                    Word e = w;
                    e.push_back(a);
                    next.push_back(e);
                }
            all = std::move(next);
        }
        for (const auto& w : all)
            require(eval_circuit(c, word_like_input(g.alphabet, w)) == (in_slice.count(w) > 0),
                    "word-like circuit evaluation disagrees with enumeration");
    }

    // monotonicity on 1000 ordered pairs
    for (int t = 0; t < 1000; ++t) {
        BoolInput lo, hi;
        for (const auto& a : p3.alphabet)
            for (int i = 1; i <= 3; ++i) {
                bool v = ts::coin(gen, 0.5);
                lo[{a, i}] = v;
                hi[{a, i}] = v || ts::coin(gen, 0.5);
            }
        require(eval_circuit(c3, lo) <= eval_circuit(c3, hi), "monotonicity violated");
    }
    detail = "P3 exact; 30x200 random-input agreements; word-like sweeps; 1000 monotone pairs";
}

// ---- criterion 8: CLI determinism ------------------------------------------

struct Exec {
    int code;
    std::string out;
};

Exec exec_capture(const std::string& cmd) {
    FILE* p = ::popen((cmd + " 2>/dev/null").c_str(), "r");
    require(p != nullptr, "popen failed");
    std::string out;
    char buf[4096];
    size_t k;
    while ((k = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, k);
    int status = ::pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

void criterion_cli_determinism(std::string& detail) {
    const char* cli = std::getenv("SLICEQ_CLI");
    require(cli != nullptr, "SLICEQ_CLI environment variable not set");

    fs::path dir = fs::temp_directory_path() /
                   ("sliceq_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    auto file = [&](const std::string& name, const std::string& content) {
        fs::path p = dir / name;
        std::ofstream(p) << content;
        return p.string();
    };
    auto ab = file("ab.cnf", "start S\nS -> A B\nA -> 'a'\nB -> 'b'\n");
    auto ba = file("ba.cnf", "start S\nS -> B A\nA -> 'a'\nB -> 'b'\n");

    std::vector<std::pair<std::string, int>> cases = {
        {std::string(cli) + " eq-slice --g1 " + ab + " --g2 " + ab + " --n 5 --seed 7", 0},
        {std::string(cli) + " eq-slice --g1 " + ab + " --g2 " + ba + " --n 2 --seed 7", 1},
        {std::string(cli) + " eq-upto --g1 " + ab + " --g2 " + ba + " --n 3 --seed 9", 1},
        {std::string(cli) + " gf2-empty --g " + ab + " --n 2 --seed 3", 1},
        {std::string(cli) + " parse --g " + ab + " --word \"a b\"", 0},
    };
    for (const auto& [cmd, expect_code] : cases) {
        Exec first = exec_capture(cmd);
        require(first.code == expect_code,
                "unexpected exit code " + std::to_string(first.code) + " for: " + cmd);
        require(!first.out.empty() && first.out.back() == '\n', "result line missing");
        for (int r = 1; r < 10; ++r) {
            Exec again = exec_capture(cmd);
            require(again.out == first.out && again.code == first.code,
                    "output differs between runs of: " + cmd);
        }
    }
    std::error_code ec;
    fs::remove_all(dir, ec);
    detail = std::to_string(cases.size()) + " invocations x 10 runs, byte-identical";
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        void (*fn)(std::string&);
    };
    const std::vector<Criterion> criteria = {
        {"1 randomized slice equivalence agrees with the exact oracle", criterion_oracle_agreement},
        {"2 bounded (1..n) equivalence agrees with the exact oracle", criterion_prefix_agreement},
        {"3 parse_membership matches boolean CYK", criterion_parse_membership},
        {"4 GF(2) slice emptiness matches the parity oracle", criterion_gf2},
        {"5 cubic complexity accounting", criterion_complexity},
        {"6 null-like inputs annihilate", criterion_null_like},
        {"7 monotone circuit extraction", criterion_circuits},
        {"8 CLI determinism", criterion_cli_determinism},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        std::string detail;
        try {
            c.fn(detail);
            std::cout << "[PASS] criterion " << c.name;
            if (!detail.empty()) std::cout << " - " << detail;
            std::cout << "\n";
        } catch (const std::exception& e) {
            ++failures;
            std::cout << "[FAIL] criterion " << c.name << " - " << e.what() << "\n";
        }
        std::cout.flush();
    }
    return failures;
}
