#include "sliceq/cli.hpp"

#include <fstream>
#include <sstream>

#include "CLI11.hpp"

#include "sliceq/circuit.hpp"
#include "sliceq/engine.hpp"
#include "sliceq/grammar.hpp"
#include "sliceq/oracle.hpp"

namespace sliceq {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << content;
}

Grammar load_grammar(const std::string& path) {
    try {
        return parse_grammar(read_file(path));
    } catch (const ParseError& e) {
        throw Error(path + ":" + e.what());
    }
}

Word split_word(const std::string& s) {
    Word w;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) w.push_back(tok);
    return w;
}

std::string quoted(const Word& w) { return "\"" + format_word(w) + "\""; }

int report_verdict(const Verdict& v, std::ostream& out) {
    switch (v.outcome) {
        case Outcome::equal_whp:
        case Outcome::empty_whp:
            out << to_string(v.outcome) << " rounds=" << v.rounds
                << " error<=" << v.error_bound() << "\n";
            return 0;
        default:
            out << to_string(v.outcome) << " round=" << *v.witness_round << "\n";
            return 1;
    }
}

struct Options {
    std::string g, g1, g2, word, out_path;
    int n = 0;
    int rounds = default_rounds;
    uint64_t seed = 0;
    uint64_t budget = default_oracle_budget;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"randomized slice equivalence testing for context-free grammars"};
    app.require_subcommand(1);
    Options opt;

    auto add_n = [&](CLI::App* cmd) {
        cmd->add_option("--n", opt.n, "slice length")->required()->check(CLI::PositiveNumber);
    };
    auto add_rng = [&](CLI::App* cmd) {
        cmd->add_option("--rounds", opt.rounds, "independent rounds")
            ->check(CLI::Range(1, 1 << 20));
        cmd->add_option("--seed", opt.seed, "random seed");
    };
    auto add_pair = [&](CLI::App* cmd) {
        cmd->add_option("--g1", opt.g1, "first grammar file")->required();
        cmd->add_option("--g2", opt.g2, "second grammar file")->required();
        add_n(cmd);
    };

    auto* eq_slice = app.add_subcommand(
        "eq-slice", "are the length-n slices of two grammars equal? (randomized)");
    add_pair(eq_slice);
    add_rng(eq_slice);

    auto* eq_upto = app.add_subcommand(
        "eq-upto", "do two grammars differ on any word of length 1..n? (randomized)");
    add_pair(eq_upto);
    add_rng(eq_upto);

    auto* parse = app.add_subcommand("parse", "is a word generated by the grammar?");
    parse->add_option("--g", opt.g, "grammar file")->required();
    parse->add_option("--word", opt.word, "space-separated terminal tokens")->required();

    auto* gf2 = app.add_subcommand(
        "gf2-empty", "is the length-n slice of the GF(2)-language empty? (randomized)");
    gf2->add_option("--g", opt.g, "grammar file")->required();
    add_n(gf2);
    add_rng(gf2);

    auto* extract = app.add_subcommand("extract-circuit",
                                       "compile (grammar, n) into a monotone circuit");
    extract->add_option("--g", opt.g, "grammar file")->required();
    add_n(extract);
    extract->add_option("--out", opt.out_path, "circuit output file")->required();

    auto* oracle_check = app.add_subcommand(
        "oracle-check", "exact slice comparison by exhaustive enumeration");
    add_pair(oracle_check);
    oracle_check->add_option("--budget", opt.budget, "max |alphabet|^n to enumerate");

    auto* ambiguity = app.add_subcommand(
        "ambiguity-check", "does some length-n word have two or more derivations?");
    ambiguity->add_option("--g", opt.g, "grammar file")->required();
    add_n(ambiguity);
    ambiguity->add_option("--budget", opt.budget, "max |alphabet|^n to enumerate");

    auto* normalize = app.add_subcommand(
        "normalize", "convert a general grammar to Chomsky normal form");
    normalize->add_option("--g", opt.g, "general grammar file")->required();
    normalize->add_option("--out", opt.out_path, "CNF output file")->required();

    std::vector<std::string> argv(args.rbegin(), args.rend());  // CLI11 wants reversed
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (eq_slice->parsed())
            return report_verdict(
                slice_equivalence(load_grammar(opt.g1), load_grammar(opt.g2), opt.n,
                                  opt.rounds, opt.seed),
                out);

        if (eq_upto->parsed())
            return report_verdict(
                bounded_equivalence(load_grammar(opt.g1), load_grammar(opt.g2), opt.n,
                                    opt.rounds, opt.seed),
                out);

        if (parse->parsed()) {
            bool member = parse_membership(load_grammar(opt.g), split_word(opt.word));
            out << (member ? "MEMBER" : "NOT_MEMBER") << "\n";
            return member ? 0 : 1;
        }

        if (gf2->parsed())
            return report_verdict(
                gf2_slice_empty(load_grammar(opt.g), opt.n, opt.rounds, opt.seed), out);

        if (extract->parsed()) {
            MonotoneCircuit c = extract_circuit(load_grammar(opt.g), opt.n);
            write_file(opt.out_path, export_circuit(c));
            out << "CIRCUIT gates=" << c.gates.size() << " output=g" << c.output
                << " out=" << opt.out_path << "\n";
            return 0;
        }

        if (oracle_check->parsed()) {
            SliceSet s1 = enumerate_slice(load_grammar(opt.g1), opt.n, opt.budget);
            SliceSet s2 = enumerate_slice(load_grammar(opt.g2), opt.n, opt.budget);
            if (s1.words == s2.words) {
                out << "EQUAL words=" << s1.words.size() << "\n";
                return 0;
            }
            // lexicographically least word in the symmetric difference
            Word witness;
            size_t i = 0, j = 0;
            while (true) {
                if (i < s1.words.size() && j < s2.words.size()) {
                    if (s1.words[i] == s2.words[j]) {
                        ++i, ++j;
                        continue;
                    }
                    witness = std::min(s1.words[i], s2.words[j]);
                } else {
                    witness = i < s1.words.size() ? s1.words[i] : s2.words[j];
                }
                break;
            }
            out << "NOT_EQUAL witness=" << quoted(witness) << "\n";
            return 1;
        }

        if (ambiguity->parsed()) {
            Grammar g = load_grammar(opt.g);
            if (auto amb = find_ambiguous_word(g, opt.n, opt.budget)) {
                out << "AMBIGUOUS witness=" << quoted(amb->word) << " count=" << amb->count
                    << "\n";
                return 1;
            }
            out << "UNAMBIGUOUS words=" << enumerate_slice(g, opt.n, opt.budget).words.size()
                << "\n";
            return 0;
        }

        if (normalize->parsed()) {
            NormalizeResult r = normalize_to_cnf(parse_general_grammar(read_file(opt.g)));
            write_file(opt.out_path, serialize(r.grammar));
            out << "NORMALIZED rules=" << r.grammar.size()
                << " epsilon=" << (r.derives_epsilon ? "true" : "false")
                << " out=" << opt.out_path << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
    err << "usage error: no subcommand\n";
    return 2;
}

}  // namespace sliceq
