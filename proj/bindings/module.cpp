#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sliceq/circuit.hpp"
#include "sliceq/engine.hpp"
#include "sliceq/grammar.hpp"
#include "sliceq/oracle.hpp"

namespace py = pybind11;
using namespace sliceq;

namespace {

py::object big_to_py(const BigInt& v) {
    return py::module_::import("builtins").attr("int")(v.str());
}

py::object verdict_witness(const Verdict& v) {
    return v.witness_round ? py::cast(*v.witness_round) : py::none();
}

std::vector<std::string> violations_to_strings(const std::vector<Violation>& vs) {
    std::vector<std::string> out;
    out.reserve(vs.size());
    for (const auto& v : vs) out.push_back(v.message);
    return out;
}

// dict {(letter, position): int} -> field assignment over the grammar alphabet
Assignment<Fp61> dict_to_assignment(const Grammar& g, int n, const py::dict& point) {
    auto a = Assignment<Fp61>::constant(g.alphabet, n, Fp61::zero());
    for (auto item : point) {
        auto key = item.first.cast<std::pair<std::string, int>>();
        int letter = a.letter_index(key.first);
        if (letter < 0) throw Error("unknown letter '" + key.first + "'");
        if (key.second < 1 || key.second > n)
            throw Error("position " + std::to_string(key.second) + " out of range");
        a.at(letter, key.second) = Fp61::from_u64(item.second.cast<uint64_t>());
    }
    return a;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "randomized slice equivalence testing for context-free grammars";

    // translators run newest-first, so the base class goes first
    py::register_exception<Error>(m, "SliceqError", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "GrammarParseError", PyExc_ValueError);
    py::register_exception<NormalizeError>(m, "NormalizeError", PyExc_ValueError);
    py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);

    py::class_<Grammar>(m, "Grammar")
        .def_readonly("alphabet", &Grammar::alphabet)
        .def_readonly("nonterminals", &Grammar::nonterminals)
        .def_readonly("start", &Grammar::start)
        .def_property_readonly("size", &Grammar::size)
        .def("serialize", &serialize)
        .def("__eq__", [](const Grammar& a, const Grammar& b) { return a == b; })
        .def("__repr__", [](const Grammar& g) {
            return "<Grammar start='" + g.start + "' rules=" + std::to_string(g.size()) + ">";
        });

    py::class_<Verdict>(m, "Verdict")
        .def_property_readonly("outcome", [](const Verdict& v) { return to_string(v.outcome); })
        .def_readonly("rounds", &Verdict::rounds)
        .def_property_readonly("witness_round", &verdict_witness)
        .def_readonly("seed", &Verdict::seed)
        .def_readonly("n", &Verdict::n)
        .def_property_readonly("error_bound", &Verdict::error_bound)
        .def("__repr__", [](const Verdict& v) { return "<Verdict " + to_string(v.outcome) + ">"; });

    py::class_<MonotoneCircuit>(m, "MonotoneCircuit")
        .def_property_readonly(
            "num_gates", [](const MonotoneCircuit& c) { return c.gates.size(); })
        .def_readonly("output", &MonotoneCircuit::output)
        .def("export_text", &export_circuit)
        .def("eval",
             [](const MonotoneCircuit& c, const std::map<std::pair<std::string, int>, bool>& in) {
                 return eval_circuit(c, in);
             })
        .def("eval_word",
             [](const MonotoneCircuit& c, const std::vector<std::string>& alphabet,
                const Word& w) { return eval_circuit(c, word_like_input(alphabet, w)); })
        .def("__eq__",
             [](const MonotoneCircuit& a, const MonotoneCircuit& b) { return a == b; })
        .def("__repr__", [](const MonotoneCircuit& c) {
            return "<MonotoneCircuit gates=" + std::to_string(c.gates.size()) + ">";
        });

    // grammars
    m.def("parse_grammar", &parse_grammar, py::arg("text"),
          "Parse a strict CNF grammar from its text form.");
    m.def(
        "validate_cnf",
        [](const std::string& text) {
            return violations_to_strings(validate_cnf(parse_general_grammar(text)));
        },
        py::arg("text"), "List of CNF violations in a general grammar text (empty iff valid).");
    m.def(
        "normalize_to_cnf",
        [](const std::string& text) {
            NormalizeResult r = normalize_to_cnf(parse_general_grammar(text));
            return py::make_tuple(r.grammar, r.derives_epsilon);
        },
        py::arg("text"),
        "Convert a general grammar text to CNF; returns (grammar, derives_epsilon).");

    // randomized engine
    m.def("slice_equivalence", &slice_equivalence, py::arg("g1"), py::arg("g2"), py::arg("n"),
          py::arg("rounds") = default_rounds, py::arg("seed") = 0);
    m.def("bounded_equivalence", &bounded_equivalence, py::arg("g1"), py::arg("g2"),
          py::arg("n"), py::arg("rounds") = default_rounds, py::arg("seed") = 0);
    m.def("gf2_slice_empty", &gf2_slice_empty, py::arg("g"), py::arg("n"),
          py::arg("rounds") = default_rounds, py::arg("seed") = 0);
    m.def("parse_membership", &parse_membership, py::arg("g"), py::arg("word"));
    m.def(
        "evaluate_slice",
        [](const Grammar& g, int n, const py::dict& point) {
            auto r = evaluate_slice(g, n, dict_to_assignment(g, n, point));
            return py::make_tuple(r.value.value(), r.multiplications);
        },
        py::arg("g"), py::arg("n"), py::arg("point"),
        "Evaluate the slice polynomial over F_p (p = 2^61 - 1) at a point given as "
        "{(letter, position): value}; returns (value, multiplications).");
    m.def(
        "evaluate_prefix",
        [](const Grammar& g, int n, const py::dict& point) {
            auto r = evaluate_prefix(g, n, dict_to_assignment(g, n, point));
            return py::make_tuple(r.value.value(), r.multiplications);
        },
        py::arg("g"), py::arg("n"), py::arg("point"));
    m.def(
        "evaluate_slice_random",
        [](const Grammar& g, int n, uint64_t seed) {
            Rng rng(seed);
            auto x = Assignment<Fp61>::random(g.alphabet, n, rng);
            auto r = evaluate_slice(g, n, x);
            return py::make_tuple(r.value.value(), r.multiplications);
        },
        py::arg("g"), py::arg("n"), py::arg("seed") = 0,
        "Evaluate at a seeded uniform random point; returns (value, multiplications).");

    // oracle
    m.def(
        "enumerate_slice",
        [](const Grammar& g, int n, uint64_t budget) {
            return enumerate_slice(g, n, budget).words;
        },
        py::arg("g"), py::arg("n"), py::arg("budget") = default_oracle_budget);
    m.def(
        "count_derivations",
        [](const Grammar& g, const Word& w) { return big_to_py(count_derivations(g, w)); },
        py::arg("g"), py::arg("word"));
    m.def("slice_unambiguous", &slice_unambiguous, py::arg("g"), py::arg("n"),
          py::arg("budget") = default_oracle_budget);
    m.def("exact_slice_equal", &exact_slice_equal, py::arg("g1"), py::arg("g2"), py::arg("n"),
          py::arg("budget") = default_oracle_budget);
    m.def("gf2_slice_nonempty_exact", &gf2_slice_nonempty_exact, py::arg("g"), py::arg("n"),
          py::arg("budget") = default_oracle_budget);
    m.def("cyk_member", &cyk_member, py::arg("g"), py::arg("word"));

    // circuits
    m.def("extract_circuit", &extract_circuit, py::arg("g"), py::arg("n"));
    m.def("import_circuit", &import_circuit, py::arg("text"));
}
