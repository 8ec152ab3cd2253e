#include "sliceq/circuit.hpp"

#include <sstream>

#include "sliceq/engine.hpp"

namespace sliceq {

CircuitStats stats(const MonotoneCircuit& c) {
    CircuitStats s;
    for (const auto& g : c.gates) {
        if (std::holds_alternative<MonotoneCircuit::InputGate>(g)) ++s.inputs;
        else if (std::holds_alternative<MonotoneCircuit::AndGate>(g)) ++s.ands;
        else if (std::holds_alternative<MonotoneCircuit::OrGate>(g)) ++s.ors;
        else ++s.falses;
    }
    return s;
}

BoolInput constant_input(const std::vector<std::string>& alphabet, int n, bool value) {
    BoolInput in;
    for (const auto& a : alphabet)
        for (int i = 1; i <= n; ++i) in[{a, i}] = value;
    return in;
}

BoolInput word_like_input(const std::vector<std::string>& alphabet, const Word& w) {
    BoolInput in = constant_input(alphabet, static_cast<int>(w.size()), false);
    for (size_t i = 0; i < w.size(); ++i) {
        auto it = in.find({w[i], static_cast<int>(i) + 1});
        if (it == in.end()) throw Error("unknown letter '" + w[i] + "'");
        it->second = true;
    }
    return in;
}

MonotoneCircuit extract_circuit(const Grammar& g, int n) {
    if (n <= 0) throw Error("slice length must be positive");
    if (auto vs = validate(g); !vs.empty())
        throw Error("grammar fails CNF validation: " + vs.front().message);
    CompiledGrammar cg = CompiledGrammar::build(g);
    const size_t nts = cg.nonterminals.size();

    MonotoneCircuit c;
    auto add = [&](MonotoneCircuit::Gate gate) {
        c.gates.push_back(std::move(gate));
        return static_cast<int>(c.gates.size()) - 1;
    };

    std::map<std::pair<int, int>, int> input_ids;  // (letter, position) -> gate
    auto input = [&](int letter, int pos) {
        auto [it, fresh] = input_ids.try_emplace({letter, pos}, -1);
        if (fresh)
            it->second =
                add(MonotoneCircuit::InputGate{cg.letters[static_cast<size_t>(letter)], pos});
        return it->second;
    };

    // cell gate id per (l, len, nonterminal); -1 = empty span language
    auto cell_index = [&](int l, int len, int nt) {
        return (static_cast<size_t>(len - 1) * n + static_cast<size_t>(l - 1)) * nts +
               static_cast<size_t>(nt);
    };
    std::vector<int> cell(static_cast<size_t>(n) * n * nts, -1);

    for (int l = 1; l <= n; ++l)
        for (size_t nt = 0; nt < nts; ++nt) {
            std::vector<int> args;
            for (const auto& r : cg.term_rules)
                if (r.head == static_cast<int>(nt)) args.push_back(input(r.letter, l));
            if (!args.empty())
                cell[cell_index(l, 1, static_cast<int>(nt))] =
                    add(MonotoneCircuit::OrGate{std::move(args)});
        }

    for (int len = 2; len <= n; ++len)
        for (int l = 1; l + len <= n + 1; ++l)
            for (size_t nt = 0; nt < nts; ++nt) {
                std::vector<int> args;
                for (const auto& rule : cg.bin_rules) {
                    if (rule.head != static_cast<int>(nt)) continue;
                    for (int j = 1; j < len; ++j) {
                        int a = cell[cell_index(l, j, rule.left)];
                        int b = cell[cell_index(l + j, len - j, rule.right)];
                        if (a >= 0 && b >= 0) args.push_back(add(MonotoneCircuit::AndGate{a, b}));
                    }
                }
                if (!args.empty())
                    cell[cell_index(l, len, static_cast<int>(nt))] =
                        add(MonotoneCircuit::OrGate{std::move(args)});
            }

    int out = cell[cell_index(1, n, cg.start)];
    if (out < 0) return MonotoneCircuit{{MonotoneCircuit::FalseGate{}}, 0};
    c.output = out;
    return c;
}

bool eval_circuit(const MonotoneCircuit& c, const BoolInput& input) {
    if (c.output < 0 || c.output >= static_cast<int>(c.gates.size()))
        throw Error("circuit has no valid output gate");
    std::vector<char> value(c.gates.size(), 0);
    for (size_t id = 0; id < c.gates.size(); ++id) {
        const auto& gate = c.gates[id];
        if (const auto* in = std::get_if<MonotoneCircuit::InputGate>(&gate)) {
            auto it = input.find({in->letter, in->position});
            if (it == input.end())
                throw Error("circuit input is missing variable ('" + in->letter + "', " +
                            std::to_string(in->position) + ")");
            value[id] = it->second;
        } else if (const auto* a = std::get_if<MonotoneCircuit::AndGate>(&gate)) {
            value[id] = value[static_cast<size_t>(a->left)] &&
                         value[static_cast<size_t>(a->right)];
        } else if (const auto* o = std::get_if<MonotoneCircuit::OrGate>(&gate)) {
            char v = 0;
            for (int arg : o->args) v |= value[static_cast<size_t>(arg)];
            value[id] = v;
        } else {
            value[id] = 0;
        }
    }
    return value[static_cast<size_t>(c.output)] != 0;
}

std::string export_circuit(const MonotoneCircuit& c) {
    std::string out =
        "circuit " + std::to_string(c.gates.size()) + " " + std::to_string(c.output) + "\n";
    for (size_t id = 0; id < c.gates.size(); ++id) {
        out += "g" + std::to_string(id);
        const auto& gate = c.gates[id];
        if (const auto* in = std::get_if<MonotoneCircuit::InputGate>(&gate)) {
            out += " INPUT " + in->letter + " " + std::to_string(in->position);
        } else if (const auto* a = std::get_if<MonotoneCircuit::AndGate>(&gate)) {
            out += " AND g" + std::to_string(a->left) + " g" + std::to_string(a->right);
        } else if (const auto* o = std::get_if<MonotoneCircuit::OrGate>(&gate)) {
            out += " OR";
            for (int arg : o->args) out += " g" + std::to_string(arg);
        } else {
            out += " FALSE";
        }
        out += "\n";
    }
    return out;
}

namespace {

int parse_gate_ref(const std::string& tok, int max_id, int line) {
    if (tok.size() < 2 || tok[0] != 'g')
        throw ParseError("expected gate reference, got '" + tok + "'", line, 1);
    int id;
    try {
        size_t used;
        id = std::stoi(tok.substr(1), &used);
        if (used != tok.size() - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw ParseError("malformed gate reference '" + tok + "'", line, 1);
    }
    if (id < 0 || id >= max_id)
        throw ParseError("gate reference '" + tok + "' is not topologically ordered", line, 1);
    return id;
}

}  // namespace

MonotoneCircuit import_circuit(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;

    auto next_tokens = [&](std::vector<std::string>& toks) {
        toks.clear();
        while (std::getline(in, line)) {
            ++line_no;
            std::istringstream ls(line);
            std::string t;
            while (ls >> t) toks.push_back(t);
            if (!toks.empty()) return true;
        }
        return false;
    };

    std::vector<std::string> toks;
    if (!next_tokens(toks) || toks.size() != 3 || toks[0] != "circuit")
        throw ParseError("expected header 'circuit <num_gates> <output_id>'", line_no, 1);
    size_t num_gates;
    int output;
    try {
        num_gates = std::stoul(toks[1]);
        output = std::stoi(toks[2]);
    } catch (const std::exception&) {
        throw ParseError("malformed circuit header", line_no, 1);
    }
    if (output < 0 || static_cast<size_t>(output) >= num_gates)
        throw ParseError("output id out of range", line_no, 1);

    MonotoneCircuit c;
    c.output = output;
    for (size_t id = 0; id < num_gates; ++id) {
        if (!next_tokens(toks)) throw ParseError("unexpected end of circuit", line_no + 1, 1);
        if (toks[0] != "g" + std::to_string(id))
            throw ParseError("expected gate g" + std::to_string(id), line_no, 1);
        int max_id = static_cast<int>(id);
        if (toks.size() >= 2 && toks[1] == "INPUT" && toks.size() == 4) {
            int pos;
            try {
                pos = std::stoi(toks[3]);
            } catch (const std::exception&) {
                throw ParseError("malformed input position", line_no, 1);
            }
            if (pos < 1) throw ParseError("input position must be >= 1", line_no, 1);
            c.gates.push_back(MonotoneCircuit::InputGate{toks[2], pos});
        } else if (toks.size() == 4 && toks[1] == "AND") {
            c.gates.push_back(MonotoneCircuit::AndGate{parse_gate_ref(toks[2], max_id, line_no),
                                                       parse_gate_ref(toks[3], max_id, line_no)});
        } else if (toks.size() >= 3 && toks[1] == "OR") {
            MonotoneCircuit::OrGate gate;
            for (size_t k = 2; k < toks.size(); ++k)
                gate.args.push_back(parse_gate_ref(toks[k], max_id, line_no));
            c.gates.push_back(std::move(gate));
        } else if (toks.size() == 2 && toks[1] == "FALSE") {
            c.gates.push_back(MonotoneCircuit::FalseGate{});
        } else {
            throw ParseError("malformed gate line", line_no, 1);
        }
    }
    if (next_tokens(toks)) throw ParseError("trailing content after circuit", line_no, 1);
    return c;
}

}  // namespace sliceq
