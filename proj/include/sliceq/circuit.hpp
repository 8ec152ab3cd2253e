#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "sliceq/grammar.hpp"

namespace sliceq {

/// Monotone boolean circuit over variables x_{a,i}: INPUT, AND, n-ary OR and
/// FALSE gates only (no negation). Gate ids are consecutive from 0 and
/// topologically ordered: every referenced id precedes its user.
struct MonotoneCircuit {
    struct InputGate {
        std::string letter;
        int position;  // 1-based
        friend bool operator==(const InputGate&, const InputGate&) = default;
    };
    struct AndGate {
        int left;
        int right;
        friend bool operator==(const AndGate&, const AndGate&) = default;
    };
    struct OrGate {
        std::vector<int> args;  // at least one
        friend bool operator==(const OrGate&, const OrGate&) = default;
    };
    struct FalseGate {
        friend bool operator==(const FalseGate&, const FalseGate&) = default;
    };
    using Gate = std::variant<InputGate, AndGate, OrGate, FalseGate>;

    std::vector<Gate> gates;
    int output = -1;

    friend bool operator==(const MonotoneCircuit&, const MonotoneCircuit&) = default;
};

struct CircuitStats {
    size_t inputs = 0;
    size_t ands = 0;
    size_t ors = 0;
    size_t falses = 0;
};

CircuitStats stats(const MonotoneCircuit& c);

/// Boolean point: value of x_{a,i} per (letter, position). May be partial;
/// evaluation fails on a missing variable that a gate actually reads.
using BoolInput = std::map<std::pair<std::string, int>, bool>;

/// All variables over `alphabet` x [1, n] set to `value`.
BoolInput constant_input(const std::vector<std::string>& alphabet, int n, bool value);

/// The word-like boolean point of w: x_{w_i, i} = 1, everything else 0.
BoolInput word_like_input(const std::vector<std::string>& alphabet, const Word& w);

/// Compiles (grammar, n) into a monotone circuit computing the boolean slice
/// function: the slice DP with (OR, AND) in place of (+, *). One OR gate per
/// span cell with a non-empty language, one AND gate per live (rule, split);
/// empty cells are pruned instead of materialized. When the whole slice is
/// empty the circuit is a single FALSE gate.
MonotoneCircuit extract_circuit(const Grammar& g, int n);

/// Evaluates the DAG in topological order. Throws on a missing input variable.
bool eval_circuit(const MonotoneCircuit& c, const BoolInput& input);

/// Text form:
///   circuit <num_gates> <output_id>
///   g<id> INPUT <terminal> <position> | g<id> AND g<a> g<b>
///   g<id> OR g<a> ... g<k>           | g<id> FALSE
/// import_circuit(export_circuit(c)) == c.
std::string export_circuit(const MonotoneCircuit& c);
MonotoneCircuit import_circuit(const std::string& text);

}  // namespace sliceq
