#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace sawmap {

enum class GateKind { Phase, ControlledPhase, Hadamard, Swap };

// Qubit indices are 1-based; qubit 1 is the most significant bit of the
// basis index.
struct Gate {
    GateKind kind;
    int qubit_a;   // target, or first qubit of a two-qubit gate
    int qubit_b;   // second qubit of a two-qubit gate, 0 otherwise
    double angle;  // radians, phase kinds only
};

inline Gate phase_gate(int qubit, double angle) {
    return Gate{GateKind::Phase, qubit, 0, angle};
}

inline Gate controlled_phase_gate(int qubit_a, int qubit_b, double angle) {
    if (qubit_a == qubit_b)
        throw std::invalid_argument("controlled_phase_gate: qubits must be distinct");
    return Gate{GateKind::ControlledPhase, qubit_a, qubit_b, angle};
}

inline Gate hadamard_gate(int qubit) { return Gate{GateKind::Hadamard, qubit, 0, 0.0}; }

inline Gate swap_gate(int qubit_a, int qubit_b) {
    if (qubit_a == qubit_b) throw std::invalid_argument("swap_gate: qubits must be distinct");
    return Gate{GateKind::Swap, qubit_a, qubit_b, 0.0};
}

struct GateCounts {
    std::size_t n_phase = 0;
    std::size_t n_controlled_phase = 0;
    std::size_t n_hadamard = 0;
    std::size_t n_swap = 0;

    std::size_t total() const { return n_phase + n_controlled_phase + n_hadamard + n_swap; }
};

struct GateProgram {
    std::vector<Gate> gates;

    void append(const Gate& g) { gates.push_back(g); }

    void append(const GateProgram& other) {
        gates.insert(gates.end(), other.gates.begin(), other.gates.end());
    }

    GateCounts counts() const {
        GateCounts c;
        for (const Gate& g : gates) {
            switch (g.kind) {
                case GateKind::Phase: ++c.n_phase; break;
                case GateKind::ControlledPhase: ++c.n_controlled_phase; break;
                case GateKind::Hadamard: ++c.n_hadamard; break;
                case GateKind::Swap: ++c.n_swap; break;
            }
        }
        return c;
    }

    std::size_t size() const { return gates.size(); }
};

}  // namespace sawmap
