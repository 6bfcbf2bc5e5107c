#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sawmap/gates.hpp"

namespace sawmap {

using complex = std::complex<double>;

/**
 * Dense state vector over the momentum basis n = 0..N-1, N = 2^n_q.
 * Qubit 1 holds the most significant bit of n, qubit n_q the least
 * significant one. Amplitudes are stored flat; all gate application is
 * in-place and O(N).
 */
struct StateVector {
    int n_q = 0;
    std::vector<complex> amp;

    StateVector() = default;

    /// Starts in |0...0>.
    explicit StateVector(int num_qubits) : n_q(num_qubits) {
        if (num_qubits < 1 || num_qubits > 30)
            throw std::domain_error("StateVector: qubit count out of range [1, 30]");
        amp.assign(std::size_t{1} << num_qubits, complex{0.0, 0.0});
        amp[0] = complex{1.0, 0.0};
    }

    std::size_t size() const { return amp.size(); }

    /// Bit mask of the given 1-based qubit inside a basis index.
    std::size_t qubit_mask(int qubit) const {
        if (qubit < 1 || qubit > n_q)
            throw std::domain_error("StateVector: qubit index out of range");
        return std::size_t{1} << (n_q - qubit);
    }
};

inline double norm(const StateVector& state) {
    double s = 0.0;
    for (const complex& a : state.amp) s += std::norm(a);
    return std::sqrt(s);
}

/// |n> with amplitude 1 at index n.
inline StateVector basis_state(int n_q, std::size_t n) {
    StateVector state(n_q);
    if (n >= state.size()) throw std::domain_error("basis_state: index out of range");
    state.amp[0] = complex{0.0, 0.0};
    state.amp[n] = complex{1.0, 0.0};
    return state;
}

/// (|00> + |11>)/sqrt(2) on the two most significant qubits, tensored with
/// the uniform superposition of the remaining n_q - 2 qubits: amplitude
/// sqrt(2/N) on n in [0, N/4) and [3N/4, N), zero elsewhere.
inline StateVector initial_state(int n_q) {
    if (n_q < 2) throw std::domain_error("initial_state: requires at least 2 qubits");
    StateVector state(n_q);
    const std::size_t N = state.size();
    const std::size_t quarter = N / 4;
    const double a = std::sqrt(2.0 / static_cast<double>(N));
    for (std::size_t r = 0; r < quarter; ++r) {
        state.amp[r] = complex{a, 0.0};
        state.amp[3 * quarter + r] = complex{a, 0.0};
    }
    return state;
}

namespace detail {

/// Multiply every amplitude whose `mask` bit is set by `factor`.
inline void scale_bit_set(StateVector& s, std::size_t mask, complex factor) {
    const std::size_t N = s.size();
    for (std::size_t base = mask; base < N; base += 2 * mask)
        for (std::size_t i = base; i < base + mask; ++i) s.amp[i] *= factor;
}

/// Multiply every amplitude with both bits set by `factor`.
inline void scale_bits_set(StateVector& s, std::size_t mask_a, std::size_t mask_b,
                           complex factor) {
    const std::size_t lo = mask_a < mask_b ? mask_a : mask_b;
    const std::size_t hi = mask_a < mask_b ? mask_b : mask_a;
    const std::size_t N = s.size();
    for (std::size_t a = hi; a < N; a += 2 * hi)
        for (std::size_t c = a + lo; c < a + hi; c += 2 * lo)
            for (std::size_t i = c; i < c + lo; ++i) s.amp[i] *= factor;
}

/// Apply a general 2x2 matrix to the target qubit.
inline void apply_one_qubit_matrix(StateVector& s, std::size_t mask, complex m00, complex m01,
                                   complex m10, complex m11) {
    const std::size_t N = s.size();
    for (std::size_t a = 0; a < N; a += 2 * mask) {
        for (std::size_t i = a; i < a + mask; ++i) {
            const complex u = s.amp[i];
            const complex v = s.amp[i + mask];
            s.amp[i] = m00 * u + m01 * v;
            s.amp[i + mask] = m10 * u + m11 * v;
        }
    }
}

inline void apply_hadamard(StateVector& s, std::size_t mask) {
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    const std::size_t N = s.size();
    for (std::size_t a = 0; a < N; a += 2 * mask) {
        for (std::size_t i = a; i < a + mask; ++i) {
            const complex u = s.amp[i];
            const complex v = s.amp[i + mask];
            s.amp[i] = inv_sqrt2 * (u + v);
            s.amp[i + mask] = inv_sqrt2 * (u - v);
        }
    }
}

/// Exchange the two bit positions: amp[..0..1..] <-> amp[..1..0..].
inline void apply_swap(StateVector& s, std::size_t mask_a, std::size_t mask_b) {
    const std::size_t lo = mask_a < mask_b ? mask_a : mask_b;
    const std::size_t hi = mask_a < mask_b ? mask_b : mask_a;
    const std::size_t flip = lo | hi;
    const std::size_t N = s.size();
    // hi bit set, lo bit clear; partner index has them reversed.
    for (std::size_t a = hi; a < N; a += 2 * hi)
        for (std::size_t c = a; c < a + hi; c += 2 * lo)
            for (std::size_t i = c; i < c + lo; ++i) std::swap(s.amp[i], s.amp[i ^ flip]);
}

}  // namespace detail

/// Apply one elementary gate in place. PHASE multiplies amplitudes with the
/// target bit = 1 by e^{i phi}; CPHASE does the same when both bits are 1;
/// HADAMARD is (1/sqrt(2)) [[1,1],[1,-1]]; SWAP exchanges two bit positions.
inline void apply_gate(StateVector& state, const Gate& g) {
    switch (g.kind) {
        case GateKind::Phase:
            detail::scale_bit_set(state, state.qubit_mask(g.qubit_a),
                                  std::polar(1.0, g.angle));
            break;
        case GateKind::ControlledPhase:
            detail::scale_bits_set(state, state.qubit_mask(g.qubit_a),
                                   state.qubit_mask(g.qubit_b), std::polar(1.0, g.angle));
            break;
        case GateKind::Hadamard:
            detail::apply_hadamard(state, state.qubit_mask(g.qubit_a));
            break;
        case GateKind::Swap:
            detail::apply_swap(state, state.qubit_mask(g.qubit_a),
                               state.qubit_mask(g.qubit_b));
            break;
    }
}

inline void apply_program(StateVector& state, const GateProgram& program) {
    for (const Gate& g : program.gates) apply_gate(state, g);
}

struct PartitionProbabilities {
    double w00 = 0.0;
    double w01 = 0.0;
    double w10 = 0.0;
    double w11 = 0.0;
};

/// Total probability in each quarter of the basis, keyed by the two most
/// significant bits of n.
inline PartitionProbabilities partition_probabilities(const StateVector& state) {
    if (state.n_q < 2)
        throw std::domain_error("partition_probabilities: requires at least 2 qubits");
    const std::size_t quarter = state.size() / 4;
    double w[4] = {0.0, 0.0, 0.0, 0.0};
    for (int q = 0; q < 4; ++q) {
        double s = 0.0;
        for (std::size_t r = 0; r < quarter; ++r) s += std::norm(state.amp[q * quarter + r]);
        w[q] = s;
    }
    return PartitionProbabilities{w[0], w[1], w[2], w[3]};
}

}  // namespace sawmap
