#pragma once

#include <cmath>

#include "sawmap/gates.hpp"
#include "sawmap/state_vector.hpp"

namespace sawmap {

/**
 * Gate program for the quantum Fourier transform
 *
 *   (F psi)_m = N^{-1/2} sum_n e^{+2 pi i m n / N} psi_n
 *
 * built from n_q Hadamards, n_q(n_q-1)/2 controlled phases and
 * floor(n_q/2) swaps. The inverse program reverses the gate order and
 * conjugates every phase angle.
 */
inline GateProgram qft_program(int n_q, bool inverse) {
    GateProgram prog;
    if (!inverse) {
        for (int t = 1; t <= n_q; ++t) {
            prog.append(hadamard_gate(t));
            for (int c = t + 1; c <= n_q; ++c)
                prog.append(controlled_phase_gate(t, c, M_PI / static_cast<double>(1ull << (c - t))));
        }
        for (int l = 1; l <= n_q / 2; ++l) prog.append(swap_gate(l, n_q + 1 - l));
    } else {
        for (int l = n_q / 2; l >= 1; --l) prog.append(swap_gate(l, n_q + 1 - l));
        for (int t = n_q; t >= 1; --t) {
            for (int c = n_q; c >= t + 1; --c)
                prog.append(controlled_phase_gate(t, c, -M_PI / static_cast<double>(1ull << (c - t))));
            prog.append(hadamard_gate(t));
        }
    }
    return prog;
}

/// Apply the QFT (or its inverse) in place via its gate program.
inline void qft(StateVector& state, bool inverse) {
    apply_program(state, qft_program(state.n_q, inverse));
}

}  // namespace sawmap
