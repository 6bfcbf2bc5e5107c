#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "sawmap/entanglement.hpp"
#include "sawmap/gates.hpp"
#include "sawmap/map_params.hpp"
#include "sawmap/qft.hpp"
#include "sawmap/rng.hpp"
#include "sawmap/state_vector.hpp"
#include "sawmap/time_series.hpp"

namespace sawmap {

/**
 * Diagonal programs for one map step.
 *
 * Writing a basis index as j = sum_i a_i 2^{n_q - i} (a_1 the most
 * significant bit), any diagonal unitary diag(e^{i f(j)}) with quadratic f
 * splits into one PHASE per bit (the a_i^2 = a_i terms plus anything linear
 * in j), one CPHASE per bit pair (the a_i a_i' cross terms) and a constant
 * term that is dropped as a global phase.
 */

/// diag(e^{-i T n^2 / 2}) over the momentum index n.
inline GateProgram build_rotation_program(const MapParams& p) {
    p.validate();
    const double T = p.T();
    GateProgram prog;
    for (int i = 1; i <= p.n_q; ++i)
        prog.append(phase_gate(i, -T * std::ldexp(1.0, 2 * (p.n_q - i) - 1)));
    for (int i = 1; i <= p.n_q; ++i)
        for (int j = i + 1; j <= p.n_q; ++j)
            prog.append(controlled_phase_gate(i, j, -T * std::ldexp(1.0, 2 * p.n_q - i - j)));
    return prog;
}

/// diag(e^{i k theta_j^2 / 2}) over the phase grid theta_j = -pi + 2 pi j / N.
/// The -pi offset shows up as the linear-in-j part of theta_j^2 and lands in
/// the PHASE angles; the constant pi^2/2 term is a global phase.
inline GateProgram build_kick_program(const MapParams& p) {
    p.validate();
    const double k = p.k();
    const double delta = 2.0 * M_PI / static_cast<double>(p.N());
    GateProgram prog;
    for (int i = 1; i <= p.n_q; ++i) {
        const double quad = delta * delta * std::ldexp(1.0, 2 * (p.n_q - i));
        const double lin = 2.0 * M_PI * delta * std::ldexp(1.0, p.n_q - i);
        prog.append(phase_gate(i, 0.5 * k * (quad - lin)));
    }
    for (int i = 1; i <= p.n_q; ++i)
        for (int j = i + 1; j <= p.n_q; ++j)
            prog.append(controlled_phase_gate(
                i, j, k * delta * delta * std::ldexp(1.0, 2 * p.n_q - i - j)));
    return prog;
}

/**
 * Full program for one map step, applied left to right:
 *
 *   rotation  PHASE(n_q, pi)  QFT  kick  IQFT  PHASE(n_q, pi)
 *
 * The two PHASE(n_q, pi) layers supply the e^{-i pi n} factor that converts
 * the plain QFT into the transform onto the offset grid theta_j = -pi +
 * 2 pi j / N, i.e. psi(theta_j) = N^{-1/2} sum_n e^{i n theta_j} psi_n.
 */
inline GateProgram build_step_program(const MapParams& p) {
    GateProgram prog = build_rotation_program(p);
    prog.append(phase_gate(p.n_q, M_PI));
    prog.append(qft_program(p.n_q, false));
    prog.append(build_kick_program(p));
    prog.append(qft_program(p.n_q, true));
    prog.append(phase_gate(p.n_q, M_PI));
    return prog;
}

namespace detail {

/// Hadamard as a rotation e^{i phi} exp(-i phi (X+Z)/sqrt(2)) so that
/// phi = pi/2 gives the exact Hadamard matrix and noise can shift phi.
inline void apply_hadamard_rotated(StateVector& s, std::size_t mask, double phi) {
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    const complex g = std::polar(1.0, phi);
    const complex c = std::cos(phi) * g;
    const complex off = complex{0.0, -1.0} * (std::sin(phi) * inv_sqrt2) * g;
    apply_one_qubit_matrix(s, mask, c + off, off, off, c - off);
}

/// SWAP as exp(i phi P_singlet) on each (01, 10) amplitude pair; phi = pi is
/// the exact swap.
inline void apply_swap_rotated(StateVector& s, std::size_t mask_a, std::size_t mask_b,
                               double phi) {
    const std::size_t lo = mask_a < mask_b ? mask_a : mask_b;
    const std::size_t hi = mask_a < mask_b ? mask_b : mask_a;
    const std::size_t flip = lo | hi;
    const complex c = 0.5 * (std::polar(1.0, phi) - 1.0);
    const std::size_t N = s.size();
    for (std::size_t a = hi; a < N; a += 2 * hi) {
        for (std::size_t base = a; base < a + hi; base += 2 * lo) {
            for (std::size_t i = base; i < base + lo; ++i) {
                const std::size_t j = i ^ flip;
                const complex d = c * (s.amp[i] - s.amp[j]);
                s.amp[i] += d;
                s.amp[j] -= d;
            }
        }
    }
}

}  // namespace detail

/**
 * Execute a gate program with per-gate angle noise, advancing `rng` by one
 * draw per gate application. epsilon = 0 takes the exact path and leaves
 * `rng` untouched. Swaps are index relabelings unless noise.noisy_swaps is
 * set, in which case they rotate like every other gate.
 */
inline void execute_with_noise(StateVector& state, const GateProgram& program,
                               const NoiseModel& noise, SplitMix64& rng) {
    if (noise.epsilon == 0.0) {
        apply_program(state, program);
        return;
    }
    for (const Gate& g : program.gates) {
        switch (g.kind) {
            case GateKind::Phase:
                detail::scale_bit_set(state, state.qubit_mask(g.qubit_a),
                                      std::polar(1.0, noisy_angle(g.angle, noise, rng)));
                break;
            case GateKind::ControlledPhase:
                detail::scale_bits_set(state, state.qubit_mask(g.qubit_a),
                                       state.qubit_mask(g.qubit_b),
                                       std::polar(1.0, noisy_angle(g.angle, noise, rng)));
                break;
            case GateKind::Hadamard:
                detail::apply_hadamard_rotated(state, state.qubit_mask(g.qubit_a),
                                               noisy_angle(0.5 * M_PI, noise, rng));
                break;
            case GateKind::Swap:
                if (noise.noisy_swaps)
                    detail::apply_swap_rotated(state, state.qubit_mask(g.qubit_a),
                                               state.qubit_mask(g.qubit_b),
                                               noisy_angle(M_PI, noise, rng));
                else
                    detail::apply_swap(state, state.qubit_mask(g.qubit_a),
                                       state.qubit_mask(g.qubit_b));
                break;
        }
    }
}

/// One gate-based map step. `rng` carries the noise stream across steps; use
/// the NoiseModel overload for a single-shot step.
inline void map_step(StateVector& state, const MapParams& p, const NoiseModel& noise,
                     SplitMix64& rng, const GateProgram& step_program) {
    if (state.n_q != p.n_q) throw std::domain_error("map_step: qubit count mismatch");
    execute_with_noise(state, step_program, noise, rng);
}

inline void map_step(StateVector& state, const MapParams& p, const NoiseModel& noise,
                     SplitMix64& rng) {
    map_step(state, p, noise, rng, build_step_program(p));
}

inline void map_step(StateVector& state, const MapParams& p, const NoiseModel& noise) {
    SplitMix64 rng = noise.make_stream();
    map_step(state, p, noise, rng);
}

/**
 * Ground-truth map step via dense transforms, O(N^2):
 * multiply by e^{-i T n^2/2}, transform to the grid theta_j = -pi + 2 pi j/N
 * with an explicit N-point Fourier matrix, multiply by e^{i k theta_j^2/2},
 * transform back. Intended for verification at n_q <= 12.
 */
inline void direct_step(StateVector& state, const MapParams& p) {
    if (state.n_q != p.n_q) throw std::domain_error("direct_step: qubit count mismatch");
    p.validate();
    const std::size_t N = state.size();
    const double T = p.T();
    const double k = p.k();
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(N));

    for (std::size_t n = 0; n < N; ++n)
        state.amp[n] *= std::polar(1.0, -0.5 * T * static_cast<double>(n) * static_cast<double>(n));

    std::vector<complex> theta_rep(N);
    for (std::size_t j = 0; j < N; ++j) {
        const double theta = -M_PI + 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(N);
        complex s{0.0, 0.0};
        for (std::size_t n = 0; n < N; ++n)
            s += std::polar(1.0, static_cast<double>(n) * theta) * state.amp[n];
        theta_rep[j] = inv_sqrt_n * s * std::polar(1.0, 0.5 * k * theta * theta);
    }

    for (std::size_t n = 0; n < N; ++n) {
        complex s{0.0, 0.0};
        for (std::size_t j = 0; j < N; ++j) {
            const double theta =
                -M_PI + 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(N);
            s += std::polar(1.0, -static_cast<double>(n) * theta) * theta_rep[j];
        }
        state.amp[n] = inv_sqrt_n * s;
    }
}

/// Observer hook invoked after each step; must not mutate the state.
using StepObserver = std::function<void(std::int64_t, const StateVector&, const StepRecord&)>;

inline StepRecord observe(std::int64_t t, const StateVector& state) {
    StepRecord rec;
    rec.t = t;
    const PartitionProbabilities w = partition_probabilities(state);
    rec.W00 = w.w00;
    rec.W01 = w.w01;
    rec.W10 = w.w10;
    rec.W11 = w.w11;
    const auto [q14, q23] = scalar_product_diagnostics(state);
    rec.Q14 = q14;
    rec.Q23 = q23;
    rec.C = concurrence(reduce_top_two(state)).C;
    rec.norm = norm(state);
    return rec;
}

/**
 * Iterate the map t_max times from `state`, recording (t, C, W, Q, norm)
 * after every step. The returned series starts with the t = 0 record of the
 * initial state. The gate program is built once and reused.
 */
inline TimeSeries evolve(StateVector& state, const MapParams& p, std::int64_t t_max,
                         const NoiseModel& noise, const StepObserver& observer = nullptr) {
    if (t_max < 0) throw std::domain_error("evolve: t_max must be >= 0");
    p.validate();
    noise.validate();

    TimeSeries series;
    series.params = p;
    series.noise = noise;
    series.records.reserve(static_cast<std::size_t>(t_max) + 1);
    series.records.push_back(observe(0, state));

    const GateProgram program = build_step_program(p);
    SplitMix64 rng = noise.make_stream();
    for (std::int64_t t = 1; t <= t_max; ++t) {
        map_step(state, p, noise, rng, program);
        series.records.push_back(observe(t, state));
        if (observer) observer(t, state, series.records.back());
    }
    return series;
}

}  // namespace sawmap
