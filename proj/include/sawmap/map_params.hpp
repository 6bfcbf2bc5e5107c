#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "sawmap/rng.hpp"

namespace sawmap {

/**
 * Parameters of the quantized sawtooth map on a torus of N = 2^n_q momentum
 * levels holding L classical cells. The kick period T = 2 pi L / N puts the
 * dynamics on a quantum resonance, and k = K / T fixes the kick strength at
 * chaos parameter K.
 */
struct MapParams {
    int n_q = 2;
    double K = 0.5;
    int L = 4;

    std::size_t N() const { return std::size_t{1} << n_q; }
    double T() const { return 2.0 * M_PI * static_cast<double>(L) / static_cast<double>(N()); }
    double k() const { return K / T(); }

    void validate() const {
        if (n_q < 2 || n_q > 30) throw std::domain_error("MapParams: n_q out of range [2, 30]");
        if (L <= 0 || L % 4 != 0)
            throw std::domain_error("MapParams: L must be a positive multiple of 4");
        if (!(K >= 0.0) || !std::isfinite(K))
            throw std::domain_error("MapParams: K must be finite and >= 0");
    }
};

/**
 * Per-gate angle noise: every executed rotation angle is shifted by an
 * independent draw from the uniform interval (-epsilon/2, epsilon/2).
 * epsilon = 0 reproduces the ideal evolution bit-for-bit. The same
 * (seed, realization_id) always yields the same noise stream.
 */
struct NoiseModel {
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t realization_id = 0;
    // QFT swaps are index relabelings and stay exact by default; set to true
    // to treat them as physical exp(i phi P_singlet) rotations with noisy phi.
    bool noisy_swaps = false;

    SplitMix64 make_stream() const { return substream(seed, realization_id); }

    void validate() const {
        if (!(epsilon >= 0.0)) throw std::domain_error("NoiseModel: epsilon must be >= 0");
    }
};

/// Angle with one uniform noise draw applied: phi + delta,
/// delta ~ U(-epsilon/2, epsilon/2), one draw per gate application.
inline double noisy_angle(double phi, const NoiseModel& noise, SplitMix64& rng) {
    if (noise.epsilon == 0.0) return phi;
    return phi + noise.epsilon * (rng.uniform01() - 0.5);
}

}  // namespace sawmap
