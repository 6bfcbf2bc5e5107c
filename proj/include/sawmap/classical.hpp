#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sawmap/linear_fit.hpp"
#include "sawmap/map_params.hpp"
#include "sawmap/parallel.hpp"
#include "sawmap/rng.hpp"

namespace sawmap {

/// Wrap an angle into [-pi, pi).
inline double wrap_angle(double x) {
    double w = std::remainder(x, 2.0 * M_PI);
    if (w >= M_PI) w -= 2.0 * M_PI;
    if (w < -M_PI) w += 2.0 * M_PI;
    return w;
}

struct ClassicalPoint {
    double n;
    double theta;
};

/// One iteration of the classical map: n' = n + k*theta, theta' = theta + T*n'
/// wrapped into [-pi, pi). Momentum is unbounded.
inline ClassicalPoint classical_step(ClassicalPoint p, double k, double T) {
    ClassicalPoint next;
    next.n = p.n + k * p.theta;
    next.theta = wrap_angle(p.theta + T * next.n);
    return next;
}

/// Exact inverse of classical_step for points whose theta is already wrapped.
inline ClassicalPoint classical_step_back(ClassicalPoint p, double k, double T) {
    ClassicalPoint prev;
    prev.theta = wrap_angle(p.theta - T * p.n);
    prev.n = p.n - k * prev.theta;
    return prev;
}

/// Ensemble of independent trajectories sharing one (k, T) parameter pair.
struct ClassicalEnsemble {
    std::vector<ClassicalPoint> points;
    double k = 0.0;
    double T = 1.0;

    std::size_t size() const { return points.size(); }

    void step() {
        for (ClassicalPoint& p : points) p = classical_step(p, k, T);
    }
};

/// Diffusion-from-a-line ensemble: n = 0, theta uniform on [-pi, pi).
inline ClassicalEnsemble make_line_ensemble(double k, double T, std::size_t m,
                                            SplitMix64& rng) {
    ClassicalEnsemble ens;
    ens.k = k;
    ens.T = T;
    ens.points.resize(m);
    for (ClassicalPoint& p : ens.points) {
        p.n = 0.0;
        p.theta = rng.uniform(-M_PI, M_PI);
    }
    return ens;
}

/**
 * Result of fitting Var(y_t) = d0 * t + const over [t_lo, t_hi], where
 * y = T*n is the rescaled momentum. d0 is dimensionless and independent of
 * the T used for the rescaling; d = d0/T^2 is the diffusion rate of n
 * itself, and d == d0 exactly when the estimate was run at T = 1.
 */
struct DiffusionEstimate {
    double d0 = 0.0;
    double d = 0.0;
    double rescale_T = 1.0;
    std::int64_t t_lo = 0;
    std::int64_t t_hi = 0;
    double stderr_d0 = 0.0;
    double r_squared = 0.0;
};

/**
 * Estimate the rescaled diffusion rate D0(K) from `trajectories` unbounded
 * trajectories evolved for t_max kicks. The first 10 steps are discarded as
 * ballistic transient. Trajectories are processed in fixed chunks of 1024
 * with one RNG substream per chunk, so the result does not depend on
 * `workers`. Throws std::runtime_error if the fitted variance growth is not
 * positive.
 */
inline DiffusionEstimate estimate_d0(double K, std::size_t trajectories, std::int64_t t_max,
                                     std::uint64_t seed, double rescale_T = 1.0,
                                     int workers = 1) {
    if (!(K > 0.0) || !std::isfinite(K))
        throw std::invalid_argument("estimate_d0: K must be positive and finite");
    if (trajectories < 1000)
        throw std::invalid_argument("estimate_d0: need at least 1000 trajectories");
    if (t_max < 100) throw std::invalid_argument("estimate_d0: t_max must be >= 100");
    if (!(rescale_T > 0.0) || !std::isfinite(rescale_T))
        throw std::invalid_argument("estimate_d0: rescale T must be positive and finite");

    constexpr std::size_t chunk_size = 1024;
    const double k = K / rescale_T;
    const std::size_t n_steps = static_cast<std::size_t>(t_max);
    const std::size_t n_chunks = (trajectories + chunk_size - 1) / chunk_size;

    // sums[c] holds (sum y, sum y^2) per step for chunk c; merged in chunk
    // order below so the estimate is independent of thread scheduling.
    std::vector<std::vector<double>> sum_y(n_chunks), sum_yy(n_chunks);
    parallel_for(n_chunks, workers, [&](std::size_t c) {
        const std::size_t first = c * chunk_size;
        const std::size_t count = std::min(chunk_size, trajectories - first);
        SplitMix64 rng(substream(seed, static_cast<std::uint64_t>(c)));
        ClassicalEnsemble ens = make_line_ensemble(k, rescale_T, count, rng);
        sum_y[c].assign(n_steps, 0.0);
        sum_yy[c].assign(n_steps, 0.0);
        for (std::size_t t = 0; t < n_steps; ++t) {
            ens.step();
            double s1 = 0.0, s2 = 0.0;
            for (const ClassicalPoint& p : ens.points) {
                const double y = rescale_T * p.n;
                s1 += y;
                s2 += y * y;
            }
            sum_y[c][t] = s1;
            sum_yy[c][t] = s2;
        }
    });

    const double inv_m = 1.0 / static_cast<double>(trajectories);
    std::vector<double> ts, vars;
    ts.reserve(n_steps - 10);
    vars.reserve(n_steps - 10);
    for (std::size_t t = 10; t < n_steps; ++t) {
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t c = 0; c < n_chunks; ++c) {
            s1 += sum_y[c][t];
            s2 += sum_yy[c][t];
        }
        const double mean = s1 * inv_m;
        ts.push_back(static_cast<double>(t + 1));
        vars.push_back(s2 * inv_m - mean * mean);
    }

    const LineFit fit = linear_fit(ts, vars);
    if (!(fit.slope > 0.0))
        throw std::runtime_error("estimate_d0: variance growth is not positive");

    DiffusionEstimate est;
    est.d0 = fit.slope;
    est.d = fit.slope / (rescale_T * rescale_T);
    est.rescale_T = rescale_T;
    est.t_lo = 11;
    est.t_hi = t_max;
    est.stderr_d0 = fit.stderr_slope;
    est.r_squared = fit.r_squared;
    return est;
}

/// Relaxation rate of the coarse-grained momentum distribution on the torus.
inline double gamma_c(double d0, int L) {
    if (!(d0 > 0.0)) throw std::invalid_argument("gamma_c: d0 must be positive");
    if (L < 4) throw std::invalid_argument("gamma_c: L must be >= 4");
    return d0 / (2.0 * static_cast<double>(L) * static_cast<double>(L));
}

/// Same rate written in terms of the momentum diffusion rate d = d0/T^2 on a
/// torus of N levels: 2 pi^2 d / N^2. Equals gamma_c(d0, L) when T = 2 pi L/N.
inline double gamma_c_fokker_planck(double d, std::size_t N) {
    if (!(d > 0.0)) throw std::invalid_argument("gamma_c_fokker_planck: d must be positive");
    if (N == 0) throw std::invalid_argument("gamma_c_fokker_planck: N must be positive");
    const double n = static_cast<double>(N);
    return 2.0 * M_PI * M_PI * d / (n * n);
}

/// Dimensionless conductance g = 2 gamma_c / Delta with level spacing
/// Delta = 1/N, i.e. N*d0/L^2.
inline double conductance(const MapParams& p, double d0) {
    if (!(d0 > 0.0)) throw std::invalid_argument("conductance: d0 must be positive");
    p.validate();
    return static_cast<double>(p.N()) * d0 /
           (static_cast<double>(p.L) * static_cast<double>(p.L));
}

/// Random-phase-approximation diffusion rate pi^2 K^2 / 3, valid for K >> 1.
inline double quasilinear_d0(double K) { return M_PI * M_PI * K * K / 3.0; }

/// Small-K suppressed rate 1.2 pi^2 K^{2.5} / 3 from broken-torus transport.
inline double cantori_d0(double K) {
    return 1.2 * M_PI * M_PI * std::pow(K, 2.5) / 3.0;
}

}  // namespace sawmap
