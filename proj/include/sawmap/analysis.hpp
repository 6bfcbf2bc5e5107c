#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sawmap/linear_fit.hpp"
#include "sawmap/time_series.hpp"

namespace sawmap {

/// Default start of the plateau window: seven relaxation times.
inline std::int64_t default_plateau_start(double gamma_c_value) {
    if (!(gamma_c_value > 0.0))
        throw std::invalid_argument("default_plateau_start: rate must be positive");
    return static_cast<std::int64_t>(std::ceil(7.0 / gamma_c_value));
}

/// Result of fitting C(t) = A * exp(-gamma * t) + C_bar.
struct DecayFit {
    double A = 0.0;
    double gamma = 0.0;
    double C_bar = 0.0;
    double residual_rms = 0.0;
    std::int64_t t_lo = 0;
    std::int64_t t_hi = 0;
    int iterations = 0;
    bool converged = false;
};

namespace detail {

/// Solve the 3x3 system M x = b in place by Gaussian elimination with
/// partial pivoting. Returns false if the system is singular.
inline bool solve3(std::array<std::array<double, 3>, 3>& M, std::array<double, 3>& b) {
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(M[r][col]) > std::abs(M[pivot][col])) pivot = r;
        if (M[pivot][col] == 0.0) return false;
        std::swap(M[col], M[pivot]);
        std::swap(b[col], b[pivot]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = M[r][col] / M[col][col];
            for (int c = col; c < 3; ++c) M[r][c] -= f * M[col][c];
            b[r] -= f * b[col];
        }
    }
    for (int i = 0; i < 3; ++i) b[i] /= M[i][i];
    return true;
}

inline double sse_exp_plateau(const std::vector<double>& ts, const std::vector<double>& cs,
                              double A, double gamma, double c_bar) {
    double sse = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double r = A * std::exp(-gamma * ts[i]) + c_bar - cs[i];
        sse += r * r;
    }
    return sse;
}

}  // namespace detail

/**
 * Damped least squares (Levenberg-Marquardt) fit of C(t) = A e^{-gamma t} +
 * C_bar over records with t <= 10^4. Initialization: C_bar from the mean of
 * the last decade (t >= t_end/10), A from C at the first step, gamma from a
 * log-linear fit over the first e-folding. Non-convergence within 500
 * iterations, or a fit with gamma <= 0 or C_bar < 0, is returned with
 * converged = false and the best parameters found.
 */
inline DecayFit fit_exp_plateau(const TimeSeries& series) {
    if (series.size() < 100)
        throw std::invalid_argument("fit_exp_plateau: need at least 100 records");

    std::vector<double> ts, cs;
    ts.reserve(series.size());
    cs.reserve(series.size());
    for (const StepRecord& r : series.records) {
        if (r.t > 10000) break;
        ts.push_back(static_cast<double>(r.t));
        cs.push_back(r.C);
    }
    if (ts.size() < 100)
        throw std::invalid_argument("fit_exp_plateau: need at least 100 records with t <= 1e4");
    const double t_end = ts.back();

    double c_bar = 0.0;
    std::size_t tail = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] >= t_end / 10.0) {
            c_bar += cs[i];
            ++tail;
        }
    }
    c_bar /= static_cast<double>(tail);

    std::size_t first_step = 0;
    while (first_step < ts.size() && ts[first_step] < 1.0) ++first_step;
    if (first_step == ts.size()) first_step = 0;
    double A = cs[first_step] - c_bar;

    double gamma = 10.0 / t_end;
    if (A > 0.0) {
        std::vector<double> lt, lc;
        for (std::size_t i = first_step; i < ts.size(); ++i) {
            const double excess = cs[i] - c_bar;
            if (excess < A / M_E) break;
            lt.push_back(ts[i]);
            lc.push_back(std::log(excess));
        }
        if (lt.size() >= 2 && lt.front() != lt.back()) {
            const double slope = linear_fit(lt, lc).slope;
            if (slope < 0.0) gamma = -slope;
        }
    }

    double sse = detail::sse_exp_plateau(ts, cs, A, gamma, c_bar);
    double lambda = 1e-3;
    DecayFit fit;
    fit.t_lo = static_cast<std::int64_t>(ts.front());
    fit.t_hi = static_cast<std::int64_t>(t_end);

    bool converged = false;
    int iter = 0;
    for (; iter < 500; ++iter) {
        std::array<std::array<double, 3>, 3> jtj{};
        std::array<double, 3> jtr{};
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double e = std::exp(-gamma * ts[i]);
            const double r = A * e + c_bar - cs[i];
            const std::array<double, 3> j{e, -A * ts[i] * e, 1.0};
            for (int a = 0; a < 3; ++a) {
                jtr[a] += j[a] * r;
                for (int b = 0; b < 3; ++b) jtj[a][b] += j[a] * j[b];
            }
        }

        bool stepped = false;
        for (int attempt = 0; attempt < 50; ++attempt) {
            std::array<std::array<double, 3>, 3> M = jtj;
            for (int a = 0; a < 3; ++a) M[a][a] += lambda * jtj[a][a];
            std::array<double, 3> delta = jtr;
            if (!detail::solve3(M, delta)) {
                lambda *= 10.0;
                continue;
            }
            const double A1 = A - delta[0];
            const double g1 = gamma - delta[1];
            const double c1 = c_bar - delta[2];
            const double sse1 = detail::sse_exp_plateau(ts, cs, A1, g1, c1);
            if (std::isfinite(sse1) && sse1 <= sse) {
                const double scale = std::abs(A) + std::abs(gamma) + std::abs(c_bar) + 1e-300;
                const double change =
                    (std::abs(delta[0]) + std::abs(delta[1]) + std::abs(delta[2])) / scale;
                A = A1;
                gamma = g1;
                c_bar = c1;
                sse = sse1;
                lambda = std::max(lambda * 0.1, 1e-12);
                stepped = true;
                if (change < 1e-10) converged = true;
                break;
            }
            lambda *= 10.0;
        }
        if (converged || !stepped) break;
    }

    fit.A = A;
    fit.gamma = gamma;
    fit.C_bar = c_bar;
    fit.residual_rms = std::sqrt(sse / static_cast<double>(ts.size()));
    fit.iterations = iter + 1;
    fit.converged = converged && gamma > 0.0 && c_bar >= 0.0;
    return fit;
}

/// Centered moving mean of every value column; the t label of an output
/// record is the t of the window's center input record. Output length is
/// input length - window + 1.
inline TimeSeries moving_average(const TimeSeries& series, std::size_t window) {
    if (window < 1) throw std::domain_error("moving_average: window must be >= 1");
    if (window > series.size())
        throw std::domain_error("moving_average: window exceeds series length");

    TimeSeries out;
    out.params = series.params;
    out.noise = series.noise;
    const std::size_t n_out = series.size() - window + 1;
    out.records.reserve(n_out);
    const double inv_w = 1.0 / static_cast<double>(window);
    for (std::size_t i = 0; i < n_out; ++i) {
        std::array<double, 8> acc{};
        for (std::size_t j = i; j < i + window; ++j) {
            const std::array<double, 8> v = series.records[j].values();
            for (std::size_t c = 0; c < 8; ++c) acc[c] += v[c];
        }
        for (double& a : acc) a *= inv_w;
        StepRecord rec;
        rec.t = series.records[i + window / 2].t;
        rec.set_values(acc);
        out.records.push_back(rec);
    }
    return out;
}

/// Result of fitting the noisy-to-ideal concurrence ratio to e^{-Gamma t}.
struct NoiseDecayFit {
    double Gamma = 0.0;
    double stderr_Gamma = 0.0;
    std::int64_t t_lo = 0;
    std::int64_t t_hi = 0;
    int n_realizations = 0;
    std::size_t n_points = 0;
    std::size_t n_excluded = 0;
};

/// Realization-averaged noisy-to-ideal concurrence ratio after a 100-step
/// centered moving average; t labels follow the moving_average convention.
struct SmoothedRatio {
    std::vector<std::int64_t> t;
    std::vector<double> r;
};

inline SmoothedRatio smoothed_noise_ratio(const std::vector<TimeSeries>& noisy,
                                          const TimeSeries& ideal) {
    if (noisy.empty()) throw std::invalid_argument("fit_noise_rate: no noisy series");
    if (ideal.noise.epsilon != 0.0)
        throw std::invalid_argument("fit_noise_rate: ideal series must be noiseless");
    const std::size_t len = ideal.size();
    if (len < 100) throw std::invalid_argument("fit_noise_rate: series shorter than 100 steps");
    for (const TimeSeries& s : noisy) {
        if (s.size() != len) throw std::invalid_argument("fit_noise_rate: length mismatch");
        if (s.params.n_q != ideal.params.n_q || s.params.K != ideal.params.K ||
            s.params.L != ideal.params.L)
            throw std::invalid_argument("fit_noise_rate: map parameters differ");
        for (std::size_t i = 0; i < len; ++i)
            if (s.records[i].t != ideal.records[i].t)
                throw std::invalid_argument("fit_noise_rate: time grids differ");
    }

    const double inv_r = 1.0 / static_cast<double>(noisy.size());
    std::vector<double> ratio(len);
    for (std::size_t i = 0; i < len; ++i) {
        double mean_c = 0.0;
        for (const TimeSeries& s : noisy) mean_c += s.records[i].C;
        ratio[i] = mean_c * inv_r / ideal.records[i].C;
    }

    constexpr std::size_t window = 100;
    const std::size_t n_out = len - window + 1;
    SmoothedRatio out;
    out.t.resize(n_out);
    out.r.resize(n_out);
    const double inv_w = 1.0 / static_cast<double>(window);
    for (std::size_t i = 0; i < n_out; ++i) {
        double acc = 0.0;
        for (std::size_t j = i; j < i + window; ++j) acc += ratio[j];
        out.r[i] = acc * inv_w;
        out.t[i] = ideal.records[i + window / 2].t;
    }
    return out;
}

/**
 * Decay rate of the realization-averaged concurrence relative to the ideal
 * evolution. The pointwise ratio r(t) = <C_noisy(t)> / C_ideal(t) is
 * smoothed with a 100-step moving window, then ln r is fit linearly in t
 * over [plateau_start, end]; Gamma is minus the slope.
 *
 * Windows whose smoothed ratio is not a positive finite number are excluded
 * from the fit. A contiguous run of such windows at the very end of the
 * series is treated as the signal having died out and truncates the fit
 * range instead. More than 50% interior exclusions is a fit error.
 */
inline NoiseDecayFit fit_noise_rate(const std::vector<TimeSeries>& noisy,
                                    const TimeSeries& ideal, std::int64_t plateau_start) {
    if (plateau_start < 1)
        throw std::invalid_argument("fit_noise_rate: plateau_start must be >= 1");
    const SmoothedRatio sm = smoothed_noise_ratio(noisy, ideal);
    const std::size_t n_out = sm.t.size();

    std::size_t lo = 0;
    while (lo < n_out && sm.t[lo] < plateau_start) ++lo;
    if (lo >= n_out)
        throw std::invalid_argument("fit_noise_rate: plateau_start beyond smoothed series");

    auto valid = [&](std::size_t i) { return std::isfinite(sm.r[i]) && sm.r[i] > 0.0; };
    std::size_t hi = n_out;
    while (hi > lo && !valid(hi - 1)) --hi;
    if (hi == lo) throw std::runtime_error("fit_noise_rate: no positive ratio in fit window");

    std::vector<double> xs, ys;
    xs.reserve(hi - lo);
    ys.reserve(hi - lo);
    std::size_t excluded = 0;
    for (std::size_t i = lo; i < hi; ++i) {
        if (!valid(i)) {
            ++excluded;
            continue;
        }
        xs.push_back(static_cast<double>(sm.t[i]));
        ys.push_back(std::log(sm.r[i]));
    }
    if (2 * excluded > hi - lo)
        throw std::runtime_error("fit_noise_rate: more than half of the fit window excluded");
    if (xs.size() < 2) throw std::runtime_error("fit_noise_rate: too few points to fit");

    const LineFit line = linear_fit(xs, ys);
    NoiseDecayFit fit;
    fit.Gamma = -line.slope;
    fit.stderr_Gamma = line.stderr_slope;
    fit.t_lo = sm.t[lo];
    fit.t_hi = sm.t[hi - 1];
    fit.n_realizations = static_cast<int>(noisy.size());
    fit.n_points = xs.size();
    fit.n_excluded = excluded;
    return fit;
}

/// Time average of C over records with t >= plateau_start.
inline double residual_concurrence(const TimeSeries& series, std::int64_t plateau_start) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const StepRecord& r : series.records) {
        if (r.t < plateau_start) continue;
        sum += r.C;
        ++count;
    }
    if (count == 0) throw std::domain_error("residual_concurrence: empty plateau window");
    return sum / static_cast<double>(count);
}

/// Power law y = prefactor * x^exponent fitted by least squares in log-log
/// coordinates.
struct ScalingFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    double stderr_exponent = 0.0;
    double r_squared = 0.0;
};

inline ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw std::domain_error("scaling_fit: need at least 3 points");
    std::vector<double> xs, ys;
    xs.reserve(points.size());
    ys.reserve(points.size());
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0))
            throw std::domain_error("scaling_fit: all coordinates must be positive");
        xs.push_back(std::log(x));
        ys.push_back(std::log(y));
    }
    const double x0 = xs.front();
    bool distinct = false;
    for (double x : xs)
        if (x != x0) distinct = true;
    if (!distinct) throw std::domain_error("scaling_fit: degenerate x values");

    const LineFit line = linear_fit(xs, ys);
    ScalingFit fit;
    fit.exponent = line.slope;
    fit.prefactor = std::exp(line.intercept);
    fit.stderr_exponent = line.stderr_slope;
    fit.r_squared = line.r_squared;
    return fit;
}

}  // namespace sawmap
