#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sawmap/analysis.hpp"
#include "sawmap/classical.hpp"
#include "sawmap/io.hpp"
#include "sawmap/map_params.hpp"
#include "sawmap/parallel.hpp"
#include "sawmap/rng.hpp"
#include "sawmap/sawtooth.hpp"
#include "sawmap/version.hpp"

namespace sawmap {

enum class ExperimentKind {
    SingleRun,
    GammaVsK,
    ResidualVsG,
    NoiseSingle,
    NoiseScaling,
    ClassicalD0,
};

inline const char* kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::SingleRun: return "single_run";
        case ExperimentKind::GammaVsK: return "gamma_vs_k";
        case ExperimentKind::ResidualVsG: return "residual_vs_g";
        case ExperimentKind::NoiseSingle: return "noise_single";
        case ExperimentKind::NoiseScaling: return "noise_scaling";
        case ExperimentKind::ClassicalD0: return "classical_d0";
    }
    return "unknown";
}

/**
 * One validated parameter set for an experiment run. Which list fields may
 * hold more than one value depends on the kind; validate() enforces the
 * arity rules before any computation starts.
 */
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::SingleRun;
    std::vector<int> nq_list{8};
    std::vector<double> K_list{0.5};
    std::vector<int> L_list{4};
    std::vector<double> eps_list{};
    std::int64_t t_max = 10000;
    int realizations = 20;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    std::string format = "csv";
    int workers = 1;
    /// -1 selects ceil(7 / gamma_c) from the measured diffusion rate.
    std::int64_t plateau_start = -1;
    /// Upper bound on the summed cost t_max * 2^n_q of all planned evolutions.
    double op_budget = 1e11;
    std::size_t d0_trajectories = 100000;
    std::int64_t d0_steps = 1000;
    /// Number of initial-phase variants averaged per decay or residual point.
    int seed_averages = 1;
    bool noisy_swaps = false;

    double planned_ops() const {
        auto cost = [&](int n_q) {
            return static_cast<double>(t_max) * std::ldexp(1.0, n_q);
        };
        switch (kind) {
            case ExperimentKind::SingleRun:
                return nq_list.empty() ? 0.0 : cost(nq_list[0]);
            case ExperimentKind::GammaVsK:
                return nq_list.empty() ? 0.0
                                       : static_cast<double>(K_list.size()) *
                                             static_cast<double>(seed_averages) * cost(nq_list[0]);
            case ExperimentKind::ResidualVsG: {
                double total = 0.0;
                for (int n_q : nq_list)
                    total += static_cast<double>(K_list.size() * L_list.size()) *
                             static_cast<double>(seed_averages) * cost(n_q);
                return total;
            }
            case ExperimentKind::NoiseSingle:
            case ExperimentKind::NoiseScaling: {
                double total = 0.0;
                for (int n_q : nq_list)
                    total += (1.0 + static_cast<double>(eps_list.size()) *
                                        static_cast<double>(realizations)) *
                             cost(n_q);
                return total;
            }
            case ExperimentKind::ClassicalD0:
                return 0.0;
        }
        return 0.0;
    }

    void validate() const {
        if (t_max < 0) throw std::invalid_argument("config: t_max must be >= 0");
        if (realizations < 1) throw std::invalid_argument("config: realizations must be >= 1");
        if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
        if (seed_averages < 1) throw std::invalid_argument("config: seed_averages must be >= 1");
        if (format != "csv" && format != "json")
            throw std::invalid_argument("config: format must be csv or json");
        if (out_dir.empty()) throw std::invalid_argument("config: output directory is empty");
        if (d0_trajectories < 1000)
            throw std::invalid_argument("config: d0_trajectories must be >= 1000");
        if (d0_steps < 100) throw std::invalid_argument("config: d0_steps must be >= 100");
        if (plateau_start == 0)
            throw std::invalid_argument("config: plateau_start must be >= 1 (or -1 for auto)");

        for (int n_q : nq_list) {
            if (n_q < 2 || n_q > 20)
                throw std::invalid_argument("config: n_q must be in [2, 20]");
        }
        for (int L : L_list) {
            if (L <= 0 || L % 4 != 0)
                throw std::invalid_argument("config: L must be a positive multiple of 4");
        }
        for (double eps : eps_list) {
            if (!(eps >= 0.0) || !std::isfinite(eps))
                throw std::invalid_argument("config: epsilon must be finite and >= 0");
        }
        const bool needs_positive_k = kind != ExperimentKind::SingleRun;
        for (double K : K_list) {
            if (!std::isfinite(K) || K < 0.0 || (needs_positive_k && K == 0.0))
                throw std::invalid_argument("config: K must be finite and positive");
        }

        auto require = [](bool ok, const char* msg) {
            if (!ok) throw std::invalid_argument(std::string("config: ") + msg);
        };
        switch (kind) {
            case ExperimentKind::SingleRun:
                require(nq_list.size() == 1 && K_list.size() == 1 && L_list.size() == 1,
                        "single run takes exactly one n_q, K, and L");
                require(eps_list.size() <= 1, "single run takes at most one epsilon");
                break;
            case ExperimentKind::GammaVsK:
                require(!K_list.empty(), "gamma-vs-k needs a non-empty K list");
                require(nq_list.size() == 1 && L_list.size() == 1,
                        "gamma-vs-k takes exactly one n_q and L");
                break;
            case ExperimentKind::ResidualVsG:
                require(!nq_list.empty() && !K_list.empty() && !L_list.empty(),
                        "residual-vs-g needs non-empty n_q, K, and L lists");
                break;
            case ExperimentKind::NoiseSingle:
                require(nq_list.size() == 1 && eps_list.size() == 1 && K_list.size() == 1 &&
                            L_list.size() == 1,
                        "noise-single takes exactly one n_q, epsilon, K, and L");
                break;
            case ExperimentKind::NoiseScaling:
                require(!nq_list.empty() && !eps_list.empty(),
                        "noise-scaling needs non-empty n_q and epsilon lists");
                require(K_list.size() == 1 && L_list.size() == 1,
                        "noise-scaling takes exactly one K and L");
                break;
            case ExperimentKind::ClassicalD0:
                require(!K_list.empty(), "classical-d0 needs a non-empty K list");
                break;
        }

        const double ops = planned_ops();
        if (ops > op_budget) {
            std::ostringstream msg;
            msg << "config: planned work " << ops << " amplitude-steps exceeds the op budget "
                << op_budget << "; lower t_max, n_q, or the grid size, or raise op_budget";
            throw std::invalid_argument(msg.str());
        }
    }

    json to_json() const {
        return json{{"kind", kind_name(kind)},
                    {"nq_list", nq_list},
                    {"K_list", K_list},
                    {"L_list", L_list},
                    {"eps_list", eps_list},
                    {"t_max", t_max},
                    {"realizations", realizations},
                    {"seed", seed},
                    {"out_dir", out_dir},
                    {"format", format},
                    {"workers", workers},
                    {"plateau_start", plateau_start},
                    {"op_budget", op_budget},
                    {"d0_trajectories", d0_trajectories},
                    {"d0_steps", d0_steps},
                    {"seed_averages", seed_averages},
                    {"noisy_swaps", noisy_swaps}};
    }
};

/// Provenance record written next to every experiment's outputs.
struct RunManifest {
    json config;
    std::uint64_t config_hash = 0;
    std::string code_version;
    json seeds = json::array();
    json timings_ms = json::object();
    std::vector<std::string> outputs;
    std::vector<std::string> notices;

    void add_seed(const std::string& label, std::uint64_t stream_base, int stream_count) {
        seeds.push_back(
            {{"label", label}, {"stream_base", stream_base}, {"stream_count", stream_count}});
    }

    json to_json() const {
        return json{{"code_version", code_version}, {"config", config},
                    {"config_hash", config_hash},   {"seeds", seeds},
                    {"timings_ms", timings_ms},     {"outputs", outputs},
                    {"notices", notices}};
    }

    void write(const std::filesystem::path& path) const {
        std::ofstream out = detail::open_output(path);
        out << to_json().dump(2) << '\n';
    }
};

namespace detail {

/// Noise streams are indexed by grid point and realization; the classical
/// and initial-phase draws live in separate high-bit domains of the same
/// base seed.
inline std::uint64_t stream_id(std::size_t grid_index, int realization) {
    return (static_cast<std::uint64_t>(grid_index) << 20) +
           static_cast<std::uint64_t>(realization);
}

inline std::uint64_t classical_seed(std::uint64_t base_seed, std::size_t k_index) {
    return substream(base_seed, (0xC1ull << 40) + k_index).next();
}

inline std::uint64_t variant_seed(std::uint64_t base_seed, std::size_t grid_index, int variant) {
    return substream(base_seed, (0xFAull << 40) + (grid_index << 10) +
                                    static_cast<std::uint64_t>(variant))
        .next();
}

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

inline RunManifest make_manifest(const ExperimentConfig& c) {
    RunManifest m;
    m.config = c.to_json();
    m.config_hash = fnv1a_64(m.config.dump());
    m.code_version = version_string;
    return m;
}

inline std::string number_tag(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

/// Same random phase on the |00> and |11> blocks keeps the top-qubit state
/// maximally entangled while changing the traced-out register.
inline void apply_variant_phases(StateVector& state, std::uint64_t seed) {
    SplitMix64 rng(seed);
    const std::size_t quarter = state.size() / 4;
    for (std::size_t r = 0; r < quarter; ++r) {
        const complex phase = std::polar(1.0, rng.uniform(0.0, 2.0 * M_PI));
        state.amp[r] *= phase;
        state.amp[3 * quarter + r] *= phase;
    }
}

inline TimeSeries evolve_point(const MapParams& p, double epsilon, const ExperimentConfig& c,
                               std::uint64_t stream, int variant = 0) {
    StateVector state = initial_state(p.n_q);
    if (variant > 0) apply_variant_phases(state, variant_seed(c.seed, stream >> 20, variant));
    const NoiseModel noise{epsilon, c.seed, stream, c.noisy_swaps};
    return evolve(state, p, c.t_max, noise);
}

/// Pointwise mean of the recorded observables over `seed_averages` initial-phase
/// variants of the same grid point (variant 0 is the unmodified initial state).
/// A single realization's concurrence plateau carries mesoscopic fluctuations
/// comparable to the late-time signal at moderate qubit counts; averaging the
/// series before fitting shrinks them without touching the decay rate itself.
inline TimeSeries variant_mean_series(const MapParams& p, double epsilon,
                                      const ExperimentConfig& c, std::size_t grid_index) {
    TimeSeries mean = evolve_point(p, epsilon, c, stream_id(grid_index, 0));
    for (int v = 1; v < c.seed_averages; ++v) {
        const TimeSeries next = evolve_point(p, epsilon, c, stream_id(grid_index, v), v);
        for (std::size_t j = 0; j < mean.records.size(); ++j) {
            std::array<double, 8> acc = mean.records[j].values();
            const std::array<double, 8> add = next.records[j].values();
            for (std::size_t m = 0; m < acc.size(); ++m) acc[m] += add[m];
            mean.records[j].set_values(acc);
        }
    }
    if (c.seed_averages > 1) {
        const double inv = 1.0 / static_cast<double>(c.seed_averages);
        for (StepRecord& r : mean.records) {
            std::array<double, 8> acc = r.values();
            for (double& x : acc) x *= inv;
            r.set_values(acc);
        }
    }
    return mean;
}

inline void write_series(const TimeSeries& series, const ExperimentConfig& c,
                         const std::string& stem, RunManifest& manifest) {
    const std::filesystem::path dir(c.out_dir);
    const std::string name = stem + "." + c.format;
    if (c.format == "csv")
        write_series_csv(series, dir / name);
    else
        write_series_json(series, dir / name);
    manifest.outputs.push_back(name);
}

inline void write_summary_table(const Table& table, const ExperimentConfig& c,
                                const std::string& stem, RunManifest& manifest) {
    const std::filesystem::path dir(c.out_dir);
    write_table(table, dir / (stem + ".csv"), "csv");
    write_table(table, dir / (stem + ".json"), "json");
    manifest.outputs.push_back(stem + ".csv");
    manifest.outputs.push_back(stem + ".json");
}

inline Table scaling_table(const ScalingFit& fit, std::size_t n_points) {
    Table t;
    t.columns = {"exponent", "prefactor", "stderr_exponent", "r_squared", "n_points"};
    t.add_row({fit.exponent, fit.prefactor, fit.stderr_exponent, fit.r_squared, n_points});
    return t;
}

}  // namespace detail

struct SingleRunResult {
    TimeSeries series;
    std::optional<DecayFit> fit;
    RunManifest manifest;
};

/// One evolution at fixed parameters: full series, plot-ready (t, C) data,
/// and a decay-fit summary when the series is long enough to fit.
inline SingleRunResult run_single(const ExperimentConfig& c) {
    c.validate();
    if (c.kind != ExperimentKind::SingleRun)
        throw std::invalid_argument("run_single: config kind mismatch");
    detail::Stopwatch total;
    RunManifest manifest = detail::make_manifest(c);

    const MapParams p{c.nq_list[0], c.K_list[0], c.L_list[0]};
    const double eps = c.eps_list.empty() ? 0.0 : c.eps_list[0];
    manifest.add_seed("single", detail::stream_id(0, 0), 1);

    SingleRunResult result;
    result.series = detail::evolve_point(p, eps, c, detail::stream_id(0, 0));

    detail::write_series(result.series, c, "series", manifest);
    write_two_column(result.series, std::filesystem::path(c.out_dir) / "c_of_t.csv");
    manifest.outputs.push_back("c_of_t.csv");

    if (result.series.size() >= 100) {
        result.fit = fit_exp_plateau(result.series);
        Table summary;
        summary.columns = {"n_q",   "K",     "L",          "epsilon",   "A",
                           "gamma", "C_bar", "residual_rms", "converged", "t_lo",
                           "t_hi",  "iterations"};
        summary.add_row({p.n_q, p.K, p.L, eps, result.fit->A, result.fit->gamma,
                         result.fit->C_bar, result.fit->residual_rms, result.fit->converged,
                         result.fit->t_lo, result.fit->t_hi, result.fit->iterations});
        detail::write_summary_table(summary, c, "summary", manifest);
    } else {
        manifest.notices.push_back("series too short for a decay fit; summary skipped");
    }

    manifest.timings_ms["total"] = total.ms();
    manifest.write(std::filesystem::path(c.out_dir) / "manifest.json");
    result.manifest = manifest;
    return result;
}

struct GammaVsKPoint {
    double K = 0.0;
    double d0 = 0.0;
    double gamma = 0.0;
    double gamma_classical = 0.0;
    double gtilde = 0.0;
    double ratio_ql = 0.0;
    bool converged = false;
    bool failed = false;
    std::string error;
};

struct GammaVsKResult {
    std::vector<GammaVsKPoint> points;
    RunManifest manifest;
};

/// For each K: measured classical diffusion rate, fitted quantum decay rate,
/// the rescaled rate 2*gamma*L^2, and its ratio to the quasi-linear rate.
inline GammaVsKResult run_gamma_vs_k(const ExperimentConfig& c) {
    c.validate();
    if (c.kind != ExperimentKind::GammaVsK)
        throw std::invalid_argument("run_gamma_vs_k: config kind mismatch");
    detail::Stopwatch total;
    RunManifest manifest = detail::make_manifest(c);

    const int n_q = c.nq_list[0];
    const int L = c.L_list[0];
    GammaVsKResult result;
    result.points.resize(c.K_list.size());

    detail::Stopwatch classical;
    for (std::size_t i = 0; i < c.K_list.size(); ++i) {
        GammaVsKPoint& pt = result.points[i];
        pt.K = c.K_list[i];
        try {
            pt.d0 = estimate_d0(pt.K, c.d0_trajectories, c.d0_steps,
                                detail::classical_seed(c.seed, i), 1.0, c.workers)
                        .d0;
            pt.gamma_classical = gamma_c(pt.d0, L);
        } catch (const std::exception& e) {
            pt.failed = true;
            pt.error = e.what();
        }
    }
    manifest.timings_ms["classical"] = classical.ms();

    detail::Stopwatch quantum;
    parallel_for(c.K_list.size(), c.workers, [&](std::size_t i) {
        GammaVsKPoint& pt = result.points[i];
        if (pt.failed) return;
        try {
            const MapParams p{n_q, pt.K, L};
            const TimeSeries series = detail::variant_mean_series(p, 0.0, c, i);
            const DecayFit fit = fit_exp_plateau(series);
            pt.gamma = fit.gamma;
            pt.converged = fit.converged;
            pt.gtilde = 2.0 * fit.gamma * static_cast<double>(L) * static_cast<double>(L);
            pt.ratio_ql = pt.gtilde / quasilinear_d0(pt.K);
        } catch (const std::exception& e) {
            pt.failed = true;
            pt.error = e.what();
        }
    });
    manifest.timings_ms["quantum"] = quantum.ms();

    Table table;
    table.columns = {"K",      "D0",       "gamma",     "gamma_c",
                     "gtilde", "ratio_ql", "converged", "failed"};
    for (const GammaVsKPoint& pt : result.points) {
        table.add_row({pt.K, pt.d0, pt.gamma, pt.gamma_classical, pt.gtilde, pt.ratio_ql,
                       pt.converged, pt.failed});
        if (pt.failed) manifest.notices.push_back("K=" + detail::number_tag(pt.K) +
                                                  " failed: " + pt.error);
    }
    manifest.add_seed("gamma_vs_k", detail::stream_id(0, 0),
                      static_cast<int>(c.K_list.size()) * c.seed_averages);
    detail::write_summary_table(table, c, "gamma_vs_k", manifest);

    manifest.timings_ms["total"] = total.ms();
    manifest.write(std::filesystem::path(c.out_dir) / "manifest.json");
    result.manifest = manifest;
    return result;
}

struct ResidualPoint {
    int n_q = 0;
    double K = 0.0;
    int L = 0;
    double d0 = 0.0;
    double g = 0.0;
    double c_bar = 0.0;
    std::int64_t plateau_start = 0;
    bool failed = false;
    std::string error;
};

struct ResidualVsGResult {
    std::vector<ResidualPoint> points;
    std::optional<ScalingFit> scaling;
    RunManifest manifest;
};

/// Residual concurrence across an (n_q, L, K) grid against the conductance
/// g = N*D0/L^2, with a power-law fit when at least three points survive.
inline ResidualVsGResult run_residual_vs_g(const ExperimentConfig& c) {
    c.validate();
    if (c.kind != ExperimentKind::ResidualVsG)
        throw std::invalid_argument("run_residual_vs_g: config kind mismatch");
    detail::Stopwatch total;
    RunManifest manifest = detail::make_manifest(c);

    detail::Stopwatch classical;
    std::map<double, double> d0_by_k;
    std::map<double, std::string> d0_errors;
    for (std::size_t i = 0; i < c.K_list.size(); ++i) {
        const double K = c.K_list[i];
        if (d0_by_k.count(K) || d0_errors.count(K)) continue;
        try {
            d0_by_k[K] = estimate_d0(K, c.d0_trajectories, c.d0_steps,
                                     detail::classical_seed(c.seed, i), 1.0, c.workers)
                             .d0;
        } catch (const std::exception& e) {
            d0_errors[K] = e.what();
        }
    }
    manifest.timings_ms["classical"] = classical.ms();

    ResidualVsGResult result;
    for (int n_q : c.nq_list)
        for (int L : c.L_list)
            for (double K : c.K_list) {
                ResidualPoint pt;
                pt.n_q = n_q;
                pt.K = K;
                pt.L = L;
                result.points.push_back(pt);
            }

    detail::Stopwatch quantum;
    parallel_for(result.points.size(), c.workers, [&](std::size_t i) {
        ResidualPoint& pt = result.points[i];
        try {
            const auto it = d0_by_k.find(pt.K);
            if (it == d0_by_k.end())
                throw std::runtime_error("diffusion estimate failed: " + d0_errors.at(pt.K));
            pt.d0 = it->second;
            const MapParams p{pt.n_q, pt.K, pt.L};
            pt.g = conductance(p, pt.d0);
            pt.plateau_start = c.plateau_start >= 0
                                   ? c.plateau_start
                                   : default_plateau_start(gamma_c(pt.d0, pt.L));
            double sum = 0.0;
            for (int v = 0; v < c.seed_averages; ++v) {
                const TimeSeries series =
                    detail::evolve_point(p, 0.0, c, detail::stream_id(i, v), v);
                sum += residual_concurrence(series, pt.plateau_start);
            }
            pt.c_bar = sum / static_cast<double>(c.seed_averages);
        } catch (const std::exception& e) {
            pt.failed = true;
            pt.error = e.what();
        }
    });
    manifest.timings_ms["quantum"] = quantum.ms();

    std::vector<std::pair<double, double>> fit_points;
    for (const ResidualPoint& pt : result.points) {
        if (pt.failed) {
            manifest.notices.push_back("point n_q=" + std::to_string(pt.n_q) +
                                       " K=" + detail::number_tag(pt.K) +
                                       " L=" + std::to_string(pt.L) + " failed: " + pt.error);
            continue;
        }
        if (pt.g > 0.0 && pt.c_bar > 0.0) fit_points.emplace_back(pt.g, pt.c_bar);
    }
    if (fit_points.size() >= 3)
        result.scaling = scaling_fit(fit_points);
    else
        manifest.notices.push_back("scaling fit skipped: fewer than 3 usable points");

    Table table;
    table.columns = {"n_q", "K", "L", "D0", "g", "C_bar", "plateau_start", "failed"};
    for (const ResidualPoint& pt : result.points)
        table.add_row({pt.n_q, pt.K, pt.L, pt.d0, pt.g, pt.c_bar, pt.plateau_start, pt.failed});
    detail::write_summary_table(table, c, "residual_vs_g", manifest);
    if (result.scaling)
        detail::write_summary_table(detail::scaling_table(*result.scaling, fit_points.size()),
                                    c, "scaling", manifest);
    manifest.add_seed("residual_vs_g", detail::stream_id(0, 0),
                      static_cast<int>(result.points.size()));

    manifest.timings_ms["total"] = total.ms();
    manifest.write(std::filesystem::path(c.out_dir) / "manifest.json");
    result.manifest = manifest;
    return result;
}

struct NoiseScalingPoint {
    int n_q = 0;
    double epsilon = 0.0;
    /// Scaling variable epsilon^2 * sqrt(N).
    double x = 0.0;
    double Gamma = 0.0;
    double stderr_Gamma = 0.0;
    std::int64_t t_lo = 0;
    std::int64_t t_hi = 0;
    std::size_t n_excluded = 0;
    bool failed = false;
    std::string error;
};

struct NoiseScalingResult {
    std::vector<NoiseScalingPoint> points;
    std::optional<ScalingFit> scaling;
    RunManifest manifest;
};

/**
 * Noise-induced decay of the residual concurrence over an (n_q, epsilon)
 * grid. Each point averages `realizations` noisy evolutions against one
 * ideal evolution, writes the smoothed ratio series, and fits Gamma. The
 * summary is fitted against epsilon^2 * sqrt(N). Realizations run in
 * parallel within a point; points run sequentially to bound memory.
 */
inline NoiseScalingResult run_noise_scaling(const ExperimentConfig& c) {
    c.validate();
    if (c.kind != ExperimentKind::NoiseScaling && c.kind != ExperimentKind::NoiseSingle)
        throw std::invalid_argument("run_noise_scaling: config kind mismatch");
    detail::Stopwatch total;
    RunManifest manifest = detail::make_manifest(c);
    if (c.realizations == 1)
        manifest.notices.push_back(
            "realizations = 1: Gamma estimates will have high variance");

    const double K = c.K_list[0];
    const int L = c.L_list[0];

    detail::Stopwatch classical;
    std::int64_t plateau = c.plateau_start;
    if (plateau < 0) {
        const double d0 =
            estimate_d0(K, c.d0_trajectories, c.d0_steps, detail::classical_seed(c.seed, 0),
                        1.0, c.workers)
                .d0;
        plateau = default_plateau_start(gamma_c(d0, L));
    }
    manifest.timings_ms["classical"] = classical.ms();

    detail::Stopwatch quantum;
    NoiseScalingResult result;
    std::size_t grid_index = 0;
    for (int n_q : c.nq_list) {
        const MapParams p{n_q, K, L};
        const TimeSeries ideal = detail::evolve_point(p, 0.0, c, detail::stream_id(0, 0));
        for (double eps : c.eps_list) {
            NoiseScalingPoint pt;
            pt.n_q = n_q;
            pt.epsilon = eps;
            pt.x = eps * eps * std::sqrt(static_cast<double>(p.N()));
            const std::size_t g = grid_index++;
            manifest.add_seed("n_q=" + std::to_string(n_q) + " eps=" + detail::number_tag(eps),
                              detail::stream_id(g, 0), c.realizations);
            try {
                std::vector<TimeSeries> noisy(static_cast<std::size_t>(c.realizations));
                parallel_for(noisy.size(), c.workers, [&](std::size_t r) {
                    noisy[r] = detail::evolve_point(p, eps, c,
                                                    detail::stream_id(g, static_cast<int>(r)));
                });

                const std::string stem = "ratio_nq" + std::to_string(n_q) + "_eps" +
                                         detail::number_tag(eps);
                const SmoothedRatio ratio = smoothed_noise_ratio(noisy, ideal);
                std::ofstream out = detail::open_output(std::filesystem::path(c.out_dir) /
                                                        (stem + ".csv"));
                out << "t,ratio\n";
                for (std::size_t i = 0; i < ratio.t.size(); ++i)
                    out << ratio.t[i] << ',' << format_double(ratio.r[i]) << '\n';
                manifest.outputs.push_back(stem + ".csv");

                const NoiseDecayFit fit = fit_noise_rate(noisy, ideal, plateau);
                pt.Gamma = fit.Gamma;
                pt.stderr_Gamma = fit.stderr_Gamma;
                pt.t_lo = fit.t_lo;
                pt.t_hi = fit.t_hi;
                pt.n_excluded = fit.n_excluded;
            } catch (const std::exception& e) {
                pt.failed = true;
                pt.error = e.what();
                manifest.notices.push_back("point n_q=" + std::to_string(n_q) +
                                           " eps=" + detail::number_tag(eps) +
                                           " failed: " + pt.error);
            }
            result.points.push_back(std::move(pt));
        }
    }
    manifest.timings_ms["quantum"] = quantum.ms();

    std::vector<std::pair<double, double>> fit_points;
    for (const NoiseScalingPoint& pt : result.points)
        if (!pt.failed && pt.x > 0.0 && pt.Gamma > 0.0) fit_points.emplace_back(pt.x, pt.Gamma);
    if (fit_points.size() >= 3)
        result.scaling = scaling_fit(fit_points);
    else
        manifest.notices.push_back("scaling fit skipped: fewer than 3 usable points");

    Table table;
    table.columns = {"n_q",  "epsilon",      "N",    "x",    "Gamma", "stderr_Gamma",
                     "t_lo", "t_hi",         "n_excluded", "failed"};
    for (const NoiseScalingPoint& pt : result.points)
        table.add_row({pt.n_q, pt.epsilon, std::size_t{1} << pt.n_q, pt.x, pt.Gamma,
                       pt.stderr_Gamma, pt.t_lo, pt.t_hi, pt.n_excluded, pt.failed});
    detail::write_summary_table(table, c, "noise_scaling", manifest);
    if (result.scaling)
        detail::write_summary_table(detail::scaling_table(*result.scaling, fit_points.size()),
                                    c, "scaling", manifest);

    manifest.timings_ms["total"] = total.ms();
    manifest.write(std::filesystem::path(c.out_dir) / "manifest.json");
    result.manifest = manifest;
    return result;
}

struct ClassicalD0Point {
    double K = 0.0;
    DiffusionEstimate estimate;
    bool failed = false;
    std::string error;
};

struct ClassicalD0Result {
    std::vector<ClassicalD0Point> points;
    RunManifest manifest;
};

/// Diffusion-rate sweep over K with the quasi-linear rate for comparison.
inline ClassicalD0Result run_classical_d0(const ExperimentConfig& c) {
    c.validate();
    if (c.kind != ExperimentKind::ClassicalD0)
        throw std::invalid_argument("run_classical_d0: config kind mismatch");
    detail::Stopwatch total;
    RunManifest manifest = detail::make_manifest(c);

    ClassicalD0Result result;
    result.points.resize(c.K_list.size());
    for (std::size_t i = 0; i < c.K_list.size(); ++i) {
        ClassicalD0Point& pt = result.points[i];
        pt.K = c.K_list[i];
        try {
            pt.estimate = estimate_d0(pt.K, c.d0_trajectories, c.d0_steps,
                                      detail::classical_seed(c.seed, i), 1.0, c.workers);
        } catch (const std::exception& e) {
            pt.failed = true;
            pt.error = e.what();
            manifest.notices.push_back("K=" + detail::number_tag(pt.K) +
                                       " failed: " + pt.error);
        }
    }

    Table table;
    table.columns = {"K",    "D0",        "stderr_D0", "r_squared", "t_lo",
                     "t_hi", "D_ql",      "ratio_ql",  "failed"};
    for (const ClassicalD0Point& pt : result.points) {
        const double dql = quasilinear_d0(pt.K);
        table.add_row({pt.K, pt.estimate.d0, pt.estimate.stderr_d0, pt.estimate.r_squared,
                       pt.estimate.t_lo, pt.estimate.t_hi, dql,
                       dql > 0.0 ? pt.estimate.d0 / dql : 0.0, pt.failed});
    }
    detail::write_summary_table(table, c, "classical_d0", manifest);

    manifest.timings_ms["total"] = total.ms();
    manifest.write(std::filesystem::path(c.out_dir) / "manifest.json");
    result.manifest = manifest;
    return result;
}

}  // namespace sawmap
