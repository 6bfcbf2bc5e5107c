#include <cstdio>
#include <exception>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <sawmap/sawmap.hpp>

namespace {

using sawmap::ExperimentConfig;
using sawmap::ExperimentKind;

void add_common_options(CLI::App* cmd, ExperimentConfig& cfg) {
    cmd->add_option("--nq", cfg.nq_list, "qubit counts")->capture_default_str();
    cmd->add_option("--K", cfg.K_list, "chaos parameters")->capture_default_str();
    cmd->add_option("--L", cfg.L_list, "cell counts (positive multiples of 4)")
        ->capture_default_str();
    cmd->add_option("--eps", cfg.eps_list, "per-gate noise amplitudes");
    cmd->add_option("--t-max", cfg.t_max, "map iterations per run")->capture_default_str();
    cmd->add_option("--realizations", cfg.realizations, "noise realizations per point")
        ->capture_default_str();
    cmd->add_option("--seed", cfg.seed, "base RNG seed")->capture_default_str();
    cmd->add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--format", cfg.format, "series format: csv or json")
        ->capture_default_str();
    cmd->add_option("--workers", cfg.workers, "worker threads")->capture_default_str();
    cmd->add_option("--plateau-start", cfg.plateau_start,
                    "first step of the plateau window (-1: 7 relaxation times)")
        ->capture_default_str();
    cmd->add_option("--op-budget", cfg.op_budget, "max summed t_max * 2^n_q")
        ->capture_default_str();
    cmd->add_option("--d0-trajectories", cfg.d0_trajectories,
                    "trajectories per diffusion estimate")
        ->capture_default_str();
    cmd->add_option("--d0-steps", cfg.d0_steps, "kicks per diffusion estimate")
        ->capture_default_str();
    cmd->add_option("--seed-averages", cfg.seed_averages,
                    "initial-phase variants averaged per decay/residual point")
        ->capture_default_str();
    cmd->add_flag("--noisy-swaps", cfg.noisy_swaps, "apply angle noise to swap gates too");
}

void print_scaling(const std::optional<sawmap::ScalingFit>& fit) {
    if (fit)
        std::printf("scaling fit: exponent %.4f +- %.4f, prefactor %.4f\n", fit->exponent,
                    fit->stderr_exponent, fit->prefactor);
    else
        std::printf("scaling fit skipped (fewer than 3 usable points)\n");
}

int dispatch(const ExperimentConfig& cfg) {
    switch (cfg.kind) {
        case ExperimentKind::SingleRun: {
            const auto result = sawmap::run_single(cfg);
            if (result.fit)
                std::printf("gamma %.6g  C_bar %.6g  A %.6g  converged %d\n",
                            result.fit->gamma, result.fit->C_bar, result.fit->A,
                            result.fit->converged ? 1 : 0);
            std::printf("wrote %zu records to %s\n",
                        result.series.records.empty() ? std::size_t{0}
                                                      : result.series.size() - 1,
                        cfg.out_dir.c_str());
            return 0;
        }
        case ExperimentKind::GammaVsK: {
            const auto result = sawmap::run_gamma_vs_k(cfg);
            for (const auto& pt : result.points) {
                if (pt.failed)
                    std::printf("K %-8.4g FAILED: %s\n", pt.K, pt.error.c_str());
                else
                    std::printf("K %-8.4g D0 %.4g  gamma %.4g  gtilde %.4g  R %.4g\n", pt.K,
                                pt.d0, pt.gamma, pt.gtilde, pt.ratio_ql);
            }
            return 0;
        }
        case ExperimentKind::ResidualVsG: {
            const auto result = sawmap::run_residual_vs_g(cfg);
            for (const auto& pt : result.points) {
                if (pt.failed)
                    std::printf("n_q %2d L %2d K %-8.4g FAILED: %s\n", pt.n_q, pt.L, pt.K,
                                pt.error.c_str());
                else
                    std::printf("n_q %2d L %2d K %-8.4g g %-10.4g C_bar %.6g\n", pt.n_q, pt.L,
                                pt.K, pt.g, pt.c_bar);
            }
            print_scaling(result.scaling);
            return 0;
        }
        case ExperimentKind::NoiseSingle:
        case ExperimentKind::NoiseScaling: {
            const auto result = sawmap::run_noise_scaling(cfg);
            for (const auto& pt : result.points) {
                if (pt.failed)
                    std::printf("n_q %2d eps %-8.4g FAILED: %s\n", pt.n_q, pt.epsilon,
                                pt.error.c_str());
                else
                    std::printf("n_q %2d eps %-8.4g x %-10.4g Gamma %.6g +- %.2g\n", pt.n_q,
                                pt.epsilon, pt.x, pt.Gamma, pt.stderr_Gamma);
            }
            print_scaling(result.scaling);
            return 0;
        }
        case ExperimentKind::ClassicalD0: {
            const auto result = sawmap::run_classical_d0(cfg);
            for (const auto& pt : result.points) {
                if (pt.failed)
                    std::printf("K %-8.4g FAILED: %s\n", pt.K, pt.error.c_str());
                else
                    std::printf("K %-8.4g D0 %.6g +- %.2g  R^2 %.4f\n", pt.K, pt.estimate.d0,
                                pt.estimate.stderr_d0, pt.estimate.r_squared);
            }
            return 0;
        }
    }
    throw std::invalid_argument("unknown experiment kind");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum sawtooth-map simulator and concurrence analysis"};
    app.set_version_flag("--version", sawmap::version_string);
    app.require_subcommand(1);

    ExperimentConfig cfg;

    auto* single = app.add_subcommand("single", "one evolution; full series plus decay fit");
    auto* gamma = app.add_subcommand("gamma-vs-k",
                                     "decay-rate sweep over K against the classical rate");
    auto* residual =
        app.add_subcommand("residual-vs-g", "residual concurrence across an (n_q, L, K) grid");
    auto* noise = app.add_subcommand("noise-scaling",
                                     "noise-induced decay rate over an (n_q, eps) grid");
    auto* classical =
        app.add_subcommand("classical-d0", "classical diffusion-rate sweep over K");
    for (CLI::App* cmd : {single, gamma, residual, noise, classical})
        add_common_options(cmd, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 1 : 0;
    }

    if (single->parsed()) cfg.kind = ExperimentKind::SingleRun;
    if (gamma->parsed()) cfg.kind = ExperimentKind::GammaVsK;
    if (residual->parsed()) cfg.kind = ExperimentKind::ResidualVsG;
    if (noise->parsed())
        cfg.kind = cfg.nq_list.size() == 1 && cfg.eps_list.size() == 1
                       ? ExperimentKind::NoiseSingle
                       : ExperimentKind::NoiseScaling;
    if (classical->parsed()) cfg.kind = ExperimentKind::ClassicalD0;

    try {
        return dispatch(cfg);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime failure: %s\n", e.what());
        return 2;
    }
}
