#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "sawmap/state_vector.hpp"

namespace sawmap {

/// 4x4 density matrix of the two most significant qubits over the basis
/// |a1 a2> in {00, 01, 10, 11}.
struct ReducedState {
    Eigen::Matrix4cd rho;
};

/// Partial trace over the n_q - 2 least significant qubits:
///   rho[a][b] = sum_r amp[a*N/4 + r] * conj(amp[b*N/4 + r]).
inline ReducedState reduce_top_two(const StateVector& state) {
    if (state.n_q < 2) throw std::domain_error("reduce_top_two: requires at least 2 qubits");
    const std::size_t quarter = state.size() / 4;
    ReducedState rs;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            complex s{0.0, 0.0};
            const complex* pa = state.amp.data() + a * quarter;
            const complex* pb = state.amp.data() + b * quarter;
            for (std::size_t r = 0; r < quarter; ++r) s += pa[r] * std::conj(pb[r]);
            rs.rho(a, b) = s;
        }
    }
    return rs;
}

/// Spin-flipped matrix (sigma_y x sigma_y) rho* (sigma_y x sigma_y).
inline Eigen::Matrix4cd spin_flip(const Eigen::Matrix4cd& rho) {
    Eigen::Matrix4cd y = Eigen::Matrix4cd::Zero();
    y(0, 3) = -1.0;
    y(1, 2) = 1.0;
    y(2, 1) = 1.0;
    y(3, 0) = -1.0;
    return y * rho.conjugate() * y;
}

/// Checks Hermiticity, unit trace and positive semidefiniteness (up to the
/// stated tolerances) and throws std::runtime_error on violation.
inline void validate_reduced_state(const ReducedState& rs, double herm_tol = 1e-12,
                                   double trace_tol = 1e-10, double psd_tol = 1e-10) {
    const Eigen::Matrix4cd& rho = rs.rho;
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm > herm_tol) {
        std::ostringstream os;
        os << "reduced state not Hermitian: max |rho - rho^+| = " << herm;
        throw std::runtime_error(os.str());
    }
    const double tr_err = std::abs(rho.trace() - complex{1.0, 0.0});
    if (tr_err > trace_tol) {
        std::ostringstream os;
        os << "reduced state trace differs from 1 by " << tr_err;
        throw std::runtime_error(os.str());
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -psd_tol) {
        std::ostringstream os;
        os << "reduced state not PSD: min eigenvalue = " << min_eig;
        throw std::runtime_error(os.str());
    }
}

struct ConcurrenceResult {
    double C = 0.0;
    std::array<double, 4> lambdas{};  // decreasing order
    double E_f = 0.0;
};

/// Binary entropy with base-2 logarithms; h(0) = h(1) = 0 by continuity.
inline double binary_entropy(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

/// Entanglement of formation as a function of the concurrence.
inline double entanglement_of_formation(double C) {
    const double arg = 1.0 - C * C;
    return binary_entropy(0.5 * (1.0 + std::sqrt(arg > 0.0 ? arg : 0.0)));
}

/**
 * Wootters concurrence of a two-qubit density matrix:
 * C = max{0, l1 - l2 - l3 - l4} with l_i the decreasing square roots of the
 * eigenvalues of rho * spin_flip(rho). This route is algebraically equal to
 * the eigenvalues of sqrt(sqrt(rho) rho~ sqrt(rho)) but needs no matrix
 * square roots, which lose accuracy for near-singular rho.
 *
 * Eigenvalues of rho rho~ in (-1e-10, 0) are clamped to zero; anything more
 * negative (or with a larger imaginary part) raises std::runtime_error.
 */
inline ConcurrenceResult concurrence(const ReducedState& rs) {
    const Eigen::Matrix4cd product = rs.rho * spin_flip(rs.rho);
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(product, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("concurrence: eigenvalue iteration failed");

    constexpr double clamp_tol = 1e-10;
    std::array<double, 4> lam{};
    for (int i = 0; i < 4; ++i) {
        const complex ev = es.eigenvalues()(i);
        if (std::abs(ev.imag()) > clamp_tol) {
            std::ostringstream os;
            os << "concurrence: eigenvalue " << ev << " of rho*rho~ has non-real part";
            throw std::runtime_error(os.str());
        }
        double re = ev.real();
        if (re < 0.0) {
            if (re < -clamp_tol) {
                std::ostringstream os;
                os << "concurrence: eigenvalue " << re << " of rho*rho~ below -1e-10;"
                   << " input is not a valid density matrix";
                throw std::runtime_error(os.str());
            }
            re = 0.0;
        }
        lam[i] = std::sqrt(re);
    }
    std::sort(lam.begin(), lam.end(), std::greater<double>());

    ConcurrenceResult res;
    res.lambdas = lam;
    const double c = lam[0] - lam[1] - lam[2] - lam[3];
    res.C = std::clamp(c, 0.0, 1.0);
    res.E_f = entanglement_of_formation(res.C);
    return res;
}

/**
 * Scalar products between the quarter blocks phi_{a1 a2} of the state:
 *   Q14 = 2 |<phi_00 | phi_11>|,  Q23 = 2 |<phi_01 | phi_10>|.
 */
inline std::pair<double, double> scalar_product_diagnostics(const StateVector& state) {
    if (state.n_q < 2)
        throw std::domain_error("scalar_product_diagnostics: requires at least 2 qubits");
    const std::size_t quarter = state.size() / 4;
    complex q14{0.0, 0.0};
    complex q23{0.0, 0.0};
    for (std::size_t r = 0; r < quarter; ++r) {
        q14 += std::conj(state.amp[r]) * state.amp[3 * quarter + r];
        q23 += std::conj(state.amp[quarter + r]) * state.amp[2 * quarter + r];
    }
    return {2.0 * std::abs(q14), 2.0 * std::abs(q23)};
}

/// sum_n |amp[n] - amp[(N-n) mod N]|^2, zero iff the state is invariant
/// under the momentum reflection n -> N - n.
inline double symmetry_defect(const StateVector& state) {
    const std::size_t N = state.size();
    double s = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
        const std::size_t m = n == 0 ? 0 : N - n;
        s += std::norm(state.amp[n] - state.amp[m]);
    }
    return s;
}

}  // namespace sawmap
