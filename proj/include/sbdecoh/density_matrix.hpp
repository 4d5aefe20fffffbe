// density_matrix.hpp - reduced register state assembly and two-branch readout

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "modes.hpp"

namespace sbdecoh {

// rho(tau)_{AB} = e^{-i (phi_A - phi_B) tau} eta_{AB} rho_{AB}
inline Eigen::MatrixXcd reduced_density_matrix(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& eta_matrix,
                                               const Eigen::VectorXd& phases, double tau, double tol = 1e-12) {
    const auto n = rho.rows();
    if (rho.cols() != n || eta_matrix.rows() != n || eta_matrix.cols() != n || phases.size() != n)
        throw std::invalid_argument("reduced_density_matrix: dimension mismatch");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol)
        throw std::invalid_argument("reduced_density_matrix: rho is not hermitian");
    if ((eta_matrix - eta_matrix.adjoint()).cwiseAbs().maxCoeff() > tol)
        throw std::invalid_argument("reduced_density_matrix: eta matrix is not hermitian");
    for (Eigen::Index i = 0; i < n; ++i)
        if (std::abs(eta_matrix(i, i) - 1.0) > tol)
            throw std::invalid_argument("reduced_density_matrix: eta matrix diagonal must be 1");
    if (std::abs(rho.trace() - 1.0) > 1e-10) throw std::invalid_argument("reduced_density_matrix: trace must be 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12)
        throw std::invalid_argument("reduced_density_matrix: rho is not positive semidefinite");

    Eigen::MatrixXcd out(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b)
            out(a, b) = std::polar(1.0, -(phases(a) - phases(b)) * tau) * eta_matrix(a, b) * rho(a, b);
    return out;
}

enum class BasisPhase { Real, Imaginary };

// Probability of the test outcome for the normalized two-branch test state:
// p = 1/2 + 1/2 Re(o), or 1/2 + 1/2 Im(o).
inline double readout_probability(cplx overlap, BasisPhase phase) {
    if (std::abs(overlap) > 1.0 + 1e-12) throw std::invalid_argument("readout_probability: |overlap| > 1");
    const double v = phase == BasisPhase::Real ? overlap.real() : overlap.imag();
    return std::clamp(0.5 + 0.5 * v, 0.0, 1.0);
}

// Unnormalized variant p = 1/2 + Re(o) (or Im); rejects results outside [0, 1].
inline double readout_probability_unnormalized(cplx overlap, BasisPhase phase) {
    if (std::abs(overlap) > 1.0 + 1e-12) throw std::invalid_argument("readout_probability: |overlap| > 1");
    const double p = 0.5 + (phase == BasisPhase::Real ? overlap.real() : overlap.imag());
    if (p < -1e-12 || p > 1.0 + 1e-12)
        throw std::domain_error("readout_probability_unnormalized: p = " + std::to_string(p) + " outside [0, 1]");
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace sbdecoh
