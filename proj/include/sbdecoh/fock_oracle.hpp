// fock_oracle.hpp - truncated-Fock brute force evaluation of eta for a few discrete modes

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "bath_model.hpp"
#include "modes.hpp"

namespace sbdecoh {

// Branch data on a discrete mode set: coupling m_k and initial offset b0_k.
struct DiscreteBranch {
    std::vector<cplx> m;
    std::vector<cplx> b0;
};

struct FockOracleConfig {
    std::vector<double> mode_freqs;
    std::vector<double> mode_weights;  // c_k = |chi_k / omega_k|^2
    int n_max = 0;                     // 0 selects n_max from the truncation rule
    double theta = 0.0;
    double tol = 1e-10;       // thermal occupation cutoff at level n_max
    double converge_tol = 1e-7;

    void validate(std::size_t modes_a, std::size_t modes_b) const {
        const auto k = mode_freqs.size();
        if (k == 0 || k > 4) throw std::invalid_argument("FockOracleConfig: need 1 to 4 modes");
        if (mode_weights.size() != k || modes_a != k || modes_b != k)
            throw std::invalid_argument("FockOracleConfig: mode count mismatch");
        for (std::size_t i = 0; i < k; ++i)
            if (!(mode_freqs[i] > 0.0) || !(mode_weights[i] >= 0.0))
                throw std::invalid_argument("FockOracleConfig: frequencies must be > 0, weights >= 0");
        if (!(theta >= 0.0)) throw std::invalid_argument("FockOracleConfig: theta must be >= 0");
        if (n_max < 0) throw std::invalid_argument("FockOracleConfig: n_max must be >= 0");
        if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("FockOracleConfig: tol must be in (0, 1)");
    }

    // Smallest n with e^{-x n / theta} < tol for every mode.
    int truncation() const {
        if (n_max > 0) return n_max;
        if (theta == 0.0) return 1;
        double xmin = mode_freqs.front();
        for (double x : mode_freqs) xmin = std::min(xmin, x);
        return std::max(1, static_cast<int>(std::floor(theta * std::log(1.0 / tol) / xmin)) + 1);
    }
};

struct OracleResult {
    cplx eta;
    bool converged = false;
    int n_max = 0;
    double change = 0.0;
};

namespace detail {

inline void check_branch(const DiscreteBranch& b) {
    if (b.m.size() != b.b0.size()) throw std::invalid_argument("DiscreteBranch: m and b0 sizes differ");
}

inline cplx discrete_b(const DiscreteBranch& br, std::size_t k, double x, double tau) {
    return br.b0[k] * std::polar(1.0, -x * tau) - br.m[k];
}

inline double discrete_theta(const DiscreteBranch& br, const FockOracleConfig& cfg, double tau) {
    double s = 0.0;
    for (std::size_t k = 0; k < br.m.size(); ++k) {
        const double x = cfg.mode_freqs[k], c = cfg.mode_weights[k];
        const cplx one_minus_e = 1.0 - std::polar(1.0, -x * tau);
        s += c * (x * std::norm(br.m[k]) * tau - std::imag(std::conj(br.m[k]) * br.b0[k] * one_minus_e));
    }
    return s;
}

// exp(beta a^dag - beta* a) on the first `dim` Fock levels, via the spectral
// decomposition of the hermitian generator.
inline Eigen::MatrixXcd displacement_matrix(cplx beta, int dim) {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    const cplx i(0.0, 1.0);
    for (int n = 0; n + 1 < dim; ++n) {
        h(n + 1, n) = i * beta * std::sqrt(n + 1.0);
        h(n, n + 1) = std::conj(h(n + 1, n));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXcd ph = (-i * es.eigenvalues().cast<cplx>()).array().exp();
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

inline cplx fock_trace(const DiscreteBranch& a, const DiscreteBranch& b, const FockOracleConfig& cfg, double tau,
                       int n_max) {
    const std::size_t modes = cfg.mode_freqs.size();
    std::vector<std::vector<double>> probs(modes);
    std::vector<std::vector<cplx>> diag(modes);
    for (std::size_t k = 0; k < modes; ++k) {
        const double x = cfg.mode_freqs[k], sc = std::sqrt(cfg.mode_weights[k]);
        const cplx ba = sc * discrete_b(a, k, x, tau);
        const cplx bb = sc * discrete_b(b, k, x, tau);
        const double big = std::max(std::abs(ba), std::abs(bb));
        const int dim = n_max + 1 + static_cast<int>(std::ceil(big * big + 10.0 * big + 20.0));
        const Eigen::MatrixXcd m = displacement_matrix(bb, dim).adjoint() * displacement_matrix(ba, dim);
        double z = 0.0;
        for (int n = 0; n <= n_max; ++n) {
            const double p = cfg.theta == 0.0 ? (n == 0 ? 1.0 : 0.0) : std::exp(-x * n / cfg.theta);
            probs[k].push_back(p);
            diag[k].push_back(m(n, n));
            z += p;
        }
        for (double& p : probs[k]) p /= z;
    }
    // full tensor-product basis
    std::vector<int> idx(modes, 0);
    cplx total = 0.0;
    while (true) {
        cplx term = 1.0;
        for (std::size_t k = 0; k < modes; ++k) term *= probs[k][idx[k]] * diag[k][idx[k]];
        total += term;
        std::size_t k = 0;
        while (k < modes && ++idx[k] > n_max) idx[k++] = 0;
        if (k == modes) break;
    }
    return total;
}

}  // namespace detail

// exp(i (Theta_A - Theta_B - Phi) - Gamma) with mode sums over the discrete set
inline cplx discrete_eta(const DiscreteBranch& a, const DiscreteBranch& b, const FockOracleConfig& cfg, double tau) {
    detail::check_branch(a);
    detail::check_branch(b);
    cfg.validate(a.m.size(), b.m.size());
    double gamma = 0.0, phi = 0.0;
    for (std::size_t k = 0; k < a.m.size(); ++k) {
        const double x = cfg.mode_freqs[k], c = cfg.mode_weights[k];
        const cplx ba = detail::discrete_b(a, k, x, tau), bb = detail::discrete_b(b, k, x, tau);
        const double coth = cfg.theta == 0.0 ? 1.0 : thermal_coth(x, cfg.theta);
        gamma += 0.5 * c * coth * std::norm(ba - bb);
        phi -= c * std::imag(ba * std::conj(bb));
    }
    const double dtheta = detail::discrete_theta(a, cfg, tau) - detail::discrete_theta(b, cfg, tau);
    return std::polar(std::exp(-gamma), dtheta - phi);
}

inline OracleResult fock_oracle_eta(const DiscreteBranch& a, const DiscreteBranch& b, const FockOracleConfig& cfg,
                                    double tau) {
    detail::check_branch(a);
    detail::check_branch(b);
    cfg.validate(a.m.size(), b.m.size());
    if (tau < 0.0) throw std::invalid_argument("fock_oracle_eta: tau must be >= 0");
    const int n = cfg.truncation();
    const cplx phase = std::polar(1.0, detail::discrete_theta(a, cfg, tau) - detail::discrete_theta(b, cfg, tau));
    const cplx t0 = detail::fock_trace(a, b, cfg, tau, n) * phase;
    const cplx t1 = detail::fock_trace(a, b, cfg, tau, n + 2) * phase;
    OracleResult r;
    r.eta = t0;
    r.n_max = n;
    r.change = std::abs(t1 - t0);
    r.converged = r.change <= cfg.converge_tol;
    return r;
}

}  // namespace sbdecoh
