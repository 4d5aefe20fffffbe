// coherent_product.hpp - displacement trajectories, phase and dissipative factors, eta

#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bath_model.hpp"
#include "frequency_grid.hpp"
#include "modes.hpp"

namespace sbdecoh {

// b(tau) = b0 e^{-i x tau} - m
inline cplx evolve_displacement(const BranchProfile& branch, double x, double c, double tau) {
    if (tau < 0.0) throw std::invalid_argument("evolve_displacement: tau must be >= 0");
    return branch.b0(x, c) * std::polar(1.0, -x * tau) - branch.m(x, c);
}

struct DisplacementTrajectory {
    std::vector<double> x;
    std::vector<double> c;
    std::vector<cplx> b;
};

inline DisplacementTrajectory evolve_displacement(const BranchProfile& branch, const BathSpec& bath,
                                                  const FrequencyGrid& grid, double tau, int directions = 48) {
    DisplacementTrajectory t;
    for (const auto& [c, p] : direction_set(bath.d, branch.isotropic(), directions)) {
        (void)p;
        for (double x : grid.nodes()) {
            t.x.push_back(x);
            t.c.push_back(c);
            t.b.push_back(evolve_displacement(branch, x, c, tau));
        }
    }
    return t;
}

namespace detail {

// e^{-i phi} - 1 without cancellation at small phi
inline cplx expm1_neg_i(double phi) {
    const double s = std::sin(0.5 * phi);
    return {-2.0 * s * s, -std::sin(phi)};
}

}  // namespace detail

// Pairwise evaluator. Mode data are tabulated once; each time sample is a
// single pass over the modes.
class PairEvaluator {
  public:
    struct Sample {
        double gamma = 0.0;
        double phi = 0.0;
        double theta_a = 0.0;
        double theta_b = 0.0;
        bool gamma_divergent = false;
        bool phi_divergent = false;

        double dtheta() const { return theta_a - theta_b; }
        cplx eta() const {
            if (gamma_divergent) return 0.0;
            return std::polar(std::exp(-gamma), theta_a - theta_b - phi);
        }
    };

    PairEvaluator(const BranchProfile& a, const BranchProfile& b, const BathSpec& bath, const FrequencyGrid& grid,
                  int directions = 48) {
        bath.validate();
        const auto modes = continuum_modes(bath, grid, a.isotropic() && b.isotropic(), directions);
        rows_.reserve(modes.size());
        for (const auto& md : modes) {
            Row r;
            r.x = md.x;
            r.mu = md.mu;
            r.coth = thermal_coth(md.x, bath.theta);
            r.ma = a.m(md.x, md.c);
            r.mb = b.m(md.x, md.c);
            r.b0a = a.b0(md.x, md.c);
            r.b0b = b.b0(md.x, md.c);
            omega_a_ += md.mu * md.x * std::norm(r.ma);
            omega_b_ += md.mu * md.x * std::norm(r.mb);
            rows_.push_back(r);
        }
        const int od = displacement_difference_order(a, b);
        const int oa = a.displacement_order(), ob = b.displacement_order();
        const auto sat = [](long v) { return static_cast<int>(std::min<long>(v, kVanishes)); };
        gamma_divergent_ = !classify_convergence(sat(2L * od), bath, true).finite;
        const int phi_exp = std::max({sat(long(oa) + ob), sat(long(od) + ob), sat(long(od) + oa)});
        phi_divergent_ = !classify_convergence(phi_exp, bath, false).finite;
    }

    Sample at(double tau) const {
        if (tau < 0.0) throw std::invalid_argument("PairEvaluator: tau must be >= 0");
        Sample s;
        s.gamma_divergent = gamma_divergent_;
        s.phi_divergent = phi_divergent_;
        double g = 0.0, ph = 0.0, ta = 0.0, tb = 0.0;
        for (const auto& r : rows_) {
            const cplx em1 = detail::expm1_neg_i(r.x * tau);
            const cplx ba = r.b0a * em1 + (r.b0a - r.ma);
            const cplx bb = r.b0b * em1 + (r.b0b - r.mb);
            g += r.mu * r.coth * std::norm(ba - bb);
            ph += r.mu * std::imag(ba * std::conj(bb));
            ta += r.mu * std::imag(std::conj(r.ma) * r.b0a * -em1);
            tb += r.mu * std::imag(std::conj(r.mb) * r.b0b * -em1);
        }
        s.gamma = gamma_divergent_ ? std::numeric_limits<double>::infinity() : 0.5 * g;
        s.phi = phi_divergent_ ? std::numeric_limits<double>::quiet_NaN() : -ph;
        s.theta_a = omega_a_ * tau - ta;
        s.theta_b = omega_b_ * tau - tb;
        return s;
    }

    // dGamma/dtau = 1/2 sum mu coth 2x Im(conj(db) dm)
    double gamma_rate(double tau) const {
        if (gamma_divergent_) return std::numeric_limits<double>::quiet_NaN();
        double s = 0.0;
        for (const auto& r : rows_) {
            const cplx em1 = detail::expm1_neg_i(r.x * tau);
            const cplx db = (r.b0a - r.b0b) * em1 + ((r.b0a - r.ma) - (r.b0b - r.mb));
            s += r.mu * r.coth * r.x * std::imag(std::conj(db) * (r.ma - r.mb));
        }
        return s;
    }

    double energy_shift_a() const { return omega_a_; }
    double energy_shift_b() const { return omega_b_; }
    bool gamma_divergent() const { return gamma_divergent_; }

  private:
    struct Row {
        double x, mu, coth;
        cplx ma, mb, b0a, b0b;
    };
    std::vector<Row> rows_;
    double omega_a_ = 0.0, omega_b_ = 0.0;
    bool gamma_divergent_ = false, phi_divergent_ = false;
};

inline BathValue gamma_dissipative(const BranchProfile& a, const BranchProfile& b, double tau, const BathSpec& bath,
                                   const FrequencyGrid& grid) {
    const auto s = PairEvaluator(a, b, bath, grid).at(tau);
    if (s.gamma_divergent) return BathValue::divergence();
    return {s.gamma, false};
}

inline BathValue phi_phase(const BranchProfile& a, const BranchProfile& b, double tau, const BathSpec& bath,
                           const FrequencyGrid& grid) {
    const auto s = PairEvaluator(a, b, bath, grid).at(tau);
    if (s.phi_divergent) return BathValue::divergence();
    return {s.phi, false};
}

// Theta(tau) = Omega0 tau - sum mu Re(m* b0 (1 - e^{-ix tau}) / i)
inline double theta_phase(const BranchProfile& branch, double tau, const BathSpec& bath, const FrequencyGrid& grid) {
    return PairEvaluator(branch, branch, bath, grid).at(tau).theta_a;
}

inline cplx eta(const BranchProfile& a, const BranchProfile& b, double tau, const BathSpec& bath,
                const FrequencyGrid& grid) {
    return PairEvaluator(a, b, bath, grid).at(tau).eta();
}

struct CoherenceTrace {
    std::vector<double> times;
    std::vector<double> gamma;
    std::vector<double> phi;
    std::vector<double> dtheta;
    std::vector<cplx> eta;
    bool divergent = false;
};

inline CoherenceTrace coherence_trace(const BranchProfile& a, const BranchProfile& b, const std::vector<double>& times,
                                      const BathSpec& bath, const FrequencyGrid& grid) {
    PairEvaluator ev(a, b, bath, grid);
    CoherenceTrace t;
    t.divergent = ev.gamma_divergent();
    for (double tau : times) {
        const auto s = ev.at(tau);
        t.times.push_back(tau);
        t.gamma.push_back(s.gamma);
        t.phi.push_back(s.phi);
        t.dtheta.push_back(s.dtheta());
        t.eta.push_back(s.eta());
    }
    return t;
}

}  // namespace sbdecoh
