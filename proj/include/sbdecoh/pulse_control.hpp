// pulse_control.hpp - bang-bang schedules, flipped displacements, stroboscopic factors

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "bath_model.hpp"
#include "coherent_product.hpp"
#include "frequency_grid.hpp"

namespace sbdecoh {

enum class Protocol { Free, Standard, SymmetrizedCP };

inline std::string protocol_name(Protocol p) {
    switch (p) {
        case Protocol::Free: return "free";
        case Protocol::Standard: return "standard";
        case Protocol::SymmetrizedCP: return "symmetrized";
    }
    return "?";
}

class PulseSchedule {
  public:
    static PulseSchedule free() { return PulseSchedule(Protocol::Free, 0.0, 0); }
    static PulseSchedule standard(double dt, int n_cycles) { return PulseSchedule(Protocol::Standard, dt, n_cycles); }
    static PulseSchedule symmetrized(double dt, int n_cycles) {
        return PulseSchedule(Protocol::SymmetrizedCP, dt, n_cycles);
    }

    Protocol protocol() const { return protocol_; }
    double dt() const { return dt_; }
    int n_cycles() const { return n_cycles_; }
    const std::vector<double>& flip_times() const { return flips_; }

    std::vector<double> readout_times() const {
        std::vector<double> r;
        for (int k = 0; k <= n_cycles_; ++k) r.push_back(2.0 * k * dt_);
        return r;
    }

  private:
    PulseSchedule(Protocol p, double dt, int n) : protocol_(p), dt_(dt), n_cycles_(n) {
        if (p == Protocol::Free) return;
        if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("PulseSchedule: dt must be > 0");
        if (n < 0) throw std::invalid_argument("PulseSchedule: n_cycles must be >= 0");
        for (int k = 0; k < n; ++k) {
            if (p == Protocol::Standard) {
                flips_.push_back((2 * k + 1) * dt);
                flips_.push_back((2 * k + 2) * dt);
            } else {
                flips_.push_back(2 * k * dt + 0.5 * dt);
                flips_.push_back(2 * k * dt + 1.5 * dt);
            }
        }
    }

    Protocol protocol_;
    double dt_;
    int n_cycles_;
    std::vector<double> flips_;
};

// Up-branch b(x, tau) from b(0) = 0 with m = 1; flips at t_f <= tau are applied.
inline cplx displacement_with_pulses(const PulseSchedule& s, double x, double tau) {
    if (tau < 0.0) throw std::invalid_argument("displacement_with_pulses: tau must be >= 0");
    cplx b = 0.0;
    double t = 0.0;
    for (double tf : s.flip_times()) {
        if (tf > tau) break;
        b = -((b + 1.0) * detail::expm1_neg_i(x * (tf - t)) + b);
        t = tf;
    }
    return (b + 1.0) * detail::expm1_neg_i(x * (tau - t)) + b;
}

// Read-out displacement b_n, held in extended precision.
struct StroboscopicState {
    int n = 0;
    std::complex<long double> b = 0.0L;
};

namespace detail {

inline std::complex<long double> expm1_neg_i_ld(long double phi) {
    const long double s = std::sin(0.5L * phi);
    return {-2.0L * s * s, -std::sin(phi)};
}

}  // namespace detail

// One read-out period of the recurrence.
inline StroboscopicState strobe_step(const StroboscopicState& st, const PulseSchedule& s, double x) {
    const long double u = static_cast<long double>(x * s.dt());
    const auto e2 = std::polar(1.0L, -2.0L * u);
    switch (s.protocol()) {
        case Protocol::Standard: {
            const auto e = detail::expm1_neg_i_ld(u);
            return {st.n + 1, st.b * e2 + e * e};
        }
        case Protocol::SymmetrizedCP: {
            const auto h = detail::expm1_neg_i_ld(0.5L * u);
            return {st.n + 1, st.b * e2 + h * h * detail::expm1_neg_i_ld(u)};
        }
        case Protocol::Free: break;
    }
    throw std::invalid_argument("strobe_step: free protocol has no recurrence");
}

namespace detail {

// u = (2j + 1) pi + delta with |delta| <= pi; returns {delta, j}.
inline std::pair<double, long> reduce_odd_pi(double u) {
    constexpr double pi_hi = 3.141592653589793116;
    constexpr double pi_lo = 1.2246467991473532e-16;
    const double j = std::round((u - pi_hi) / (2.0 * pi_hi));
    const double k = 2.0 * j + 1.0;
    const double delta = std::fma(-k, pi_lo, std::fma(-k, pi_hi, u));
    return {delta, static_cast<long>(j)};
}

}  // namespace detail

// |b_n| from the closed forms, evaluated around the removable poles at u = (2j+1) pi:
// standard 2|sin(nu) tan(u/2)|, symmetrized 2|sin(nu)| (1 - cos(u/2)) / |cos(u/2)|.
inline double strobe_closed_form_abs(Protocol p, double x, double dt, int n) {
    if (n < 0) throw std::invalid_argument("strobe_closed_form_abs: n must be >= 0");
    const double u = x * dt;
    const auto [delta, j] = detail::reduce_odd_pi(u);
    const double sn = std::abs(std::sin(n * delta));
    const double sh = std::sin(0.5 * delta);
    switch (p) {
        case Protocol::Standard:
            if (sh == 0.0) return 4.0 * n;
            return 2.0 * sn / std::abs(std::tan(0.5 * delta));
        case Protocol::SymmetrizedCP: {
            if (sh == 0.0) return 4.0 * n;
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;
            return 2.0 * sn * (1.0 + sign * sh) / std::abs(sh);
        }
        case Protocol::Free: break;
    }
    throw std::invalid_argument("strobe_closed_form_abs: free protocol has no closed form");
}

namespace detail {

inline BathValue strobe_gamma(Protocol p, const PulseSchedule& s, int n, const BathSpec& bath,
                              const FrequencyGrid& grid) {
    if (s.protocol() != p) throw std::invalid_argument("strobe gamma: protocol mismatch");
    bath.validate();
    // |b_n|^2 ~ x^2 as x -> 0
    return bath_integral(
        [&](double x) {
            const double a = strobe_closed_form_abs(p, x, s.dt(), n);
            return a * a;
        },
        2, bath, grid, true);
}

}  // namespace detail

// Gamma at read-out 2n dt = int w coth |b_n|^2
inline BathValue gamma_strob(const PulseSchedule& s, int n, const BathSpec& bath, const FrequencyGrid& grid) {
    return detail::strobe_gamma(Protocol::Standard, s, n, bath, grid);
}

inline BathValue gamma_sym(const PulseSchedule& s, int n, const BathSpec& bath, const FrequencyGrid& grid) {
    return detail::strobe_gamma(Protocol::SymmetrizedCP, s, n, bath, grid);
}

// Same integrals driven by the iterated recurrence instead of the closed form.
inline BathValue gamma_recurrence(const PulseSchedule& s, int n, const BathSpec& bath, const FrequencyGrid& grid) {
    return bath_integral(
        [&](double x) {
            StroboscopicState st;
            for (int k = 0; k < n; ++k) st = strobe_step(st, s, x);
            return static_cast<double>(std::norm(st.b));
        },
        2, bath, grid, true);
}

// Post-flip displacements tabulated per grid node; Gamma(tau) is one pass over the grid.
class PulseEvolver {
  public:
    PulseEvolver(const PulseSchedule& s, const BathSpec& bath, const FrequencyGrid& grid)
        : schedule_(s) {
        bath.validate();
        const auto xs = grid.nodes();
        const auto ws = grid.weights();
        const auto& flips = s.flip_times();
        for (std::size_t i = 0; i < xs.size(); ++i) {
            x_.push_back(xs[i]);
            wc_.push_back(ws[i] * weight(xs[i], bath) * thermal_coth(xs[i], bath.theta));
        }
        post_.assign(flips.size() * x_.size(), 0.0);
        for (std::size_t i = 0; i < x_.size(); ++i) {
            cplx b = 0.0;
            double t = 0.0;
            for (std::size_t f = 0; f < flips.size(); ++f) {
                b = -((b + 1.0) * detail::expm1_neg_i(x_[i] * (flips[f] - t)) + b);
                t = flips[f];
                post_[f * x_.size() + i] = b;
            }
        }
        // |b|^2 ~ x^2 and Im b ~ x as x -> 0
        divergent_ = !classify_convergence(2, bath, true).finite;
    }

    // b on node i at time tau (right-continuous at flips)
    cplx displacement(std::size_t i, double tau) const {
        const auto& flips = schedule_.flip_times();
        const auto it = std::upper_bound(flips.begin(), flips.end(), tau);
        if (it == flips.begin()) return detail::expm1_neg_i(x_[i] * tau);
        const auto f = static_cast<std::size_t>(it - flips.begin()) - 1;
        const cplx b = post_[f * x_.size() + i];
        return (b + 1.0) * detail::expm1_neg_i(x_[i] * (tau - flips[f])) + b;
    }

    BathValue gamma(double tau) const {
        if (tau < 0.0) throw std::invalid_argument("gamma_continuous: tau must be >= 0");
        if (divergent_) return BathValue::divergence();
        double s = 0.0;
        for (std::size_t i = 0; i < x_.size(); ++i) s += wc_[i] * std::norm(displacement(i, tau));
        return {s, false};
    }

    // dGamma/dtau = int w coth (-2x Im b); left_limit selects the value just before a flip at tau
    BathValue rate(double tau, bool left_limit = false) const {
        if (divergent_) return BathValue::divergence();
        const auto& flips = schedule_.flip_times();
        const bool at_flip = std::binary_search(flips.begin(), flips.end(), tau);
        const double sign = (left_limit && at_flip) ? -1.0 : 1.0;
        double s = 0.0;
        for (std::size_t i = 0; i < x_.size(); ++i) s += wc_[i] * (-2.0 * x_[i]) * std::imag(displacement(i, tau));
        return {sign * s, false};
    }

    const PulseSchedule& schedule() const { return schedule_; }

  private:
    PulseSchedule schedule_;
    std::vector<double> x_;
    std::vector<double> wc_;
    std::vector<cplx> post_;
    bool divergent_ = false;
};

inline BathValue gamma_continuous(const PulseSchedule& s, double tau, const BathSpec& bath, const FrequencyGrid& grid) {
    return PulseEvolver(s, bath, grid).gamma(tau);
}

struct RevivalDerivatives {
    double d_gamma_after_midpulse = 0.0;
    double d_gamma_before_second = 0.0;
};

// One-sided dGamma/dtau at (2n-1)dt + 0 and 2n dt - 0 for the standard protocol:
// -4 int w coth x cos^2((n-1/2)u) tan(u/2)  and  4 int w coth x sin^2(nu) tan(u/2),
// u = x dt, written around the removable poles.
inline RevivalDerivatives revival_diagnostics(const PulseSchedule& s, const BathSpec& bath, const FrequencyGrid& grid,
                                              int n) {
    if (s.protocol() != Protocol::Standard) throw std::invalid_argument("revival_diagnostics: standard protocol only");
    if (n < 1) throw std::invalid_argument("revival_diagnostics: n must be >= 1");
    bath.validate();
    const double dt = s.dt();
    const auto cos2_tan = [&](double x) {
        const auto [delta, j] = detail::reduce_odd_pi(x * dt);
        (void)j;
        if (delta == 0.0) return 0.0;
        const double c = std::sin((n - 0.5) * delta);
        return -c * c / std::tan(0.5 * delta);
    };
    const auto sin2_tan = [&](double x) {
        const auto [delta, j] = detail::reduce_odd_pi(x * dt);
        (void)j;
        if (delta == 0.0) return 0.0;
        const double c = std::sin(n * delta);
        return -c * c / std::tan(0.5 * delta);
    };
    const auto after = bath_integral([&](double x) { return -4.0 * x * cos2_tan(x); }, 2, bath, grid, true);
    const auto before = bath_integral([&](double x) { return 4.0 * x * sin2_tan(x); }, 4, bath, grid, true);
    if (after.divergent || before.divergent)
        throw std::logic_error("revival_diagnostics: unexpected divergence");
    return {after.value, before.value};
}

}  // namespace sbdecoh
