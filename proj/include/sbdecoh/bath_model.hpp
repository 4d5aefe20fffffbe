// bath_model.hpp - spectral weight, thermal factor, bath integrals, convergence classes

#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/trigamma.hpp>

#include "frequency_grid.hpp"

namespace sbdecoh {

struct BathSpec {
    int d = 3;
    double lambda = 1.0;
    double theta = 0.0;

    void validate() const {
        if (d < 1 || d > 3) throw std::invalid_argument("BathSpec: d must be 1, 2 or 3");
        if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("BathSpec: lambda must be > 0");
        if (!(theta >= 0.0) || !std::isfinite(theta)) throw std::invalid_argument("BathSpec: theta must be >= 0");
    }
};

// Result of an integral that may be divergent at x -> 0.
struct BathValue {
    double value = 0.0;
    bool divergent = false;

    static BathValue divergence() { return {std::numeric_limits<double>::infinity(), true}; }
    bool finite() const { return !divergent; }
    double get() const {
        if (divergent) throw std::domain_error("BathValue: integral is divergent");
        return value;
    }
};

struct ConvergenceVerdict {
    int exponent = 0;  // integrand ~ x^exponent as x -> 0
    bool finite = true;
};

// coth(x / 2 theta); exactly 1 at theta = 0.
inline double thermal_coth(double x, double theta) {
    if (!(x > 0.0)) throw std::domain_error("thermal_coth: x must be > 0");
    if (theta < 0.0) throw std::domain_error("thermal_coth: theta must be >= 0");
    if (theta == 0.0) return 1.0;
    const double u = x / (2.0 * theta);
    if (u < 1e-4) return 1.0 / u + u / 3.0;
    return 1.0 + 2.0 / std::expm1(2.0 * u);
}

// w_d(x) = lambda x^(d-2) e^(-x)
inline double weight(double x, const BathSpec& bath) {
    if (!(x > 0.0)) throw std::domain_error("weight: x must be > 0");
    double p = 1.0;
    if (bath.d == 1) p = 1.0 / x;
    else if (bath.d == 3) p = x;
    return bath.lambda * p * std::exp(-x);
}

inline ConvergenceVerdict classify_convergence(int f_exponent, const BathSpec& bath, bool with_coth) {
    const int p = (bath.d - 2) + f_exponent - ((with_coth && bath.theta > 0.0) ? 1 : 0);
    return {p, p > -1};
}

// Integral of w_d(x) [coth] f(x) over the grid, or a divergence flag when the
// caller-declared low-frequency exponent of f makes it diverge.
template <class F>
BathValue bath_integral(F&& f, int f_exponent, const BathSpec& bath, const FrequencyGrid& grid, bool with_coth) {
    if (!classify_convergence(f_exponent, bath, with_coth).finite) return BathValue::divergence();
    double s = 0.0;
    const auto xs = grid.nodes();
    const auto ws = grid.weights();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double v = ws[i] * weight(xs[i], bath) * f(xs[i]);
        if (with_coth) v *= thermal_coth(xs[i], bath.theta);
        s += v;
    }
    return {s, false};
}

// zeta(2, a) = sum_{n>=0} (n + a)^-2 = trigamma(a)
inline double hurwitz_zeta2(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) throw std::domain_error("hurwitz_zeta2: a must be > 0");
    return boost::math::trigamma(a);
}

// Single-qubit d = 3 pair value lambda [2 theta^2 zeta(2, theta) - 1], evaluated
// as lambda [1 + 2 theta^2 zeta(2, 1 + theta)].
inline double gamma0_closed_form(double theta, double lambda) {
    if (!(theta >= 0.0)) throw std::domain_error("gamma0_closed_form: theta must be >= 0");
    if (theta == 0.0) return lambda;
    return lambda * (1.0 + 2.0 * theta * theta * hurwitz_zeta2(1.0 + theta));
}

}  // namespace sbdecoh
