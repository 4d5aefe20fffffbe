// frequency_grid.hpp - quadrature grids over the reduced frequency x = w / w_c

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sbdecoh {

// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
// on P_n. Accurate to a few ulps for n <= 64.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    std::vector<double> x(n), w(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return {x, w};
}

struct GridOptions {
    double x_max = 40.0;
    double panel_width = 0.25;  // width of the uniform panels beyond the graded region
    int order = 16;             // Gauss-Legendre points per panel
    double grade_start = 1e-8;  // first breakpoint of the geometric grading toward x = 0
    double tolerance = 1e-10;   // declared accuracy of the e^{-x} normalization check
};

// Immutable set of positive nodes and weights approximating integrals over (0, x_max].
class FrequencyGrid {
  public:
    enum class Scheme { CompositePanel, ExponentialNode };

    // Composite Gauss-Legendre panels: dyadic panels from grade_start up to
    // panel_width, then uniform panels of panel_width up to x_max.
    static FrequencyGrid composite(const GridOptions& opt = {}) {
        if (!(opt.x_max > 0.0) || !(opt.panel_width > 0.0) || opt.order < 2 || !(opt.grade_start > 0.0))
            throw std::invalid_argument("FrequencyGrid: invalid composite options");
        std::vector<double> breaks{0.0};
        double b = std::min(opt.grade_start, opt.panel_width);
        while (b < opt.panel_width && b < opt.x_max) {
            breaks.push_back(b);
            b *= 2.0;
        }
        double last = breaks.back();
        const auto n_uniform = static_cast<std::size_t>(std::ceil((opt.x_max - last) / opt.panel_width));
        const double h = (opt.x_max - last) / static_cast<double>(std::max<std::size_t>(n_uniform, 1));
        for (std::size_t i = 1; i <= n_uniform; ++i) breaks.push_back(last + h * static_cast<double>(i));
        breaks.back() = opt.x_max;

        const auto [gx, gw] = gauss_legendre(opt.order);
        FrequencyGrid g;
        g.scheme_ = Scheme::CompositePanel;
        g.x_max_ = opt.x_max;
        g.tolerance_ = opt.tolerance;
        g.options_ = opt;
        for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
            const double a = breaks[p], c = breaks[p + 1];
            const double mid = 0.5 * (a + c), half = 0.5 * (c - a);
            for (int k = 0; k < opt.order; ++k) {
                g.nodes_.push_back(mid + half * gx[k]);
                g.weights_.push_back(half * gw[k]);
            }
        }
        g.check();
        return g;
    }

    // Double-exponential (exp-sinh) nodes x_k = exp(pi/2 sinh(k h)), truncated to
    // [x_min, x_max]. Suited to smooth integrands with algebraic behaviour at x -> 0.
    static FrequencyGrid exp_sinh(double step = 0.05, double x_max = 200.0, double x_min = 1e-14,
                                  double tolerance = 1e-10) {
        if (!(step > 0.0) || !(x_max > x_min) || !(x_min > 0.0))
            throw std::invalid_argument("FrequencyGrid: invalid exp-sinh options");
        FrequencyGrid g;
        g.scheme_ = Scheme::ExponentialNode;
        g.x_max_ = x_max;
        g.tolerance_ = tolerance;
        g.step_ = step;
        g.x_min_ = x_min;
        const double hp = 0.5 * std::numbers::pi;
        for (long k = -100000; k <= 100000; ++k) {
            const double t = static_cast<double>(k) * step;
            const double x = std::exp(hp * std::sinh(t));
            if (x < x_min) continue;
            if (x > x_max) break;
            g.nodes_.push_back(x);
            g.weights_.push_back(step * hp * std::cosh(t) * x);
        }
        g.check();
        return g;
    }

    // Grid sized for integrands oscillating up to time tau_max: panels span at
    // most ~8 rad of phase, and x_max = 40 + 20 theta + 4 / dt_min.
    static FrequencyGrid for_problem(double theta, double tau_max, double dt_min = 0.0, int order = 16) {
        GridOptions opt;
        opt.order = order;
        opt.x_max = 40.0 + 20.0 * theta + (dt_min > 0.0 ? 4.0 / dt_min : 0.0);
        opt.panel_width = tau_max > 0.0 ? std::min(0.25, 8.0 / tau_max) : 0.25;
        return composite(opt);
    }

    // Same scheme with roughly twice the nodes.
    FrequencyGrid refined() const {
        if (scheme_ == Scheme::CompositePanel) {
            GridOptions opt = options_;
            opt.panel_width *= 0.5;
            opt.grade_start *= 0.5;
            return composite(opt);
        }
        return exp_sinh(step_ * 0.5, x_max_, x_min_, tolerance_);
    }

    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }
    std::size_t size() const { return nodes_.size(); }
    double x_max() const { return x_max_; }
    Scheme scheme() const { return scheme_; }
    double tolerance() const { return tolerance_; }

    template <class F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * f(nodes_[i]);
        return s;
    }

  private:
    FrequencyGrid() = default;

    void check() {
        if (nodes_.empty()) throw std::invalid_argument("FrequencyGrid: empty grid");
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            if (!(nodes_[i] > 0.0) || !(weights_[i] > 0.0))
                throw std::logic_error("FrequencyGrid: nonpositive node or weight");
            if (i > 0 && !(nodes_[i] > nodes_[i - 1]))
                throw std::logic_error("FrequencyGrid: nodes not strictly increasing");
        }
        if (x_max_ < nodes_.back()) throw std::logic_error("FrequencyGrid: x_max below last node");
        const double norm = integrate([](double x) { return std::exp(-x); });
        if (std::abs(norm - 1.0) > tolerance_)
            throw std::invalid_argument("FrequencyGrid: e^{-x} normalization off by " +
                                        std::to_string(std::abs(norm - 1.0)));
    }

    std::vector<double> nodes_;
    std::vector<double> weights_;
    double x_max_ = 0.0;
    double tolerance_ = 1e-10;
    double step_ = 0.05;
    double x_min_ = 0.0;
    Scheme scheme_ = Scheme::CompositePanel;
    GridOptions options_;
};

}  // namespace sbdecoh
