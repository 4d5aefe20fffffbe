// modes.hpp - branch profiles and the discretized (frequency, direction) mode set

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bath_model.hpp"
#include "frequency_grid.hpp"

namespace sbdecoh {

using cplx = std::complex<double>;

// Order value meaning "vanishes identically".
inline constexpr int kVanishes = 1 << 20;

// a * exp(i * position * x * t_s * c)
struct PhaseTerm {
    int position = 0;
    double amplitude = 0.0;
};

// Smallest k with sum_p p^k a_p != 0, i.e. the x -> 0 order of sum_p a_p e^{i p x t_s c}.
inline int low_frequency_order(const std::vector<PhaseTerm>& terms, double transit) {
    std::map<int, double> merged;
    for (const auto& t : terms) merged[transit == 0.0 ? 0 : t.position] += t.amplitude;
    double scale = 0.0;
    for (const auto& [p, a] : merged) scale = std::max(scale, std::abs(a));
    if (scale == 0.0) return kVanishes;
    for (int k = 0; k <= static_cast<int>(merged.size()); ++k) {
        double s = 0.0, mag = 0.0;
        for (const auto& [p, a] : merged) {
            const double v = a * std::pow(static_cast<double>(p), k);
            s += v;
            mag += std::abs(v);
        }
        if (std::abs(s) > 1e-12 * std::max(mag, scale)) return k;
    }
    return kVanishes;
}

enum class InitialKind { Stationary, Thermal, Custom };

// Initial normalized displacement b0 (offset from the stationary point).
// Stationary: b0 = 0.  Thermal: b0 = m, so beta(0) = 0.  Custom: user function.
struct InitialDisplacement {
    InitialKind kind = InitialKind::Stationary;
    std::function<cplx(double x, double c)> custom;
    int order = 0;  // x -> 0 order of the custom function
    bool isotropic = true;

    static InitialDisplacement stationary() { return {}; }
    static InitialDisplacement thermal() { return {InitialKind::Thermal, {}, 0, true}; }
    static InitialDisplacement function(std::function<cplx(double, double)> f, int order, bool isotropic) {
        if (!f) throw std::invalid_argument("InitialDisplacement: empty function");
        return {InitialKind::Custom, std::move(f), order, isotropic};
    }
};

struct BranchProfile {
    std::string label;
    std::vector<PhaseTerm> coupling;
    double transit = 0.0;  // t_s
    InitialDisplacement initial;

    static BranchProfile constant(std::string label, double m) {
        BranchProfile p;
        p.label = std::move(label);
        p.coupling = {{0, m}};
        return p;
    }

    BranchProfile with_initial(InitialDisplacement init) const {
        BranchProfile p = *this;
        p.initial = std::move(init);
        return p;
    }

    cplx m(double x, double c) const {
        cplx s = 0.0;
        for (const auto& t : coupling) {
            if (t.position == 0 || transit == 0.0) s += t.amplitude;
            else s += t.amplitude * std::polar(1.0, t.position * x * transit * c);
        }
        return s;
    }

    cplx b0(double x, double c) const {
        switch (initial.kind) {
            case InitialKind::Stationary: return 0.0;
            case InitialKind::Thermal: return m(x, c);
            case InitialKind::Custom: return initial.custom(x, c);
        }
        return 0.0;
    }

    bool coupling_isotropic() const {
        if (transit == 0.0) return true;
        return std::all_of(coupling.begin(), coupling.end(), [](const PhaseTerm& t) { return t.position == 0; });
    }
    bool isotropic() const { return coupling_isotropic() && (initial.kind != InitialKind::Custom || initial.isotropic); }

    int coupling_order() const { return low_frequency_order(coupling, transit); }

    // x -> 0 order of b(x, tau) = b0 e^{-ix tau} - m at generic tau > 0
    int displacement_order() const {
        const int om = coupling_order();
        switch (initial.kind) {
            case InitialKind::Stationary: return om;
            case InitialKind::Thermal: return om == kVanishes ? om : om + 1;
            case InitialKind::Custom: return std::min(om, initial.order);
        }
        return om;
    }
};

// x -> 0 order of m_A - m_B
inline int coupling_difference_order(const BranchProfile& a, const BranchProfile& b) {
    if (a.transit != b.transit && !(a.coupling_isotropic() && b.coupling_isotropic()))
        return std::min(a.coupling_order(), b.coupling_order());
    std::vector<PhaseTerm> d = a.coupling;
    for (auto t : b.coupling) {
        t.amplitude = -t.amplitude;
        d.push_back(t);
    }
    return low_frequency_order(d, a.coupling_isotropic() && b.coupling_isotropic() ? 0.0 : a.transit);
}

// x -> 0 order of b_A - b_B at generic tau > 0
inline int displacement_difference_order(const BranchProfile& a, const BranchProfile& b) {
    const auto alpha = [](const BranchProfile& p) { return p.initial.kind == InitialKind::Thermal ? 1 : 0; };
    int coupling_part;
    if (alpha(a) == alpha(b)) {
        const int od = coupling_difference_order(a, b);
        coupling_part = od == kVanishes ? od : od + alpha(a);
    } else {
        coupling_part = std::min(a.coupling_order() + alpha(a), b.coupling_order() + alpha(b));
    }
    int residual = kVanishes;
    if (a.initial.kind == InitialKind::Custom) residual = std::min(residual, a.initial.order);
    if (b.initial.kind == InitialKind::Custom) residual = std::min(residual, b.initial.order);
    return std::min(coupling_part, residual);
}

// Direction cosines c and probabilities p over the degenerate directions of a shell.
inline std::vector<std::pair<double, double>> direction_set(int d, bool isotropic, int count = 48) {
    if (isotropic) return {{1.0, 1.0}};
    if (count < 1) throw std::invalid_argument("direction_set: count must be >= 1");
    std::vector<std::pair<double, double>> out;
    if (d == 1) {
        out = {{1.0, 0.5}, {-1.0, 0.5}};
    } else if (d == 2) {
        for (int j = 0; j < count; ++j)
            out.emplace_back(std::cos(2.0 * std::numbers::pi * (j + 0.5) / count), 1.0 / count);
    } else {
        const auto [c, w] = gauss_legendre(count);
        for (int j = 0; j < count; ++j) out.emplace_back(c[j], 0.5 * w[j]);
    }
    return out;
}

// One bath mode: frequency x, measure mu (so that sum_k mu_k F_k stands for
// sum_q |chi_q / omega_q|^2 F_q) and direction cosine c.
struct Mode {
    double x;
    double mu;
    double c;
};

inline std::vector<Mode> continuum_modes(const BathSpec& bath, const FrequencyGrid& grid, bool isotropic,
                                         int directions = 48) {
    bath.validate();
    const auto dirs = direction_set(bath.d, isotropic, directions);
    std::vector<Mode> modes;
    modes.reserve(grid.size() * dirs.size());
    const auto xs = grid.nodes();
    const auto ws = grid.weights();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double base = 0.5 * weight(xs[i], bath) * ws[i];
        for (const auto& [c, p] : dirs) modes.push_back({xs[i], base * p, c});
    }
    return modes;
}

}  // namespace sbdecoh
