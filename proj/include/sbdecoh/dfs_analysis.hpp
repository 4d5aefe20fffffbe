// dfs_analysis.hpp - register families, DFS branch profiles, decoherence-free conditions

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bath_model.hpp"
#include "coherent_product.hpp"
#include "frequency_grid.hpp"
#include "modes.hpp"

namespace sbdecoh {

struct SingleQubit {
    double epsilon = 1.0;
};

struct WeakCollective {
    int N = 1;
    double epsilon = 1.0;
};

// Linear array, spin n at position n (0-based); labels are spin patterns like "+-+".
struct IndividualLinear {
    int N = 2;
    double transit = 1.0;  // t_s
    double epsilon = 1.0;
};

using RegisterModel = std::variant<SingleQubit, WeakCollective, IndividualLinear>;

inline std::string model_name(const RegisterModel& m) {
    if (std::holds_alternative<SingleQubit>(m)) return "single_qubit";
    if (std::holds_alternative<WeakCollective>(m)) return "weak_collective";
    return "individual_linear";
}

inline std::vector<int> parse_spins(const std::string& label) {
    std::vector<int> s;
    for (char ch : label) {
        if (ch == '+') s.push_back(1);
        else if (ch == '-') s.push_back(-1);
        else throw std::invalid_argument("unknown label '" + label + "': spins must be '+' or '-'");
    }
    return s;
}

inline std::string format_spins(const std::vector<int>& s) {
    std::string out;
    for (int v : s) out += v > 0 ? '+' : '-';
    return out;
}

inline std::vector<std::string> dfs_labels(const RegisterModel& model) {
    std::vector<std::string> out;
    if (std::holds_alternative<SingleQubit>(model)) return {"up", "down"};
    if (const auto* wc = std::get_if<WeakCollective>(&model)) {
        for (int j = -wc->N; j <= wc->N; j += 2) out.push_back(std::to_string(j));
        return out;
    }
    const auto& il = std::get<IndividualLinear>(model);
    if (il.N > 16) throw std::invalid_argument("dfs_labels: N too large to enumerate");
    for (int mask = 0; mask < (1 << il.N); ++mask) {
        std::vector<int> s;
        for (int n = 0; n < il.N; ++n) s.push_back((mask >> n) & 1 ? -1 : 1);
        out.push_back(format_spins(s));
    }
    return out;
}

inline BranchProfile branch_profile(const RegisterModel& model, const std::string& label) {
    if (std::holds_alternative<SingleQubit>(model)) {
        if (label == "up") return BranchProfile::constant(label, 1.0);
        if (label == "down") return BranchProfile::constant(label, -1.0);
        throw std::invalid_argument("unknown single-qubit label '" + label + "'");
    }
    if (const auto* wc = std::get_if<WeakCollective>(&model)) {
        std::size_t pos = 0;
        int j = 0;
        try {
            j = std::stoi(label, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != label.size() || label.empty() || std::abs(j) > wc->N || (j + wc->N) % 2 != 0)
            throw std::invalid_argument("unknown weak-collective label '" + label + "'");
        return BranchProfile::constant(label, j);
    }
    const auto& il = std::get<IndividualLinear>(model);
    const auto s = parse_spins(label);
    if (static_cast<int>(s.size()) != il.N)
        throw std::invalid_argument("unknown label '" + label + "': expected " + std::to_string(il.N) + " spins");
    BranchProfile p;
    p.label = label;
    p.transit = il.transit;
    for (int n = 0; n < il.N; ++n) p.coupling.push_back({n, static_cast<double>(s[n])});
    return p;
}

inline std::vector<BranchProfile> branch_profiles(const RegisterModel& model, const std::vector<std::string>& labels) {
    std::vector<BranchProfile> out;
    for (const auto& l : labels) out.push_back(branch_profile(model, l));
    return out;
}

// s^(n) -> s^(n - m mod N)
inline std::vector<int> cyclic_permutation(const std::vector<int>& spins, int shift) {
    const int N = static_cast<int>(spins.size());
    if (N == 0 || shift < 0 || shift >= N) throw std::invalid_argument("cyclic_permutation: shift out of range");
    std::vector<int> out(N);
    for (int n = 0; n < N; ++n) out[n] = spins[((n - shift) % N + N) % N];
    return out;
}

// s^(n) -> s^(N - n + m mod N)
inline std::vector<int> mirror_permutation(const std::vector<int>& spins, int shift) {
    const int N = static_cast<int>(spins.size());
    if (N == 0 || shift < 0 || shift >= N) throw std::invalid_argument("mirror_permutation: shift out of range");
    std::vector<int> out(N);
    for (int n = 0; n < N; ++n) out[n] = spins[((N - n + shift) % N + N) % N];
    return out;
}

// Coupling of the cyclic image: every phase position moves by m, so m'(x, c) = e^{i m x t_s c} m(x, c).
inline BranchProfile cyclic_image(const BranchProfile& p, int shift) {
    BranchProfile out = p;
    out.label = p.label + "@c" + std::to_string(shift);
    for (auto& t : out.coupling) t.position += shift;
    return out;
}

// Coupling of the mirror image: position n -> N - m - n, so |m'| = |m|.
inline BranchProfile mirror_image(const BranchProfile& p, int N, int shift) {
    BranchProfile out = p;
    out.label = p.label + "@m" + std::to_string(shift);
    for (auto& t : out.coupling) t.position = N - shift - t.position;
    return out;
}

// Omega0 = sum mu x |m|^2
inline BathValue energy_shift(const BranchProfile& p, const BathSpec& bath, const FrequencyGrid& grid,
                              int directions = 48) {
    const int om = p.coupling_order();
    if (om == kVanishes) return {0.0, false};
    if (!classify_convergence(1 + 2 * om, bath, false).finite) return BathValue::divergence();
    double s = 0.0;
    for (const auto& md : continuum_modes(bath, grid, p.coupling_isotropic(), directions))
        s += md.mu * md.x * std::norm(p.m(md.x, md.c));
    return {s, false};
}

// Omega0_A - Omega0_B on the subtracted integrand
inline BathValue energy_shift_difference(const BranchProfile& a, const BranchProfile& b, const BathSpec& bath,
                                         const FrequencyGrid& grid, int directions = 48) {
    const int oa = a.coupling_order(), ob = b.coupling_order();
    const int o = std::min(oa, ob);
    if (o != kVanishes && !classify_convergence(1 + 2 * o, bath, false).finite) return BathValue::divergence();
    double s = 0.0;
    for (const auto& md : continuum_modes(bath, grid, a.coupling_isotropic() && b.coupling_isotropic(), directions))
        s += md.mu * md.x * (std::norm(a.m(md.x, md.c)) - std::norm(b.m(md.x, md.c)));
    return {s, false};
}

// nullopt when indeterminate (divergent shifts)
inline std::optional<bool> check_energy_shift_condition(const BranchProfile& a, const BranchProfile& b,
                                                        const BathSpec& bath, const FrequencyGrid& grid,
                                                        double tol = 1e-10) {
    const auto oa = energy_shift(a, bath, grid);
    const auto diff = energy_shift_difference(a, b, bath, grid);
    if (diff.divergent) return std::nullopt;
    const double scale = oa.divergent ? 1.0 : std::max(1.0, std::abs(oa.value));
    return std::abs(diff.value) <= tol * scale;
}

namespace detail {

template <class F>
bool per_shell_pairs(const std::vector<BranchProfile>& profiles, const BathSpec& bath, const FrequencyGrid& grid,
                     int directions, F&& shell_residuals) {
    bool iso = true;
    for (const auto& p : profiles) iso = iso && p.isotropic();
    const auto dirs = direction_set(bath.d, iso, directions);
    for (double x : grid.nodes())
        for (std::size_t a = 0; a < profiles.size(); ++a)
            for (std::size_t b = 0; b < profiles.size(); ++b) {
                if (a == b) continue;
                if (!shell_residuals(profiles[a], profiles[b], x, dirs)) return false;
            }
    return true;
}

}  // namespace detail

// Per shell x and ordered pair (A, B): |<b0_A (m_A* - m_B*)>_sigma| <= tol
inline bool check_phasing_condition(const std::vector<BranchProfile>& profiles, const BathSpec& bath,
                                    const FrequencyGrid& grid, double tol = 1e-10, int directions = 48) {
    return detail::per_shell_pairs(profiles, bath, grid, directions,
                                   [&](const BranchProfile& A, const BranchProfile& B, double x, const auto& dirs) {
                                       cplx s = 0.0;
                                       for (const auto& [c, p] : dirs)
                                           s += p * A.b0(x, c) * std::conj(A.m(x, c) - B.m(x, c));
                                       return std::abs(s) <= tol;
                                   });
}

// Per shell and pair: |<(b0_A - b0_B)(m_A* - m_B*)>| <= tol and |<m_A* b0_B - m_B* b0_A>| <= tol
inline bool check_quasi_unitary_conditions(const std::vector<BranchProfile>& profiles, const BathSpec& bath,
                                           const FrequencyGrid& grid, double tol = 1e-10, int directions = 48) {
    return detail::per_shell_pairs(profiles, bath, grid, directions,
                                   [&](const BranchProfile& A, const BranchProfile& B, double x, const auto& dirs) {
                                       cplx s1 = 0.0, s2 = 0.0;
                                       for (const auto& [c, p] : dirs) {
                                           const cplx ma = A.m(x, c), mb = B.m(x, c);
                                           const cplx ba = A.b0(x, c), bb = B.b0(x, c);
                                           s1 += p * (ba - bb) * std::conj(ma - mb);
                                           s2 += p * (std::conj(ma) * bb - std::conj(mb) * ba);
                                       }
                                       return std::abs(s1) <= tol && std::abs(s2) <= tol;
                                   });
}

// Stationary-start dissipative factor 1/2 sum mu coth |m_A - m_B|^2
inline BathValue gamma0_pair(const BranchProfile& a, const BranchProfile& b, const BathSpec& bath,
                             const FrequencyGrid& grid, int directions = 48) {
    const int od = coupling_difference_order(a, b);
    if (od == kVanishes) return {0.0, false};
    if (!classify_convergence(2 * od, bath, true).finite) return BathValue::divergence();
    double s = 0.0;
    for (const auto& md : continuum_modes(bath, grid, a.coupling_isotropic() && b.coupling_isotropic(), directions))
        s += md.mu * thermal_coth(md.x, bath.theta) * std::norm(a.m(md.x, md.c) - b.m(md.x, md.c));
    return {0.5 * s, false};
}

struct ConditionReport {
    std::string model;
    std::vector<std::string> labels;
    std::optional<bool> energy_shift_ok;  // nullopt: indeterminate
    bool phasing_ok = false;
    BathValue gamma0;
    bool overall_df = false;
};

inline ConditionReport full_df_report(const RegisterModel& model, const std::vector<std::string>& labels,
                                      const std::vector<InitialDisplacement>& displacements, const BathSpec& bath,
                                      const FrequencyGrid& grid, double tol = 1e-10) {
    bath.validate();
    if (labels.size() < 2) throw std::invalid_argument("full_df_report: need at least two labels");
    if (!displacements.empty() && displacements.size() != labels.size())
        throw std::invalid_argument("full_df_report: one displacement per label required");
    auto profiles = branch_profiles(model, labels);
    for (std::size_t i = 0; i < displacements.size(); ++i) profiles[i] = profiles[i].with_initial(displacements[i]);

    ConditionReport r;
    r.model = model_name(model);
    r.labels = labels;
    r.energy_shift_ok = true;
    r.gamma0 = {0.0, false};
    for (std::size_t a = 0; a < profiles.size(); ++a)
        for (std::size_t b = a + 1; b < profiles.size(); ++b) {
            const auto ok = check_energy_shift_condition(profiles[a], profiles[b], bath, grid, tol);
            if (!ok) r.energy_shift_ok = std::nullopt;
            else if (r.energy_shift_ok && !*ok) r.energy_shift_ok = false;
            const auto g = gamma0_pair(profiles[a], profiles[b], bath, grid);
            if (g.divergent) r.gamma0 = BathValue::divergence();
            else if (!r.gamma0.divergent) r.gamma0.value = std::max(r.gamma0.value, g.value);
        }
    r.phasing_ok = check_phasing_condition(profiles, bath, grid, tol);
    r.overall_df = r.energy_shift_ok.value_or(false) && r.phasing_ok && !r.gamma0.divergent;
    return r;
}

}  // namespace sbdecoh
