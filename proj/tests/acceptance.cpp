// acceptance.cpp - pass/fail report for the acceptance checks

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <sbdecoh/sbdecoh.hpp>

using namespace sbdecoh;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

BranchProfile up(InitialDisplacement i = InitialDisplacement::stationary()) {
    return BranchProfile::constant("up", 1.0).with_initial(i);
}
BranchProfile down(InitialDisplacement i = InitialDisplacement::stationary()) {
    return BranchProfile::constant("down", -1.0).with_initial(i);
}

// mpmath quad values of the single-qubit pair integral at d = 3, lambda = 1
constexpr std::pair<double, double> kGamma0Ref[] = {
    {0.01, 1.000324242705662644}, {0.1, 1.0286659830158551763}, {1.0, 2.2898681336964528729},
    {10.0, 20.033267136337149224}};

Outcome zeta_anchor() {
    const auto t0 = Clock::now();
    Outcome o;
    double worst = 0.0;
    for (const auto& [th, mp] : kGamma0Ref) {
        const BathSpec bath{3, 1.0, th};
        const auto g = gamma0_pair(up(), down(), bath, FrequencyGrid::for_problem(th, 0.0)).get();
        const double zeta_form = bath.lambda * (2.0 * th * th * hurwitz_zeta2(th) - 1.0);
        worst = std::max({worst, std::abs(g / zeta_form - 1.0), std::abs(g / mp - 1.0)});
    }
    const double small = gamma0_pair(up(), down(), {3, 1.0, 0.01}, FrequencyGrid::for_problem(0.01, 0.0)).get();
    const double low = std::abs(small / (1.0 + std::numbers::pi * std::numbers::pi / 3.0 * 1e-4) - 1.0);
    const double big = gamma0_pair(up(), down(), {3, 1.0, 100.0}, FrequencyGrid::for_problem(100.0, 0.0)).get();
    const double high = std::abs(big / 200.0 - 1.0);
    const double secs = seconds_since(t0);
    o.pass = worst <= 1e-6 && low <= 1e-4 && high <= 1e-2 && secs < 1.0;
    o.detail = fmt("max rel err %.1e, low-T asymptote %.1e, high-T asymptote %.1e, %.3f s", worst, low, high, secs);
    return o;
}

Outcome free_decay_anchor() {
    const BathSpec bath{1, 0.25, 0.0};
    const PairEvaluator ev(up(InitialDisplacement::thermal()), down(InitialDisplacement::thermal()), bath,
                           FrequencyGrid::for_problem(0.0, 10.0));
    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double tau = 0.01 * i;
        worst = std::max(worst, std::abs(ev.at(tau).gamma - 0.25 * std::log1p(tau * tau)));
    }
    return {worst <= 1e-6, fmt("max abs err %.1e over 1001 times in [0, 10]", worst)};
}

Outcome recurrence_equivalence() {
    const BathSpec bath{1, 0.25, 1.0};
    double point = 0.0, integ = 0.0;
    for (double dt : {0.2, 0.5, 1.0}) {
        const auto grid = FrequencyGrid::for_problem(bath.theta, 200.0 * dt, dt);
        for (auto s : {PulseSchedule::standard(dt, 100), PulseSchedule::symmetrized(dt, 100)}) {
            std::vector<double> by_rec(101, 0.0), by_cf(101, 0.0);
            const auto xs = grid.nodes();
            const auto ws = grid.weights();
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const double wc = ws[i] * weight(xs[i], bath) * thermal_coth(xs[i], bath.theta);
                StroboscopicState st;
                for (int n = 1; n <= 100; ++n) {
                    st = strobe_step(st, s, xs[i]);
                    const double r = static_cast<double>(std::abs(st.b));
                    const double c = strobe_closed_form_abs(s.protocol(), xs[i], dt, n);
                    point = std::max(point, std::abs(r - c));
                    by_rec[n] += wc * r * r;
                    by_cf[n] += wc * c * c;
                }
            }
            for (int n = 1; n <= 100; ++n) integ = std::max(integ, std::abs(by_rec[n] - by_cf[n]));
            for (int n : {1, 37, 100}) {
                const double lib = s.protocol() == Protocol::Standard ? gamma_strob(s, n, bath, grid).get()
                                                                      : gamma_sym(s, n, bath, grid).get();
                integ = std::max(integ, std::abs(lib - gamma_recurrence(s, n, bath, grid).get()));
            }
        }
    }
    return {point <= 1e-12 && integ <= 1e-9, fmt("pointwise %.1e, integrated %.1e", point, integ)};
}

Outcome dual_path() {
    double worst = 0.0;
    int checks = 0;
    for (double th : {0.01, 1.0})
        for (double dt : {0.5, 1.0}) {
            const BathSpec bath{1, 0.25, th};
            const int n = 50;
            const auto grid = FrequencyGrid::for_problem(th, 2.0 * n * dt, dt);
            const auto s = PulseSchedule::standard(dt, n), y = PulseSchedule::symmetrized(dt, n);
            const PulseEvolver es(s, bath, grid), ey(y, bath, grid);
            for (int k = 0; k <= n; ++k) {
                worst = std::max(worst, std::abs(es.gamma(2.0 * k * dt).get() - gamma_strob(s, k, bath, grid).get()));
                worst = std::max(worst, std::abs(ey.gamma(2.0 * k * dt).get() - gamma_sym(y, k, bath, grid).get()));
                checks += 2;
            }
        }
    return {worst <= 1e-8, fmt("max abs diff %.1e over %d read-outs", worst, checks)};
}

Outcome fock_oracle() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> unit(0.0, 1.0), ang(0.0, 2.0 * std::numbers::pi);
    const auto rand_c = [&](double rmax) { return std::polar(rmax * unit(rng), ang(rng)); };
    double worst = 0.0, max_b = 0.0;
    int unconverged = 0;
    const int cases = 120;
    for (int k = 0; k < cases; ++k) {
        FockOracleConfig cfg;
        cfg.theta = 0.5 * unit(rng);
        const int modes = 1 + k % 3;
        DiscreteBranch a, b;
        for (int q = 0; q < modes; ++q) {
            cfg.mode_freqs.push_back(0.5 + 2.5 * unit(rng));
            cfg.mode_weights.push_back(0.05 + 0.95 * unit(rng));
            a.m.push_back(rand_c(0.75));
            b.m.push_back(rand_c(0.75));
            a.b0.push_back(k % 2 ? rand_c(0.75) : cplx(0.0));
            b.b0.push_back(k % 4 == 1 ? a.m.back() : rand_c(0.75));
        }
        const double tau = 5.0 * unit(rng);
        for (int q = 0; q < modes; ++q) {
            const double sc = std::sqrt(cfg.mode_weights[q]), x = cfg.mode_freqs[q];
            max_b = std::max({max_b, sc * std::abs(a.b0[q] * std::polar(1.0, -x * tau) - a.m[q]),
                              sc * std::abs(b.b0[q] * std::polar(1.0, -x * tau) - b.m[q])});
        }
        const auto r = fock_oracle_eta(a, b, cfg, tau);
        if (!r.converged) ++unconverged;
        worst = std::max(worst, std::abs(r.eta - discrete_eta(a, b, cfg, tau)));
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-5 && unconverged == 0 && max_b <= 1.5 && secs < 60.0,
            fmt("%d cases, max |diff| %.1e, max |b| %.2f, %d unconverged, %.1f s", cases, worst, max_b, unconverged,
                secs)};
}

Outcome dfs_invariance() {
    double drift = 0.0;
    bool matched = true;
    const auto grid = FrequencyGrid::composite();
    const WeakCollective wc{2, 1.0};
    const std::pair<BranchProfile, BranchProfile> pairs[] = {
        {up(), down()}, {branch_profile(wc, "2"), branch_profile(wc, "-2")}};
    for (double th : {0.0, 0.5, 1.0}) {
        const BathSpec bath{3, 1.0, th};
        for (const auto& [a, b] : pairs) {
            matched = matched && check_energy_shift_condition(a, b, bath, grid).value_or(false);
            const PairEvaluator ev(a, b, bath, grid);
            const double e0 = std::abs(ev.at(0.0).eta());
            for (int i = 1; i <= 500; ++i) drift = std::max(drift, std::abs(std::abs(ev.at(0.1 * i).eta()) - e0));
        }
    }
    return {matched && drift <= 1e-10, fmt("max | |eta(tau)| - |eta(0)| | %.1e, energy shifts matched: %s", drift,
                                           matched ? "yes" : "no")};
}

Outcome finiteness_table() {
    const auto grid = FrequencyGrid::composite();
    int wrong = 0, checked = 0;
    for (int d : {1, 2, 3})
        for (double th : {0.0, 0.3, 1.0}) {
            const BathSpec bath{d, 1.0, th};
            const bool expect_finite = d == 3 || (d == 2 && th == 0.0);
            const bool finite = !PairEvaluator(up(), down(), bath, grid).gamma_divergent();
            const auto g = gamma0_pair(up(), down(), bath, grid);
            wrong += (finite != expect_finite) + (g.finite() != expect_finite);
            checked += 2;
        }
    for (int N : {2, 3, 4}) {
        const IndividualLinear il{N, 1.0, 1.0};
        for (const auto& l : dfs_labels(il)) {
            const auto p = branch_profile(il, l);
            for (int s = 0; s < N; ++s) {
                const auto lit = branch_profile(il, format_spins(cyclic_permutation(parse_spins(l), s)));
                const auto mir = branch_profile(il, format_spins(mirror_permutation(parse_spins(l), s)));
                for (double th : {0.0, 0.5}) {
                    const BathSpec bath{1, 1.0, th};
                    for (const auto& q : {cyclic_image(p, s), mirror_image(p, N, s), lit, mir}) {
                        const auto g = gamma0_pair(p, q, bath, grid);
                        wrong += g.divergent || !std::isfinite(g.value);
                        ++checked;
                    }
                }
            }
        }
    }
    return {wrong == 0, fmt("%d of %d classifications wrong", wrong, checked)};
}

double one_sided(const std::function<double(double)>& g, double t, double h) {
    return (-3.0 * g(t) + 4.0 * g(t + h) - g(t + 2.0 * h)) / (2.0 * h);
}

Outcome revival_signs() {
    int bad_sign = 0, cases = 0;
    double fd_err = 0.0;
    for (int d : {1, 3})
        for (double dt : {0.25, 0.5, 1.0})
            for (double th : {0.01, 1.0})
                for (int n : {1, 5, 20}) {
                    const BathSpec bath{d, 0.25, th};
                    const auto grid = FrequencyGrid::for_problem(th, 2.0 * n * dt, dt);
                    const auto s = PulseSchedule::standard(dt, n);
                    const auto r = revival_diagnostics(s, bath, grid, n);
                    bad_sign += !(r.d_gamma_after_midpulse < 0.0) + !(r.d_gamma_before_second > 0.0);
                    const PulseEvolver ev(s, bath, grid);
                    const auto g = [&](double t) { return ev.gamma(t).get(); };
                    const double h = 1e-5 * dt;
                    const double fd1 = one_sided(g, (2 * n - 1) * dt, h);
                    const double fd2 = one_sided(g, 2 * n * dt, -h);
                    fd_err = std::max({fd_err, std::abs(fd1 / r.d_gamma_after_midpulse - 1.0),
                                       std::abs(fd2 / r.d_gamma_before_second - 1.0)});
                    ++cases;
                }
    return {bad_sign == 0 && fd_err <= 1e-4,
            fmt("%d cases, %d wrong signs, max finite-difference rel err %.1e", cases, bad_sign, fd_err)};
}

Outcome protocol_ordering() {
    // (a) read-out ordering on a dt grid
    double worst = -1.0;
    for (double th : {0.01, 1.0})
        for (int i = 0; i < 30; ++i) {
            const double dt = 0.1 + 2.9 * i / 29.0;
            const BathSpec bath{1, 0.25, th};
            const auto grid = FrequencyGrid::for_problem(th, 100.0 * dt, dt);
            const auto s = PulseSchedule::standard(dt, 50), y = PulseSchedule::symmetrized(dt, 50);
            for (int n = 1; n <= 50; ++n) {
                const double es = std::exp(-gamma_strob(s, n, bath, grid).get());
                const double ey = std::exp(-gamma_sym(y, n, bath, grid).get());
                worst = std::max(worst, es - ey);
            }
        }
    const bool ordered = worst <= 1e-12;

    // (b) temperature sensitivity at matched pulse frequency, fixed total time
    const double T = 20.0;
    double sens_strob = 0.0, sens_sym = 0.0;
    for (int n = 4; n <= 100; n += 4) {
        const double dt = T / (2.0 * n);
        double es[2], ey[2];
        for (int k = 0; k < 2; ++k) {
            const double th = k == 0 ? 0.01 : 1.0;
            const BathSpec bath{1, 0.25, th};
            const auto grid = FrequencyGrid::for_problem(th, T, dt);
            es[k] = std::exp(-gamma_strob(PulseSchedule::standard(dt, n), n, bath, grid).get());
            ey[k] = std::exp(-gamma_sym(PulseSchedule::symmetrized(dt, n), n, bath, grid).get());
        }
        sens_strob = std::max(sens_strob, std::abs(es[0] - es[1]));
        sens_sym = std::max(sens_sym, std::abs(ey[0] - ey[1]));
    }
    const bool calmer = sens_sym < sens_strob;

    // (c) a local maximum of eta between the two pulses of every cycle
    int cycles = 0, with_max = 0;
    const int spi = 50;
    for (double th : {0.01, 1.0})
        for (double dt : {0.5, 1.0})
            for (auto sched : {PulseSchedule::standard(dt, 10), PulseSchedule::symmetrized(dt, 10)}) {
                const BathSpec bath{1, 0.25, th};
                const PulseEvolver ev(sched, bath, FrequencyGrid::for_problem(th, 20.0 * dt, dt));
                const auto& f = sched.flip_times();
                for (std::size_t k = 0; k + 1 < f.size(); k += 2) {
                    std::vector<double> eta;
                    for (int i = 0; i <= spi; ++i)
                        eta.push_back(std::exp(-ev.gamma(f[k] + (f[k + 1] - f[k]) * i / spi).get()));
                    bool found = false;
                    for (int i = 1; i < spi && !found; ++i) found = eta[i] > eta[i - 1] && eta[i] >= eta[i + 1];
                    ++cycles;
                    with_max += found;
                }
            }
    const bool revivals = with_max == cycles;

    return {ordered && calmer && revivals,
            fmt("max(eta_strob - eta_sym) %.1e; temperature sensitivity sym %.4f vs strob %.4f; "
                "local maxima in %d/%d cycles",
                worst, sens_sym, sens_strob, with_max, cycles)};
}

Outcome weak_collective_scaling() {
    double worst = 0.0;
    const auto grid = FrequencyGrid::composite();
    for (const BathSpec& bath : {BathSpec{3, 1.0, 0.0}, BathSpec{3, 1.0, 0.7}, BathSpec{2, 0.5, 0.0}}) {
        const double base = gamma0_pair(branch_profile(WeakCollective{1, 1.0}, "1"),
                                        branch_profile(WeakCollective{1, 1.0}, "-1"), bath, grid)
                                .get();
        for (int J : {2, 3}) {
            const WeakCollective wc{J, 1.0};
            const double g =
                gamma0_pair(branch_profile(wc, std::to_string(J)), branch_profile(wc, std::to_string(-J)), bath, grid)
                    .get();
            worst = std::max(worst, std::abs(g / base - J * J));
        }
    }
    return {worst <= 1e-10, fmt("max |ratio - J^2| %.1e", worst)};
}

}  // namespace

int main() {
    const std::pair<const char*, Outcome (*)()> criteria[] = {
        {"zeta anchor", zeta_anchor},
        {"free-decay anchor", free_decay_anchor},
        {"recurrence / closed form", recurrence_equivalence},
        {"dual-path consistency", dual_path},
        {"Fock oracle equivalence", fock_oracle},
        {"DFS invariance", dfs_invariance},
        {"finiteness table", finiteness_table},
        {"revival signs", revival_signs},
        {"protocol ordering", protocol_ordering},
        {"weak-collective scaling", weak_collective_scaling},
    };
    int failed = 0, id = 0;
    for (const auto& [name, run] : criteria) {
        ++id;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s %2d %-26s %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", id - failed, id);
    return failed == 0 ? 0 : 1;
}
