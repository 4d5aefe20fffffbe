// commands.hpp - CLI subcommands; each returns its full output or an error record

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "../sbdecoh.hpp"
#include "config.hpp"

namespace sbdecoh::cli {

enum ExitCode { kOk = 0, kConfigError = 2, kDivergent = 3, kUnconverged = 4 };

struct CommandResult {
    int exit_code = kOk;
    std::string output;  // written only when exit_code is kOk or kUnconverged
    std::string error;
};

using json = nlohmann::ordered_json;

namespace detail {

inline Schema with_common(std::initializer_list<std::pair<const std::string, std::set<std::string>>> extra) {
    Schema s{{"bath", bath_keys()}, {"grid", grid_keys()}};
    for (const auto& e : extra) s.insert(e);
    return s;
}

inline RegisterModel read_model(const Config& c, const std::string& sec) {
    const auto name = c.get_string(sec, "model", "single_qubit");
    if (name == "single_qubit") return SingleQubit{};
    if (name == "weak_collective") {
        const int n = c.get_int(sec, "N", 2);
        if (n < 1) throw ConfigError("config: " + sec + ".N must be >= 1");
        return WeakCollective{n, 1.0};
    }
    if (name == "individual_linear") {
        const int n = c.get_int(sec, "N", 2);
        const double ts = c.get_double(sec, "transit", 1.0);
        if (n < 1 || n > 16) throw ConfigError("config: " + sec + ".N must be in [1, 16]");
        if (!(ts > 0.0)) throw ConfigError("config: " + sec + ".transit must be > 0");
        return IndividualLinear{n, ts, 1.0};
    }
    throw ConfigError("config: unknown model '" + name + "'");
}

inline std::vector<std::string> read_labels(const Config& c, const std::string& sec, const RegisterModel& model) {
    auto labels = c.get_list(sec, "labels");
    if (labels.empty()) labels = std::holds_alternative<SingleQubit>(model) ? std::vector<std::string>{"up", "down"}
                                                                             : std::vector<std::string>{};
    if (labels.size() < 2) throw ConfigError("config: " + sec + ".labels needs at least two entries");
    try {
        branch_profiles(model, labels);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return labels;
}

inline std::vector<double> read_thetas(const Config& c, const std::string& sec, const BathSpec& bath) {
    auto t = c.get_doubles(sec, "thetas");
    if (t.empty()) t.push_back(bath.theta);
    for (double v : t)
        if (!(v >= 0.0)) throw ConfigError("config: " + sec + ".thetas must be >= 0");
    return t;
}

inline std::vector<Protocol> read_protocols(const Config& c, const std::string& sec) {
    auto names = c.get_list(sec, "protocols");
    if (names.empty()) names = {"standard", "symmetrized"};
    std::vector<Protocol> out;
    for (const auto& n : names) {
        if (n == "standard") out.push_back(Protocol::Standard);
        else if (n == "symmetrized") out.push_back(Protocol::SymmetrizedCP);
        else if (n == "free") out.push_back(Protocol::Free);
        else throw ConfigError("config: unknown protocol '" + n + "'");
    }
    return out;
}

inline json number_or_divergent(const BathValue& v) {
    if (v.divergent) return "divergent";
    return v.value;
}

template <class F>
CommandResult guarded(F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        return {kConfigError, "", e.what()};
    } catch (const std::invalid_argument& e) {
        return {kConfigError, "", std::string("config: ") + e.what()};
    }
}

}  // namespace detail

inline CommandResult cmd_free_decay(const Config& c) {
    return detail::guarded([&]() -> CommandResult {
        c.check(detail::with_common({{"free_decay", {"tau_max", "samples", "initial"}}}));
        const BathSpec bath = read_bath(c, true);
        const double tau_max = c.get_double("free_decay", "tau_max", 10.0);
        const int samples = c.get_int("free_decay", "samples", 101);
        const auto initial = c.get_string("free_decay", "initial", "thermal");
        if (!(tau_max >= 0.0)) throw ConfigError("config: free_decay.tau_max must be >= 0");
        if (samples < 1) throw ConfigError("config: free_decay.samples must be >= 1");
        if (initial != "thermal" && initial != "stationary")
            throw ConfigError("config: free_decay.initial must be thermal or stationary");
        std::vector<double> times;
        for (int i = 0; i < samples; ++i) times.push_back(samples == 1 ? 0.0 : tau_max * i / (samples - 1));

        const auto init = initial == "thermal" ? InitialDisplacement::thermal() : InitialDisplacement::stationary();
        const auto up = BranchProfile::constant("up", 1.0).with_initial(init);
        const auto down = BranchProfile::constant("down", -1.0).with_initial(init);
        CoherenceTrace t;
        if (bath.lambda == 0.0) {
            for (double tau : times) {
                t.times.push_back(tau);
                t.gamma.push_back(0.0);
                t.phi.push_back(0.0);
                t.dtheta.push_back(0.0);
                t.eta.push_back(1.0);
            }
        } else {
            const auto grid = read_grid(c, bath.theta, tau_max);
            t = coherence_trace(up, down, times, bath, grid);
        }
        if (t.divergent) return {kDivergent, "", "divergent: the dissipative factor diverges for this bath"};
        std::ostringstream os;
        write_coherence_trace(os, t);
        return {kOk, os.str(), ""};
    });
}

inline CommandResult cmd_gamma0(const Config& c) {
    return detail::guarded([&]() -> CommandResult {
        c.check(detail::with_common({{"gamma0", {"model", "labels", "N", "transit"}}}));
        const BathSpec bath = read_bath(c);
        const auto model = detail::read_model(c, "gamma0");
        const auto labels = detail::read_labels(c, "gamma0", model);
        if (labels.size() != 2) throw ConfigError("config: gamma0.labels needs exactly two entries");
        const auto grid = read_grid(c, bath.theta, 0.0);
        const auto p = branch_profiles(model, labels);
        const auto g = gamma0_pair(p[0], p[1], bath, grid);
        json j;
        j["model"] = model_name(model);
        j["labels"] = labels;
        j["d"] = bath.d;
        j["lambda"] = bath.lambda;
        j["theta"] = bath.theta;
        j["gamma0"] = detail::number_or_divergent(g);
        json cf = nullptr, diff = nullptr;
        if (bath.d == 3 && !std::holds_alternative<IndividualLinear>(model)) {
            const double half = 0.5 * std::abs(p[0].m(1.0, 1.0) - p[1].m(1.0, 1.0));
            const double v = half * half * gamma0_closed_form(bath.theta, bath.lambda);
            cf = v;
            if (!g.divergent) diff = std::abs(g.value - v);
        }
        j["closed_form"] = cf;
        j["difference"] = diff;
        return {kOk, j.dump(2) + "\n", ""};
    });
}

inline CommandResult cmd_bangbang(const Config& c, unsigned threads = 1) {
    return detail::guarded([&]() -> CommandResult {
        c.check(detail::with_common(
            {{"bangbang", {"thetas", "dt", "n_cycles", "samples_per_interval", "protocols"}}}));
        const BathSpec base = read_bath(c);
        const auto thetas = detail::read_thetas(c, "bangbang", base);
        const auto protocols = detail::read_protocols(c, "bangbang");
        const double dt = c.get_double("bangbang", "dt", 0.5);
        const int n = c.get_int("bangbang", "n_cycles", 10);
        const int spi = c.get_int("bangbang", "samples_per_interval", 20);
        if (!(dt > 0.0)) throw ConfigError("config: bangbang.dt must be > 0");
        if (n < 0) throw ConfigError("config: bangbang.n_cycles must be >= 0");
        if (spi < 1) throw ConfigError("config: bangbang.samples_per_interval must be >= 1");
        std::vector<std::pair<Protocol, double>> jobs;
        for (auto p : protocols)
            for (double th : thetas) jobs.emplace_back(p, th);
        std::vector<FrequencyGrid> grids;
        for (const auto& [p, th] : jobs) grids.push_back(read_grid(c, th, std::max(2.0 * n * dt, dt), dt));

        const int steps = 2 * n * spi;
        std::vector<std::string> blocks(jobs.size());
        std::atomic<bool> divergent = false;
        parallel_for(jobs.size(), threads, [&](std::size_t k) {
            const auto [p, th] = jobs[k];
            BathSpec bath = base;
            bath.theta = th;
            const auto sched = p == Protocol::Standard ? PulseSchedule::standard(dt, n)
                               : p == Protocol::SymmetrizedCP ? PulseSchedule::symmetrized(dt, n)
                                                              : PulseSchedule::free();
            const PulseEvolver ev(sched, bath, grids[k]);
            std::ostringstream os;
            for (int i = 0; i <= steps; ++i) {
                const double tau = steps == 0 ? 0.0 : 2.0 * n * dt * i / steps;
                const auto g = ev.gamma(tau);
                if (g.divergent) {
                    divergent = true;
                    return;
                }
                write_csv_row(os, {format_number(tau), format_number(g.value), format_number(std::exp(-g.value)),
                                   protocol_name(p), format_number(dt), format_number(th), std::to_string(bath.d),
                                   format_number(bath.lambda)});
            }
            blocks[k] = os.str();
        });
        if (divergent) return {kDivergent, "", "divergent: the dissipative factor diverges for this bath"};
        std::ostringstream os;
        write_csv_row(os, {"tau", "gamma", "eta_abs", "protocol", "dt", "theta", "d", "lambda"});
        for (const auto& b : blocks) os << b;
        return {kOk, os.str(), ""};
    });
}

inline CommandResult cmd_sweep(const Config& c, unsigned threads = 1) {
    return detail::guarded([&]() -> CommandResult {
        c.check(detail::with_common({{"sweep", {"thetas", "total_time", "n_min", "n_max", "n_step"}}}));
        const BathSpec base = read_bath(c);
        const auto thetas = detail::read_thetas(c, "sweep", base);
        const double T = c.get_double("sweep", "total_time", 20.0);
        const int n_min = c.get_int("sweep", "n_min", 4);
        const int n_max = c.get_int("sweep", "n_max", 100);
        const int n_step = c.get_int("sweep", "n_step", 4);
        if (!(T > 0.0)) throw ConfigError("config: sweep.total_time must be > 0");
        if (n_min < 1 || n_max < n_min || n_step < 1) throw ConfigError("config: sweep needs 1 <= n_min <= n_max, n_step >= 1");
        std::vector<std::tuple<double, int>> jobs;
        for (double th : thetas)
            for (int n = n_min; n <= n_max; n += n_step) jobs.emplace_back(th, n);
        std::vector<FrequencyGrid> grids;
        for (double th : thetas) grids.push_back(read_grid(c, th, T, T / (2.0 * n_max)));

        std::vector<std::array<double, 2>> eta(jobs.size());
        std::atomic<bool> divergent = false;
        parallel_for(jobs.size(), threads, [&](std::size_t k) {
            const auto [th, n] = jobs[k];
            const auto gi = static_cast<std::size_t>(std::find(thetas.begin(), thetas.end(), th) - thetas.begin());
            BathSpec bath = base;
            bath.theta = th;
            const double dt = T / (2.0 * n);
            const auto gs = gamma_strob(PulseSchedule::standard(dt, n), n, bath, grids[gi]);
            const auto gy = gamma_sym(PulseSchedule::symmetrized(dt, n), n, bath, grids[gi]);
            if (gs.divergent || gy.divergent) {
                divergent = true;
                return;
            }
            eta[k] = {std::exp(-gs.value), std::exp(-gy.value)};
        });
        if (divergent) return {kDivergent, "", "divergent: the dissipative factor diverges for this bath"};
        std::ostringstream os;
        write_csv_row(os, {"freq_ratio", "n_cycles", "eta_strob", "eta_sym", "theta"});
        for (std::size_t k = 0; k < jobs.size(); ++k) {
            const auto [th, n] = jobs[k];
            write_csv_row(os, {format_number(2.0 * n / T), std::to_string(n), format_number(eta[k][0]),
                               format_number(eta[k][1]), format_number(th)});
        }
        return {kOk, os.str(), ""};
    });
}

inline json report_json(const ConditionReport& r) {
    json j;
    j["model"] = r.model;
    j["labels"] = r.labels;
    if (r.energy_shift_ok) j["energy_shift_ok"] = *r.energy_shift_ok;
    else j["energy_shift_ok"] = "indeterminate";
    j["phasing_ok"] = r.phasing_ok;
    j["gamma0"] = detail::number_or_divergent(r.gamma0);
    j["overall_df"] = r.overall_df;
    return j;
}

inline CommandResult cmd_dfs_report(const Config& c) {
    return detail::guarded([&]() -> CommandResult {
        c.check(detail::with_common({{"dfs", {"model", "labels", "N", "transit", "initial"}}}));
        const BathSpec bath = read_bath(c);
        const auto model = detail::read_model(c, "dfs");
        const auto labels = detail::read_labels(c, "dfs", model);
        const auto initial = c.get_string("dfs", "initial", "stationary");
        if (initial != "thermal" && initial != "stationary")
            throw ConfigError("config: dfs.initial must be thermal or stationary");
        const auto grid = read_grid(c, bath.theta, 0.0);
        const auto d = initial == "thermal" ? InitialDisplacement::thermal() : InitialDisplacement::stationary();
        const auto r = full_df_report(model, labels, std::vector<InitialDisplacement>(labels.size(), d), bath, grid);
        return {kOk, report_json(r).dump(2) + "\n", ""};
    });
}

inline CommandResult cmd_oracle(const Config& c) {
    return detail::guarded([&]() -> CommandResult {
        c.check(detail::with_common({{"oracle",
                                      {"freqs", "weights", "m_a", "m_a_im", "m_b", "m_b_im", "b0a_re", "b0a_im", "b0b_re", "b0b_im",
                                       "tau", "n_max", "tol", "converge_tol"}}}));
        const BathSpec bath = read_bath(c);
        FockOracleConfig cfg;
        cfg.mode_freqs = c.get_doubles("oracle", "freqs");
        cfg.mode_weights = c.get_doubles("oracle", "weights");
        cfg.theta = bath.theta;
        cfg.n_max = c.get_int("oracle", "n_max", 0);
        cfg.tol = c.get_double("oracle", "tol", 1e-10);
        cfg.converge_tol = c.get_double("oracle", "converge_tol", 1e-7);
        const double tau = c.get_double("oracle", "tau", 1.0);
        const auto k = cfg.mode_freqs.size();
        const auto complex_list = [&](const std::string& re, const std::string& im, double def_re) {
            auto r = c.get_doubles("oracle", re);
            auto i = c.get_doubles("oracle", im);
            if (r.empty()) r.assign(k, def_re);
            if (i.empty()) i.assign(k, 0.0);
            if (r.size() != k || i.size() != k) throw ConfigError("config: oracle." + re + "/" + im + " need one entry per mode");
            std::vector<cplx> out;
            for (std::size_t n = 0; n < k; ++n) out.emplace_back(r[n], i[n]);
            return out;
        };
        DiscreteBranch a{complex_list("m_a", "m_a_im", 1.0), complex_list("b0a_re", "b0a_im", 0.0)};
        DiscreteBranch b{complex_list("m_b", "m_b_im", -1.0), complex_list("b0b_re", "b0b_im", 0.0)};
        if (!(tau >= 0.0)) throw ConfigError("config: oracle.tau must be >= 0");
        cfg.validate(a.m.size(), b.m.size());
        const auto r = fock_oracle_eta(a, b, cfg, tau);
        const auto an = discrete_eta(a, b, cfg, tau);
        json j;
        j["theta"] = bath.theta;
        j["tau"] = tau;
        j["eta_oracle"] = {r.eta.real(), r.eta.imag()};
        j["eta_analytic"] = {an.real(), an.imag()};
        j["abs_diff"] = std::abs(r.eta - an);
        j["n_max"] = r.n_max;
        j["truncation_change"] = r.change;
        j["converged"] = r.converged;
        return {r.converged ? kOk : kUnconverged, j.dump(2) + "\n",
                r.converged ? "" : "oracle unconverged: value moved by " + format_number(r.change)};
    });
}

inline CommandResult run_command(const std::string& name, const Config& c, unsigned threads = 1) {
    if (name == "free-decay") return cmd_free_decay(c);
    if (name == "gamma0") return cmd_gamma0(c);
    if (name == "bangbang") return cmd_bangbang(c, threads);
    if (name == "sweep") return cmd_sweep(c, threads);
    if (name == "dfs-report") return cmd_dfs_report(c);
    if (name == "oracle") return cmd_oracle(c);
    return {kConfigError, "", "unknown subcommand '" + name + "'"};
}

}  // namespace sbdecoh::cli
