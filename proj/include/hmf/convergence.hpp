#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <string>
#include <thread>
#include <vector>

#include "hmf/analysis.hpp"
#include "hmf/dynamics.hpp"

namespace hmf {

// Worker cap for independent simulations; HMFDAMP_THREADS overrides.
inline unsigned worker_cap() {
    if (const char *env = std::getenv("HMFDAMP_THREADS")) {
        const long n = std::atol(env);
        if (n >= 1) return static_cast<unsigned>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Runs a batch of configs with at most worker_cap() concurrent simulations.
inline std::vector<Trajectory> run_batch(const std::vector<RunConfig> &configs) {
    const unsigned cap = worker_cap();
    std::vector<Trajectory> out(configs.size());
    std::size_t next = 0;
    while (next < configs.size()) {
        const std::size_t batch = std::min<std::size_t>(cap, configs.size() - next);
        std::vector<std::future<Trajectory>> futs;
        for (std::size_t i = 0; i < batch; ++i)
            futs.push_back(std::async(std::launch::async,
                                      [&configs, idx = next + i] { return run(configs[idx]); }));
        for (std::size_t i = 0; i < batch; ++i) out[next + i] = futs[i].get();
        next += batch;
    }
    return out;
}

struct LadderSpec {
    std::vector<double> h_values; // decreasing, >= 3 entries
    double T = 10.0;
    std::string variant = "strang";
    WeightedNormSpec error_norm{1, 1.0};
    RunConfig base;
};

struct OrderReport {
    std::vector<double> h_values;
    std::vector<double> errors;
    double slope = 0.0;
    double r_squared = 0.0;
    bool monotone = true; // false marks the study inconclusive
    std::string reference;
};

namespace detail {

inline void check_ladder(const LadderSpec &spec) {
    if (spec.h_values.size() < 3)
        throw validation_error("LadderSpec: need at least 3 ladder entries");
    for (std::size_t i = 0; i + 1 < spec.h_values.size(); ++i)
        if (!(spec.h_values[i] > spec.h_values[i + 1]))
            throw validation_error("LadderSpec: h_values must be strictly decreasing");
    if (!(spec.h_values.back() > 0.0)) throw validation_error("LadderSpec: h_values must be positive");
}

inline const MixedField &snapshot_at(const Trajectory &traj, double t) {
    for (const auto &[ts, f] : traj.snapshots)
        if (std::abs(ts - t) <= 0.25 * traj.scheme.h + 1e-12) return f;
    throw numeric_error("convergence: missing snapshot at t = " + std::to_string(t));
}

inline OrderReport fit_order(const LadderSpec &spec, std::vector<double> errors,
                             std::string reference) {
    OrderReport rep;
    rep.h_values = spec.h_values;
    rep.errors = std::move(errors);
    rep.reference = std::move(reference);
    for (std::size_t i = 0; i + 1 < rep.errors.size(); ++i)
        if (rep.errors[i] < rep.errors[i + 1]) rep.monotone = false;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < rep.errors.size(); ++i) {
        if (!(rep.errors[i] > 0.0)) continue;
        lx.push_back(std::log(rep.h_values[i]));
        ly.push_back(std::log(rep.errors[i]));
    }
    if (lx.size() >= 2) {
        auto f = least_squares(lx, ly);
        rep.slope = f.slope;
        rep.r_squared = f.r2;
    }
    return rep;
}

// Shared checkpoint times on the coarsest step grid.
inline std::vector<double> ladder_checkpoints(const LadderSpec &spec) {
    const double unit = std::max(spec.h_values.front(), 1.0);
    std::vector<double> ts;
    for (int m = 1; m * unit <= spec.T + 1e-9; ++m) ts.push_back(m * unit);
    return ts;
}

inline RunConfig ladder_config(const LadderSpec &spec, const std::string &variant, double h,
                               const std::vector<double> &snap_times) {
    RunConfig c = spec.base;
    c.variant = variant;
    c.h = h;
    c.T = spec.T;
    c.snapshot_times = snap_times;
    return c;
}

} // namespace detail

// Error ladder against a refined-Strang reference (h_ref = min(h)/16): for each
// h the error is the sup over shared checkpoints of the streaming-frame
// difference in the configured weighted norm.
inline OrderReport order_study(const LadderSpec &spec) {
    detail::check_ladder(spec);
    const std::vector<double> cps = detail::ladder_checkpoints(spec);
    const double h_ref = spec.h_values.back() / 16.0;

    std::vector<RunConfig> configs;
    for (double h : spec.h_values) configs.push_back(detail::ladder_config(spec, spec.variant, h, cps));
    configs.push_back(detail::ladder_config(spec, "strang", h_ref, cps));
    std::vector<Trajectory> trajs = run_batch(configs);
    const Trajectory &ref = trajs.back();

    std::vector<double> errors;
    for (std::size_t i = 0; i < spec.h_values.size(); ++i) {
        double err = 0.0;
        for (double t : cps)
            err = std::max(err, sobolev_norm(detail::snapshot_at(trajs[i], t) -
                                                 detail::snapshot_at(ref, t),
                                             spec.error_norm));
        errors.push_back(err);
    }
    return detail::fit_order(spec, std::move(errors),
                             "strang h_ref = " + fmt17(h_ref) + ", checkpoints on coarsest grid");
}

// h-scaling of the scattering limit g_h_inf against the refined-Strang limit.
inline OrderReport limit_state_study(const LadderSpec &spec) {
    detail::check_ladder(spec);
    std::vector<double> cps = spec.base.checkpoints;
    std::sort(cps.begin(), cps.end());
    const double T = cps.back();
    LadderSpec s2 = spec;
    s2.T = T;
    const double h_ref = spec.h_values.back() / 16.0;

    std::vector<RunConfig> configs;
    for (double h : spec.h_values) configs.push_back(detail::ladder_config(s2, spec.variant, h, cps));
    configs.push_back(detail::ladder_config(s2, "strang", h_ref, cps));
    std::vector<Trajectory> trajs = run_batch(configs);

    const int r = spec.error_norm.s;
    const double nu = spec.error_norm.nu;
    const MixedField g_ref_inf = scattering_limit(trajs.back(), r, nu).g_inf;

    std::vector<double> errors;
    for (std::size_t i = 0; i < spec.h_values.size(); ++i) {
        const MixedField g_inf = scattering_limit(trajs[i], r, nu).g_inf;
        errors.push_back(sobolev_norm(g_inf - g_ref_inf, spec.error_norm));
    }
    return detail::fit_order(s2, std::move(errors),
                             "scattering limits vs strang h_ref = " + fmt17(h_ref));
}

struct GrowthReport {
    double h = 0.0;
    int sigma = 0;
    std::vector<double> horizons;  // checkpoint horizons T
    std::vector<double> errors;    // sup_{n <= T/h} f-frame H^sigma error
    double growth_exponent = 0.0;  // log-log fit of error vs T
};

// f-frame error growth sup_{n <= T/h} ||f^n - f_ref(nh)||_{H^sigma} at the
// configured horizons; run at the finest ladder h vs the refined-Strang
// reference.  The f difference equals eps x the transported g difference.
inline GrowthReport growth_study(const LadderSpec &spec, int sigma) {
    detail::check_ladder(spec);
    if (sigma < 0) throw validation_error("growth_study: sigma must be nonnegative");
    std::vector<double> horizons = spec.base.checkpoints;
    std::sort(horizons.begin(), horizons.end());
    const double Tmax = horizons.back();

    std::vector<double> sample_times;
    for (int m = 1; m <= static_cast<int>(std::floor(Tmax + 1e-9)); ++m)
        sample_times.push_back(m);

    LadderSpec s2 = spec;
    s2.T = Tmax;
    const double h = spec.h_values.back();
    const double h_ref = h / 16.0;
    std::vector<RunConfig> configs{detail::ladder_config(s2, spec.variant, h, sample_times),
                                   detail::ladder_config(s2, "strang", h_ref, sample_times)};
    std::vector<Trajectory> trajs = run_batch(configs);

    GrowthReport rep;
    rep.h = h;
    rep.sigma = sigma;
    const double eps = spec.base.epsilon;
    double running = 0.0;
    std::size_t next_sample = 0;
    for (double T : horizons) {
        while (next_sample < sample_times.size() && sample_times[next_sample] <= T + 1e-9) {
            const double t = sample_times[next_sample];
            MixedField diff = detail::snapshot_at(trajs[0], t) - detail::snapshot_at(trajs[1], t);
            diff = free_transport(diff, t); // back to the f frame
            running = std::max(running, eps * sobolev_norm(diff, {sigma, 0.0}));
            ++next_sample;
        }
        rep.horizons.push_back(T);
        rep.errors.push_back(running);
    }

    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < rep.horizons.size(); ++i)
        if (rep.errors[i] > 0.0) {
            lx.push_back(std::log(rep.horizons[i]));
            ly.push_back(std::log(rep.errors[i]));
        }
    if (lx.size() >= 2) rep.growth_exponent = detail::least_squares(lx, ly).slope;
    return rep;
}

} // namespace hmf
