#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <iostream>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hmf/config.hpp"
#include "hmf/field.hpp"
#include "hmf/stationary.hpp"

namespace hmf {

// Splitting compositions over one step h:
//   lie_tp:    phi_P^h . phi_T^h      (transport first, then kick)
//   lie_pt:    phi_T^h . phi_P^h
//   strang:    phi_T^{h/2} . phi_P^h . phi_T^{h/2}
//   strang_pt: phi_P^{h/2} . phi_T^h . phi_P^{h/2}  (roles exchanged; no shift
//              function is associated with it, its order is checked empirically)
enum class SplitVariant { lie_tp, lie_pt, strang, strang_pt };

inline SplitVariant variant_from_string(const std::string &s) {
    if (s == "lie-tp") return SplitVariant::lie_tp;
    if (s == "lie-pt") return SplitVariant::lie_pt;
    if (s == "strang") return SplitVariant::strang;
    if (s == "strang-pt") return SplitVariant::strang_pt;
    throw validation_error("unknown scheme variant: " + s);
}

inline std::string to_string(SplitVariant v) {
    switch (v) {
    case SplitVariant::lie_tp: return "lie-tp";
    case SplitVariant::lie_pt: return "lie-pt";
    case SplitVariant::strang: return "strang";
    default: return "strang-pt";
    }
}

struct SchemeSpec {
    SplitVariant variant = SplitVariant::strang;
    double h = 0.05;
};

inline SchemeSpec make_scheme(const std::string &variant, double h) {
    if (!(h > 0.0)) throw validation_error("SchemeSpec: h must be positive");
    return SchemeSpec{variant_from_string(variant), h};
}

// Piecewise-constant shift function s_h(t) on [nh, (n+1)h); the step index n is
// supplied by the caller so no float floor is ever taken.
inline double shift_time(const SchemeSpec &scheme, std::int64_t n, double t_local) {
    if (!(t_local >= 0.0) || t_local >= scheme.h)
        throw validation_error("shift_time: t_local outside [0, h)");
    const double nh = double(n) * scheme.h;
    switch (scheme.variant) {
    case SplitVariant::lie_tp: return nh + scheme.h;
    case SplitVariant::lie_pt: return nh;
    case SplitVariant::strang: return nh + 0.5 * scheme.h;
    default:
        throw validation_error("shift_time: no shift function is defined for strang-pt");
    }
}

// Exact free transport phi_T^t: f(x - tv, v), an exact phase multiply in the
// mixed representation.
inline MixedField free_transport(const MixedField &f, double t) {
    MixedField out = f;
    const PhaseGrid &g = f.grid();
    for (int r = 0; r < g.n_x; ++r) {
        const double k = g.k_of_row(r);
        cplx *rowp = out.data().data() + static_cast<std::size_t>(r) * g.n_v;
        for (int j = 0; j < g.n_v; ++j) {
            const double ph = -k * t * g.v(j);
            rowp[j] *= cplx{std::cos(ph), std::sin(ph)};
        }
    }
    return out;
}

// Field coefficients of the cosine coupling: C = \int\int cos(y) f, S likewise
// with sin; E(f, x) = -C sin x + S cos x.  Only the k = +-1 density modes enter.
inline std::pair<double, double> field_coefficients(const MixedField &f) {
    const PhaseGrid &g = f.grid();
    cplx zp{0.0, 0.0}, zm{0.0, 0.0};
    const cplx *rp = f.row(1);
    const cplx *rm = f.row(-1);
    for (int j = 0; j < g.n_v; ++j) {
        zp += rp[j];
        zm += rm[j];
    }
    zp *= g.dv();
    zm *= g.dv();
    const double pi = 0.5 * two_pi;
    const double C = (pi * (zp + zm)).real();
    const double S = (cplx{0.0, pi} * (zp - zm)).real();
    return {C, S};
}

// Exact kick phi_P^t: f(x, v + t E(f, x)) with E frozen from the input field.
// Per x column the v shift is an exact phase multiply in the v spectrum.
inline MixedField kick(const MixedField &f, double t) {
    const PhaseGrid &g = f.grid();
    auto [C, S] = field_coefficients(f);
    std::vector<cplx> phys = f.to_physical();
    std::vector<cplx> buf(g.n_v);
    for (int i = 0; i < g.n_x; ++i) {
        const double x = g.x(i);
        const double a = t * (-C * std::sin(x) + S * std::cos(x));
        cplx *col = phys.data() + static_cast<std::size_t>(i) * g.n_v;
        fft::forward(col, g.n_v);
        for (int s = 0; s < g.n_v; ++s) {
            const double ph = g.xi(g.m_of_slot(s)) * a;
            col[s] *= cplx{std::cos(ph), std::sin(ph)};
        }
        fft::backward(col, g.n_v);
        for (int j = 0; j < g.n_v; ++j) col[j] /= double(g.n_v);
    }
    return MixedField::from_physical(g, phys);
}

struct SimState {
    MixedField f;
    std::int64_t n = 0;
    double eps = 0.0;
    std::shared_ptr<const StationaryState> eta;
    SchemeSpec scheme;
    bool interaction = true;

    double time() const { return double(n) * scheme.h; }
};

inline SimState step(const SimState &state) {
    SimState out = state;
    const double h = state.scheme.h;
    if (!state.interaction) {
        out.f = free_transport(state.f, h);
    } else {
        switch (state.scheme.variant) {
        case SplitVariant::lie_tp: out.f = kick(free_transport(state.f, h), h); break;
        case SplitVariant::lie_pt: out.f = free_transport(kick(state.f, h), h); break;
        case SplitVariant::strang:
            out.f = free_transport(kick(free_transport(state.f, 0.5 * h), h), 0.5 * h);
            break;
        case SplitVariant::strang_pt:
            out.f = kick(free_transport(kick(state.f, 0.5 * h), h), 0.5 * h);
            break;
        }
    }
    out.n = state.n + 1;
    return out;
}

// Streaming frame g^n(x, v) = r^n(x + nhv, v) with r = (f - eta)/eps; the
// inverse transport phase applied to the perturbation.
inline MixedField streaming_frame_of(const MixedField &f, const StationaryState &eta, double eps,
                                     double t) {
    if (!(eps > 0.0)) throw validation_error("streaming_frame: eps must be positive");
    MixedField r = f;
    r -= eta.to_field();
    r *= 1.0 / eps;
    return free_transport(r, -t);
}

inline MixedField streaming_frame(const SimState &state) {
    return streaming_frame_of(state.f, *state.eta, state.eps, state.time());
}

// Residual of the one-step operator identity
//   eta + eps g^n = phi_T^{-nh+gamma} . phi_P^h . phi_T^{nh-gamma} (eta + eps g^{n-1})
// with gamma = 0 (lie-tp), h (lie-pt), h/2 (strang).
inline double split_identity_residual(const StationaryState &eta, double eps,
                                       const SchemeSpec &scheme, std::int64_t n,
                                       const MixedField &g_prev, const MixedField &g_cur) {
    if (n < 1) throw validation_error("split_identity_residual: need n >= 1");
    double gamma;
    switch (scheme.variant) {
    case SplitVariant::lie_tp: gamma = 0.0; break;
    case SplitVariant::lie_pt: gamma = scheme.h; break;
    case SplitVariant::strang: gamma = 0.5 * scheme.h; break;
    default:
        throw validation_error("split_identity_residual: strang-pt has no single-kick identity");
    }
    const double nh = double(n) * scheme.h;
    MixedField etaf = eta.to_field();

    MixedField lhs = g_cur;
    lhs *= eps;
    lhs += etaf;

    MixedField w = g_prev;
    w *= eps;
    w += etaf;
    w = free_transport(w, nh - gamma);
    w = kick(w, scheme.h);
    w = free_transport(w, -nh + gamma);

    return (lhs - w).l2_norm();
}

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

struct Trajectory {
    RunConfig config;
    PhaseGrid grid;
    std::shared_ptr<const StationaryState> eta;
    SchemeSpec scheme;
    double eps = 0.0;

    MixedField g0; // streaming-frame initial perturbation (zero field if eps = 0)

    std::vector<double> times;   // nh for n = 0..N
    std::vector<double> s_times; // s_h at each time (nh itself for strang-pt)
    std::vector<cplx> zeta_p1, zeta_m1; // density modes of the perturbation
    std::vector<cplx> Z_p1, Z_m1;       // shifted evaluations g_hat_k(k s_h(t))
    std::vector<double> mass, l2;       // of f
    std::vector<double> norm_h1, norm_hs, norm_hs4; // of g

    std::vector<std::pair<double, MixedField>> snapshots; // streaming-frame fields
    MixedField f_final;
};

inline std::shared_ptr<StationaryState> make_stationary(const RunConfig &cfg, const PhaseGrid &g) {
    if (cfg.eta_kind == "maxwellian") return StationaryState::maxwellian(g, cfg.eta_temperature);
    if (cfg.eta_kind == "two_bump")
        return StationaryState::two_bump(g, cfg.eta_temperature, cfg.eta_separation);
    std::ifstream is(cfg.eta_file);
    if (!is) throw validation_error("eta.file: cannot open " + cfg.eta_file);
    std::vector<double> prof;
    double v;
    while (is >> v) prof.push_back(v);
    if (prof.size() != static_cast<std::size_t>(g.n_v))
        throw validation_error("eta.file: expected " + std::to_string(g.n_v) + " samples, got " +
                               std::to_string(prof.size()));
    return StationaryState::from_profile(g, std::move(prof), "file:" + cfg.eta_file);
}

// Initial perturbation r0; single-mode default cos(x) eta(v)/||eta||, or a
// seeded superposition of modes 1..3 with the same velocity shape.
inline MixedField initial_perturbation(const RunConfig &cfg, const StationaryState &eta) {
    const PhaseGrid &g = eta.grid();
    MixedField r(g);
    const double scale = 1.0 / eta.to_field().l2_norm();
    if (cfg.perturbation == "single-mode") {
        cplx *rp = r.row(1);
        cplx *rm = r.row(-1);
        for (int j = 0; j < g.n_v; ++j) {
            const double w = 0.5 * scale * eta.profile()[j];
            rp[j] = w;
            rm[j] = w;
        }
    } else {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int k = 1; k <= 3 && k < g.n_x / 2; ++k) {
            const cplx c{u(rng), u(rng)};
            cplx *rp = r.row(k);
            cplx *rm = r.row(-k);
            for (int j = 0; j < g.n_v; ++j) {
                const double w = 0.5 * scale * eta.profile()[j];
                rp[j] = c * w;
                rm[j] = std::conj(c) * w;
            }
        }
    }
    return r;
}

inline Trajectory run(const RunConfig &cfg) {
    validate_config(cfg);
    const PhaseGrid g = make_grid(cfg.n_x, cfg.n_v, cfg.L);
    auto eta = make_stationary(cfg, g);
    const SchemeSpec scheme = make_scheme(cfg.variant, cfg.h);

    if (cfg.T > cfg.recurrence_safety * g.recurrence_time())
        std::cerr << "warning: sim.T = " << cfg.T << " exceeds " << cfg.recurrence_safety
                  << " x recurrence_time = " << cfg.recurrence_safety * g.recurrence_time()
                  << "; expect discretization echoes\n";

    MixedField etaf = eta->to_field();
    MixedField r0 = initial_perturbation(cfg, *eta);
    MixedField f = etaf;
    if (cfg.epsilon > 0.0) {
        MixedField pert = r0;
        pert *= cfg.epsilon;
        f += pert;
    }

    Trajectory traj;
    traj.config = cfg;
    traj.grid = g;
    traj.eta = eta;
    traj.scheme = scheme;
    traj.eps = cfg.epsilon;
    traj.g0 = (cfg.epsilon > 0.0) ? r0 : MixedField(g);

    const auto N = static_cast<std::int64_t>(std::llround(cfg.T / cfg.h));
    std::vector<std::int64_t> snap_steps;
    for (double ts : cfg.snapshot_times) snap_steps.push_back(std::llround(ts / cfg.h));

    const double l2_0 = f.l2_norm();
    const int s4 = std::max(cfg.norm_s - 4, 0);

    SimState state{f, 0, cfg.epsilon, eta, scheme, cfg.interaction};
    for (std::int64_t n = 0; n <= N; ++n) {
        const double t = double(n) * cfg.h;
        const double s_t = (scheme.variant == SplitVariant::strang_pt)
                               ? t
                               : shift_time(scheme, n, 0.0);

        const double l2 = state.f.l2_norm();
        if (!std::isfinite(l2) || l2 > cfg.blowup_factor * l2_0)
            throw numeric_error("run: blow-up detected at t = " + std::to_string(t));

        MixedField gfield = (cfg.epsilon > 0.0) ? streaming_frame(state) : MixedField(g);

        traj.times.push_back(t);
        traj.s_times.push_back(s_t);
        if (cfg.epsilon > 0.0) {
            cplx zp{0.0, 0.0}, zm{0.0, 0.0};
            const cplx *rp = state.f.row(1);
            const cplx *rm = state.f.row(-1);
            for (int j = 0; j < g.n_v; ++j) {
                zp += rp[j];
                zm += rm[j];
            }
            traj.zeta_p1.push_back(zp * g.dv() / cfg.epsilon);
            traj.zeta_m1.push_back(zm * g.dv() / cfg.epsilon);
            traj.Z_p1.push_back(gfield.fourier_coefficient(1, s_t));
            traj.Z_m1.push_back(gfield.fourier_coefficient(-1, -s_t));
        } else {
            traj.zeta_p1.emplace_back(0.0, 0.0);
            traj.zeta_m1.emplace_back(0.0, 0.0);
            traj.Z_p1.emplace_back(0.0, 0.0);
            traj.Z_m1.emplace_back(0.0, 0.0);
        }
        traj.mass.push_back(state.f.mass());
        traj.l2.push_back(l2);
        traj.norm_h1.push_back(sobolev_norm(gfield, {1, 1.0}));
        traj.norm_hs.push_back(sobolev_norm(gfield, {cfg.norm_s, cfg.norm_nu}));
        traj.norm_hs4.push_back(sobolev_norm(gfield, {s4, cfg.norm_nu}));

        for (std::size_t q = 0; q < snap_steps.size(); ++q)
            if (snap_steps[q] == n) traj.snapshots.emplace_back(t, gfield);

        if (n < N) state = step(state);
    }
    traj.f_final = state.f;
    return traj;
}

} // namespace hmf
