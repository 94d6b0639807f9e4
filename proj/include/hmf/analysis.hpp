#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "hmf/dynamics.hpp"

namespace hmf {

// Time series of the density modes and recorded norms of a finished run.
struct ModeSeries {
    std::vector<double> times;
    std::vector<cplx> zeta_p1, zeta_m1;
    std::vector<cplx> Z_p1, Z_m1;
    std::vector<double> s_times;
    std::vector<double> norm_h1, norm_hs, norm_hs4;
};

inline ModeSeries extract_modes(const Trajectory &traj) {
    if (traj.times.empty()) throw validation_error("extract_modes: empty trajectory");
    return ModeSeries{traj.times,  traj.zeta_p1, traj.zeta_m1, traj.Z_p1,
                      traj.Z_m1,   traj.s_times, traj.norm_h1, traj.norm_hs,
                      traj.norm_hs4};
}

enum class FitModel { exponential, algebraic };

struct FitResult {
    double rate_or_exponent = 0.0; // decay rate gamma (exponential) or log-log exponent
    double frequency = 0.0;        // oscillation frequency from envelope peak spacing
    double r_squared = 0.0;
    int peaks_used = 0;
};

namespace detail {

struct LsqFit {
    double slope = 0.0, intercept = 0.0, r2 = 1.0;
};

inline LsqFit least_squares(const std::vector<double> &x, const std::vector<double> &y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    LsqFit f;
    const double den = n * sxx - sx * sx;
    f.slope = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - (f.slope * x[i] + f.intercept);
        ss_res += e * e;
    }
    f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

} // namespace detail

// Damping fit on |zeta_1|.  The exponential model fits the log of the envelope
// (three-point local maxima); since the oscillation |cos| shifts every peak by
// the same phase, the peak heights are exactly log-linear for a damped
// oscillation and the peak spacing is half a period, giving omega = pi/spacing.
// The algebraic model is a log-log fit against <t> over all window samples.
inline FitResult fit_damping(const std::vector<double> &times, const std::vector<double> &abs_zeta,
                             std::pair<double, double> window, FitModel model) {
    if (times.size() != abs_zeta.size() || times.size() < 3)
        throw validation_error("fit_damping: bad series");

    std::vector<double> t, a;
    for (std::size_t i = 0; i < times.size(); ++i)
        if (times[i] >= window.first && times[i] <= window.second) {
            t.push_back(times[i]);
            a.push_back(abs_zeta[i]);
        }
    if (t.size() < 3) throw validation_error("fit_damping: window contains too few samples");

    // Constant series: zero rate by convention.
    const double amax = *std::max_element(a.begin(), a.end());
    const double amin = *std::min_element(a.begin(), a.end());
    if (amax - amin <= 1e-12 * std::max(amax, 1e-300)) return FitResult{0.0, 0.0, 1.0, 0};

    if (model == FitModel::algebraic) {
        if (t.size() < 10) throw validation_error("fit_damping: need >= 10 samples in window");
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (!(a[i] > 0.0)) throw validation_error("fit_damping: nonpositive value in window");
            lx.push_back(std::log(std::sqrt(1.0 + t[i] * t[i])));
            ly.push_back(std::log(a[i]));
        }
        auto f = detail::least_squares(lx, ly);
        return FitResult{f.slope, 0.0, f.r2, 0};
    }

    std::vector<double> pt, pv;
    for (std::size_t i = 1; i + 1 < t.size(); ++i)
        if (a[i] > a[i - 1] && a[i] >= a[i + 1]) {
            pt.push_back(t[i]);
            pv.push_back(a[i]);
        }
    if (pt.size() < 10) throw validation_error("fit_damping: fewer than 10 envelope maxima in window");
    for (double v : pv)
        if (!(v > 0.0)) throw validation_error("fit_damping: nonpositive envelope value");

    std::vector<double> lv(pv.size());
    for (std::size_t i = 0; i < pv.size(); ++i) lv[i] = std::log(pv[i]);
    auto f = detail::least_squares(pt, lv);

    double spacing = (pt.back() - pt.front()) / double(pt.size() - 1);
    const double omega = std::numbers::pi / spacing;
    return FitResult{-f.slope, omega, f.r2, static_cast<int>(pt.size())};
}

// ---------------------------------------------------------------------------
// Weighted norms N, M, Q as running suprema over the step grid
// ---------------------------------------------------------------------------

struct WeightedNormSeries {
    std::vector<double> times;
    std::vector<double> N; // sup_{t'<=t} ||g||_{H^s_nu} / <t'>^3
    std::vector<double> M; // sup_{t'<=t} sup_{k=+-1} <t'>^{s-1} |Z_k|
    std::vector<double> Q; // N + M + sup ||g||_{H^{s-4}_nu}
    double final_Q = 0.0;
};

inline WeightedNormSeries weighted_norm_series(const Trajectory &traj, int s, double nu) {
    if (traj.times.empty()) throw validation_error("weighted_norm_series: empty trajectory");
    if (s != traj.config.norm_s || nu != traj.config.norm_nu)
        throw validation_error("weighted_norm_series: (s, nu) must match the recorded run norms");
    WeightedNormSeries out;
    double supN = 0.0, supM = 0.0, supS4 = 0.0;
    const double gamma = double(s) - 1.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        const double bt = std::sqrt(1.0 + t * t);
        supN = std::max(supN, traj.norm_hs[i] / (bt * bt * bt));
        const double zmag = std::max(std::abs(traj.Z_p1[i]), std::abs(traj.Z_m1[i]));
        supM = std::max(supM, std::pow(bt, gamma) * zmag);
        supS4 = std::max(supS4, traj.norm_hs4[i]);
        out.times.push_back(t);
        out.N.push_back(supN);
        out.M.push_back(supM);
        out.Q.push_back(supN + supM + supS4);
    }
    out.final_Q = out.Q.back();
    return out;
}

// ---------------------------------------------------------------------------
// Scattering limit and weak limit
// ---------------------------------------------------------------------------

struct ScatterReport {
    MixedField g_inf;
    std::vector<std::pair<double, double>> cauchy_errors; // (t, ||g(t) - g(next)||)
    double fitted_decay_exponent = 0.0;
    std::vector<double> eta_inf;
};

inline std::vector<double> weak_limit_eta(const MixedField &g_inf, double eps,
                                          const StationaryState &eta) {
    const PhaseGrid &g = g_inf.grid();
    std::vector<double> out(g.n_v);
    const cplx *row0 = g_inf.row(0);
    for (int j = 0; j < g.n_v; ++j) out[j] = eta.profile()[j] + eps * row0[j].real();
    return out;
}

// Weak-convergence residual |f_hat_0(t, xi) - eta_inf_hat(xi)| = eps |g_hat_0(t, xi) - g_inf_hat_0(xi)|.
inline double weak_limit_residual(const MixedField &g_t, const MixedField &g_inf, double eps,
                                  double xi) {
    return eps * std::abs(g_t.fourier_coefficient(0, xi) - g_inf.fourier_coefficient(0, xi));
}

inline ScatterReport scattering_limit(const Trajectory &traj, int r, double nu) {
    const auto &snaps = traj.snapshots;
    if (snaps.size() < 3) throw validation_error("scattering_limit: need at least 3 checkpoints");
    ScatterReport rep;
    rep.g_inf = snaps.back().second;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i + 1 < snaps.size(); ++i) {
        const double err = sobolev_norm(snaps[i].second - snaps[i + 1].second, {r, nu});
        rep.cauchy_errors.emplace_back(snaps[i].first, err);
        if (err > 0.0 && snaps[i].first > 0.0) {
            lx.push_back(std::log(snaps[i].first));
            ly.push_back(std::log(err));
        }
    }
    rep.fitted_decay_exponent = lx.size() >= 2 ? detail::least_squares(lx, ly).slope : 0.0;
    rep.eta_inf = weak_limit_eta(rep.g_inf, traj.eps, *traj.eta);
    return rep;
}

} // namespace hmf
