#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include "hmf/dynamics.hpp"
#include "hmf/penrose.hpp"

namespace hmf {

// y = K * y + F on [0, T]: y(t) = \int_0^t K(t - s) y(s) ds + F(t).
struct VolterraProblem {
    std::function<double(double)> kernel;
    std::function<cplx(double)> forcing;
    double T = 0.0;
    double dt = 0.0;
};

namespace detail {

inline int volterra_steps(const VolterraProblem &p) {
    if (!(p.dt > 0.0) || !(p.T > 0.0)) throw validation_error("VolterraProblem: T, dt must be positive");
    const auto N = static_cast<int>(std::llround(p.T / p.dt));
    if (std::abs(N * p.dt - p.T) > 1e-9 * std::max(1.0, p.T))
        throw validation_error("VolterraProblem: dt must divide T");
    return N;
}

} // namespace detail

// Product-trapezoidal rule; second order.  The implicit diagonal reduces to a
// scalar division by 1 - dt K(0)/2, which is exactly 1 for kernels with K(0) = 0.
inline std::vector<cplx> solve_time_domain(const VolterraProblem &p) {
    const int N = detail::volterra_steps(p);
    std::vector<double> K(N + 1);
    for (int j = 0; j <= N; ++j) K[j] = p.kernel(j * p.dt);
    const double diag = 1.0 - 0.5 * p.dt * K[0];
    if (std::abs(diag) < 1e-12)
        throw numeric_error("solve_time_domain: 1 - dt K(0)/2 is numerically singular");

    std::vector<cplx> y(N + 1);
    y[0] = p.forcing(0.0);
    for (int i = 1; i <= N; ++i) {
        cplx acc = 0.5 * K[i] * y[0];
        for (int j = 1; j < i; ++j) acc += K[i - j] * y[j];
        y[i] = (p.forcing(i * p.dt) + p.dt * acc) / diag;
    }
    return y;
}

struct FourierSolution {
    std::vector<cplx> y;             // on the [0, T] grid
    double causality_residual = 0.0; // sup |y| on the negative-time part of the padded axis
};

// Builds tau -> K_hat(tau) for an arbitrary decaying kernel by the same
// composite Simpson rule used for khat1.
inline std::function<cplx(double)> kernel_transform(std::function<double(double)> kernel,
                                                    double t_cut) {
    return [kernel = std::move(kernel), t_cut](double tau) -> cplx {
        const double dt_target = std::min(0.02, 0.08 / (1.0 + std::abs(tau)));
        int npan = static_cast<int>(std::ceil(t_cut / dt_target));
        if (npan % 2) ++npan;
        npan = std::max(npan, 8);
        const double dt = t_cut / npan;
        auto f = [&](double t) -> cplx {
            return kernel(t) * std::exp(cplx{0.0, -tau * t});
        };
        cplx sum = f(0.0) + f(t_cut);
        for (int i = 1; i < npan; ++i) sum += f(i * dt) * (i % 2 ? 4.0 : 2.0);
        return sum * (dt / 3.0);
    };
}

inline std::function<cplx(double)> kernel_transform(const KernelSpec &spec) {
    return [spec](double tau) { return khat1(spec, cplx{tau, 0.0}); };
}

// Resolvent formula y_hat = F_hat / (1 - K_hat) on a 4x zero-padded axis.
// The returned causality residual measures how well the solution vanishes for
// t < 0 (Paley-Wiener); kernel_is_real enables the K_hat(-tau) = conj symmetry.
inline FourierSolution solve_fourier_domain(const VolterraProblem &p,
                                            const std::function<cplx(double)> &khat,
                                            double kappa0 = 0.1, bool kernel_is_real = true) {
    const int N = detail::volterra_steps(p);
    const int Npad = 4 * N;
    const double dtau = two_pi / (Npad * p.dt);

    std::vector<cplx> buf(Npad, cplx{0.0, 0.0});
    for (int j = 0; j <= N; ++j) buf[j] = p.forcing(j * p.dt);
    fft::forward(buf.data(), Npad);

    // K_hat on the signed DFT frequency grid.
    std::vector<cplx> kh(Npad);
    for (int m = 0; m <= Npad / 2; ++m) kh[m] = khat(m * dtau); // slot Npad/2 = Nyquist
    for (int m = Npad / 2 + 1; m < Npad; ++m) {
        const double tau = (m - Npad) * dtau;
        kh[m] = kernel_is_real ? std::conj(kh[Npad - m]) : khat(tau);
    }

    // The forcing lives on the half-line and jumps at t = 0, so its plain DFT
    // is a rectangle rule with an O(dt) boundary defect.  Subtracting half the
    // first sample convolved with the kernel restores trapezoid consistency
    // with solve_time_domain (for kernels with K(0) = 0 the match is exact up
    // to the periodization of the padded axis).
    const cplx f0 = p.forcing(0.0);
    double min_mod = std::numeric_limits<double>::infinity();
    for (int m = 0; m < Npad; ++m) {
        const cplx d = 1.0 - kh[m];
        min_mod = std::min(min_mod, std::abs(d));
        buf[m] = (buf[m] - 0.5 * f0 * kh[m]) / d;
    }
    if (min_mod < kappa0)
        throw numeric_error("solve_fourier_domain: |1 - K_hat| fell below kappa0 on the grid");

    fft::backward(buf.data(), Npad);
    for (cplx &v : buf) v /= double(Npad);

    FourierSolution sol;
    sol.y.assign(buf.begin(), buf.begin() + N + 1);
    for (int j = 3 * N; j < Npad; ++j)
        sol.causality_residual = std::max(sol.causality_residual, std::abs(buf[j]));
    return sol;
}

// ---------------------------------------------------------------------------
// Linear prediction of the density mode from the linearized theory
// ---------------------------------------------------------------------------

struct LinearPrediction {
    std::vector<double> times;
    std::vector<cplx> zeta; // predicted Z_1(t) for unit-size initial data
};

namespace detail {

inline void require_penrose_margin(const KernelSpec &spec, double tau_max = 30.0) {
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 200; ++i) {
        const double tau = -tau_max + 2.0 * tau_max * i / 200.0;
        worst = std::min(worst, std::abs(1.0 - khat1(spec, cplx{tau, 0.0})));
    }
    if (worst < 1e-3)
        throw numeric_error("linear_prediction: state is at or past the Penrose margin");
}

} // namespace detail

// Solves the linearized Volterra relation for the shifted mode evaluation
//   Z(t) = F(t) + \int_0^t K(1, s(t) - s(sigma)) Z(sigma) dsigma,
// with forcing F(t) = g0_hat_1(s(t)) from the initial data's Fourier trace.
//
// With the scheme's piecewise-constant shift both Z and the kernel argument
// are constant on step cells, so the integral is evaluated cell by cell
// exactly: Z_m = F_m + h sum_{j<m} K((m-j)h) Z_j (the sigma in [mh, t) portion
// drops out since K(0) = 0).  With continuous = true the shift is s(t) = t and
// the product-trapezoidal solver is used on a fine grid.
inline LinearPrediction linear_prediction(const std::shared_ptr<const StationaryState> &eta,
                                          const MixedField &g0, const SchemeSpec &scheme, double T,
                                          bool continuous = false, double dt_continuous = 0.005) {
    KernelSpec spec{1, eta};
    detail::require_penrose_margin(spec);

    LinearPrediction out;
    if (!continuous) {
        const auto M = static_cast<int>(std::llround(T / scheme.h));
        std::vector<double> K(M + 1);
        for (int j = 0; j <= M; ++j) K[j] = kernel_K(spec, j * scheme.h);
        out.times.resize(M + 1);
        out.zeta.resize(M + 1);
        for (int m = 0; m <= M; ++m) {
            out.times[m] = m * scheme.h;
            const double s_m = shift_time(scheme, m, 0.0);
            cplx acc = g0.fourier_coefficient(1, s_m);
            for (int j = 0; j < m; ++j) acc += scheme.h * K[m - j] * out.zeta[j];
            out.zeta[m] = acc;
        }
    } else {
        VolterraProblem p;
        p.kernel = [spec](double t) { return kernel_K(spec, t); };
        p.forcing = [&g0](double t) { return g0.fourier_coefficient(1, t); };
        p.T = T;
        p.dt = dt_continuous;
        out.zeta = solve_time_domain(p);
        out.times.resize(out.zeta.size());
        for (std::size_t i = 0; i < out.times.size(); ++i) out.times[i] = double(i) * dt_continuous;
    }
    return out;
}

} // namespace hmf
