#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include "hmf/stationary.hpp"

namespace hmf {

// Memory kernel of the linearized dynamics: K(n, t) = -n^2 p_n t eta_hat_0(n t)
// with p_{+-1} = 1/2 and p_k = 0 otherwise.  For the even states used here
// eta_hat_0 is real; the real part is taken for sampled profiles.
struct KernelSpec {
    int n = 1;
    std::shared_ptr<const StationaryState> eta;
};

inline double kernel_K(const KernelSpec &spec, double t) {
    if (spec.n != 1 && spec.n != -1) return 0.0;
    return -0.5 * double(spec.n) * double(spec.n) * t * spec.eta->hat0(spec.n * t).real();
}

namespace detail {

// Truncation point for the half-line transform: the integrand envelope
// |K(t)| e^{max(0, Im tau) t} must fall below 1e-15.  Profiles without a
// closed-form transform are trig polynomials in t, so their quadrature is only
// trusted up to half the grid recurrence time.
inline double khat_cutoff(const KernelSpec &spec, double im_tau) {
    const double sigma = std::max(0.0, im_tau);
    double cap = 200.0;
    if (!spec.eta->has_closed_form_hat())
        cap = std::min(cap, 0.5 * spec.eta->grid().recurrence_time());
    double t = 1.0;
    while (t < cap) {
        const double env = 0.5 * t * std::abs(spec.eta->hat0(spec.n * t)) * std::exp(sigma * t);
        if (env < 1e-15) return t;
        t += 0.5;
    }
    return cap;
}

// Composite Simpson for \int_0^{T_cut} e^{-i tau t} K(n, t) dt with step
// resolved against the oscillation |tau|; relative accuracy ~1e-9 or better.
inline cplx khat1_quadrature(const KernelSpec &spec, cplx tau) {
    if (spec.n != 1 && spec.n != -1) return cplx{0.0, 0.0};
    const double tcut = khat_cutoff(spec, tau.imag());
    const double dt_target = std::min(0.02, 0.08 / (1.0 + std::abs(tau)));
    int npan = static_cast<int>(std::ceil(tcut / dt_target));
    if (npan % 2) ++npan;
    npan = std::max(npan, 8);
    const double dt = tcut / npan;

    auto integrand = [&](double t) -> cplx {
        const cplx expo = std::exp(cplx{tau.imag() * t, -tau.real() * t});
        return kernel_K(spec, t) * expo;
    };
    cplx sum = integrand(0.0) + integrand(tcut);
    for (int i = 1; i < npan; ++i) sum += integrand(i * dt) * (i % 2 ? 4.0 : 2.0);
    return sum * (dt / 3.0);
}

} // namespace detail

// Half-line Fourier transform K_hat_1(n, tau) = \int_0^inf e^{-i tau t} K(n, t) dt,
// defined on the closed lower half-plane.
inline cplx khat1(const KernelSpec &spec, cplx tau) {
    if (tau.imag() > 1e-12) throw validation_error("khat1: Im tau must be <= 0");
    return detail::khat1_quadrature(spec, tau);
}

// Analytic continuation of khat1 past the real axis (superexponential decay of
// eta_hat_0 required for convergence; closed-form states qualify).
inline cplx khat1_continued(const KernelSpec &spec, cplx tau) {
    return detail::khat1_quadrature(spec, tau);
}

struct PenroseReport {
    double kappa = 0.0;       // min over sampled real tau of |1 - K_hat_1|
    int zero_count = 0;       // zeros of 1 - K_hat_1 in the open lower half-plane
    bool pass = false;
    double winding = 0.0;     // raw winding number of the contour image
    std::vector<std::pair<double, cplx>> samples; // (tau, 1 - K_hat_1) on the real axis
};

// Practical reading of the Penrose condition: a holomorphic nonvanishing
// function tending to 1 at infinity attains its infimum over the closed lower
// half-plane on the real axis, so the check combines the real-axis minimum
// with an argument-principle zero count over [-tau_max, tau_max] plus the
// lower semicircle.
inline PenroseReport penrose_check(const std::shared_ptr<const StationaryState> &eta, double kappa0,
                                   double tau_max = 50.0, int n_real = 2001, int n_contour = 4096) {
    KernelSpec spec{1, eta};
    PenroseReport rep;
    rep.samples.reserve(n_real);
    rep.kappa = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_real; ++i) {
        const double tau = -tau_max + 2.0 * tau_max * i / (n_real - 1);
        const cplx w = 1.0 - khat1(spec, cplx{tau, 0.0});
        rep.samples.emplace_back(tau, w);
        rep.kappa = std::min(rep.kappa, std::abs(w));
    }

    // Contour: real segment -R -> +R, then clockwise semicircle through -iR.
    const int half = n_contour / 2;
    std::vector<cplx> img;
    img.reserve(n_contour);
    for (int i = 0; i < half; ++i) {
        const double tau = -tau_max + 2.0 * tau_max * i / half;
        img.push_back(1.0 - khat1(spec, cplx{tau, 0.0}));
    }
    for (int i = 0; i < half; ++i) {
        const double th = std::numbers::pi * i / half;
        const cplx tau = tau_max * std::exp(cplx{0.0, -th});
        img.push_back(1.0 - khat1(spec, tau));
    }
    double total = 0.0;
    for (int i = 0; i < n_contour; ++i) {
        const cplx a = img[i];
        const cplx b = img[(i + 1) % n_contour];
        total += std::arg(b / a);
    }
    rep.winding = total / two_pi;
    const double rounded = std::round(rep.winding);
    if (std::abs(rep.winding - rounded) > 0.1)
        throw numeric_error("penrose_check: non-integer winding number (contour under-resolved)");
    // Clockwise traversal of the enclosed region: each zero contributes -1.
    rep.zero_count = static_cast<int>(std::lround(-rounded));
    rep.pass = (rep.zero_count == 0) && (rep.kappa >= kappa0);
    return rep;
}

struct RootResult {
    cplx tau{0.0, 0.0};
    int iterations = 0;
};

// Root of 1 - K_hat_1(n, .) nearest the real axis, by complex secant iteration
// on the analytically continued transform.  For a stable state the root has
// Im tau > 0 and predicts |zeta_1(t)| ~ e^{-Im(tau) t} at frequency Re(tau).
inline RootResult landau_root(const std::shared_ptr<const StationaryState> &eta, int n = 1,
                              std::optional<cplx> guess = std::nullopt, double tau_max = 50.0) {
    KernelSpec spec{n, eta};
    if (std::abs(detail::khat1_quadrature(spec, cplx{0.0, 0.0})) < 1e-14)
        throw numeric_error("landau_root: kernel vanishes, 1 - K_hat_1 has no root");

    auto w = [&](cplx tau) { return 1.0 - khat1_continued(spec, tau); };

    std::vector<std::pair<cplx, cplx>> starts;
    if (guess) {
        starts.emplace_back(*guess, *guess + cplx{0.05, 0.05});
    } else {
        // Seed near the real-axis minimum of |1 - K_hat_1| at several heights.
        double best_tau = 0.0, best_val = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 400; ++i) {
            const double tau = (double(n)) * tau_max * i / 400.0;
            const double val = std::abs(w(cplx{tau, 0.0}));
            if (val < best_val) {
                best_val = val;
                best_tau = tau;
            }
        }
        for (double im : {0.2, 0.6, 1.2, 2.5})
            starts.emplace_back(cplx{best_tau, im}, cplx{best_tau + 0.1, im + 0.3});
    }

    std::optional<RootResult> best;
    for (auto [a, b] : starts) {
        cplx fa = w(a), fb = w(b);
        int it = 0;
        bool ok = false;
        for (; it < 100; ++it) {
            if (std::abs(fb - fa) < 1e-300) break;
            const cplx c = b - fb * (b - a) / (fb - fa);
            a = b;
            fa = fb;
            b = c;
            fb = w(b);
            if (std::abs(fb) < 1e-10) {
                ok = true;
                break;
            }
        }
        if (ok && std::abs(fb) < 1e-8) {
            if (!best || std::abs(b.imag()) < std::abs(best->tau.imag())) best = RootResult{b, it};
        }
    }
    if (!best) throw numeric_error("landau_root: secant iteration did not converge");
    return *best;
}

} // namespace hmf
