#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hmf/field.hpp"
#include "hmf/grid.hpp"

namespace hmf {

// Spatially homogeneous state eta(v) sampled on the grid, optionally with its
// closed-form Fourier transform eta_hat_0(xi) = 2pi \int eta(v) e^{-i xi v} dv
// (the k = 0 slice of the phase-space transform, without the 1/2pi).
//
// States are normalized to unit phase-space mass on T x R, i.e.
// \int eta dv = 1/(2pi), which makes eta_hat_0(0) = 1 and fixes the absolute
// scale of the linearized memory kernel.
class StationaryState {
public:
    StationaryState(PhaseGrid grid, std::vector<double> profile,
                    std::function<cplx(double)> closed_form_hat, std::string label)
        : grid_(grid), profile_(std::move(profile)), hat_(std::move(closed_form_hat)),
          label_(std::move(label)) {
        if (profile_.size() != static_cast<std::size_t>(grid_.n_v))
            throw validation_error("StationaryState: profile size mismatch");
        if (!(mass() > 0.0)) throw validation_error("StationaryState: nonpositive mass");
    }

    const PhaseGrid &grid() const { return grid_; }
    const std::vector<double> &profile() const { return profile_; }
    const std::string &label() const { return label_; }
    bool has_closed_form_hat() const { return static_cast<bool>(hat_); }

    double mass() const {
        double s = 0.0;
        for (double p : profile_) s += p;
        return s * grid_.dv();
    }

    // eta_hat_0(xi); falls back to quadrature of the sampled profile.
    cplx hat0(double xi) const {
        if (hat_) return hat_(xi);
        cplx s{0.0, 0.0};
        for (int j = 0; j < grid_.n_v; ++j) {
            double ph = -xi * grid_.v(j);
            s += profile_[j] * cplx{std::cos(ph), std::sin(ph)};
        }
        return two_pi * grid_.dv() * s;
    }

    // The state as a MixedField (k = 0 row only).
    MixedField to_field() const {
        MixedField f(grid_);
        cplx *rowp = f.row(0);
        for (int j = 0; j < grid_.n_v; ++j) rowp[j] = profile_[j];
        return f;
    }

    // Maxwellian with temperature T and unit phase-space mass:
    //   eta(v) = (2pi)^{-3/2} T^{-1/2} e^{-v^2/(2T)},  eta_hat_0(xi) = e^{-T xi^2/2}.
    static std::shared_ptr<StationaryState> maxwellian(const PhaseGrid &g, double T) {
        if (!(T > 0.0)) throw validation_error("maxwellian: temperature must be positive");
        std::vector<double> prof(g.n_v);
        const double amp = std::pow(two_pi, -1.5) / std::sqrt(T);
        for (int j = 0; j < g.n_v; ++j) {
            double v = g.v(j);
            prof[j] = amp * std::exp(-v * v / (2.0 * T));
        }
        auto hat = [T](double xi) { return cplx{std::exp(-T * xi * xi / 2.0), 0.0}; };
        return std::make_shared<StationaryState>(g, std::move(prof), hat, "maxwellian");
    }

    // Symmetric two-bump state, half a Maxwellian at each of v = +-d:
    //   eta_hat_0(xi) = cos(d xi) e^{-T xi^2/2}.
    static std::shared_ptr<StationaryState> two_bump(const PhaseGrid &g, double T, double d) {
        if (!(T > 0.0)) throw validation_error("two_bump: temperature must be positive");
        std::vector<double> prof(g.n_v);
        const double amp = 0.5 * std::pow(two_pi, -1.5) / std::sqrt(T);
        for (int j = 0; j < g.n_v; ++j) {
            double v = g.v(j);
            prof[j] = amp * (std::exp(-(v - d) * (v - d) / (2.0 * T)) +
                             std::exp(-(v + d) * (v + d) / (2.0 * T)));
        }
        auto hat = [T, d](double xi) {
            return cplx{std::cos(d * xi) * std::exp(-T * xi * xi / 2.0), 0.0};
        };
        return std::make_shared<StationaryState>(g, std::move(prof), hat, "two_bump");
    }

    // Arbitrary sampled profile; eta_hat_0 by quadrature.
    static std::shared_ptr<StationaryState> from_profile(const PhaseGrid &g, std::vector<double> prof,
                                                         std::string label = "profile") {
        return std::make_shared<StationaryState>(g, std::move(prof), nullptr, std::move(label));
    }

private:
    PhaseGrid grid_;
    std::vector<double> profile_;
    std::function<cplx(double)> hat_;
    std::string label_;
};

} // namespace hmf
