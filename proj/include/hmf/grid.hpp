#pragma once

#include <cmath>
#include <numbers>

#include "hmf/errors.hpp"

namespace hmf {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Uniform phase-space grid: x over [0, 2pi) with n_x points, v over [-L, L)
// with n_v points.  The velocity domain is truncated and periodized, so shifts
// in v are exact phase multiplications in the v-spectral representation.
struct PhaseGrid {
    int n_x = 0;
    int n_v = 0;
    double L = 0.0;

    double dx() const { return two_pi / n_x; }
    double dv() const { return 2.0 * L / n_v; }

    double x(int i) const { return i * dx(); }
    double v(int j) const { return -L + j * dv(); }

    // v-frequency for signed index m in [-n_v/2, n_v/2)
    double xi(int m) const { return std::numbers::pi * m / L; }

    // Signed x-wavenumber for a storage row in FFT natural order.
    int k_of_row(int row) const { return row < n_x / 2 ? row : row - n_x; }
    int row_of_k(int k) const { return k >= 0 ? k : k + n_x; }

    // Same folding for v-spectral storage slots.
    int m_of_slot(int slot) const { return slot < n_v / 2 ? slot : slot - n_v; }
    int slot_of_m(int m) const { return m >= 0 ? m : m + n_v; }

    // Free-streaming phases e^{-i k t v_j} for |k| = 1 realign when t dv = 2pi.
    double recurrence_time() const { return two_pi / dv(); }

    bool operator==(const PhaseGrid &) const = default;
};

inline PhaseGrid make_grid(int n_x, int n_v, double L) {
    if (n_x < 4 || n_x % 2 != 0)
        throw validation_error("make_grid: n_x must be even and >= 4");
    if (n_v < 4 || n_v % 2 != 0)
        throw validation_error("make_grid: n_v must be even and >= 4");
    if (!(L > 0.0))
        throw validation_error("make_grid: L must be positive");
    return PhaseGrid{n_x, n_v, L};
}

} // namespace hmf
