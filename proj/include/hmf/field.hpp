#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "hmf/errors.hpp"
#include "hmf/fft.hpp"
#include "hmf/grid.hpp"

namespace hmf {

using cplx = std::complex<double>;

// Mixed representation of a phase-space field: Fourier in x, physical in v.
// Entry (k, j) is the x-Fourier coefficient f_hat_k evaluated at v_j under the
// convention f_hat_k = (1/2pi) \int f e^{-ikx} dx, so that f = sum_k f_hat_k e^{ikx}.
//
// Storage is row-major with rows in FFT natural order (k = 0, 1, ..., -1); the
// public accessors take signed k only.
class MixedField {
public:
    MixedField() = default;
    explicit MixedField(const PhaseGrid &g)
        : grid_(g), a_(static_cast<std::size_t>(g.n_x) * g.n_v, cplx{0.0, 0.0}) {}

    const PhaseGrid &grid() const { return grid_; }

    cplx &at(int k, int j) { return a_[idx(k, j)]; }
    const cplx &at(int k, int j) const { return a_[idx(k, j)]; }

    std::vector<cplx> &data() { return a_; }
    const std::vector<cplx> &data() const { return a_; }

    // Row for signed wavenumber k, contiguous over j.
    cplx *row(int k) { return a_.data() + static_cast<std::size_t>(grid_.row_of_k(check_k(k))) * grid_.n_v; }
    const cplx *row(int k) const {
        return a_.data() + static_cast<std::size_t>(grid_.row_of_k(check_k(k))) * grid_.n_v;
    }

    // Sample a physical function f(x, v) onto the mixed representation.
    static MixedField from_function(const PhaseGrid &g, const std::function<double(double, double)> &f) {
        std::vector<cplx> phys(static_cast<std::size_t>(g.n_x) * g.n_v);
        for (int i = 0; i < g.n_x; ++i)
            for (int j = 0; j < g.n_v; ++j)
                phys[static_cast<std::size_t>(i) * g.n_v + j] = f(g.x(i), g.v(j));
        return from_physical(g, phys);
    }

    // phys is row-major (i, j); forward DFT over i with 1/n_x normalization.
    static MixedField from_physical(const PhaseGrid &g, const std::vector<cplx> &phys) {
        if (phys.size() != static_cast<std::size_t>(g.n_x) * g.n_v)
            throw validation_error("from_physical: size mismatch");
        MixedField out(g);
        std::vector<cplx> buf(g.n_x);
        for (int j = 0; j < g.n_v; ++j) {
            for (int i = 0; i < g.n_x; ++i) buf[i] = phys[static_cast<std::size_t>(i) * g.n_v + j];
            fft::forward(buf.data(), g.n_x);
            for (int r = 0; r < g.n_x; ++r)
                out.a_[static_cast<std::size_t>(r) * g.n_v + j] = buf[r] / double(g.n_x);
        }
        return out;
    }

    // Inverse of from_physical: f(x_i, v_j) = sum_k f_hat_k(v_j) e^{i k x_i}.
    std::vector<cplx> to_physical() const {
        const PhaseGrid &g = grid_;
        std::vector<cplx> phys(static_cast<std::size_t>(g.n_x) * g.n_v);
        std::vector<cplx> buf(g.n_x);
        for (int j = 0; j < g.n_v; ++j) {
            for (int r = 0; r < g.n_x; ++r) buf[r] = a_[static_cast<std::size_t>(r) * g.n_v + j];
            fft::backward(buf.data(), g.n_x);
            for (int i = 0; i < g.n_x; ++i) phys[static_cast<std::size_t>(i) * g.n_v + j] = buf[i];
        }
        return phys;
    }

    // Fully spectral array F(k, xi_m) = sum_j f_hat_k(v_j) e^{-i xi_m v_j} dv,
    // same row layout as the mixed representation, v-slots in FFT natural order.
    std::vector<cplx> v_spectrum() const {
        const PhaseGrid &g = grid_;
        std::vector<cplx> spec(a_);
        for (int r = 0; r < g.n_x; ++r) {
            cplx *rowp = spec.data() + static_cast<std::size_t>(r) * g.n_v;
            fft::forward(rowp, g.n_v);
            // v_j = -L + j dv turns the plain DFT into the xi quadrature up to
            // the alternating phase e^{i pi m} = (-1)^m.
            for (int s = 0; s < g.n_v; ++s) rowp[s] *= (s % 2 == 0 ? g.dv() : -g.dv());
        }
        return spec;
    }

    static MixedField from_v_spectrum(const PhaseGrid &g, const std::vector<cplx> &spec) {
        if (spec.size() != static_cast<std::size_t>(g.n_x) * g.n_v)
            throw validation_error("from_v_spectrum: size mismatch");
        MixedField out(g);
        out.a_ = spec;
        const double inv = 1.0 / (2.0 * g.L);
        for (int r = 0; r < g.n_x; ++r) {
            cplx *rowp = out.a_.data() + static_cast<std::size_t>(r) * g.n_v;
            for (int s = 0; s < g.n_v; ++s) rowp[s] *= (s % 2 == 0 ? inv : -inv);
            fft::backward(rowp, g.n_v);
        }
        return out;
    }

    // f_hat_k(xi) by direct quadrature over the v grid; xi is unrestricted.
    cplx fourier_coefficient(int k, double xi) const {
        check_k(k);
        const cplx *rowp = row(k);
        cplx sum{0.0, 0.0};
        for (int j = 0; j < grid_.n_v; ++j) {
            double ph = -xi * grid_.v(j);
            sum += rowp[j] * cplx{std::cos(ph), std::sin(ph)};
        }
        return sum * grid_.dv();
    }

    // L2 norm on T x R: ||f||^2 = 2pi sum_{k,j} |f_hat_k(v_j)|^2 dv.
    double l2_norm() const {
        double s = 0.0;
        for (const cplx &c : a_) s += std::norm(c);
        return std::sqrt(two_pi * s * grid_.dv());
    }

    // Total mass \int\int f dx dv = 2pi sum_j f_hat_0(v_j) dv.
    double mass() const {
        cplx s{0.0, 0.0};
        const cplx *rowp = row(0);
        for (int j = 0; j < grid_.n_v; ++j) s += rowp[j];
        return (two_pi * grid_.dv() * s).real();
    }

    MixedField &operator+=(const MixedField &o) { return combine(o, 1.0); }
    MixedField &operator-=(const MixedField &o) { return combine(o, -1.0); }
    MixedField &operator*=(double c) {
        for (cplx &v : a_) v *= c;
        return *this;
    }

    friend MixedField operator-(MixedField a, const MixedField &b) { return a -= b; }
    friend MixedField operator+(MixedField a, const MixedField &b) { return a += b; }

private:
    int check_k(int k) const {
        if (k < -grid_.n_x / 2 || k >= grid_.n_x / 2)
            throw validation_error("MixedField: wavenumber k out of range");
        return k;
    }
    std::size_t idx(int k, int j) const {
        if (j < 0 || j >= grid_.n_v) throw validation_error("MixedField: velocity index out of range");
        return static_cast<std::size_t>(grid_.row_of_k(check_k(k))) * grid_.n_v + j;
    }
    MixedField &combine(const MixedField &o, double c) {
        if (!(o.grid_ == grid_)) throw validation_error("MixedField: grid mismatch");
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += c * o.a_[i];
        return *this;
    }

    PhaseGrid grid_;
    std::vector<cplx> a_;
};

struct WeightedNormSpec {
    int s = 0;
    double nu = 0.0;
};

// Spectral differentiation order cap; beyond this the discrete derivative of
// desk-scale data is dominated by periodization noise.
inline constexpr int max_sobolev_order = 8;

namespace detail {

// d^q/dv^q via the v-spectral representation, applied row by row.
inline MixedField v_derivative(const MixedField &f, int q) {
    const PhaseGrid &g = f.grid();
    std::vector<cplx> spec = f.v_spectrum();
    for (int r = 0; r < g.n_x; ++r) {
        cplx *rowp = spec.data() + static_cast<std::size_t>(r) * g.n_v;
        for (int s = 0; s < g.n_v; ++s) {
            cplx ixi{0.0, g.xi(g.m_of_slot(s))};
            cplx fac{1.0, 0.0};
            for (int a = 0; a < q; ++a) fac *= ixi;
            rowp[s] *= fac;
        }
    }
    return MixedField::from_v_spectrum(g, spec);
}

} // namespace detail

// Weighted Sobolev norm: ||f||^2 = sum_{p+q <= s} || (1+v^2)^{nu/2} d_x^p d_v^q f ||^2_{L2}.
// d_x is multiplication by ik; d_v is spectral on the periodized v domain; the
// weight multiplies in physical v after differentiation.
inline double sobolev_norm(const MixedField &f, const WeightedNormSpec &spec) {
    if (spec.s < 0 || spec.nu < 0.0) throw validation_error("sobolev_norm: s, nu must be nonnegative");
    if (spec.s > max_sobolev_order) throw validation_error("sobolev_norm: derivative order above cap");
    const PhaseGrid &g = f.grid();

    std::vector<double> wv(g.n_v);
    for (int j = 0; j < g.n_v; ++j) wv[j] = std::pow(1.0 + g.v(j) * g.v(j), spec.nu);

    double total = 0.0;
    for (int q = 0; q <= spec.s; ++q) {
        MixedField dq = (q == 0) ? f : detail::v_derivative(f, q);
        for (int r = 0; r < g.n_x; ++r) {
            const double k = g.k_of_row(r);
            // sum over p = 0..s-q of |(ik)^p|^2 = k^{2p}
            double wk = 0.0, kp = 1.0;
            for (int p = 0; p + q <= spec.s; ++p) {
                wk += kp;
                kp *= k * k;
            }
            const cplx *rowp = dq.data().data() + static_cast<std::size_t>(r) * g.n_v;
            double rowsum = 0.0;
            for (int j = 0; j < g.n_v; ++j) rowsum += wv[j] * std::norm(rowp[j]);
            total += wk * rowsum;
        }
    }
    return std::sqrt(two_pi * g.dv() * total);
}

struct DecayReport {
    double max_ratio = 0.0;
    double bound = 0.0;
    bool pass = false;
};

// Checks the interpolation-type decay bound
//   |f_hat_k(xi)| <= 2^{s/2} C(nu) <k>^{-alpha} <xi>^{-beta} ||f||_{H^s_nu}
// for all alpha + beta = s, scanning the grid frequencies.  C(nu) comes from
// the quadrature of \int (1+v^2)^{-nu} dv.
inline DecayReport decay_bound_check(const MixedField &f, int s, double nu) {
    if (!(nu > 0.5)) throw validation_error("decay_bound_check: need nu > 1/2");
    const double norm = sobolev_norm(f, {s, nu});
    if (norm == 0.0) throw validation_error("decay_bound_check: zero norm");
    const PhaseGrid &g = f.grid();

    double I = 0.0;
    for (int j = 0; j < g.n_v; ++j) I += std::pow(1.0 + g.v(j) * g.v(j), -nu);
    I *= g.dv();
    const double C = std::sqrt(I / two_pi);

    std::vector<cplx> spec = f.v_spectrum();
    double worst = 0.0;
    for (int r = 0; r < g.n_x; ++r) {
        const double bk = std::sqrt(1.0 + double(g.k_of_row(r)) * g.k_of_row(r));
        for (int sl = 0; sl < g.n_v; ++sl) {
            const double xi = g.xi(g.m_of_slot(sl));
            const double bxi = std::sqrt(1.0 + xi * xi);
            // max over alpha+beta=s of <k>^alpha <xi>^beta
            const double wfac = std::pow(std::max(bk, bxi), s);
            const double ratio = std::abs(spec[static_cast<std::size_t>(r) * g.n_v + sl]) * wfac / norm;
            worst = std::max(worst, ratio);
        }
    }
    const double bound = std::pow(2.0, 0.5 * s) * C;
    return DecayReport{worst, bound, worst <= bound};
}

// ---------------------------------------------------------------------------
// Snapshot files: magic "HMF1", then n_x, n_v as 8-byte little-endian unsigned
// integers, L as an 8-byte little-endian IEEE double, then (re, im) pairs of
// the mixed representation, rows in signed ascending k order (-n_x/2 .. n_x/2-1).
// ---------------------------------------------------------------------------

namespace detail {

inline void put_u64(std::ostream &os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char *>(b), 8);
}

inline std::uint64_t get_u64(std::istream &is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char *>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

inline void put_f64(std::ostream &os, double d) {
    std::uint64_t v;
    std::memcpy(&v, &d, 8);
    put_u64(os, v);
}

inline double get_f64(std::istream &is) {
    std::uint64_t v = get_u64(is);
    double d;
    std::memcpy(&d, &v, 8);
    return d;
}

} // namespace detail

inline void save_field(const std::string &path, const MixedField &f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw validation_error("save_field: cannot open " + path);
    const PhaseGrid &g = f.grid();
    os.write("HMF1", 4);
    detail::put_u64(os, static_cast<std::uint64_t>(g.n_x));
    detail::put_u64(os, static_cast<std::uint64_t>(g.n_v));
    detail::put_f64(os, g.L);
    for (int k = -g.n_x / 2; k < g.n_x / 2; ++k) {
        const cplx *rowp = f.row(k);
        for (int j = 0; j < g.n_v; ++j) {
            detail::put_f64(os, rowp[j].real());
            detail::put_f64(os, rowp[j].imag());
        }
    }
    if (!os) throw numeric_error("save_field: write failure on " + path);
}

inline MixedField load_field(const std::string &path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw validation_error("load_field: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "HMF1", 4) != 0)
        throw validation_error("load_field: bad magic in " + path);
    const auto n_x = static_cast<int>(detail::get_u64(is));
    const auto n_v = static_cast<int>(detail::get_u64(is));
    const double L = detail::get_f64(is);
    PhaseGrid g = make_grid(n_x, n_v, L);
    MixedField f(g);
    for (int k = -g.n_x / 2; k < g.n_x / 2; ++k) {
        cplx *rowp = f.row(k);
        for (int j = 0; j < g.n_v; ++j) {
            double re = detail::get_f64(is);
            double im = detail::get_f64(is);
            rowp[j] = cplx{re, im};
        }
    }
    if (!is) throw validation_error("load_field: truncated file " + path);
    return f;
}

} // namespace hmf
