#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "hmf/field.hpp"
#include "hmf/grid.hpp"

using namespace hmf;

namespace {

// Smooth, rapidly decaying random field with a few x harmonics.
MixedField random_smooth_field(const PhaseGrid &g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double a1 = u(rng), a2 = u(rng), a3 = u(rng);
    const double p1 = u(rng), p2 = u(rng), p3 = u(rng);
    const double mu = 0.4 * u(rng);
    const double sig = 1.0 + 0.5 * std::abs(u(rng));
    return MixedField::from_function(g, [=](double x, double v) {
        const double env = std::exp(-(v - mu) * (v - mu) / (2.0 * sig * sig));
        return (0.3 + a1 * std::cos(x + p1) + a2 * std::cos(2 * x + p2) +
                a3 * std::cos(3 * x + p3)) * env;
    });
}

MixedField gaussian_cos_field(const PhaseGrid &g) {
    return MixedField::from_function(
        g, [](double x, double v) { return std::cos(x) * std::exp(-v * v / 2.0); });
}

} // namespace

TEST_CASE("make_grid spacings and recurrence time") {
    PhaseGrid g = make_grid(64, 128, 8.0);
    CHECK(g.dv() == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(g.dx() * g.n_x == doctest::Approx(two_pi).epsilon(1e-15));
    CHECK(g.dv() * g.n_v == doctest::Approx(16.0).epsilon(1e-15));
    // largest |xi| on the grid is (pi/L)(n_v/2) = 8 pi
    CHECK(std::abs(g.xi(-g.n_v / 2)) == doctest::Approx(8.0 * std::numbers::pi).epsilon(1e-15));
    CHECK(g.recurrence_time() == doctest::Approx(16.0 * std::numbers::pi).epsilon(1e-15));

    PhaseGrid tiny = make_grid(4, 4, 1.0);
    CHECK(tiny.dx() == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-15));

    CHECK_THROWS_AS(make_grid(63, 128, 8.0), validation_error);
    CHECK_THROWS_AS(make_grid(64, 2, 8.0), validation_error);
    CHECK_THROWS_AS(make_grid(64, 128, 0.0), validation_error);
    CHECK_THROWS_AS(make_grid(64, 128, -1.0), validation_error);
}

TEST_CASE("fourier_coefficient closed forms for cos(x) gaussian") {
    PhaseGrid g = make_grid(64, 256, 8.0);
    MixedField f = gaussian_cos_field(g);

    const cplx c10 = f.fourier_coefficient(1, 0.0);
    CHECK(c10.real() == doctest::Approx(std::sqrt(two_pi) / 2.0).epsilon(1e-12));
    CHECK(c10.real() == doctest::Approx(1.2533141373155003).epsilon(1e-12));
    CHECK(std::abs(c10.imag()) < 1e-13);

    // f_hat_1(xi) = (1/2) sqrt(2 pi) e^{-xi^2/2}
    const cplx c11 = f.fourier_coefficient(1, 1.0);
    CHECK(c11.real() == doctest::Approx(0.5 * std::sqrt(two_pi) * std::exp(-0.5)).epsilon(1e-12));

    CHECK(std::abs(f.fourier_coefficient(0, 0.0)) < 1e-14);
    CHECK(std::abs(f.fourier_coefficient(0, 0.7)) < 1e-14);
    CHECK(std::abs(f.fourier_coefficient(2, 0.0)) < 1e-14);

    CHECK_THROWS_AS((void)f.fourier_coefficient(32, 0.0), validation_error);
    CHECK_THROWS_AS((void)f.fourier_coefficient(-33, 0.0), validation_error);
}

TEST_CASE("sobolev_norm closed forms and basic structure") {
    PhaseGrid g = make_grid(64, 256, 8.0);
    MixedField f = gaussian_cos_field(g);

    CHECK(sobolev_norm(f, {0, 0.0}) ==
          doctest::Approx(std::sqrt(std::numbers::pi * std::sqrt(std::numbers::pi))).epsilon(1e-12));
    CHECK(sobolev_norm(f, {0, 0.0}) == doctest::Approx(2.359730492414697).epsilon(1e-12));

    MixedField hom = MixedField::from_function(
        g, [](double, double v) { return std::exp(-v * v / 2.0); });
    CHECK(sobolev_norm(hom, {0, 0.0}) ==
          doctest::Approx(std::sqrt(two_pi * std::sqrt(std::numbers::pi))).epsilon(1e-12));

    MixedField zero(g);
    for (int s = 0; s <= 3; ++s) CHECK(sobolev_norm(zero, {s, 1.5}) == 0.0);

    // monotone in s and nu
    double prev = sobolev_norm(f, {0, 0.0});
    for (int s = 1; s <= 4; ++s) {
        double cur = sobolev_norm(f, {s, 0.0});
        CHECK(cur >= prev);
        prev = cur;
    }
    CHECK(sobolev_norm(f, {2, 2.0}) >= sobolev_norm(f, {2, 1.0}));

    // s = 0, nu = 0 equals discrete L2
    MixedField r = random_smooth_field(g, 7);
    CHECK(sobolev_norm(r, {0, 0.0}) == doctest::Approx(r.l2_norm()).epsilon(1e-14));

    CHECK_THROWS_AS((void)sobolev_norm(f, {max_sobolev_order + 1, 0.0}), validation_error);
}

TEST_CASE("representation round trips and Parseval") {
    PhaseGrid g = make_grid(32, 64, 6.0);
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 11ull, 99ull}) {
        MixedField f = random_smooth_field(g, seed);
        const double ref = f.l2_norm();

        // mixed -> physical -> mixed
        MixedField back = MixedField::from_physical(g, f.to_physical());
        CHECK((back - f).l2_norm() <= 1e-13 * ref);

        // mixed -> fully spectral -> mixed
        MixedField back2 = MixedField::from_v_spectrum(g, f.v_spectrum());
        CHECK((back2 - f).l2_norm() <= 1e-13 * ref);

        // Parseval in the physical representation
        auto phys = f.to_physical();
        double s = 0.0;
        for (const cplx &c : phys) s += std::norm(c);
        CHECK(std::sqrt(s * g.dx() * g.dv()) == doctest::Approx(ref).epsilon(1e-13));

        // Parseval in the fully spectral representation
        auto spec = f.v_spectrum();
        double s2 = 0.0;
        for (const cplx &c : spec) s2 += std::norm(c);
        CHECK(std::sqrt(two_pi * s2 / (2.0 * g.L)) == doctest::Approx(ref).epsilon(1e-13));
    }
}

TEST_CASE("fourier_coefficient agrees with the spectral array at grid frequencies") {
    PhaseGrid g = make_grid(32, 64, 6.0);
    MixedField f = random_smooth_field(g, 42);
    auto spec = f.v_spectrum();
    for (int k : {-3, -1, 0, 1, 2}) {
        for (int m : {-32, -7, 0, 5, 31}) {
            const cplx direct = f.fourier_coefficient(k, g.xi(m));
            const cplx arr = spec[static_cast<std::size_t>(g.row_of_k(k)) * g.n_v + g.slot_of_m(m)];
            CHECK(std::abs(direct - arr) <= 1e-13 * (1.0 + std::abs(arr)));
        }
    }
}

TEST_CASE("real fields have conjugate-symmetric coefficients") {
    PhaseGrid g = make_grid(32, 64, 6.0);
    MixedField f = random_smooth_field(g, 5);
    for (int k = 1; k < g.n_x / 2; ++k)
        for (int j = 0; j < g.n_v; ++j)
            CHECK(std::abs(f.at(-k, j) - std::conj(f.at(k, j))) < 1e-14);
}

TEST_CASE("decay bound check") {
    PhaseGrid g = make_grid(64, 256, 8.0);
    MixedField f = gaussian_cos_field(g);

    DecayReport rep = decay_bound_check(f, 2, 1.0);
    CHECK(rep.pass);
    CHECK(rep.max_ratio <= rep.bound);

    MixedField zero(g);
    CHECK_THROWS_AS((void)decay_bound_check(zero, 2, 1.0), validation_error);
    CHECK_THROWS_AS((void)decay_bound_check(f, 2, 0.4), validation_error);

    PhaseGrid gs = make_grid(32, 128, 8.0);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        MixedField r = random_smooth_field(gs, seed);
        CHECK(decay_bound_check(r, 2, 1.0).pass);
    }
}

TEST_CASE("snapshot files round-trip bit exactly") {
    PhaseGrid g = make_grid(16, 32, 4.0);
    MixedField f = random_smooth_field(g, 12345);
    const char *p1 = "snap_a.bin";
    const char *p2 = "snap_b.bin";
    save_field(p1, f);
    MixedField f2 = load_field(p1);
    save_field(p2, f2);

    for (int k = -g.n_x / 2; k < g.n_x / 2; ++k)
        for (int j = 0; j < g.n_v; ++j)
            CHECK(f.at(k, j) == f2.at(k, j));

    std::ifstream a(p1, std::ios::binary), b(p2, std::ios::binary);
    std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    CHECK(sa.size() == 4u + 8u + 8u + 8u + std::size_t(16) * 32 * 16);
    std::remove(p1);
    std::remove(p2);

    CHECK_THROWS_AS((void)load_field("does_not_exist.bin"), validation_error);
}
