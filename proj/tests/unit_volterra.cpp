#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hmf/volterra.hpp"

using namespace hmf;

namespace {

VolterraProblem gaussian_problem(double T, double dt) {
    VolterraProblem p;
    p.kernel = [](double t) { return -0.5 * t * std::exp(-t * t / 2.0); };
    p.forcing = [](double t) { return cplx{std::exp(-t * t / 2.0), 0.0}; };
    p.T = T;
    p.dt = dt;
    return p;
}

double sup_diff(const std::vector<cplx> &a, const std::vector<cplx> &b) {
    REQUIRE(a.size() == b.size());
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

} // namespace

TEST_CASE("zero kernel returns the forcing") {
    VolterraProblem p;
    p.kernel = [](double) { return 0.0; };
    p.forcing = [](double t) { return cplx{std::cos(t), 0.3 * std::sin(2.0 * t)}; };
    p.T = 10.0;
    p.dt = 0.01;

    auto y = solve_time_domain(p);
    for (std::size_t i = 0; i < y.size(); ++i)
        CHECK(std::abs(y[i] - p.forcing(double(i) * p.dt)) == 0.0);

    // Fourier path: only transform round-trip error remains
    auto khat0 = [](double) { return cplx{0.0, 0.0}; };
    auto sol = solve_fourier_domain(p, khat0);
    CHECK(sup_diff(sol.y, y) <= 1e-10);
}

TEST_CASE("constant kernel reproduces exponential growth") {
    // K = 1, F = 1: y(t) = e^t
    VolterraProblem p;
    p.kernel = [](double) { return 1.0; };
    p.forcing = [](double) { return cplx{1.0, 0.0}; };
    p.T = 1.0;
    p.dt = 1e-3;
    auto y = solve_time_domain(p);
    CHECK(std::abs(y.back() - std::exp(1.0)) <= 1e-3);
    CHECK(std::abs(y[500] - std::exp(0.5)) <= 1e-3);
}

TEST_CASE("solvers are linear in the forcing") {
    const double T = 8.0, dt = 0.02;
    VolterraProblem p1 = gaussian_problem(T, dt);
    VolterraProblem p2 = p1;
    p2.forcing = [](double t) { return cplx{std::sin(t) / (1.0 + t * t), 0.1 * std::cos(t)}; };
    VolterraProblem pc = p1;
    const cplx al{2.0, -1.0}, be{0.5, 0.25};
    pc.forcing = [&, al, be](double t) { return al * p1.forcing(t) + be * p2.forcing(t); };

    auto y1 = solve_time_domain(p1), y2 = solve_time_domain(p2), yc = solve_time_domain(pc);
    double worst = 0.0;
    for (std::size_t i = 0; i < yc.size(); ++i)
        worst = std::max(worst, std::abs(yc[i] - (al * y1[i] + be * y2[i])));
    CHECK(worst <= 1e-10);

    auto kh = kernel_transform(p1.kernel, 12.0);
    auto s1 = solve_fourier_domain(p1, kh), s2 = solve_fourier_domain(p2, kh),
         sc = solve_fourier_domain(pc, kh);
    worst = 0.0;
    for (std::size_t i = 0; i < sc.y.size(); ++i)
        worst = std::max(worst, std::abs(sc.y[i] - (al * s1.y[i] + be * s2.y[i])));
    CHECK(worst <= 1e-10);
}

TEST_CASE("time-domain solver is second order under refinement") {
    auto value_at_T = [](double dt) {
        auto y = solve_time_domain(gaussian_problem(6.0, dt));
        return y.back();
    };
    const cplx ref = value_at_T(0.04 / 16.0);
    std::vector<double> hs{0.04, 0.02, 0.01}, errs;
    for (double dt : hs) errs.push_back(std::abs(value_at_T(dt) - ref));
    const double s1 = std::log(errs[0] / errs[1]) / std::log(2.0);
    const double s2 = std::log(errs[1] / errs[2]) / std::log(2.0);
    CHECK(s1 == doctest::Approx(2.0).epsilon(0.15));
    CHECK(s2 == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("cross-solver agreement and causality for the Maxwellian kernel") {
    PhaseGrid g = make_grid(64, 256, 8.0);
    auto eta = StationaryState::maxwellian(g, 1.0);
    KernelSpec spec{1, eta};
    VolterraProblem p;
    p.kernel = [spec](double t) { return kernel_K(spec, t); };
    p.forcing = [&](double t) { return eta->hat0(t); };
    p.T = 20.0;
    p.dt = 0.01;

    auto yt = solve_time_domain(p);
    auto sol = solve_fourier_domain(p, kernel_transform(spec));
    CHECK(sup_diff(sol.y, yt) <= 1e-5);
    CHECK(sol.causality_residual <= 1e-6);
}

TEST_CASE("validation of the time grid") {
    VolterraProblem p = gaussian_problem(1.0, 0.3); // 0.3 does not divide 1
    CHECK_THROWS_AS((void)solve_time_domain(p), validation_error);
    p.dt = 0.0;
    CHECK_THROWS_AS((void)solve_time_domain(p), validation_error);
    p.dt = 0.1;
    p.T = -1.0;
    CHECK_THROWS_AS((void)solve_time_domain(p), validation_error);
}

TEST_CASE("fourier solver refuses a kernel at the stability margin") {
    // K(t) = e^{-t} has khat(tau) = 1/(1 + i tau), so 1 - khat vanishes at 0
    VolterraProblem p;
    p.kernel = [](double t) { return std::exp(-t); };
    p.forcing = [](double t) { return cplx{std::exp(-t * t), 0.0}; };
    p.T = 10.0;
    p.dt = 0.05;
    auto kh = [](double tau) { return 1.0 / cplx{1.0, tau}; };
    CHECK_THROWS_AS((void)solve_fourier_domain(p, kh, 0.1), numeric_error);
}

TEST_CASE("linear prediction vanishes without k = +-1 content") {
    PhaseGrid g = make_grid(32, 128, 8.0);
    auto eta = StationaryState::maxwellian(g, 1.0);
    // build the k = +-2 rows directly so the +-1 rows are exactly zero
    MixedField g0(g);
    for (int j = 0; j < g.n_v; ++j) {
        const double w = 0.5 * std::exp(-g.v(j) * g.v(j) / 2.0);
        g0.row(2)[j] = w;
        g0.row(-2)[j] = w;
    }
    LinearPrediction lp = linear_prediction(eta, g0, make_scheme("strang", 0.1), 5.0);
    for (const cplx &z : lp.zeta) CHECK(std::abs(z) == 0.0);
}

TEST_CASE("discrete and continuous kernel arguments differ by O(h)") {
    PhaseGrid g = make_grid(64, 256, 8.0);
    auto eta = StationaryState::maxwellian(g, 1.0);
    MixedField g0 = MixedField::from_function(
        g, [](double x, double v) {
            return std::cos(x) * std::exp(-v * v / 2.0) / std::sqrt(two_pi);
        });
    const double T = 10.0;

    std::vector<double> hs{0.2, 0.1, 0.05}, diffs;
    for (double h : hs) {
        SchemeSpec sc = make_scheme("strang", h);
        LinearPrediction disc = linear_prediction(eta, g0, sc, T);
        LinearPrediction cont = linear_prediction(eta, g0, sc, T, true, 0.005);
        double d = 0.0;
        for (std::size_t m = 0; m < disc.times.size(); ++m) {
            const auto j = static_cast<std::size_t>(std::llround(disc.times[m] / 0.005));
            d = std::max(d, std::abs(disc.zeta[m] - cont.zeta[j]));
        }
        diffs.push_back(d);
    }
    const double num = std::log(diffs.front() / diffs.back());
    const double den = std::log(hs.front() / hs.back());
    CHECK(num / den == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("nonlinear runs approach the linear prediction at rate eps^2") {
    RunConfig cfg;
    cfg.n_x = 64;
    cfg.n_v = 256;
    cfg.L = 8.0;
    cfg.variant = "strang";
    cfg.h = 0.05;
    cfg.T = 20.0;
    cfg.perturbation = "multi-mode";
    cfg.seed = 1234;

    std::vector<double> epss{4e-3, 2e-3, 1e-3}, errs;
    for (double eps : epss) {
        cfg.epsilon = eps;
        Trajectory traj = run(cfg);
        LinearPrediction lp = linear_prediction(traj.eta, traj.g0, traj.scheme, cfg.T);
        double d = 0.0;
        for (std::size_t m = 0; m < lp.times.size(); ++m)
            d = std::max(d, std::abs(traj.Z_p1[m] - lp.zeta[m]));
        // unnormalized density mode discrepancy
        errs.push_back(eps * d);
    }
    // normalized discrepancy bound at the smallest epsilon
    CHECK(errs.back() / epss.back() <= 0.02);
    const double s1 = std::log(errs[0] / errs[1]) / std::log(2.0);
    const double s2 = std::log(errs[1] / errs[2]) / std::log(2.0);
    CHECK(s1 == doctest::Approx(2.0).epsilon(0.15));
    CHECK(s2 == doctest::Approx(2.0).epsilon(0.15));
}
