#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>

#include "hmf/convergence.hpp"

using namespace hmf;

namespace {

RunConfig small_base() {
    RunConfig cfg;
    cfg.n_x = 32;
    cfg.n_v = 64;
    cfg.L = 8.0;
    cfg.epsilon = 0.01;
    cfg.checkpoints = {2.0, 4.0, 8.0};
    return cfg;
}

LadderSpec small_spec(const std::string &variant) {
    LadderSpec spec;
    spec.h_values = {0.2, 0.1, 0.05};
    spec.T = 4.0;
    spec.variant = variant;
    spec.base = small_base();
    return spec;
}

} // namespace

TEST_CASE("worker_cap honors the environment") {
    setenv("HMFDAMP_THREADS", "3", 1);
    CHECK(worker_cap() == 3);
    setenv("HMFDAMP_THREADS", "0", 1);
    CHECK(worker_cap() >= 1);
    setenv("HMFDAMP_THREADS", "junk", 1);
    CHECK(worker_cap() >= 1);
    unsetenv("HMFDAMP_THREADS");
    CHECK(worker_cap() >= 1);
}

TEST_CASE("run_batch matches sequential runs bitwise") {
    RunConfig cfg = small_base();
    cfg.T = 2.0;
    cfg.perturbation = "multi-mode";
    RunConfig cfg2 = cfg;
    cfg2.variant = "lie-tp";

    std::vector<Trajectory> batch = run_batch({cfg, cfg2, cfg});
    Trajectory seq = run(cfg);

    REQUIRE(batch[0].times.size() == seq.times.size());
    for (std::size_t i = 0; i < seq.times.size(); ++i) {
        CHECK(batch[0].zeta_p1[i] == seq.zeta_p1[i]);
        CHECK(batch[2].zeta_p1[i] == batch[0].zeta_p1[i]);
    }
    for (int k = -cfg.n_x / 2; k < cfg.n_x / 2; ++k)
        for (int j = 0; j < cfg.n_v; ++j)
            CHECK(batch[0].f_final.at(k, j) == seq.f_final.at(k, j));
    // the lie-tp run really differs
    CHECK(std::abs(batch[1].zeta_p1.back() - seq.zeta_p1.back()) > 0.0);
}

TEST_CASE("ladder validation") {
    LadderSpec spec = small_spec("strang");
    spec.h_values = {0.2, 0.1};
    CHECK_THROWS_AS((void)order_study(spec), validation_error);
    spec.h_values = {0.1, 0.1, 0.05};
    CHECK_THROWS_AS((void)order_study(spec), validation_error);
    spec.h_values = {0.2, 0.1, 0.05};
    spec.base.epsilon = 0.01;
    CHECK_NOTHROW((void)growth_study(spec, -0 * 0)); // sigma 0 allowed
    CHECK_THROWS_AS((void)growth_study(spec, -1), validation_error);
}

TEST_CASE("missing snapshots are detected") {
    RunConfig cfg = small_base();
    cfg.T = 2.0;
    cfg.snapshot_times = {1.0};
    Trajectory traj = run(cfg);
    CHECK(&detail::snapshot_at(traj, 1.0) != nullptr);
    CHECK_THROWS_AS((void)detail::snapshot_at(traj, 1.5), numeric_error);
}

TEST_CASE("stationary data makes every study exact") {
    LadderSpec spec = small_spec("lie-tp");
    spec.base.epsilon = 0.0;
    OrderReport order = order_study(spec);
    for (double e : order.errors) CHECK(e <= 1e-12);
    CHECK(order.monotone);

    OrderReport limit = limit_state_study(spec);
    for (double e : limit.errors) CHECK(e <= 1e-12);

    GrowthReport growth = growth_study(spec, 0);
    for (double e : growth.errors) CHECK(e == 0.0);
    CHECK(growth.growth_exponent == 0.0);
}

TEST_CASE("order study slopes at desk scale") {
    OrderReport lie = order_study(small_spec("lie-tp"));
    CHECK(lie.monotone);
    CHECK(lie.slope == doctest::Approx(1.0).epsilon(0.3));

    OrderReport lie_pt = order_study(small_spec("lie-pt"));
    CHECK(lie_pt.slope == doctest::Approx(1.0).epsilon(0.3));

    OrderReport strang = order_study(small_spec("strang"));
    CHECK(strang.monotone);
    CHECK(strang.slope == doctest::Approx(2.0).epsilon(0.2));

    // deterministic: a repeat reproduces the errors bitwise
    OrderReport again = order_study(small_spec("strang"));
    for (std::size_t i = 0; i < strang.errors.size(); ++i)
        CHECK(again.errors[i] == strang.errors[i]);
}

TEST_CASE("limit state study slopes at desk scale") {
    OrderReport lie = limit_state_study(small_spec("lie-tp"));
    CHECK(lie.slope == doctest::Approx(1.0).epsilon(0.3));
    OrderReport strang = limit_state_study(small_spec("strang"));
    CHECK(strang.slope == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("growth study is flat in L2") {
    LadderSpec spec = small_spec("lie-tp");
    GrowthReport rep = growth_study(spec, 0);
    REQUIRE(rep.errors.size() == 3);
    CHECK(rep.errors.front() > 0.0);
    CHECK(rep.errors.back() <= 2.0 * rep.errors.front());
}
