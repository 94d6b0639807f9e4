#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "hmf/config.hpp"
#include "hmf/io.hpp"

using namespace hmf;

namespace {

std::string slurp(const std::string &path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(bool(is));
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("defaults validate and an empty file yields defaults") {
    RunConfig def;
    CHECK_NOTHROW(validate_config(def));

    RunConfig parsed = parse_config_text("# nothing here\n\n");
    CHECK(canonical_text(parsed) == canonical_text(def));
    CHECK(config_hash(parsed) == config_hash(def));
    CHECK(def.n_x == 64);
    CHECK(def.n_v == 256);
    CHECK(def.L == 8.0);
    CHECK(def.variant == "strang");
    CHECK(def.h == 0.05);
    CHECK(def.epsilon == 0.01);
}

TEST_CASE("parsing assignments, comments and lists") {
    RunConfig c = parse_config_text(
        "grid.n_x = 32   # trailing comment\n"
        "scheme.variant = lie-pt\n"
        "sim.snapshot_times = 1, 2.5, 10\n"
        "sim.interaction = false\n"
        "eta.kind = two_bump\n"
        "eta.separation = 2.0\n"
        "seed = 99\n");
    CHECK(c.n_x == 32);
    CHECK(c.variant == "lie-pt");
    REQUIRE(c.snapshot_times.size() == 3);
    CHECK(c.snapshot_times[1] == 2.5);
    CHECK(c.interaction == false);
    CHECK(c.eta_kind == "two_bump");
    CHECK(c.seed == 99);
}

TEST_CASE("errors carry the offending key and line") {
    try {
        (void)parse_config_text("grid.n_x = 64\nbogus.key = 1\n");
        FAIL("expected a validation_error");
    } catch (const validation_error &e) {
        const std::string msg = e.what();
        CHECK(msg.find("bogus.key") != std::string::npos);
        CHECK(msg.find("line 2") != std::string::npos);
    }

    try {
        (void)parse_config_text("scheme.h = abc\n");
        FAIL("expected a validation_error");
    } catch (const validation_error &e) {
        CHECK(std::string(e.what()).find("scheme.h") != std::string::npos);
    }

    CHECK_THROWS_AS((void)parse_config_text("no equals sign here\n"), validation_error);

    RunConfig bad;
    bad.h = -0.1;
    CHECK_THROWS_AS(validate_config(bad), validation_error);
    bad = RunConfig{};
    bad.variant = "euler";
    CHECK_THROWS_AS(validate_config(bad), validation_error);
    bad = RunConfig{};
    bad.ladder = {0.1, 0.05};
    CHECK_THROWS_AS(validate_config(bad), validation_error);
}

TEST_CASE("overrides win over file values") {
    RunConfig c = parse_config_text("sim.epsilon = 0.02\nsim.T = 10\n");
    apply_override(c, "sim.epsilon=0.005");
    apply_override(c, "output.dir=elsewhere");
    CHECK(c.epsilon == 0.005);
    CHECK(c.T == 10.0);
    CHECK(c.output_dir == "elsewhere");
    CHECK_THROWS_AS(apply_override(c, "not-an-assignment"), validation_error);
}

TEST_CASE("canonical text round-trips exactly") {
    RunConfig c;
    c.h = 0.1 / 3.0; // not representable in short decimal
    c.epsilon = 1e-3;
    c.snapshot_times = {0.1, 0.2, 0.30000000000000004};
    c.eta_temperature = std::nextafter(1.0, 2.0);
    c.seed = 18446744073709551615ull;

    RunConfig back = parse_config_text(canonical_text(c));
    CHECK(back.h == c.h);
    CHECK(back.epsilon == c.epsilon);
    CHECK(back.eta_temperature == c.eta_temperature);
    CHECK(back.snapshot_times == c.snapshot_times);
    CHECK(back.seed == c.seed);
    CHECK(canonical_text(back) == canonical_text(c));
}

TEST_CASE("config hash is stable and field-sensitive") {
    RunConfig a, b;
    CHECK(config_hash(a) == config_hash(b));
    b.seed = a.seed + 1;
    CHECK(config_hash(a) != config_hash(b));
    b = a;
    b.h = 0.025;
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("series csv writes deterministically and reads back") {
    RunConfig cfg;
    cfg.n_x = 32;
    cfg.n_v = 64;
    cfg.T = 2.0;
    Trajectory traj = run(cfg);

    const char *p1 = "series_a.csv", *p2 = "series_b.csv";
    write_series_csv(p1, traj);
    write_series_csv(p2, traj);
    CHECK(slurp(p1) == slurp(p2));

    SeriesData data = read_series_csv(p1);
    REQUIRE(data.times.size() == traj.times.size());
    for (std::size_t i = 0; i < data.times.size(); ++i) {
        CHECK(data.times[i] == traj.times[i]);
        CHECK(data.abs_zeta_p1[i] == std::abs(traj.zeta_p1[i]));
    }
    std::remove(p1);
    std::remove(p2);

    CHECK_THROWS_AS((void)read_series_csv("missing.csv"), validation_error);
}

TEST_CASE("manifest records the config hash and artifacts") {
    RunConfig cfg;
    cfg.output_dir = "manifest_test_out";
    ensure_dir(cfg.output_dir);
    write_manifest(cfg.output_dir, cfg, {"a.csv", "b.bin"});

    const std::string manifest = slurp(cfg.output_dir + "/manifest.txt");
    CHECK(manifest.find(hash_hex(config_hash(cfg))) != std::string::npos);
    CHECK(manifest.find("a.csv") != std::string::npos);
    CHECK(manifest.find("b.bin") != std::string::npos);

    const std::string echo = slurp(cfg.output_dir + "/config.echo.txt");
    CHECK(echo == canonical_text(cfg));

    std::remove((cfg.output_dir + "/manifest.txt").c_str());
    std::remove((cfg.output_dir + "/config.echo.txt").c_str());
    std::remove((cfg.output_dir + "/meta.txt").c_str());
    std::remove(cfg.output_dir.c_str());
}
