// hmfdamp: spectral Vlasov-HMF splitting simulator and analysis toolkit.
//
// Subcommands: run, penrose, converge, volterra, dampfit, scatter.
// Exit codes: 0 success, 1 validation error, 2 numerical failure.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "hmf/hmf.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;
};

hmf::RunConfig load_config(const CommonOpts &opts) {
    hmf::RunConfig cfg;
    if (!opts.config_path.empty()) cfg = hmf::parse_config_file(opts.config_path);
    for (const auto &ov : opts.overrides) hmf::apply_override(cfg, ov);
    hmf::validate_config(cfg);
    return cfg;
}

void add_common(CLI::App *cmd, CommonOpts &opts) {
    cmd->add_option("-c,--config", opts.config_path, "configuration file (flat key = value)");
    cmd->add_option("-s,--set", opts.overrides, "override, key=value (repeatable)");
}

std::string snapshot_name(std::size_t idx) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snapshot_%03zu.bin", idx);
    return buf;
}

int cmd_run(const hmf::RunConfig &cfg) {
    hmf::Trajectory traj = hmf::run(cfg);
    hmf::ensure_dir(cfg.output_dir);
    std::vector<std::string> artifacts{"series.csv"};
    hmf::write_series_csv(cfg.output_dir + "/series.csv", traj);
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        const std::string name = snapshot_name(i);
        hmf::save_field(cfg.output_dir + "/" + name, traj.snapshots[i].second);
        artifacts.push_back(name);
    }
    hmf::write_manifest(cfg.output_dir, cfg, artifacts);
    std::cout << "run: " << traj.times.size() << " samples, final |zeta_1| = "
              << hmf::fmt17(std::abs(traj.zeta_p1.back())) << "\n";
    return 0;
}

int cmd_penrose(const hmf::RunConfig &cfg) {
    const hmf::PhaseGrid g = hmf::make_grid(cfg.n_x, cfg.n_v, cfg.L);
    auto eta = hmf::make_stationary(cfg, g);
    hmf::PenroseReport rep = hmf::penrose_check(eta, cfg.kappa0, cfg.tau_max);
    hmf::ensure_dir(cfg.output_dir);
    hmf::write_penrose_report(cfg.output_dir + "/penrose_report.csv", rep);
    hmf::write_manifest(cfg.output_dir, cfg, {"penrose_report.csv"});
    std::cout << "penrose: kappa = " << hmf::fmt17(rep.kappa) << ", zero_count = " << rep.zero_count
              << ", pass = " << (rep.pass ? "true" : "false") << "\n";

    try {
        hmf::RootResult root = hmf::landau_root(eta);
        std::cout << "landau_root: tau* = " << hmf::fmt17(root.tau.real()) << " + "
                  << hmf::fmt17(root.tau.imag()) << "i (rate " << hmf::fmt17(root.tau.imag())
                  << ", frequency " << hmf::fmt17(root.tau.real()) << ")\n";
        if (rep.pass && root.tau.imag() <= 0.0) {
            std::cerr << "inconsistency: state passes the Penrose check but the nearest root is "
                         "not in the upper half-plane\n";
            return 2;
        }
    } catch (const hmf::numeric_error &e) {
        std::cout << "landau_root: " << e.what() << "\n";
    }
    return 0;
}

int cmd_converge(const hmf::RunConfig &cfg) {
    hmf::LadderSpec spec;
    spec.h_values = cfg.ladder;
    spec.T = cfg.T;
    spec.variant = cfg.variant;
    spec.base = cfg;

    hmf::ensure_dir(cfg.output_dir);
    hmf::OrderReport order = hmf::order_study(spec);
    hmf::write_order_report(cfg.output_dir + "/order_report.csv", order);
    std::cout << "order_study (" << cfg.variant << "): slope = " << hmf::fmt17(order.slope)
              << (order.monotone ? "" : " [inconclusive: non-monotone errors]") << "\n";

    hmf::OrderReport limit = hmf::limit_state_study(spec);
    hmf::write_order_report(cfg.output_dir + "/limit_report.csv", limit);
    std::cout << "limit_state_study: slope = " << hmf::fmt17(limit.slope)
              << (limit.monotone ? "" : " [inconclusive: non-monotone errors]") << "\n";

    hmf::GrowthReport growth = hmf::growth_study(spec, cfg.growth_sigma);
    {
        auto os = hmf::open_out(cfg.output_dir + "/growth_report.csv");
        os << "T,error\n";
        for (std::size_t i = 0; i < growth.horizons.size(); ++i)
            os << hmf::fmt17(growth.horizons[i]) << ',' << hmf::fmt17(growth.errors[i]) << '\n';
        os << "# sigma = " << growth.sigma << '\n';
        os << "# h = " << hmf::fmt17(growth.h) << '\n';
        os << "# growth_exponent = " << hmf::fmt17(growth.growth_exponent) << '\n';
    }
    std::cout << "growth_study (sigma = " << cfg.growth_sigma
              << "): exponent = " << hmf::fmt17(growth.growth_exponent) << "\n";

    hmf::write_manifest(cfg.output_dir, cfg,
                        {"order_report.csv", "limit_report.csv", "growth_report.csv"});
    return 0;
}

int cmd_volterra(const hmf::RunConfig &cfg) {
    const hmf::PhaseGrid g = hmf::make_grid(cfg.n_x, cfg.n_v, cfg.L);
    auto eta = hmf::make_stationary(cfg, g);
    hmf::KernelSpec spec{1, eta};

    hmf::VolterraProblem p;
    p.kernel = [spec](double t) { return hmf::kernel_K(spec, t); };
    p.forcing = [eta](double t) { return eta->hat0(t); };
    p.T = cfg.T;
    p.dt = cfg.h;

    auto y_time = hmf::solve_time_domain(p);
    auto sol = hmf::solve_fourier_domain(p, hmf::kernel_transform(spec), cfg.kappa0);
    double sup_diff = 0.0;
    for (std::size_t i = 0; i < y_time.size(); ++i)
        sup_diff = std::max(sup_diff, std::abs(y_time[i] - sol.y[i]));

    std::vector<double> times(y_time.size());
    for (std::size_t i = 0; i < times.size(); ++i) times[i] = double(i) * p.dt;

    hmf::ensure_dir(cfg.output_dir);
    hmf::write_volterra_report(cfg.output_dir + "/volterra_report.csv", times, y_time,
                               "product-trapezoidal", p.dt, 0.0);
    hmf::write_volterra_report(cfg.output_dir + "/volterra_report_fourier.csv", times, sol.y,
                               "fourier-resolvent", p.dt, sol.causality_residual);
    hmf::write_manifest(cfg.output_dir, cfg,
                        {"volterra_report.csv", "volterra_report_fourier.csv"});
    std::cout << "volterra: solver sup-difference = " << hmf::fmt17(sup_diff)
              << ", causality residual = " << hmf::fmt17(sol.causality_residual) << "\n";
    return 0;
}

int cmd_dampfit(const hmf::RunConfig &cfg, const std::string &series_path) {
    const std::string path =
        series_path.empty() ? cfg.output_dir + "/series.csv" : series_path;
    hmf::SeriesData data = hmf::read_series_csv(path);
    const auto model = cfg.fit_model == "exponential" ? hmf::FitModel::exponential
                                                      : hmf::FitModel::algebraic;
    hmf::FitResult fit =
        hmf::fit_damping(data.times, data.abs_zeta_p1, {cfg.fit_t0, cfg.fit_t1}, model);
    hmf::ensure_dir(cfg.output_dir);
    hmf::write_damping_report(cfg.output_dir + "/damping_report.csv", {cfg.fit_t0, cfg.fit_t1},
                              cfg.fit_model, fit);
    hmf::write_manifest(cfg.output_dir, cfg, {"damping_report.csv"});
    std::cout << "dampfit: rate_or_exponent = " << hmf::fmt17(fit.rate_or_exponent)
              << ", frequency = " << hmf::fmt17(fit.frequency)
              << ", r2 = " << hmf::fmt17(fit.r_squared) << "\n";
    return 0;
}

int cmd_scatter(const hmf::RunConfig &cfg) {
    hmf::RunConfig rc = cfg;
    rc.snapshot_times = cfg.checkpoints;
    double maxcp = 0.0;
    for (double t : rc.snapshot_times) maxcp = std::max(maxcp, t);
    rc.T = std::max(rc.T, maxcp);
    hmf::Trajectory traj = hmf::run(rc);
    hmf::ScatterReport rep = hmf::scattering_limit(traj, 1, 1.0);

    hmf::ensure_dir(cfg.output_dir);
    hmf::write_scatter_report(cfg.output_dir + "/scatter_report.csv", rep);
    {
        auto os = hmf::open_out(cfg.output_dir + "/eta_inf.csv");
        os << "v,eta_inf\n";
        for (int j = 0; j < traj.grid.n_v; ++j)
            os << hmf::fmt17(traj.grid.v(j)) << ',' << hmf::fmt17(rep.eta_inf[j]) << '\n';
    }
    hmf::write_manifest(cfg.output_dir, cfg, {"scatter_report.csv", "eta_inf.csv"});
    std::cout << "scatter: fitted decay exponent = " << hmf::fmt17(rep.fitted_decay_exponent)
              << "\n";
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Vlasov-HMF splitting simulator and Landau damping analysis"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string series_path;

    CLI::App *c_run = app.add_subcommand("run", "time-step a configured simulation");
    CLI::App *c_pen = app.add_subcommand("penrose", "stability check and Landau root");
    CLI::App *c_con = app.add_subcommand("converge", "order, limit-state and growth studies");
    CLI::App *c_vol = app.add_subcommand("volterra", "linear Volterra solver cross-check");
    CLI::App *c_fit = app.add_subcommand("dampfit", "fit damping on an emitted series.csv");
    CLI::App *c_sca = app.add_subcommand("scatter", "scattering limit and weak limit profile");
    for (CLI::App *c : {c_run, c_pen, c_con, c_vol, c_fit, c_sca}) add_common(c, opts);
    c_fit->add_option("--series", series_path, "series.csv to fit (default: output.dir/series.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const hmf::RunConfig cfg = load_config(opts);
        if (c_run->parsed()) return cmd_run(cfg);
        if (c_pen->parsed()) return cmd_penrose(cfg);
        if (c_con->parsed()) return cmd_converge(cfg);
        if (c_vol->parsed()) return cmd_volterra(cfg);
        if (c_fit->parsed()) return cmd_dampfit(cfg, series_path);
        if (c_sca->parsed()) return cmd_scatter(cfg);
    } catch (const hmf::validation_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const hmf::numeric_error &e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
