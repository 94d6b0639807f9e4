#pragma once

#include <chrono>
#include <complex>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hmf/analysis.hpp"
#include "hmf/config.hpp"
#include "hmf/convergence.hpp"
#include "hmf/penrose.hpp"

namespace hmf {

inline void ensure_dir(const std::string &dir) { std::filesystem::create_directories(dir); }

inline std::ofstream open_out(const std::string &path) {
    std::ofstream os(path);
    if (!os) throw validation_error("cannot open for writing: " + path);
    return os;
}

// series.csv: one row per step of a finished run.
inline void write_series_csv(const std::string &path, const Trajectory &traj) {
    auto os = open_out(path);
    os << "t,re_zeta_p1,im_zeta_p1,abs_zeta_p1,re_zeta_m1,im_zeta_m1,norm_H1,norm_Hs,mass,l2\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        os << fmt17(traj.times[i]) << ',' << fmt17(traj.zeta_p1[i].real()) << ','
           << fmt17(traj.zeta_p1[i].imag()) << ',' << fmt17(std::abs(traj.zeta_p1[i])) << ','
           << fmt17(traj.zeta_m1[i].real()) << ',' << fmt17(traj.zeta_m1[i].imag()) << ','
           << fmt17(traj.norm_h1[i]) << ',' << fmt17(traj.norm_hs[i]) << ','
           << fmt17(traj.mass[i]) << ',' << fmt17(traj.l2[i]) << '\n';
    }
}

struct SeriesData {
    std::vector<double> times;
    std::vector<double> abs_zeta_p1;
};

inline SeriesData read_series_csv(const std::string &path) {
    std::ifstream is(path);
    if (!is) throw validation_error("cannot open series file: " + path);
    std::string header;
    if (!std::getline(is, header)) throw validation_error("empty series file: " + path);

    int col_t = -1, col_abs = -1, col = 0;
    std::stringstream hs(header);
    std::string name;
    while (std::getline(hs, name, ',')) {
        if (name == "t") col_t = col;
        if (name == "abs_zeta_p1") col_abs = col;
        ++col;
    }
    if (col_t < 0 || col_abs < 0)
        throw validation_error("series file lacks t/abs_zeta_p1 columns: " + path);

    SeriesData out;
    std::string line;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        std::stringstream ls(line);
        std::string cell;
        int c = 0;
        double t = 0.0, a = 0.0;
        while (std::getline(ls, cell, ',')) {
            if (c == col_t) t = detail::parse_double("t", detail::trim(cell), lineno);
            if (c == col_abs) a = detail::parse_double("abs_zeta_p1", detail::trim(cell), lineno);
            ++c;
        }
        out.times.push_back(t);
        out.abs_zeta_p1.push_back(a);
    }
    return out;
}

inline void write_damping_report(const std::string &path, std::pair<double, double> window,
                                 const std::string &model, const FitResult &fit) {
    auto os = open_out(path);
    os << "t0,t1,model,rate_or_exponent,frequency,r_squared\n";
    os << fmt17(window.first) << ',' << fmt17(window.second) << ',' << model << ','
       << fmt17(fit.rate_or_exponent) << ',' << fmt17(fit.frequency) << ','
       << fmt17(fit.r_squared) << '\n';
}

inline void write_scatter_report(const std::string &path, const ScatterReport &rep) {
    auto os = open_out(path);
    os << "t,error,fitted_exponent\n";
    for (const auto &[t, err] : rep.cauchy_errors)
        os << fmt17(t) << ',' << fmt17(err) << ',' << fmt17(rep.fitted_decay_exponent) << '\n';
}

inline void write_penrose_report(const std::string &path, const PenroseReport &rep) {
    auto os = open_out(path);
    os << "tau,re_one_minus_khat,im_one_minus_khat,modulus\n";
    for (const auto &[tau, w] : rep.samples)
        os << fmt17(tau) << ',' << fmt17(w.real()) << ',' << fmt17(w.imag()) << ','
           << fmt17(std::abs(w)) << '\n';
    os << "# kappa = " << fmt17(rep.kappa) << '\n';
    os << "# zero_count = " << rep.zero_count << '\n';
    os << "# winding = " << fmt17(rep.winding) << '\n';
    os << "# pass = " << (rep.pass ? "true" : "false") << '\n';
}

inline void write_volterra_report(const std::string &path, const std::vector<double> &times,
                                  const std::vector<cplx> &y, const std::string &method, double dt,
                                  double causality_residual) {
    auto os = open_out(path);
    os << "t,re_y,im_y,abs_y\n";
    for (std::size_t i = 0; i < times.size(); ++i)
        os << fmt17(times[i]) << ',' << fmt17(y[i].real()) << ',' << fmt17(y[i].imag()) << ','
           << fmt17(std::abs(y[i])) << '\n';
    os << "# method = " << method << '\n';
    os << "# dt = " << fmt17(dt) << '\n';
    os << "# causality_residual = " << fmt17(causality_residual) << '\n';
}

inline void write_order_report(const std::string &path, const OrderReport &rep) {
    auto os = open_out(path);
    os << "h,error\n";
    for (std::size_t i = 0; i < rep.h_values.size(); ++i)
        os << fmt17(rep.h_values[i]) << ',' << fmt17(rep.errors[i]) << '\n';
    os << "# slope = " << fmt17(rep.slope) << '\n';
    os << "# r_squared = " << fmt17(rep.r_squared) << '\n';
    os << "# monotone = " << (rep.monotone ? "true" : "false") << '\n';
    os << "# reference = " << rep.reference << '\n';
}

inline std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// manifest.txt lists the deterministic artifacts and the config hash; the
// timestamp lives in a separate sidecar so CSV bodies stay byte-identical.
inline void write_manifest(const std::string &dir, const RunConfig &cfg,
                           const std::vector<std::string> &artifacts) {
    auto os = open_out(dir + "/manifest.txt");
    os << "config_hash " << hash_hex(config_hash(cfg)) << '\n';
    for (const auto &a : artifacts) os << "artifact " << a << '\n';
    auto cfg_os = open_out(dir + "/config.echo.txt");
    cfg_os << canonical_text(cfg);
    auto meta = open_out(dir + "/meta.txt");
    const auto now = std::chrono::system_clock::now();
    meta << "generated_unix "
         << std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count() << '\n';
}

} // namespace hmf
