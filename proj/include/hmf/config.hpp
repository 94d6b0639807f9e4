#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hmf/errors.hpp"

namespace hmf {

// Fixed 17-significant-digit formatting; round-trips IEEE doubles exactly.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Flat key-value run configuration.  Unknown keys are rejected; parse errors
// carry the key name and line number.
struct RunConfig {
    // grid.*
    int n_x = 64;
    int n_v = 256;
    double L = 8.0;
    // scheme.*
    std::string variant = "strang"; // lie-tp | lie-pt | strang | strang-pt
    double h = 0.05;
    // sim.*
    double epsilon = 0.01;
    double T = 25.0;
    std::vector<double> snapshot_times;
    bool interaction = true;
    std::string perturbation = "single-mode"; // single-mode | multi-mode
    double recurrence_safety = 0.5;
    double blowup_factor = 1e6;
    // eta.*
    std::string eta_kind = "maxwellian"; // maxwellian | two_bump | file
    double eta_temperature = 1.0;
    double eta_separation = 2.0;
    std::string eta_file;
    // analysis.*
    double fit_t0 = 1.0;
    double fit_t1 = 20.0;
    std::string fit_model = "exponential"; // exponential | algebraic
    std::vector<double> checkpoints{5.0, 10.0, 20.0, 40.0};
    std::vector<double> ladder{0.2, 0.1, 0.05, 0.025};
    int norm_s = 5;
    double norm_nu = 1.0;
    int growth_sigma = 0;
    double kappa0 = 0.1;
    double tau_max = 50.0;
    // misc
    std::uint64_t seed = 1234;
    std::string output_dir = "out";
};

namespace detail {

inline std::string trim(const std::string &s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string &key, const std::string &val, int line) {
    try {
        std::size_t pos = 0;
        double d = std::stod(val, &pos);
        if (pos != val.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw validation_error("config: key " + key + " (line " + std::to_string(line) +
                               "): expected a number, got \"" + val + "\"");
    }
}

inline long long parse_int(const std::string &key, const std::string &val, int line) {
    try {
        std::size_t pos = 0;
        long long n = std::stoll(val, &pos);
        if (pos != val.size()) throw std::invalid_argument("");
        return n;
    } catch (...) {
        throw validation_error("config: key " + key + " (line " + std::to_string(line) +
                               "): expected an integer, got \"" + val + "\"");
    }
}

inline std::uint64_t parse_uint(const std::string &key, const std::string &val, int line) {
    try {
        std::size_t pos = 0;
        if (!val.empty() && val[0] == '-') throw std::invalid_argument("");
        std::uint64_t n = std::stoull(val, &pos);
        if (pos != val.size()) throw std::invalid_argument("");
        return n;
    } catch (...) {
        throw validation_error("config: key " + key + " (line " + std::to_string(line) +
                               "): expected an unsigned integer, got \"" + val + "\"");
    }
}

inline bool parse_bool(const std::string &key, const std::string &val, int line) {
    if (val == "true" || val == "on" || val == "1") return true;
    if (val == "false" || val == "off" || val == "0") return false;
    throw validation_error("config: key " + key + " (line " + std::to_string(line) +
                           "): expected a boolean, got \"" + val + "\"");
}

inline std::vector<double> parse_list(const std::string &key, const std::string &val, int line) {
    std::vector<double> out;
    if (trim(val).empty()) return out;
    std::stringstream ss(val);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item), line));
    return out;
}

inline std::string join_list(const std::vector<double> &v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += fmt17(v[i]);
    }
    return s;
}

} // namespace detail

// Applies one "key = value" assignment to the config; line is for diagnostics.
inline void apply_config_entry(RunConfig &c, const std::string &key, const std::string &value,
                               int line = 0) {
    using namespace detail;
    const std::string v = trim(value);
    if (key == "grid.n_x") c.n_x = static_cast<int>(parse_int(key, v, line));
    else if (key == "grid.n_v") c.n_v = static_cast<int>(parse_int(key, v, line));
    else if (key == "grid.L") c.L = parse_double(key, v, line);
    else if (key == "scheme.variant") c.variant = v;
    else if (key == "scheme.h") c.h = parse_double(key, v, line);
    else if (key == "sim.epsilon") c.epsilon = parse_double(key, v, line);
    else if (key == "sim.T") c.T = parse_double(key, v, line);
    else if (key == "sim.snapshot_times") c.snapshot_times = parse_list(key, v, line);
    else if (key == "sim.interaction") c.interaction = parse_bool(key, v, line);
    else if (key == "sim.perturbation") c.perturbation = v;
    else if (key == "sim.recurrence_safety") c.recurrence_safety = parse_double(key, v, line);
    else if (key == "sim.blowup_factor") c.blowup_factor = parse_double(key, v, line);
    else if (key == "eta.kind") c.eta_kind = v;
    else if (key == "eta.temperature") c.eta_temperature = parse_double(key, v, line);
    else if (key == "eta.separation") c.eta_separation = parse_double(key, v, line);
    else if (key == "eta.file") c.eta_file = v;
    else if (key == "analysis.fit_t0") c.fit_t0 = parse_double(key, v, line);
    else if (key == "analysis.fit_t1") c.fit_t1 = parse_double(key, v, line);
    else if (key == "analysis.fit_model") c.fit_model = v;
    else if (key == "analysis.checkpoints") c.checkpoints = parse_list(key, v, line);
    else if (key == "analysis.ladder") c.ladder = parse_list(key, v, line);
    else if (key == "analysis.norm_s") c.norm_s = static_cast<int>(parse_int(key, v, line));
    else if (key == "analysis.norm_nu") c.norm_nu = parse_double(key, v, line);
    else if (key == "analysis.growth_sigma") c.growth_sigma = static_cast<int>(parse_int(key, v, line));
    else if (key == "analysis.kappa0") c.kappa0 = parse_double(key, v, line);
    else if (key == "analysis.tau_max") c.tau_max = parse_double(key, v, line);
    else if (key == "seed") c.seed = parse_uint(key, v, line);
    else if (key == "output.dir") c.output_dir = v;
    else
        throw validation_error("config: unknown key \"" + key + "\" (line " + std::to_string(line) + ")");
}

inline void validate_config(const RunConfig &c) {
    auto fail = [](const std::string &m) { throw validation_error("config: " + m); };
    if (c.n_x < 4 || c.n_x % 2) fail("grid.n_x must be even and >= 4");
    if (c.n_v < 4 || c.n_v % 2) fail("grid.n_v must be even and >= 4");
    if (!(c.L > 0.0)) fail("grid.L must be positive");
    if (c.variant != "lie-tp" && c.variant != "lie-pt" && c.variant != "strang" &&
        c.variant != "strang-pt")
        fail("scheme.variant must be one of lie-tp, lie-pt, strang, strang-pt");
    if (!(c.h > 0.0)) fail("scheme.h must be positive");
    if (!(c.epsilon >= 0.0)) fail("sim.epsilon must be nonnegative");
    if (!(c.T > 0.0)) fail("sim.T must be positive");
    if (c.perturbation != "single-mode" && c.perturbation != "multi-mode")
        fail("sim.perturbation must be single-mode or multi-mode");
    if (!(c.blowup_factor > 1.0)) fail("sim.blowup_factor must exceed 1");
    if (c.eta_kind != "maxwellian" && c.eta_kind != "two_bump" && c.eta_kind != "file")
        fail("eta.kind must be maxwellian, two_bump or file");
    if (c.eta_kind != "file" && !(c.eta_temperature > 0.0)) fail("eta.temperature must be positive");
    if (c.eta_kind == "file" && c.eta_file.empty()) fail("eta.file required when eta.kind = file");
    if (!(c.fit_t1 > c.fit_t0)) fail("analysis.fit_t1 must exceed analysis.fit_t0");
    if (c.fit_model != "exponential" && c.fit_model != "algebraic")
        fail("analysis.fit_model must be exponential or algebraic");
    if (c.ladder.size() < 3) fail("analysis.ladder needs at least 3 entries");
    for (double hv : c.ladder)
        if (!(hv > 0.0)) fail("analysis.ladder entries must be positive");
    if (c.checkpoints.size() < 3) fail("analysis.checkpoints needs at least 3 entries");
    if (c.norm_s < 0 || c.norm_s > 8) fail("analysis.norm_s out of range [0, 8]");
    if (!(c.norm_nu >= 0.0)) fail("analysis.norm_nu must be nonnegative");
    if (c.growth_sigma < 0) fail("analysis.growth_sigma must be nonnegative");
    if (!(c.kappa0 > 0.0)) fail("analysis.kappa0 must be positive");
    if (!(c.tau_max > 0.0)) fail("analysis.tau_max must be positive");
    if (c.output_dir.empty()) fail("output.dir must not be empty");
}

// Canonical serialization: fixed key order, 17-significant-digit numbers.
// parse(canonical_text(c)) == c and the text hashes deterministically.
inline std::string canonical_text(const RunConfig &c) {
    using detail::join_list;
    std::ostringstream os;
    os << "grid.n_x = " << c.n_x << "\n";
    os << "grid.n_v = " << c.n_v << "\n";
    os << "grid.L = " << fmt17(c.L) << "\n";
    os << "scheme.variant = " << c.variant << "\n";
    os << "scheme.h = " << fmt17(c.h) << "\n";
    os << "sim.epsilon = " << fmt17(c.epsilon) << "\n";
    os << "sim.T = " << fmt17(c.T) << "\n";
    os << "sim.snapshot_times = " << join_list(c.snapshot_times) << "\n";
    os << "sim.interaction = " << (c.interaction ? "true" : "false") << "\n";
    os << "sim.perturbation = " << c.perturbation << "\n";
    os << "sim.recurrence_safety = " << fmt17(c.recurrence_safety) << "\n";
    os << "sim.blowup_factor = " << fmt17(c.blowup_factor) << "\n";
    os << "eta.kind = " << c.eta_kind << "\n";
    os << "eta.temperature = " << fmt17(c.eta_temperature) << "\n";
    os << "eta.separation = " << fmt17(c.eta_separation) << "\n";
    os << "eta.file = " << c.eta_file << "\n";
    os << "analysis.fit_t0 = " << fmt17(c.fit_t0) << "\n";
    os << "analysis.fit_t1 = " << fmt17(c.fit_t1) << "\n";
    os << "analysis.fit_model = " << c.fit_model << "\n";
    os << "analysis.checkpoints = " << join_list(c.checkpoints) << "\n";
    os << "analysis.ladder = " << join_list(c.ladder) << "\n";
    os << "analysis.norm_s = " << c.norm_s << "\n";
    os << "analysis.norm_nu = " << fmt17(c.norm_nu) << "\n";
    os << "analysis.growth_sigma = " << c.growth_sigma << "\n";
    os << "analysis.kappa0 = " << fmt17(c.kappa0) << "\n";
    os << "analysis.tau_max = " << fmt17(c.tau_max) << "\n";
    os << "seed = " << c.seed << "\n";
    os << "output.dir = " << c.output_dir << "\n";
    return os.str();
}

inline RunConfig parse_config_text(const std::string &text) {
    RunConfig c;
    std::istringstream is(text);
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        std::string s = raw;
        std::size_t hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = detail::trim(s);
        if (s.empty()) continue;
        std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw validation_error("config: line " + std::to_string(line) + ": expected key = value");
        std::string key = detail::trim(s.substr(0, eq));
        std::string val = detail::trim(s.substr(eq + 1));
        apply_config_entry(c, key, val, line);
    }
    return c;
}

inline RunConfig parse_config_file(const std::string &path) {
    std::ifstream is(path);
    if (!is) throw validation_error("config: cannot open " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str());
}

// "key=value" command-line override.
inline void apply_override(RunConfig &c, const std::string &assignment) {
    std::size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw validation_error("override must be key=value: " + assignment);
    apply_config_entry(c, detail::trim(assignment.substr(0, eq)),
                       detail::trim(assignment.substr(eq + 1)), 0);
}

// FNV-1a over the canonical serialization.
inline std::uint64_t config_hash(const RunConfig &c) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : canonical_text(c)) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace hmf
