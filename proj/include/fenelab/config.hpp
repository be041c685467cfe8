#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fenelab/params.hpp"

namespace fenelab::harness {

enum class RunMode { Simulate, Picard, LinearDecay, Spectrum, Inequalities };

inline const char* mode_name(RunMode m) {
    switch (m) {
    case RunMode::Simulate: return "simulate";
    case RunMode::Picard: return "picard";
    case RunMode::LinearDecay: return "linear-decay";
    case RunMode::Spectrum: return "spectrum";
    case RunMode::Inequalities: return "inequalities";
    }
    return "?";
}

/// Fully resolved run configuration. Every key has a documented default; the
/// effective values are echoed next to the run outputs so defaults stay
/// auditable.
struct RunConfig {
    ModelParams model;

    // [grid]
    int n_x = 32;
    double box_length = 2.0 * 3.14159265358979323846;
    int n_r = 16;
    int n_theta = 16;

    // [time]
    double dt = 0.01;
    double t_end = 2.0;
    int output_stride = 5;
    double balance_tol = 1.0; ///< multiplier of dt in the g-balance verdict

    // [initial]
    std::string family = "single-mode";
    double epsilon = 1e-3;
    std::uint64_t seed = 1;

    // [output]
    std::string out_dir = "out";
    bool plots = true;

    // [picard]
    double picard_horizon = 0.1;
    int picard_iters = 8;

    // [linear]
    double fit_t0 = 10.0;
    double fit_t1 = 1000.0;
    int n_times = 25;

    // [inequalities]
    int trials = 1000;
    double delta = 0.1;
    double p_exp = 3.0;

    // runtime (CLI-controlled)
    RunMode mode = RunMode::Simulate;
    int workers = 1;
    double s_disc = 2.0;

    void validate() const {
        model.validate();
        if (model.k < 0.25 &&
            (mode == RunMode::Simulate || mode == RunMode::Picard ||
             mode == RunMode::Inequalities))
            throw std::invalid_argument("config: k must be >= 0.25 for disk-resolved modes");
        if (n_x < 8 || (n_x & (n_x - 1)) != 0)
            throw std::invalid_argument("config: n_x must be a power of two >= 8");
        if (n_r < 4) throw std::invalid_argument("config: n_r must be >= 4");
        if (n_theta < 4 || n_theta % 2 != 0)
            throw std::invalid_argument("config: n_theta must be even and >= 4");
        if (!(box_length > 0.0)) throw std::invalid_argument("config: box_length must be > 0");
        if (!(dt > 0.0)) throw std::invalid_argument("config: dt must be > 0");
        if (!(t_end >= dt)) throw std::invalid_argument("config: t_end must be >= dt");
        if (output_stride < 1) throw std::invalid_argument("config: output_stride must be >= 1");
        if (!(balance_tol > 0.0)) throw std::invalid_argument("config: balance_tol must be > 0");
        if (!(epsilon >= 0.0)) throw std::invalid_argument("config: epsilon must be >= 0");
        if (family != "single-mode" && family != "random-band" && family != "boundary-probe")
            throw std::invalid_argument("config: unknown initial family '" + family + "'");
        if (!(picard_horizon > 0.0) || picard_iters < 1)
            throw std::invalid_argument("config: picard horizon/iterations invalid");
        if (!(fit_t0 > 0.0) || !(fit_t1 > fit_t0) || n_times < 4)
            throw std::invalid_argument("config: linear fit window invalid");
        if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
        if (!(delta > 0.0)) throw std::invalid_argument("config: delta must be > 0");
        if (!(p_exp >= 2.0)) throw std::invalid_argument("config: p must be >= 2");
        if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
        if (!(s_disc >= 0.0)) throw std::invalid_argument("config: s_disc must be >= 0");
    }
};

struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline double parse_number(const std::string& v, int line, const std::string& key) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw parse_error("line " + std::to_string(line) + ": malformed number for key '" +
                          key + "': '" + v + "'");
    }
    if (pos != v.size())
        throw parse_error("line " + std::to_string(line) + ": malformed number for key '" +
                          key + "': '" + v + "'");
    return x;
}

inline int parse_int(const std::string& v, int line, const std::string& key) {
    const double x = parse_number(v, line, key);
    const int i = static_cast<int>(x);
    if (static_cast<double>(i) != x)
        throw parse_error("line " + std::to_string(line) + ": key '" + key +
                          "' expects an integer, got '" + v + "'");
    return i;
}

inline bool parse_bool(const std::string& v, int line, const std::string& key) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw parse_error("line " + std::to_string(line) + ": key '" + key +
                      "' expects true/false, got '" + v + "'");
}

} // namespace detail

/// Parses the sectioned key=value format. Unknown sections or keys, malformed
/// numbers and duplicate keys are rejected with the offending line number.
/// Mode and worker count come from the command line, not the file.
inline RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    std::set<std::string> seen;
    int lineno = 0;

    static const std::map<std::string, std::set<std::string>> keys = {
        {"model", {"mu", "mu_prime", "gamma", "a", "k", "d"}},
        {"grid", {"n_x", "box_length", "n_r", "n_theta"}},
        {"time", {"dt", "t_end", "output_stride", "balance_tol", "s_disc"}},
        {"initial", {"family", "epsilon", "seed"}},
        {"output", {"dir", "plots"}},
        {"picard", {"horizon", "iterations"}},
        {"linear", {"fit_t0", "fit_t1", "n_times"}},
        {"inequalities", {"trials", "delta", "p"}},
    };

    while (std::getline(in, line)) {
        ++lineno;
        std::string s = detail::trim(line);
        if (s.empty() || s[0] == '#') continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw parse_error("line " + std::to_string(lineno) + ": unterminated section");
            section = s.substr(1, s.size() - 2);
            if (keys.find(section) == keys.end())
                throw parse_error("line " + std::to_string(lineno) + ": unknown section [" +
                                  section + "]");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw parse_error("line " + std::to_string(lineno) +
                              ": expected 'key = value', got '" + s + "'");
        const std::string key = detail::trim(s.substr(0, eq));
        const std::string value = detail::trim(s.substr(eq + 1));
        if (key.empty() || value.empty())
            throw parse_error("line " + std::to_string(lineno) + ": missing key or value");
        if (section.empty())
            throw parse_error("line " + std::to_string(lineno) + ": key '" + key +
                              "' appears before any section header");
        const auto& allowed = keys.at(section);
        if (allowed.find(key) == allowed.end())
            throw parse_error("line " + std::to_string(lineno) + ": unknown key '" + key +
                              "' in section [" + section + "]");
        const std::string qual = section + "." + key;
        if (!seen.insert(qual).second)
            throw parse_error("line " + std::to_string(lineno) + ": duplicate key '" + qual +
                              "'");

        if (qual == "model.mu") cfg.model.mu = detail::parse_number(value, lineno, key);
        else if (qual == "model.mu_prime") cfg.model.mu_prime = detail::parse_number(value, lineno, key);
        else if (qual == "model.gamma") cfg.model.gamma = detail::parse_number(value, lineno, key);
        else if (qual == "model.a") cfg.model.a = detail::parse_number(value, lineno, key);
        else if (qual == "model.k") cfg.model.k = detail::parse_number(value, lineno, key);
        else if (qual == "model.d") cfg.model.d = detail::parse_int(value, lineno, key);
        else if (qual == "grid.n_x") cfg.n_x = detail::parse_int(value, lineno, key);
        else if (qual == "grid.box_length") cfg.box_length = detail::parse_number(value, lineno, key);
        else if (qual == "grid.n_r") cfg.n_r = detail::parse_int(value, lineno, key);
        else if (qual == "grid.n_theta") cfg.n_theta = detail::parse_int(value, lineno, key);
        else if (qual == "time.dt") cfg.dt = detail::parse_number(value, lineno, key);
        else if (qual == "time.t_end") cfg.t_end = detail::parse_number(value, lineno, key);
        else if (qual == "time.output_stride") cfg.output_stride = detail::parse_int(value, lineno, key);
        else if (qual == "time.balance_tol") cfg.balance_tol = detail::parse_number(value, lineno, key);
        else if (qual == "time.s_disc") cfg.s_disc = detail::parse_number(value, lineno, key);
        else if (qual == "initial.family") cfg.family = value;
        else if (qual == "initial.epsilon") cfg.epsilon = detail::parse_number(value, lineno, key);
        else if (qual == "initial.seed") cfg.seed = static_cast<std::uint64_t>(
                     detail::parse_number(value, lineno, key));
        else if (qual == "output.dir") cfg.out_dir = value;
        else if (qual == "output.plots") cfg.plots = detail::parse_bool(value, lineno, key);
        else if (qual == "picard.horizon") cfg.picard_horizon = detail::parse_number(value, lineno, key);
        else if (qual == "picard.iterations") cfg.picard_iters = detail::parse_int(value, lineno, key);
        else if (qual == "linear.fit_t0") cfg.fit_t0 = detail::parse_number(value, lineno, key);
        else if (qual == "linear.fit_t1") cfg.fit_t1 = detail::parse_number(value, lineno, key);
        else if (qual == "linear.n_times") cfg.n_times = detail::parse_int(value, lineno, key);
        else if (qual == "inequalities.trials") cfg.trials = detail::parse_int(value, lineno, key);
        else if (qual == "inequalities.delta") cfg.delta = detail::parse_number(value, lineno, key);
        else if (qual == "inequalities.p") cfg.p_exp = detail::parse_number(value, lineno, key);
    }
    cfg.validate();
    return cfg;
}

/// The resolved configuration in the same sectioned format (the echo written
/// next to every run's outputs).
inline std::string effective_config(const RunConfig& c) {
    std::ostringstream os;
    os.precision(17);
    os << "# effective configuration (mode = " << mode_name(c.mode)
       << ", workers = " << c.workers << ")\n";
    os << "[model]\n"
       << "mu = " << c.model.mu << "\nmu_prime = " << c.model.mu_prime
       << "\ngamma = " << c.model.gamma << "\na = " << c.model.a << "\nk = " << c.model.k
       << "\nd = " << c.model.d << "\n";
    os << "[grid]\n"
       << "n_x = " << c.n_x << "\nbox_length = " << c.box_length << "\nn_r = " << c.n_r
       << "\nn_theta = " << c.n_theta << "\n";
    os << "[time]\n"
       << "dt = " << c.dt << "\nt_end = " << c.t_end
       << "\noutput_stride = " << c.output_stride << "\nbalance_tol = " << c.balance_tol
       << "\ns_disc = " << c.s_disc << "\n";
    os << "[initial]\n"
       << "family = " << c.family << "\nepsilon = " << c.epsilon << "\nseed = " << c.seed
       << "\n";
    os << "[output]\n"
       << "dir = " << c.out_dir << "\nplots = " << (c.plots ? "true" : "false") << "\n";
    os << "[picard]\n"
       << "horizon = " << c.picard_horizon << "\niterations = " << c.picard_iters << "\n";
    os << "[linear]\n"
       << "fit_t0 = " << c.fit_t0 << "\nfit_t1 = " << c.fit_t1
       << "\nn_times = " << c.n_times << "\n";
    os << "[inequalities]\n"
       << "trials = " << c.trials << "\ndelta = " << c.delta << "\np = " << c.p_exp << "\n";
    return os.str();
}

} // namespace fenelab::harness
