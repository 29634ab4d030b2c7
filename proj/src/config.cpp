#include "isodecay/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "isodecay/errors.hpp"

namespace isodecay {

std::string format_double(double v) {
    if (v == 0.0) return "0";  // also folds -0
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& v) {
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out)) {
        throw ConfigError("expected a finite number, got '" + v + "'");
    }
    return out;
}

template <class Int>
Int to_integer(const std::string& v) {
    Int out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
        throw ConfigError("expected an integer, got '" + v + "'");
    }
    return out;
}

bool to_bool(const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("expected true or false, got '" + v + "'");
}

const char* inner_name(InnerSolver s) { return s == InnerSolver::cg ? "cg" : "spectral"; }

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table{
        {"grid.nx", [](RunConfig& c, const std::string& v) { c.grid.nx = to_integer<int>(v); }},
        {"grid.ny", [](RunConfig& c, const std::string& v) { c.grid.ny = to_integer<int>(v); }},
        {"grid.lx", [](RunConfig& c, const std::string& v) { c.grid.lx = to_double(v); }},
        {"grid.ly", [](RunConfig& c, const std::string& v) { c.grid.ly = to_double(v); }},
        {"fluid.gamma", [](RunConfig& c, const std::string& v) { c.fluid.gamma = to_double(v); }},
        {"fluid.mu", [](RunConfig& c, const std::string& v) { c.fluid.mu = to_double(v); }},
        {"fluid.lambda", [](RunConfig& c, const std::string& v) { c.fluid.lambda = to_double(v); }},
        {"fluid.rho_bar", [](RunConfig& c, const std::string& v) { c.fluid.rho_bar = to_double(v); }},
        {"solver.cfl", [](RunConfig& c, const std::string& v) { c.solver.cfl = to_double(v); }},
        {"solver.visc_safety",
         [](RunConfig& c, const std::string& v) { c.solver.visc_safety = to_double(v); }},
        {"solver.rho_floor",
         [](RunConfig& c, const std::string& v) { c.solver.rho_floor = to_double(v); }},
        {"solver.t_end", [](RunConfig& c, const std::string& v) { c.solver.t_end = to_double(v); }},
        {"solver.output_dt",
         [](RunConfig& c, const std::string& v) { c.solver.output_dt = to_double(v); }},
        {"lyapunov.sigma_auto",
         [](RunConfig& c, const std::string& v) { c.lyapunov.sigma_auto = to_bool(v); }},
        {"lyapunov.sigma", [](RunConfig& c, const std::string& v) { c.lyapunov.sigma = to_double(v); }},
        {"lyapunov.fit_window_start_fraction",
         [](RunConfig& c, const std::string& v) { c.lyapunov.fit_window_start_fraction = to_double(v); }},
        {"init.preset", [](RunConfig& c, const std::string& v) { c.init.name = v; }},
        {"init.amplitude", [](RunConfig& c, const std::string& v) { c.init.amplitude = to_double(v); }},
        {"init.seed", [](RunConfig& c, const std::string& v) { c.init.seed = to_integer<std::uint64_t>(v); }},
        {"init.rho_s", [](RunConfig& c, const std::string& v) { c.rho_s = to_double(v); }},
        {"output.csv_path", [](RunConfig& c, const std::string& v) { c.output.csv_path = v; }},
        {"output.svg", [](RunConfig& c, const std::string& v) { c.output.svg = to_bool(v); }},
        {"bogovskii.tol", [](RunConfig& c, const std::string& v) { c.bogovskii.tol = to_double(v); }},
        {"bogovskii.max_iter",
         [](RunConfig& c, const std::string& v) { c.bogovskii.max_iter = to_integer<int>(v); }},
        {"bogovskii.mean_tol",
         [](RunConfig& c, const std::string& v) { c.bogovskii.mean_tol = to_double(v); }},
        {"bogovskii.inner",
         [](RunConfig& c, const std::string& v) {
             if (v == "spectral") {
                 c.bogovskii.inner = InnerSolver::spectral;
             } else if (v == "cg") {
                 c.bogovskii.inner = InnerSolver::cg;
             } else {
                 throw ConfigError("expected spectral or cg, got '" + v + "'");
             }
         }},
    };
    return table;
}

bool known_section(const std::string& s) {
    static const char* names[] = {"grid", "fluid", "solver", "lyapunov", "init", "output", "bogovskii"};
    return std::any_of(std::begin(names), std::end(names), [&](const char* n) { return s == n; });
}

// Checks every invariant; `where` maps a dotted key to its "line N: " prefix.
void validate(const RunConfig& c, const std::function<std::string(const char*)>& where) {
    auto require = [&](bool ok, const char* key, const std::string& msg) {
        if (!ok) throw ConfigError(where(key) + key + ": " + msg);
    };
    require(c.grid.nx >= 4, "grid.nx", "must be at least 4");
    require(c.grid.ny >= 4, "grid.ny", "must be at least 4");
    require(c.grid.lx > 0.0, "grid.lx", "must be positive");
    require(c.grid.ly > 0.0, "grid.ly", "must be positive");

    require(c.fluid.gamma > 1.0, "fluid.gamma", "must exceed 1");
    require(c.fluid.mu > 0.0, "fluid.mu", "must be positive");
    require(c.fluid.lambda + c.fluid.mu >= 0.0, "fluid.lambda",
            "lambda + mu = " + format_double(c.fluid.lambda + c.fluid.mu) +
                " is negative; the viscosities need lambda + (2/N) mu >= 0, N = 2");
    require(c.fluid.rho_bar > 0.0, "fluid.rho_bar", "must be positive");

    require(c.solver.cfl > 0.0 && c.solver.cfl <= 1.0, "solver.cfl", "must lie in (0, 1]");
    require(c.solver.visc_safety > 0.0 && c.solver.visc_safety <= 1.0, "solver.visc_safety",
            "must lie in (0, 1]");
    require(c.solver.rho_floor >= 0.0, "solver.rho_floor", "must be nonnegative");
    require(c.solver.t_end > 0.0, "solver.t_end", "must be positive");
    require(c.solver.output_dt > 0.0, "solver.output_dt", "must be positive");

    require(c.lyapunov.sigma_auto || c.lyapunov.sigma.has_value(), "lyapunov.sigma",
            "is required when sigma_auto = false");
    if (c.lyapunov.sigma) {
        require(*c.lyapunov.sigma >= 0.0 && *c.lyapunov.sigma < 1.0, "lyapunov.sigma",
                "must lie in [0, 1)");
    }
    require(c.lyapunov.fit_window_start_fraction >= 0.0 && c.lyapunov.fit_window_start_fraction < 1.0,
            "lyapunov.fit_window_start_fraction", "must lie in [0, 1)");

    const auto& names = preset_names();
    require(std::find(names.begin(), names.end(), c.init.name) != names.end(), "init.preset",
            "unknown preset '" + c.init.name + "' (equilibrium, gaussian-bump, random, vortex)");
    require(c.init.amplitude >= 0.0, "init.amplitude", "must be nonnegative");
    require(c.rho_s > 0.0, "init.rho_s", "must be positive");
    require(c.rho_s < c.fluid.rho_bar, "init.rho_s", "must be below fluid.rho_bar");

    require(!c.output.csv_path.empty() && c.output.csv_path.find_first_of("#\n") == std::string::npos &&
                trim(c.output.csv_path) == c.output.csv_path,
            "output.csv_path", "must be a nonempty path without '#' or surrounding blanks");

    require(c.bogovskii.tol > 0.0, "bogovskii.tol", "must be positive");
    require(c.bogovskii.max_iter >= 0, "bogovskii.max_iter", "must be nonnegative (0 = automatic)");
    require(c.bogovskii.mean_tol > 0.0, "bogovskii.mean_tol", "must be positive");
}

}  // namespace

void validate_config(const RunConfig& config) {
    validate(config, [](const char*) { return std::string(); });
}

ParsedConfig parse_config(const std::string& text) {
    ParsedConfig out;
    std::map<std::string, int> lines;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string prefix = "line " + std::to_string(line_no) + ": ";
        const std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(prefix + "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!known_section(section)) throw ConfigError(prefix + "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(prefix + "expected 'key = value'");
        if (section.empty()) throw ConfigError(prefix + "key outside of any [section]");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string dotted = section + "." + key;
        const auto it = setters().find(dotted);
        if (it == setters().end()) throw ConfigError(prefix + "unknown key '" + key + "' in [" + section + "]");
        if (value.empty()) throw ConfigError(prefix + dotted + ": missing value");
        if (const auto seen = lines.find(dotted); seen != lines.end()) {
            out.warnings.push_back(prefix + "duplicate key " + dotted + " (first set on line " +
                                   std::to_string(seen->second) + "); the last value wins");
        }
        try {
            it->second(out.config, value);
        } catch (const ConfigError& e) {
            throw ConfigError(prefix + dotted + ": " + e.what());
        }
        lines[dotted] = line_no;
    }
    validate(out.config, [&](const char* key) {
        const auto it = lines.find(key);
        return it == lines.end() ? std::string("default ") : "line " + std::to_string(it->second) + ": ";
    });
    return out;
}

ParsedConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string render_config(const RunConfig& c) {
    std::ostringstream os;
    auto b = [](bool v) { return v ? "true" : "false"; };
    os << "[grid]\n"
       << "nx = " << c.grid.nx << "\n"
       << "ny = " << c.grid.ny << "\n"
       << "lx = " << format_double(c.grid.lx) << "\n"
       << "ly = " << format_double(c.grid.ly) << "\n\n"
       << "[fluid]\n"
       << "gamma = " << format_double(c.fluid.gamma) << "\n"
       << "mu = " << format_double(c.fluid.mu) << "\n"
       << "lambda = " << format_double(c.fluid.lambda) << "\n"
       << "rho_bar = " << format_double(c.fluid.rho_bar) << "\n\n"
       << "[solver]\n"
       << "cfl = " << format_double(c.solver.cfl) << "\n"
       << "visc_safety = " << format_double(c.solver.visc_safety) << "\n"
       << "rho_floor = " << format_double(c.solver.rho_floor) << "\n"
       << "t_end = " << format_double(c.solver.t_end) << "\n"
       << "output_dt = " << format_double(c.solver.output_dt) << "\n\n"
       << "[lyapunov]\n"
       << "sigma_auto = " << b(c.lyapunov.sigma_auto) << "\n";
    if (c.lyapunov.sigma) os << "sigma = " << format_double(*c.lyapunov.sigma) << "\n";
    os << "fit_window_start_fraction = " << format_double(c.lyapunov.fit_window_start_fraction) << "\n\n"
       << "[init]\n"
       << "preset = " << c.init.name << "\n"
       << "amplitude = " << format_double(c.init.amplitude) << "\n"
       << "seed = " << c.init.seed << "\n"
       << "rho_s = " << format_double(c.rho_s) << "\n\n"
       << "[output]\n"
       << "csv_path = " << c.output.csv_path << "\n"
       << "svg = " << b(c.output.svg) << "\n\n"
       << "[bogovskii]\n"
       << "tol = " << format_double(c.bogovskii.tol) << "\n"
       << "max_iter = " << c.bogovskii.max_iter << "\n"
       << "mean_tol = " << format_double(c.bogovskii.mean_tol) << "\n"
       << "inner = " << inner_name(c.bogovskii.inner) << "\n";
    return os.str();
}

}  // namespace isodecay
