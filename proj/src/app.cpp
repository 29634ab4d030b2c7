#include "isodecay/app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>

#include "isodecay/bogovskii.hpp"
#include "isodecay/errors.hpp"
#include "isodecay/presets.hpp"
#include "isodecay/random.hpp"
#include "isodecay/solver.hpp"
#include "isodecay/svg.hpp"

namespace isodecay {

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const InputError*>(&e)) return exit_input;
    if (dynamic_cast<const NumericalError*>(&e)) return exit_numerical;
    if (dynamic_cast<const CheckError*>(&e)) return exit_check;
    return exit_other;
}

double RunOutcome::fit_window_start() const {
    return config.lyapunov.fit_window_start_fraction * config.solver.t_end;
}

namespace {

std::optional<DecayFit> try_fit(const std::vector<DiagnosticsRecord>& records, double t0, double t1,
                                double DiagnosticsRecord::*a, double DiagnosticsRecord::*b = nullptr) {
    std::vector<double> t, y;
    for (const DiagnosticsRecord& r : records) {
        t.push_back(r.t);
        y.push_back(r.*a + (b ? r.*b : 0.0));
    }
    try {
        return fit_log_linear(t, y, t0, t1);
    } catch (const InsufficientDataError&) {
        return std::nullopt;
    }
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << content;
    if (!out) throw ConfigError("write to '" + path + "' failed");
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

}  // namespace

RunOutcome execute_run(const RunConfig& config, int config_warnings) {
    validate_config(config);
    RunOutcome o;
    o.config = config;
    o.config_warnings = config_warnings;
    const GridSpec grid = GridSpec::make(config.grid.nx, config.grid.ny, config.grid.lx, config.grid.ly);
    const State initial = build_initial(config.init, grid, config.rho_s);
    o.rho_s = compute_rho_s(initial.rho).rho_s;
    const double sigma_fallback = config.lyapunov.sigma.value_or(0.0);

    try {
        LyapunovEvaluator evaluator(grid, config.fluid, o.rho_s, config.bogovskii);
        run(initial, config.fluid, config.solver, [&](const State& s, const RunStatus& st) {
            o.terms.push_back(evaluator.terms(s));
            o.rho_bound_ok.push_back(st.rho_bound_ok);
            o.steps = st.steps;
        });

        SelectionContext ctx;
        ctx.params = config.fluid;
        ctx.rho_s = o.rho_s;
        const double probe = operator_norm_probe(grid, config.bogovskii, 3, 1);
        ctx.operator_norm_sq = probe * probe;
        o.selection = config.lyapunov.sigma_auto ? select_sigma(o.terms, ctx)
                                                 : evaluate_sigma(o.terms, ctx, sigma_fallback);
    } catch (const std::exception& e) {
        o.failure = RunFailure{exit_code_for(e), e.what()};
        o.selection = SigmaSelection{};
        o.selection.sigma = sigma_fallback;
    }

    const double mass0 = o.terms.empty() ? 0.0 : o.terms.front().mass;
    int ineq_ok = 0;
    int bounds_ok = 0;
    for (std::size_t k = 0; k < o.terms.size(); ++k) {
        const LyapunovTerms& t = o.terms[k];
        o.records.push_back(make_record(t, o.selection.sigma, o.selection.C, o.rho_bound_ok[k]));
        o.max_rho = std::max(o.max_rho, t.max_rho);
        if (mass0 > 0.0) o.mass_drift = std::max(o.mass_drift, std::abs(t.mass - mass0) / mass0);
        if (!o.rho_bound_ok[k]) o.hypothesis_violation = true;
        ineq_ok += o.records.back().ineq_39_ok ? 1 : 0;
        const BoundCheck b = check_bounds(t, o.selection);
        bounds_ok += (b.lower_v && b.upper_v && b.lower_w) ? 1 : 0;
    }
    if (!o.records.empty()) {
        o.ineq_39_fraction = static_cast<double>(ineq_ok) / o.records.size();
        o.bounds_fraction = static_cast<double>(bounds_ok) / o.records.size();
    }
    if (o.failure) return o;

    o.fit_v = try_fit(o.records, o.fit_window_start(), o.fit_window_end(), &DiagnosticsRecord::V_sigma);
    o.fit_energy = try_fit(o.records, o.fit_window_start(), o.fit_window_end(), &DiagnosticsRecord::kinetic_L2,
                           &DiagnosticsRecord::rho_dist_L2);
    if (o.records.size() >= 2) {
        o.differential = check_differential_inequality(o.records, o.selection.C, o.fit_window_start());
    }
    return o;
}

SummaryEntries RunOutcome::summary() const {
    SummaryEntries s;
    auto add = [&](const std::string& k, const std::string& v) { s.emplace_back(k, v); };
    auto num = [&](const std::string& k, double v) { add(k, format_double(v)); };
    add("sigma_mode", config.lyapunov.sigma_auto ? "auto" : "fixed");
    num("sigma", selection.sigma);
    if (!failure) {
        add("halvings", std::to_string(selection.halvings));
        num("c0", selection.c0);
        num("c1", selection.c1);
        num("c2", selection.c2);
        num("c2_effective", selection.c2_effective);
        num("C", selection.C);
        num("K1", selection.k1);
        num("K2", selection.k2);
        num("pressure_coercivity", selection.pressure_coercivity);
        num("operator_norm_sq", selection.operator_norm_sq);
        num("poincare", selection.poincare);
        num("fit_window_start", fit_window_start());
        num("fit_window_end", fit_window_end());
        for (const auto& [name, fit] : {std::pair{"V_sigma", &fit_v}, std::pair{"energy", &fit_energy}}) {
            const std::string n = name;
            if (*fit) {
                num("rate_" + n, (*fit)->rate);
                num("intercept_" + n, (*fit)->intercept);
                num("r_squared_" + n, (*fit)->r_squared);
                add("fit_points_" + n, std::to_string((*fit)->used));
                add("fit_excluded_" + n, std::to_string((*fit)->excluded));
            } else {
                // too few positive values in the window: nothing decays
                num("rate_" + n, 0.0);
                num("r_squared_" + n, 0.0);
                add("fit_status_" + n, "insufficient data");
            }
        }
        num("diff_ineq_slack", differential.slack);
        num("diff_ineq_fraction", differential.fraction);
        add("diff_ineq_counted", std::to_string(differential.counted));
        std::string flagged;
        for (double t : differential.flagged) flagged += (flagged.empty() ? "" : " ") + format_double(t);
        add("diff_ineq_flagged_t", flagged.empty() ? "none" : flagged);
        num("ineq_39_fraction", ineq_39_fraction);
        num("bounds_fraction", bounds_fraction);
    }
    add("hypothesis_violation", bool_text(hypothesis_violation));
    num("rho_s", rho_s);
    num("max_rho", max_rho);
    num("mass_drift", mass_drift);
    add("steps", std::to_string(steps));
    add("records", std::to_string(records.size()));
    add("config_warnings", std::to_string(config_warnings));
    return s;
}

std::string RunOutcome::csv() const {
    return render_csv(records, summary(), failure ? &failure->message : nullptr);
}

std::string default_config_text() { return render_config(RunConfig{}); }

int run_command(const std::string& config_path, bool svg, std::ostream& out, std::ostream& err) {
    try {
        const ParsedConfig parsed = load_config(config_path);
        for (const std::string& w : parsed.warnings) err << "warning: " << config_path << ": " << w << "\n";
        const RunOutcome o = execute_run(parsed.config, static_cast<int>(parsed.warnings.size()));
        const std::string& csv_path = o.config.output.csv_path;
        write_file(csv_path, o.csv());
        if (svg || o.config.output.svg) {
            std::vector<double> t, v;
            for (const DiagnosticsRecord& r : o.records) {
                t.push_back(r.t);
                v.push_back(r.V_sigma);
            }
            const std::string svg_path = std::filesystem::path(csv_path).replace_extension(".svg").string();
            write_file(svg_path, render_log_plot(t, v, "V_sigma, sigma = " + format_double(o.selection.sigma),
                                                 "V_sigma (log scale)"));
            out << "plot: " << svg_path << "\n";
        }
        out << "csv: " << csv_path << " (" << o.records.size() << " records, " << o.steps << " steps)\n";
        if (o.failure) {
            err << "error: " << o.failure->message << "\n";
            return o.failure->exit_code;
        }
        out << "sigma = " << format_double(o.selection.sigma) << ", C = " << format_double(o.selection.C)
            << ", c0 = " << format_double(o.selection.c0) << ", c1 = " << format_double(o.selection.c1) << "\n";
        if (o.fit_v) {
            out << "V_sigma decay rate " << format_double(o.fit_v->rate) << " (R^2 " << format_double(o.fit_v->r_squared)
                << ")\n";
        } else {
            out << "V_sigma decay rate 0 (no positive values in the fit window)\n";
        }
        if (o.hypothesis_violation) err << "warning: density exceeded rho_bar during the run\n";
        return exit_ok;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

namespace {

struct CheckRow {
    std::string name;
    std::string value;
    bool pass = true;
};

int print_table(const std::vector<CheckRow>& rows, std::ostream& out) {
    bool all = true;
    for (const CheckRow& r : rows) {
        char line[256];
        std::snprintf(line, sizeof line, "%-4s  %-46s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                      r.value.c_str());
        out << line;
        all = all && r.pass;
    }
    return all ? exit_ok : exit_check;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

double max_face_diff(const VectorField& a, const VectorField& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.ux_array().size(); ++k) {
        m = std::max(m, std::abs(a.ux_array().data()[k] - b.ux_array().data()[k]));
    }
    for (std::size_t k = 0; k < a.uy_array().size(); ++k) {
        m = std::max(m, std::abs(a.uy_array().data()[k] - b.uy_array().data()[k]));
    }
    return m;
}

ScalarField random_zero_mean(const GridSpec& g, std::mt19937_64& gen) {
    ScalarField f(g);
    for (double& x : f.values().data()) x = uniform(gen, -1.0, 1.0);
    const double mean = integrate(f) / g.area();
    for (double& x : f.values().data()) x -= mean;
    return f;
}

// Discrete curl of a node stream function that vanishes on the boundary.
VectorField solenoidal(const GridSpec& g, std::mt19937_64& gen) {
    Array2D psi(g.nx + 1, g.ny + 1);
    for (int j = 1; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i) psi(i, j) = uniform(gen, -1.0, 1.0);
    }
    VectorField w(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i <= g.nx; ++i) w.ux(i, j) = (psi(i, j + 1) - psi(i, j)) / g.dy();
    }
    for (int j = 0; j <= g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) w.uy(i, j) = -(psi(i + 1, j) - psi(i, j)) / g.dx();
    }
    return w;
}

double relative_residual(const BogovskiiSolution& sol, const ScalarField& f) {
    ScalarField r = divergence(sol.v);
    for (std::size_t k = 0; k < r.values().size(); ++k) r.values().data()[k] -= f.values().data()[k];
    return l2_norm(r) / l2_norm(f);
}

}  // namespace

int bogovskii_check_command(const std::string& config_path, std::ostream& out, std::ostream& err) {
    try {
        const ParsedConfig parsed = load_config(config_path);
        const RunConfig& c = parsed.config;
        const SaddleSolverConfig& bog = c.bogovskii;
        const GridSpec g = GridSpec::make(c.grid.nx, c.grid.ny, c.grid.lx, c.grid.ly);
        BogovskiiSolver solver(g, bog);
        std::mt19937_64 gen(2024);
        std::vector<CheckRow> rows;

        const BogovskiiSolution zero = solver.solve(ScalarField(g));
        rows.push_back({"zero datum gives v = 0, no iterations",
                        "iterations " + std::to_string(zero.iterations),
                        zero.iterations == 0 && l2_norm(zero.v) == 0.0});

        ScalarField sine(g);
        for (int j = 0; j < g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                sine(i, j) = std::sin(2 * std::numbers::pi * sine.x(i) / g.lx) *
                             std::sin(2 * std::numbers::pi * sine.y(j) / g.ly);
            }
        }
        const double sine_res = relative_residual(solver.solve(sine), sine);
        rows.push_back({"sine mode residual <= tol (" + std::to_string(g.nx) + "x" + std::to_string(g.ny) + ")",
                        sci(sine_res), sine_res <= bog.tol});

        double worst = 0.0;
        for (int k = 0; k < 5; ++k) {
            const ScalarField f = random_zero_mean(g, gen);
            worst = std::max(worst, relative_residual(solver.solve(f), f));
        }
        rows.push_back({"5 random zero-mean data, residual <= tol", sci(worst), worst <= bog.tol});

        for (int n : {6, 8}) {
            const GridSpec gs = GridSpec::make(n, n, 1.0, 1.0);
            SaddleSolverConfig tight = bog;
            tight.tol = std::min(bog.tol, 1e-12);
            const ScalarField f = random_zero_mean(gs, gen);
            const double diff = max_face_diff(solve(BogovskiiProblem{f}, gs, tight).v, dense_kkt_solve(f).v);
            rows.push_back({"dense KKT agreement " + std::to_string(n) + "x" + std::to_string(n) + " (max face)",
                            sci(diff), diff <= 1e-10});
        }

        const BogovskiiSolution sol = solver.solve(random_zero_mean(g, gen));
        const SolutionGradient sg = gradient_of_solution(sol);
        VectorField u = solenoidal(g, gen);
        for (double& x : u.ux_array().data()) x += uniform(gen, -1.0, 1.0);
        for (double& x : u.uy_array().data()) x += uniform(gen, -1.0, 1.0);
        u.zero_boundary();
        const double by_components = contract(velocity_gradient(u), sg.grad);
        const double by_form = -inner(u, laplacian(sol.v));
        const double duality = std::abs(by_components - by_form) / std::max(1.0, std::abs(by_form));
        rows.push_back({"grad u : grad B[f], components vs bilinear form", sci(duality), duality <= 1e-12});

        bool minimal = true;
        double smallest_gain = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 5; ++k) {
            const VectorField w = solenoidal(g, gen);
            VectorField p = sol.v;
            for (std::size_t i = 0; i < w.ux_array().size(); ++i) p.ux_array().data()[i] += 0.01 * w.ux_array().data()[i];
            for (std::size_t i = 0; i < w.uy_array().size(); ++i) p.uy_array().data()[i] += 0.01 * w.uy_array().data()[i];
            const double gain = velocity_norms(p).grad_norm_sq - sg.norms.grad_norm_sq;
            smallest_gain = std::min(smallest_gain, gain);
            minimal = minimal && gain >= 0.0;
        }
        rows.push_back({"minimum energy vs 5 divergence-free shifts", "min gain " + sci(smallest_gain), minimal});

        double probes[3];
        const int sizes[3] = {16, 32, 64};
        for (int k = 0; k < 3; ++k) {
            probes[k] = operator_norm_probe(GridSpec::make(sizes[k], sizes[k], c.grid.lx, c.grid.ly), bog, 3, 1);
        }
        double spread = 0.0;
        for (int a = 0; a < 3; ++a) {
            for (int b = a + 1; b < 3; ++b) {
                spread = std::max(spread, std::abs(probes[a] - probes[b]) / std::min(probes[a], probes[b]));
            }
        }
        rows.push_back({"operator norm 16/32/64 within 25%",
                        sci(probes[0]) + " " + sci(probes[1]) + " " + sci(probes[2]), spread < 0.25});

        VectorField gfield(g);
        for (double& x : gfield.ux_array().data()) x = uniform(gen, -1.0, 1.0);
        for (double& x : gfield.uy_array().data()) x = uniform(gen, -1.0, 1.0);
        gfield.zero_boundary();
        const double dform = divergence_form_probe(gfield, solver);
        rows.push_back({"||B[div g]|| / ||g|| finite", sci(dform), std::isfinite(dform) && dform > 0.0});

        return print_table(rows, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

int entropy_check_command(const std::string& config_path, std::ostream& out, std::ostream& err) {
    try {
        const ParsedConfig parsed = load_config(config_path);
        const FluidParams& p = parsed.config.fluid;
        const double r0 = parsed.config.rho_s;
        const double r_max = p.rho_bar;
        std::vector<CheckRow> rows;
        out << "gamma = " << format_double(p.gamma) << ", r0 = " << format_double(r0)
            << ", r_max = " << format_double(r_max) << "\n";

        const EntropyBounds kb = entropy_bounds_probe(r0, r_max, p);
        rows.push_back({"K1 > 0", format_double(kb.k1), kb.k1 > 0.0});
        rows.push_back({"K2 >= K1", format_double(kb.k2), kb.k2 >= kb.k1});

        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            const double r = r_max * k / 999.0;
            worst = std::max(worst, std::abs(entropy_f(r, r0, p) - entropy_f_quadrature(r, r0, p)));
        }
        rows.push_back({"closed form vs quadrature, 1000 samples", sci(worst), worst <= 1e-9});

        const double at_zero = std::pow(r0, p.gamma - 2.0);
        const double g0 = entropy_ratio(0.0, r0, p);
        rows.push_back({"g(0) = r0^(gamma-2) = " + format_double(at_zero), format_double(g0),
                        std::abs(g0 - at_zero) <= 1e-9});

        const double at_r0 = 0.5 * p.gamma * at_zero;
        const double d = 1e-4 * r0;
        const double plus = entropy_ratio(r0 + d, r0, p);
        const double minus = entropy_ratio(r0 - d, r0, p);
        rows.push_back({"g(r0 +- 1e-4) -> (gamma/2) r0^(gamma-2) = " + format_double(at_r0),
                        format_double(plus) + " " + format_double(minus),
                        std::abs(0.5 * (plus + minus) - at_r0) <= 1e-5});

        if (p.gamma == 2.0) {
            double dev = 0.0;
            for (int k = 0; k < 1000; ++k) {
                const double r = r_max * k / 999.0;
                dev = std::max(dev, std::abs(entropy_f(r, r0, p) - (r - r0) * (r - r0)));
            }
            rows.push_back({"gamma = 2: f(r) = (r - r0)^2", sci(dev), dev <= 1e-12});
        }

        const double kp = pressure_coercivity_probe(r0, r_max, p);
        rows.push_back({"pressure coercivity > 0", format_double(kp), kp > 0.0});
        return print_table(rows, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

int fit_command(const std::string& csv_path, std::optional<double> window_start, std::optional<double> window_end,
                std::ostream& out, std::ostream& err) {
    try {
        const CsvTable table = read_csv(csv_path);
        if (table.records.empty()) throw InsufficientDataError(csv_path + ": no records");
        auto summary_value = [&](const std::string& key) -> std::optional<double> {
            for (const auto& [k, v] : table.summary) {
                if (k == key) {
                    try {
                        return std::stod(v);
                    } catch (const std::exception&) {
                        return std::nullopt;
                    }
                }
            }
            return std::nullopt;
        };
        const double t_first = table.records.front().t;
        const double t_last = table.records.back().t;
        const double t0 = window_start.value_or(
            summary_value("fit_window_start").value_or(t_first + 0.25 * (t_last - t_first)));
        const double t1 = window_end.value_or(summary_value("fit_window_end").value_or(t_last));
        if (!(t0 < t1)) throw DomainError("fit window start must be below its end");
        if (table.aborted) err << "warning: " << csv_path << " is from an aborted run\n";

        const DecayFits fits = fit_decay(table.records, t0, t1);
        out << "window [" << format_double(t0) << ", " << format_double(t1) << "]\n";
        for (const auto& [name, f] : {std::pair{"V_sigma", fits.v_sigma}, std::pair{"energy", fits.energy}}) {
            out << name << ": rate " << format_double(f.rate) << ", intercept " << format_double(f.intercept)
                << ", R^2 " << format_double(f.r_squared) << ", points " << f.used << ", excluded "
                << f.excluded << "\n";
        }
        return exit_ok;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

}  // namespace isodecay
