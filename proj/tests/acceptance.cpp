// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "isodecay/app.hpp"
#include "isodecay/bogovskii.hpp"
#include "isodecay/fluid.hpp"
#include "isodecay/grid.hpp"
#include "isodecay/lyapunov.hpp"
#include "isodecay/presets.hpp"
#include "isodecay/random.hpp"

using namespace isodecay;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "FAILED ") + what;
    }
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

int failures = 0;

void report(int id, const char* title, double limit_s, const std::function<Verdict()>& body) {
    const auto t0 = Clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (limit_s > 0.0) v.require(secs < limit_s, "runtime " + fmt("%.2f", secs) + " s < " + fmt("%g", limit_s) + " s");
    if (!v.pass) ++failures;
    std::printf("%s criterion %d (%s): %s\n", v.pass ? "PASS" : "FAIL", id, title, v.detail.c_str());
    std::fflush(stdout);
}

ScalarField random_field(const GridSpec& g, std::mt19937_64& gen) {
    ScalarField f(g);
    for (double& x : f.values().data()) x = uniform(gen, -1.0, 1.0);
    return f;
}

ScalarField zero_mean(ScalarField f) {
    const double mean = integrate(f) / f.grid().area();
    for (double& x : f.values().data()) x -= mean;
    return f;
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

RunConfig default_bump() {
    RunConfig c;
    c.init.name = "gaussian-bump";
    c.init.amplitude = 0.1;
    return c;
}

}  // namespace

int main() {
    report(1, "divergence solver", 10.0, [] {
        Verdict v;
        std::mt19937_64 gen(1);
        const GridSpec g = GridSpec::make(64, 64, 1.0, 1.0);
        BogovskiiSolver solver(g);
        double worst = 0.0;
        for (int k = 0; k < 5; ++k) {
            const ScalarField f = zero_mean(random_field(g, gen));
            ScalarField r = divergence(solver.solve(f).v);
            for (std::size_t i = 0; i < r.values().size(); ++i) r.values().data()[i] -= f.values().data()[i];
            worst = std::max(worst, l2_norm(r) / l2_norm(f));
        }
        v.require(worst <= 1e-9, "64x64 max relative residual " + fmt("%.2e", worst) + " <= 1e-9");
        const GridSpec s = GridSpec::make(6, 6, 1.0, 1.0);
        const ScalarField f = zero_mean(random_field(s, gen));
        const double diff = max_face_diff(solve(BogovskiiProblem{f}, s).v, dense_kkt_solve(f).v);
        v.require(diff <= 1e-10, "6x6 vs dense KKT " + fmt("%.2e", diff) + " <= 1e-10");
        return v;
    });

    report(2, "relative entropy integrand", 5.0, [] {
        Verdict v;
        for (double gamma : {1.4, 5.0 / 3.0, 2.0}) {
            FluidParams p;
            p.gamma = gamma;
            const double r0 = 1.0;
            const double r_max = 4.0;
            const std::string tag = "gamma " + fmt("%.4g", gamma) + ": ";
            const EntropyBounds kb = entropy_bounds_probe(r0, r_max, p);
            v.require(kb.k1 > 0.0, tag + "K1 " + fmt("%.4f", kb.k1) + " > 0");
            double quad = 0.0;
            for (int k = 0; k < 1000; ++k) {
                const double r = r_max * k / 999.0;
                quad = std::max(quad, std::abs(entropy_f(r, r0, p) - entropy_f_quadrature(r, r0, p)));
            }
            v.require(quad <= 1e-9, tag + "quadrature " + fmt("%.1e", quad));
            const double g0 = entropy_ratio(0.0, r0, p);
            v.require(std::abs(g0 - 1.0) <= 1e-9, tag + "g(0) " + fmt("%.12g", g0));
            // Symmetric reading of g(r0 +- 1e-4); each side also within its
            // first-order Taylor offset plus 1e-5.
            const double limit = 0.5 * gamma;
            const double gp = entropy_ratio(r0 + 1e-4, r0, p);
            const double gm = entropy_ratio(r0 - 1e-4, r0, p);
            const double taylor = std::abs(gamma * (gamma - 2.0) / 6.0) * 1e-4;
            v.require(std::abs(0.5 * (gp + gm) - limit) <= 1e-5 && std::abs(gp - limit) <= taylor + 1e-5 &&
                          std::abs(gm - limit) <= taylor + 1e-5,
                      tag + "g(r0+-1e-4) " + fmt("%.8f", gp) + "/" + fmt("%.8f", gm));
            if (gamma == 2.0) {
                double dev = 0.0;
                for (int k = 0; k < 1000; ++k) {
                    const double r = r_max * k / 999.0;
                    dev = std::max(dev, std::abs(entropy_f(r, r0, p) - (r - 1.0) * (r - 1.0)));
                }
                v.require(dev <= 1e-12, tag + "f = (r-1)^2 to " + fmt("%.1e", dev));
            }
        }
        return v;
    });

    const auto t_run = Clock::now();
    const RunOutcome run = execute_run(default_bump());
    const double run_secs = std::chrono::duration<double>(Clock::now() - t_run).count();
    const bool run_ok = !run.failure;
    const std::string run_error = run.failure ? run.failure->message : "";

    report(3, "conservation and dissipation", 0.0, [&] {
        Verdict v;
        v.require(run_ok, run_ok ? "run completed" : "run failed: " + run_error);
        v.require(run_secs < 120.0, "runtime " + fmt("%.2f", run_secs) + " s < 120 s");
        if (!run_ok) return v;
        const double m0 = run.terms.front().mass;
        const double e0 = run.terms.front().E;
        double drift = 0.0;
        double rise = -INFINITY;
        bool bound = true;
        double max_rho = 0.0;
        for (std::size_t k = 0; k < run.terms.size(); ++k) {
            drift = std::max(drift, std::abs(run.terms[k].mass - m0) / m0);
            if (k > 0) rise = std::max(rise, (run.terms[k].E - run.terms[k - 1].E) / e0);
            bound = bound && run.rho_bound_ok[k] && run.terms[k].max_rho <= 4.0;
            max_rho = std::max(max_rho, run.terms[k].max_rho);
        }
        v.require(drift <= 1e-12, "mass drift " + fmt("%.1e", drift));
        v.require(rise <= 1e-10, "max (E_k+1 - E_k)/E0 " + fmt("%.1e", rise));
        v.require(bound, "max rho " + fmt("%.4f", max_rho) + " <= 4");
        return v;
    });

    report(4, "functional equivalences", 0.0, [&] {
        Verdict v;
        v.require(run_ok, run_ok ? "run completed" : "run failed: " + run_error);
        if (!run_ok) return v;
        const SigmaSelection& s = run.selection;
        v.require(s.c0 > 0.0 && s.c1 > 0.0 && s.C > 0.0,
                  "sigma " + fmt("%g", s.sigma) + ", c0 " + fmt("%.4g", s.c0) + ", c1 " + fmt("%.4g", s.c1) +
                      ", C " + fmt("%.4g", s.C) + " positive");
        int lower = 0;
        int upper = 0;
        for (const LyapunovTerms& t : run.terms) {
            const BoundCheck b = check_bounds(t, s);
            lower += b.lower_v;
            upper += b.upper_v;
        }
        const int n = static_cast<int>(run.terms.size());
        v.require(lower == n && upper == n,
                  "V bounds hold at " + std::to_string(std::min(lower, upper)) + "/" + std::to_string(n) + " records");
        int late = 0;
        int late_ok = 0;
        for (const DiagnosticsRecord& r : run.records) {
            if (r.t > 0.1) {
                ++late;
                late_ok += r.ineq_39_ok;
            }
        }
        const double frac = late ? static_cast<double>(late_ok) / late : 0.0;
        v.require(frac >= 0.99, "W >= C V after t = 0.1 on " + std::to_string(late_ok) + "/" + std::to_string(late));
        return v;
    });

    report(5, "exponential decay", 0.0, [&] {
        Verdict v;
        v.require(run_ok, run_ok ? "run completed" : "run failed: " + run_error);
        if (!run_ok) return v;
        const double t0 = 0.25 * run.config.solver.t_end;
        const DecayFits fits = fit_decay(run.records, t0, run.config.solver.t_end);
        v.require(fits.v_sigma.rate > 0.0 && fits.v_sigma.r_squared >= 0.99,
                  "V rate " + fmt("%.4f", fits.v_sigma.rate) + ", R^2 " + fmt("%.5f", fits.v_sigma.r_squared));
        const double ratio = fits.energy.rate / fits.v_sigma.rate;
        v.require(fits.energy.rate > 0.0 && ratio >= 0.5 && ratio <= 2.0,
                  "energy rate " + fmt("%.4f", fits.energy.rate) + ", ratio " + fmt("%.3f", ratio));
        const DifferentialInequalityReport d = check_differential_inequality(run.records, run.selection.C, t0);
        v.require(d.fraction >= 0.95, "dV/dt + C V <= slack on " + fmt("%.1f", 100.0 * d.fraction) + "% of " +
                                          std::to_string(d.counted) + " intervals");
        return v;
    });

    report(6, "discrete operator identities", 1.0, [] {
        Verdict v;
        std::mt19937_64 gen(6);
        double worst_sbp = 0.0;
        double worst_lap = 0.0;
        for (auto [nx, ny] : {std::pair{8, 8}, std::pair{17, 12}, std::pair{64, 48}}) {
            const GridSpec g = GridSpec::make(nx, ny, 1.0, 0.7);
            for (int trial = 0; trial < 3; ++trial) {
                VectorField w(g);
                for (double& x : w.ux_array().data()) x = uniform(gen, -1.0, 1.0);
                for (double& x : w.uy_array().data()) x = uniform(gen, -1.0, 1.0);
                w.zero_boundary();
                const ScalarField phi = random_field(g, gen);
                const double lhs = inner(divergence(w), phi);
                const double rhs = -inner(w, gradient(phi));
                worst_sbp = std::max(worst_sbp, std::abs(lhs - rhs) / (l2_norm(divergence(w)) * l2_norm(phi)));

                // 5-point Laplacian with mirrored ghosts (zero wall flux).
                const ScalarField lap = divergence(gradient(phi));
                auto at = [&](int i, int j) {
                    return phi(std::clamp(i, 0, nx - 1), std::clamp(j, 0, ny - 1));
                };
                double diff = 0.0;
                double scale = 0.0;
                for (int j = 0; j < ny; ++j) {
                    for (int i = 0; i < nx; ++i) {
                        const double ref = (at(i + 1, j) - 2.0 * at(i, j) + at(i - 1, j)) / (g.dx() * g.dx()) +
                                           (at(i, j + 1) - 2.0 * at(i, j) + at(i, j - 1)) / (g.dy() * g.dy());
                        diff = std::max(diff, std::abs(lap(i, j) - ref));
                        scale = std::max(scale, std::abs(ref));
                    }
                }
                worst_lap = std::max(worst_lap, diff / scale);
            }
        }
        v.require(worst_sbp <= 1e-12, "summation by parts " + fmt("%.1e", worst_sbp));
        v.require(worst_lap <= 1e-12, "div grad vs 5-point " + fmt("%.1e", worst_lap));
        return v;
    });

    report(7, "determinism and sigma = 0 reductions", 0.0, [&] {
        Verdict v;
        const FluidParams p;
        const GridSpec g = GridSpec::make(32, 32, 1.0, 1.0);
        State s = build_initial(InitialPreset{"gaussian-bump", 0.1, 1}, g, 1.0);
        for (int k = 0; k < 50; ++k) s = step(s, p, SolverConfig{}).state;
        BogovskiiSolver bog(g);
        double entropy = 0.0;
        for (double r : s.rho.values().data()) entropy += entropy_f(r, 1.0, p);
        const double relative = kinetic_energy(s) + entropy * g.cell_volume();
        const VSigma v0 = v_sigma(s, 1.0, 0.0, p, bog);
        const WSigma w0 = w_sigma(s, 1.0, 0.0, p, bog);
        v.require(v0.value == relative && v0.cross_term == 0.0, "V_0 == relative entropy energy");
        v.require(w0.value == dissipation(s, p), "W_0 == dissipation");

        RunConfig fixed = default_bump();
        fixed.grid.nx = fixed.grid.ny = 32;
        fixed.solver.t_end = 0.5;
        fixed.lyapunov.sigma_auto = false;
        fixed.lyapunov.sigma = 0.0;
        const RunOutcome o = execute_run(fixed);
        bool exact = !o.failure;
        for (std::size_t k = 0; exact && k < o.records.size(); ++k) {
            exact = o.records[k].V_sigma == o.terms[k].relative_energy() && o.records[k].W_sigma == o.records[k].D;
        }
        v.require(exact, "CSV columns at sigma = 0 reduce exactly");

        if (run_ok) {
            const RunOutcome again = execute_run(default_bump());
            v.require(again.csv() == run.csv(), "repeated default run gives a byte-identical CSV");
        } else {
            v.require(false, "default run failed: " + run_error);
        }
        return v;
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
