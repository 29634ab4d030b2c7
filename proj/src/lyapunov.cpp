#include "isodecay/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "isodecay/errors.hpp"

namespace isodecay {

LyapunovEvaluator::LyapunovEvaluator(const GridSpec& grid, const FluidParams& params,
                                     double rho_s, SaddleSolverConfig bog)
    : params_(params), rho_s_(rho_s), solver_(grid, bog) {
    params_.validate();
    if (!(rho_s > 0.0)) throw DomainError("equilibrium density must be positive");
}

namespace {

// int rho u (x) u : grad b. Diagonal products at cell centers, off-diagonal
// ones at interior nodes; wall nodes drop out because u vanishes there.
double convection_term(const ScalarField& rho, const VectorField& u, const VelocityGradient& gb) {
    const GridSpec& g = rho.grid();
    double cells = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double ux = 0.5 * (u.ux(i, j) + u.ux(i + 1, j));
            const double uy = 0.5 * (u.uy(i, j) + u.uy(i, j + 1));
            cells += rho(i, j) * (ux * ux * gb.dux_dx(i, j) + uy * uy * gb.duy_dy(i, j));
        }
    }
    double nodes = 0.0;
    for (int j = 1; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i) {
            const double r = 0.25 * (rho(i - 1, j - 1) + rho(i, j - 1) + rho(i - 1, j) + rho(i, j));
            const double ux = 0.5 * (u.ux(i, j - 1) + u.ux(i, j));
            const double uy = 0.5 * (u.uy(i - 1, j) + u.uy(i, j));
            nodes += r * ux * uy * (gb.dux_dy(i, j) + gb.duy_dx(i, j));
        }
    }
    return (cells + nodes) * g.cell_volume();
}

}  // namespace

LyapunovTerms LyapunovEvaluator::terms(const State& state) {
    const GridSpec& g = solver_.grid();
    require_same_grid(g, state.rho.grid(), "LyapunovEvaluator::terms");
    require_same_grid(g, state.u.grid(), "LyapunovEvaluator::terms");
    const ScalarField& rho = state.rho;
    const VectorField& u = state.u;
    const double vol = g.cell_volume();

    LyapunovTerms out;
    out.t = state.t;
    out.E = total_energy(state, params_);
    out.mass = integrate(rho);
    out.max_rho = rho.max();
    out.kinetic = kinetic_energy(state);
    out.kinetic_L2 = 2.0 * out.kinetic;

    ScalarField dist(g);
    double entropy = 0.0;
    double press = 0.0;
    const double p_s = std::pow(rho_s_, params_.gamma);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double r = rho(i, j);
            dist(i, j) = r - rho_s_;
            entropy += entropy_f(r, rho_s_, params_);
            press += (std::pow(r, params_.gamma) - p_s) * (r - rho_s_);
        }
    }
    out.entropy = entropy * vol;
    out.pressure = press * vol;
    out.rho_dist_L2 = inner(dist, dist);
    out.u_L2 = inner(u, u);

    const TensorFieldNorms norms = velocity_norms(u);
    out.grad_norm_sq = norms.grad_norm_sq;
    out.dissipation = params_.mu * norms.grad_norm_sq + (params_.lambda + params_.mu) * norms.div_norm_sq;

    const VectorField m = momentum(rho, u);
    // rho - rho_s inherits round-off of size eps * rho, hence the scale.
    const BogovskiiSolution b_rho = solver_.solve(BogovskiiProblem{dist, l2_norm(rho)});
    out.cross = inner(m, b_rho.v);
    out.b_norm_sq = inner(b_rho.v, b_rho.v);

    const BogovskiiSolution b_flux =
        solver_.solve(BogovskiiProblem{divergence(m), l2_norm(m) / g.h_min()});
    out.momentum_flux = -inner(m, b_flux.v);

    const VelocityGradient gb = velocity_gradient(b_rho.v);
    out.convection = convection_term(rho, u, gb);
    out.viscous = -params_.mu * contract(velocity_gradient(u), gb);
    out.bulk = -(params_.lambda + params_.mu) * inner(divergence(u), dist);
    return out;
}

const std::array<const char*, 6>& WSigma::names() {
    static const std::array<const char*, 6> n{"dissipation", "momentum_flux", "convection",
                                              "pressure",    "viscous",       "bulk"};
    return n;
}

WSigma w_breakdown(const LyapunovTerms& t, double sigma) {
    WSigma w;
    w.terms = {t.dissipation,    sigma * t.momentum_flux, sigma * t.convection,
               sigma * t.pressure, sigma * t.viscous,     sigma * t.bulk};
    w.value = t.w(sigma);
    return w;
}

VSigma v_sigma(const State& state, double rho_s, double sigma, const FluidParams& params,
               BogovskiiSolver& bog) {
    LyapunovEvaluator ev(state.rho.grid(), params, rho_s, bog.config());
    const LyapunovTerms t = ev.terms(state);
    return {t.v(sigma), -sigma * t.cross};
}

WSigma w_sigma(const State& state, double rho_s, double sigma, const FluidParams& params,
               BogovskiiSolver& bog) {
    LyapunovEvaluator ev(state.rho.grid(), params, rho_s, bog.config());
    return w_breakdown(ev.terms(state), sigma);
}

BoundCheck check_bounds(const LyapunovTerms& s, const SigmaSelection& sel) {
    const double v = s.v(sel.sigma);
    const double w = s.w(sel.sigma);
    BoundCheck b;
    b.lower_v = v >= sel.c0 * (s.kinetic_L2 + s.rho_dist_L2);
    b.upper_v = v <= sel.c1 * (s.u_L2 + s.rho_dist_L2);
    b.lower_w = w >= sel.c2 * (s.u_L2 + s.rho_dist_L2);
    return b;
}

namespace {

// Sigma-independent constants: entropy and pressure probes, c0, c_B, c_P.
SigmaSelection probe_constants(const std::vector<LyapunovTerms>& samples, const SelectionContext& ctx) {
    if (samples.empty()) throw InsufficientDataError("sigma selection needs at least one sample");
    if (!(ctx.params.rho_bar > ctx.rho_s)) {
        throw SelectionFailure("rho_bar must exceed the equilibrium density");
    }
    SigmaSelection sel;
    const EntropyBounds kb = entropy_bounds_probe(ctx.rho_s, ctx.params.rho_bar, ctx.params);
    sel.k1 = kb.k1;
    sel.k2 = kb.k2;
    sel.pressure_coercivity = pressure_coercivity_probe(ctx.rho_s, ctx.params.rho_bar, ctx.params);
    sel.c0 = 0.25 * std::min(1.0, sel.k1);
    sel.operator_norm_sq = ctx.operator_norm_sq;
    for (const LyapunovTerms& s : samples) {
        if (s.rho_dist_L2 > 0.0) sel.operator_norm_sq = std::max(sel.operator_norm_sq, s.b_norm_sq / s.rho_dist_L2);
        if (s.grad_norm_sq > 0.0) sel.poincare = std::max(sel.poincare, s.u_L2 / s.grad_norm_sq);
    }
    return sel;
}

double required_c2(const SigmaSelection& sel, double sigma) {
    return 0.5 * sigma * std::min(1.0, sel.pressure_coercivity);
}

void complete(SigmaSelection& sel, const std::vector<LyapunovTerms>& samples, double sigma,
              const FluidParams& p) {
    sel.sigma = sigma;
    sel.c2 = required_c2(sel, sigma);
    sel.c2_effective = std::numeric_limits<double>::infinity();
    for (const LyapunovTerms& s : samples) {
        const double x = s.u_L2 + s.rho_dist_L2;
        if (x > 0.0) sel.c2_effective = std::min(sel.c2_effective, s.w(sigma) / x);
    }
    if (!std::isfinite(sel.c2_effective)) sel.c2_effective = sel.c2;
    sel.c1 = std::max(0.5 * p.rho_bar * (1.0 + sigma), sel.k2 + 0.5 * sigma * p.rho_bar * sel.operator_norm_sq);
    sel.C = sel.c2_effective / sel.c1;
}

}  // namespace

SigmaSelection select_sigma(const std::vector<LyapunovTerms>& samples, const SelectionContext& ctx) {
    if (samples.empty()) throw InsufficientDataError("sigma selection needs at least one sample");
    const FluidParams& p = ctx.params;
    for (const LyapunovTerms& s : samples) {
        if (s.max_rho > p.rho_bar) {
            std::ostringstream os;
            os << "density " << s.max_rho << " exceeds rho_bar = " << p.rho_bar << " at t = " << s.t
               << "; the upper-bound hypothesis fails and no sigma is admissible";
            throw SelectionFailure(os.str());
        }
    }
    SigmaSelection sel = probe_constants(samples, ctx);

    double sigma = ctx.sigma_start;
    std::string failure;
    for (int h = 0; h <= ctx.max_halvings; ++h, sigma *= 0.5) {
        const double c2 = required_c2(sel, sigma);
        failure.clear();
        for (const LyapunovTerms& s : samples) {
            const double v = s.v(sigma);
            const double w = s.w(sigma);
            std::ostringstream os;
            if (!(v >= sel.c0 * (s.kinetic_L2 + s.rho_dist_L2))) {
                os << "V >= c0 (int rho|u|^2 + int (rho - rho_s)^2) fails at t = " << s.t
                   << " (V = " << v << ")";
            } else if (!(w >= c2 * (s.u_L2 + s.rho_dist_L2))) {
                os << "W >= c2 (int |u|^2 + int (rho - rho_s)^2) fails at t = " << s.t
                   << " (W = " << w << ")";
            }
            failure = os.str();
            if (!failure.empty()) break;
        }
        if (!failure.empty()) continue;

        sel.halvings = h;
        complete(sel, samples, sigma, p);
        return sel;
    }
    std::ostringstream os;
    os << "no admissible sigma after " << ctx.max_halvings << " halvings from " << ctx.sigma_start
       << "; at sigma = " << sigma * 2.0 << ": " << failure;
    throw SelectionFailure(os.str());
}

SigmaSelection evaluate_sigma(const std::vector<LyapunovTerms>& samples, const SelectionContext& ctx,
                              double sigma) {
    if (!(sigma >= 0.0 && sigma < 1.0)) throw DomainError("sigma must lie in [0, 1)");
    SigmaSelection sel = probe_constants(samples, ctx);
    complete(sel, samples, sigma, ctx.params);
    return sel;
}

SigmaSelection select_sigma(const std::vector<State>& samples, double rho_s,
                            const FluidParams& params, const SaddleSolverConfig& bog) {
    if (samples.empty()) throw InsufficientDataError("sigma selection needs at least one sample");
    const GridSpec& g = samples.front().rho.grid();
    LyapunovEvaluator ev(g, params, rho_s, bog);
    std::vector<LyapunovTerms> terms;
    terms.reserve(samples.size());
    for (const State& s : samples) terms.push_back(ev.terms(s));
    SelectionContext ctx;
    ctx.params = params;
    ctx.rho_s = rho_s;
    const double probe = operator_norm_probe(g, bog, 3, 1);
    ctx.operator_norm_sq = probe * probe;
    return select_sigma(terms, ctx);
}

DiagnosticsRecord make_record(const LyapunovTerms& t, double sigma, double C, bool rho_bound_ok) {
    DiagnosticsRecord r;
    r.t = t.t;
    r.E = t.E;
    r.D = t.dissipation;
    r.mass = t.mass;
    r.kinetic_L2 = t.kinetic_L2;
    r.rho_dist_L2 = t.rho_dist_L2;
    r.u_L2 = t.u_L2;
    r.V_sigma = t.v(sigma);
    r.W_sigma = t.w(sigma);
    r.cross_term = -sigma * t.cross;
    r.rho_bound_ok = rho_bound_ok;
    r.ineq_39_ok = r.W_sigma >= C * r.V_sigma;
    return r;
}

DifferentialInequalityReport check_differential_inequality(
    const std::vector<DiagnosticsRecord>& series, double C, double t_from) {
    DifferentialInequalityReport rep;
    double w_max = 0.0;
    for (const DiagnosticsRecord& r : series) w_max = std::max(w_max, r.W_sigma);
    rep.slack = 0.05 * w_max;
    int good = 0;
    for (std::size_t k = 1; k < series.size(); ++k) {
        const DiagnosticsRecord& a = series[k - 1];
        const DiagnosticsRecord& b = series[k];
        IntervalCheck c;
        c.t0 = a.t;
        c.t1 = b.t;
        c.lhs = (b.V_sigma - a.V_sigma) / (b.t - a.t) + C * 0.5 * (a.V_sigma + b.V_sigma);
        c.ok = c.lhs <= rep.slack;
        rep.intervals.push_back(c);
        if (a.t < t_from) continue;
        ++rep.counted;
        if (c.ok) {
            ++good;
        } else {
            rep.flagged.push_back(a.t);
        }
    }
    rep.fraction = rep.counted > 0 ? static_cast<double>(good) / rep.counted : 1.0;
    return rep;
}

DecayFit fit_log_linear(const std::vector<double>& t, const std::vector<double>& values,
                        double t_start, double t_end) {
    if (t.size() != values.size()) throw ShapeError("fit: time and value series differ in length");
    if (!(t_start < t_end)) throw DomainError("fit window must satisfy t_start < t_end");
    DecayFit fit;
    fit.t_start = t_start;
    fit.t_end = t_end;
    const double eps = 1e-12 * std::max(std::abs(t_start), std::abs(t_end));
    std::vector<double> ts;
    std::vector<double> ys;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (t[k] < t_start - eps || t[k] > t_end + eps) continue;
        if (values[k] > 0.0) {
            ts.push_back(t[k]);
            ys.push_back(std::log(values[k]));
        } else {
            ++fit.excluded;
        }
    }
    fit.used = static_cast<int>(ts.size());
    if (fit.used < 3) {
        std::ostringstream os;
        os << "fit needs at least 3 positive values in [" << t_start << ", " << t_end << "], got "
           << fit.used << " (" << fit.excluded << " nonpositive excluded)";
        throw InsufficientDataError(os.str());
    }
    // Shift by the first sample so that a constant series gives exact zeros.
    const double y0 = ys.front();
    double t_mean = 0.0;
    double y_mean = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        t_mean += ts[k];
        y_mean += ys[k] - y0;
    }
    t_mean /= fit.used;
    y_mean /= fit.used;
    double stt = 0.0;
    double sty = 0.0;
    double syy = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const double dt = ts[k] - t_mean;
        const double dy = ys[k] - y0 - y_mean;
        stt += dt * dt;
        sty += dt * dy;
        syy += dy * dy;
    }
    if (stt == 0.0) throw InsufficientDataError("fit needs distinct sample times");
    const double slope = sty / stt;
    fit.rate = slope == 0.0 ? 0.0 : -slope;
    fit.intercept = y0 + y_mean - slope * t_mean;
    if (syy > 0.0) {
        const double ss_res = std::max(syy - slope * sty, 0.0);
        fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    }
    return fit;
}

DecayFits fit_decay(const std::vector<DiagnosticsRecord>& series, double t_start, double t_end) {
    std::vector<double> t;
    std::vector<double> v;
    std::vector<double> e;
    for (const DiagnosticsRecord& r : series) {
        t.push_back(r.t);
        v.push_back(r.V_sigma);
        e.push_back(r.kinetic_L2 + r.rho_dist_L2);
    }
    return {fit_log_linear(t, v, t_start, t_end), fit_log_linear(t, e, t_start, t_end)};
}

}  // namespace isodecay
