/// @file lyapunov.hpp
/// @brief Corrected energy functionals for decay to equilibrium, the
/// constructive choice of the coupling constant sigma, the discrete check of
/// dV/dt + C V <= 0, and log-linear decay fitting.
///
/// With B the Bogovskii operator and rho_s the equilibrium density,
///
///   V(sigma) = int 1/2 rho |u|^2 + f(rho) - sigma rho u . B[rho - rho_s]
///   W(sigma) = mu |grad u|^2 + (lambda + mu) (div u)^2
///            + sigma * ( - rho u . B[div(rho u)]  + rho u (x) u : grad B[rho - rho_s]
///                        + (rho^gamma - rho_s^gamma)(rho - rho_s)
///                        - mu grad u : grad B[rho - rho_s]
///                        - (lambda + mu) div u (rho - rho_s) )
///
/// and dV/dt = -W along smooth solutions. Both are affine in sigma, so each
/// state is reduced once to a LyapunovTerms record and sigma is applied
/// afterwards.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "isodecay/bogovskii.hpp"
#include "isodecay/fluid.hpp"

namespace isodecay {

/// The sigma-independent pieces of V and W for one state.
struct LyapunovTerms {
    double t = 0.0;
    double E = 0.0;            // total energy
    double mass = 0.0;
    double max_rho = 0.0;
    double kinetic = 0.0;      // int 1/2 rho |u|^2
    double entropy = 0.0;      // int f(rho)
    double cross = 0.0;        // int rho u . B[rho - rho_s]
    double kinetic_L2 = 0.0;   // int rho |u|^2
    double rho_dist_L2 = 0.0;  // int (rho - rho_s)^2
    double u_L2 = 0.0;         // int |u|^2 over faces
    double grad_norm_sq = 0.0; // int |grad u|^2
    double b_norm_sq = 0.0;    // int |B[rho - rho_s]|^2

    // W = dissipation + sigma * (sum of the five coupled pieces).
    double dissipation = 0.0;
    double momentum_flux = 0.0;  // -int rho u . B[div(rho u)]
    double convection = 0.0;     // int rho u (x) u : grad B[rho - rho_s]
    double pressure = 0.0;       // int (rho^gamma - rho_s^gamma)(rho - rho_s)
    double viscous = 0.0;        // -mu int grad u : grad B[rho - rho_s]
    double bulk = 0.0;           // -(lambda + mu) int div u (rho - rho_s)

    double relative_energy() const { return kinetic + entropy; }
    double v(double sigma) const { return relative_energy() - sigma * cross; }
    double w(double sigma) const {
        return dissipation + sigma * (momentum_flux + convection + pressure + viscous + bulk);
    }
};

/// Reduces states to LyapunovTerms. Holds a Bogovskii workspace, so one
/// instance per thread.
class LyapunovEvaluator {
public:
    LyapunovEvaluator(const GridSpec& grid, const FluidParams& params, double rho_s,
                      SaddleSolverConfig bog = {});

    LyapunovTerms terms(const State& state);

    BogovskiiSolver& solver() { return solver_; }
    const FluidParams& params() const { return params_; }
    double rho_s() const { return rho_s_; }

private:
    FluidParams params_;
    double rho_s_;
    BogovskiiSolver solver_;
};

struct VSigma {
    double value = 0.0;
    double cross_term = 0.0;  // -sigma int rho u . B[rho - rho_s]
};

/// The six contributions to W, each already multiplied by its coefficient.
struct WSigma {
    double value = 0.0;
    std::array<double, 6> terms{};

    static const std::array<const char*, 6>& names();
};

VSigma v_sigma(const State& state, double rho_s, double sigma, const FluidParams& params,
               BogovskiiSolver& bog);
WSigma w_sigma(const State& state, double rho_s, double sigma, const FluidParams& params,
               BogovskiiSolver& bog);
WSigma w_breakdown(const LyapunovTerms& terms, double sigma);

struct SigmaSelection {
    double sigma = 0.0;
    double c0 = 0.0;  // V >= c0 (int rho|u|^2 + int (rho - rho_s)^2)
    double c1 = 0.0;  // V <= c1 (int |u|^2 + int (rho - rho_s)^2)
    double c2 = 0.0;  // W >= c2 (int |u|^2 + int (rho - rho_s)^2), required value
    double c2_effective = 0.0;  // smallest observed W / (int |u|^2 + int (rho - rho_s)^2)
    double C = 0.0;   // c2_effective / c1, so W >= C V on the samples
    double k1 = 0.0;
    double k2 = 0.0;
    double pressure_coercivity = 0.0;
    double operator_norm_sq = 0.0;  // bound used for int |B g|^2 / int g^2
    double poincare = 0.0;          // max int |u|^2 / int |grad u|^2 on the samples
    int halvings = 0;
};

struct SelectionContext {
    FluidParams params;
    double rho_s = 1.0;
    /// Squared W^{1,2} operator-norm estimate of B (e.g. from
    /// operator_norm_probe); raised to the largest ratio seen on the samples.
    double operator_norm_sq = 0.0;
    double sigma_start = 0.1;
    int max_halvings = 40;
};

/// Halves sigma from sigma_start until every sample satisfies
///   V >= c0 (int rho|u|^2 + int (rho - rho_s)^2),  c0 = 1/4 min(1, K1),
///   W >= c2 (int |u|^2 + int (rho - rho_s)^2),     c2 = sigma/2 min(1, Kp),
/// with K1 and Kp the entropy and pressure-coercivity probes on
/// [0, rho_bar]. Then c1 = max(rho_bar (1 + sigma)/2, K2 + sigma rho_bar c_B / 2)
/// bounds V from above and C = c2_effective / c1.
/// Throws SelectionFailure when no sigma works or a sample exceeds rho_bar.
SigmaSelection select_sigma(const std::vector<LyapunovTerms>& samples, const SelectionContext& ctx);
/// The constants of select_sigma at a caller-chosen sigma in [0, 1), with no
/// search and no pass/fail; check_bounds tells which bounds hold.
SigmaSelection evaluate_sigma(const std::vector<LyapunovTerms>& samples, const SelectionContext& ctx,
                              double sigma);
/// Same on states; runs the operator-norm probe on the state grid.
SigmaSelection select_sigma(const std::vector<State>& samples, double rho_s,
                            const FluidParams& params, const SaddleSolverConfig& bog = {});

/// The three bounds of a selection evaluated on one sample.
struct BoundCheck {
    bool lower_v = true;
    bool upper_v = true;
    bool lower_w = true;
};
BoundCheck check_bounds(const LyapunovTerms& s, const SigmaSelection& sel);

struct DiagnosticsRecord {
    double t = 0.0;
    double E = 0.0;
    double D = 0.0;
    double mass = 0.0;
    double kinetic_L2 = 0.0;
    double rho_dist_L2 = 0.0;
    double u_L2 = 0.0;
    double V_sigma = 0.0;
    double W_sigma = 0.0;
    double cross_term = 0.0;
    bool rho_bound_ok = true;
    bool ineq_39_ok = true;  // W >= C V
};

DiagnosticsRecord make_record(const LyapunovTerms& terms, double sigma, double C,
                              bool rho_bound_ok);

struct IntervalCheck {
    double t0 = 0.0;
    double t1 = 0.0;
    double lhs = 0.0;  // (V1 - V0)/(t1 - t0) + C (V0 + V1)/2
    bool ok = true;
};

struct DifferentialInequalityReport {
    double slack = 0.0;     // 0.05 max W
    double fraction = 1.0;  // of the counted intervals that satisfy lhs <= slack
    int counted = 0;
    std::vector<IntervalCheck> intervals;  // all intervals
    std::vector<double> flagged;           // t0 of counted failures
};

/// Discrete form of dV/dt + C V <= 0. Intervals starting before t_from are
/// reported but not counted.
DifferentialInequalityReport check_differential_inequality(
    const std::vector<DiagnosticsRecord>& series, double C, double t_from = 0.0);

struct DecayFit {
    double t_start = 0.0;
    double t_end = 0.0;
    double rate = 0.0;  // -slope of log(value) against t
    double intercept = 0.0;
    double r_squared = 0.0;  // 0 when the data has no spread
    int used = 0;
    int excluded = 0;  // nonpositive values dropped
};

/// Least squares fit of log(values) on t over [t_start, t_end]. Throws
/// InsufficientDataError with fewer than 3 positive values in the window.
DecayFit fit_log_linear(const std::vector<double>& t, const std::vector<double>& values,
                        double t_start, double t_end);

struct DecayFits {
    DecayFit v_sigma;
    DecayFit energy;  // int rho|u|^2 + int (rho - rho_s)^2
};

DecayFits fit_decay(const std::vector<DiagnosticsRecord>& series, double t_start, double t_end);

}  // namespace isodecay
