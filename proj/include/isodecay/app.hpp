/// @file app.hpp
/// @brief Orchestration behind the command line: a full run with sigma
/// selection, fits and the CSV/SVG outputs, and the self-check commands.
/// Commands return the process exit status: 0 success, 2 bad input,
/// 3 numerical failure, 4 failed check, 1 anything else.
#pragma once

#include <exception>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "isodecay/config.hpp"
#include "isodecay/csv.hpp"
#include "isodecay/lyapunov.hpp"

namespace isodecay {

inline constexpr int exit_ok = 0;
inline constexpr int exit_other = 1;
inline constexpr int exit_input = 2;
inline constexpr int exit_numerical = 3;
inline constexpr int exit_check = 4;

int exit_code_for(const std::exception& e);

struct RunFailure {
    int exit_code = exit_other;
    std::string message;
};

struct RunOutcome {
    RunConfig config;
    double rho_s = 0.0;  // mean of the initial density
    int steps = 0;
    std::vector<LyapunovTerms> terms;
    std::vector<bool> rho_bound_ok;

    SigmaSelection selection;  // on failure only sigma is meaningful
    std::vector<DiagnosticsRecord> records;

    std::optional<DecayFit> fit_v;       // empty when the window has too few positive values
    std::optional<DecayFit> fit_energy;
    DifferentialInequalityReport differential;
    double ineq_39_fraction = 1.0;
    double bounds_fraction = 1.0;  // records satisfying all three selection bounds

    bool hypothesis_violation = false;  // rho exceeded rho_bar somewhere
    double max_rho = 0.0;
    double mass_drift = 0.0;  // max |mass(t) - mass(0)| / mass(0)
    int config_warnings = 0;

    std::optional<RunFailure> failure;

    double fit_window_start() const;
    double fit_window_end() const { return config.solver.t_end; }
    SummaryEntries summary() const;
    std::string csv() const;
};

/// Runs the solver, collects sigma-independent terms at every output time,
/// then fixes sigma (selected or configured) and derives records, fits and
/// checks. Throws ConfigError for an invalid config; every later error is
/// captured in `failure` together with the records gathered up to that point,
/// which then carry the configured sigma (or 0) and C = 0.
RunOutcome execute_run(const RunConfig& config, int config_warnings = 0);

/// Canonical text of the default configuration.
std::string default_config_text();

int run_command(const std::string& config_path, bool svg, std::ostream& out, std::ostream& err);
int bogovskii_check_command(const std::string& config_path, std::ostream& out, std::ostream& err);
int entropy_check_command(const std::string& config_path, std::ostream& out, std::ostream& err);
/// Without a window, uses the one recorded in the CSV summary, else the last
/// three quarters of the time span.
int fit_command(const std::string& csv_path, std::optional<double> window_start,
                std::optional<double> window_end, std::ostream& out, std::ostream& err);

}  // namespace isodecay
