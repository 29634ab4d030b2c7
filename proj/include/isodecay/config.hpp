/// @file config.hpp
/// @brief Run configuration: line-based `key = value` entries under
/// `[section]` headers, '#' starts a comment. Unknown sections and keys are
/// rejected; a repeated key keeps its last value and produces a warning.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isodecay/bogovskii.hpp"
#include "isodecay/fluid.hpp"
#include "isodecay/presets.hpp"
#include "isodecay/solver.hpp"

namespace isodecay {

struct LyapunovConfig {
    bool sigma_auto = true;
    std::optional<double> sigma;  // required when sigma_auto is false
    double fit_window_start_fraction = 0.25;

    friend bool operator==(const LyapunovConfig&, const LyapunovConfig&) = default;
};

struct OutputConfig {
    std::string csv_path = "run.csv";
    bool svg = false;

    friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct RunConfig {
    GridSpec grid;
    FluidParams fluid;
    SolverConfig solver;
    LyapunovConfig lyapunov;
    InitialPreset init;
    double rho_s = 1.0;  // target mean density of the initial state
    OutputConfig output;
    SaddleSolverConfig bogovskii;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct ParsedConfig {
    RunConfig config;
    std::vector<std::string> warnings;
};

/// Parses and validates. Throws ConfigError whose message starts with
/// "line N:" for syntax errors, unknown keys and out-of-range values.
ParsedConfig parse_config(const std::string& text);

/// Reads a file and parses it; a missing or unreadable file is a ConfigError.
ParsedConfig load_config(const std::string& path);

/// Canonical text form; parse_config(render_config(c)).config == c for every
/// valid c.
std::string render_config(const RunConfig& config);

/// Validates a programmatically built configuration (same checks as
/// parse_config, without line numbers).
void validate_config(const RunConfig& config);

/// Shortest decimal string that reads back to the same double.
std::string format_double(double v);

}  // namespace isodecay
