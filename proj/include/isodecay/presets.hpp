/// @file presets.hpp
/// @brief Named initial conditions. Every preset has mean density equal to
/// the requested equilibrium value and reduces to the equilibrium state at
/// amplitude 0.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isodecay/fluid.hpp"

namespace isodecay {

struct InitialPreset {
    std::string name = "equilibrium";  // equilibrium | gaussian-bump | random | vortex
    double amplitude = 0.1;
    std::uint64_t seed = 1;

    friend bool operator==(const InitialPreset&, const InitialPreset&) = default;
};

const std::vector<std::string>& preset_names();

/// Throws DomainError for an unknown name, a negative amplitude, or an
/// amplitude that drives the density negative (the message carries the
/// minimum).
State build_initial(const InitialPreset& preset, const GridSpec& grid, double rho_s_target);

}  // namespace isodecay
