#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "isodecay/grid.hpp"
#include "isodecay/random.hpp"

namespace isodecay::testing {

inline ScalarField random_scalar(const GridSpec& g, std::mt19937_64& gen, double lo = -1.0,
                                 double hi = 1.0) {
    ScalarField f(g);
    for (double& x : f.values().data()) x = uniform(gen, lo, hi);
    return f;
}

inline ScalarField random_zero_mean(const GridSpec& g, std::mt19937_64& gen) {
    ScalarField f = random_scalar(g, gen);
    const double mean = integrate(f) / g.area();
    for (double& x : f.values().data()) x -= mean;
    return f;
}

/// Random interior values, boundary faces zero.
inline VectorField random_noslip(const GridSpec& g, std::mt19937_64& gen) {
    VectorField w(g);
    for (double& x : w.ux_array().data()) x = uniform(gen, -1.0, 1.0);
    for (double& x : w.uy_array().data()) x = uniform(gen, -1.0, 1.0);
    w.zero_boundary();
    return w;
}

inline double max_abs_diff(const VectorField& a, const VectorField& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.ux_array().size(); ++k) {
        m = std::max(m, std::abs(a.ux_array().data()[k] - b.ux_array().data()[k]));
    }
    for (std::size_t k = 0; k < a.uy_array().size(); ++k) {
        m = std::max(m, std::abs(a.uy_array().data()[k] - b.uy_array().data()[k]));
    }
    return m;
}

}  // namespace isodecay::testing
