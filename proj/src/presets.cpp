#include "isodecay/presets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "isodecay/errors.hpp"
#include "isodecay/random.hpp"

namespace isodecay {

namespace {

constexpr double pi = std::numbers::pi;
constexpr int random_modes = 4;

// rho = rho_s (1 + amplitude (p - mean p)), so the mean is rho_s up to round-off.
ScalarField perturbed_density(const ScalarField& p, double rho_s, double amplitude) {
    const double mean = integrate(p) / p.grid().area();
    ScalarField rho(p.grid());
    auto& r = rho.values().data();
    const auto& pd = p.values().data();
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = rho_s * (1.0 + amplitude * (pd[k] - mean));
    return rho;
}

ScalarField gaussian_bump(const GridSpec& g) {
    ScalarField b(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double x = b.x(i) / g.lx - 0.5;
            const double y = b.y(j) / g.ly - 0.5;
            b(i, j) = std::exp(-50.0 * (x * x + y * y));
        }
    }
    return b;
}

// Cosine modes 1..random_modes in each direction with seeded coefficients
// decaying like 1/(k^2 + l^2); scaled to unit max norm.
ScalarField smooth_random(const GridSpec& g, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::vector<double> coef(random_modes * random_modes);
    for (int l = 1; l <= random_modes; ++l) {
        for (int k = 1; k <= random_modes; ++k) {
            coef[(l - 1) * random_modes + (k - 1)] = uniform(gen, -1.0, 1.0) / (k * k + l * l);
        }
    }
    ScalarField p(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double x = p.x(i) / g.lx;
            const double y = p.y(j) / g.ly;
            double s = 0.0;
            for (int l = 1; l <= random_modes; ++l) {
                for (int k = 1; k <= random_modes; ++k) {
                    s += coef[(l - 1) * random_modes + (k - 1)] * std::cos(k * pi * x) *
                         std::cos(l * pi * y);
                }
            }
            p(i, j) = s;
        }
    }
    const double scale = std::max(std::abs(p.max()), std::abs(p.min()));
    if (scale > 0.0) {
        for (double& v : p.values().data()) v /= scale;
    }
    return p;
}

VectorField vortex(const GridSpec& g, double amplitude) {
    VectorField u(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i <= g.nx; ++i) {
            const double x = i * g.dx() / g.lx;
            const double y = (j + 0.5) * g.dy() / g.ly;
            const double s = std::sin(pi * x);
            u.ux(i, j) = amplitude * s * s * std::sin(2 * pi * y);
        }
    }
    for (int j = 0; j <= g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double x = (i + 0.5) * g.dx() / g.lx;
            const double y = j * g.dy() / g.ly;
            const double s = std::sin(pi * y);
            u.uy(i, j) = -amplitude * std::sin(2 * pi * x) * s * s;
        }
    }
    u.zero_boundary();
    return u;
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"equilibrium", "gaussian-bump", "random", "vortex"};
    return names;
}

State build_initial(const InitialPreset& preset, const GridSpec& grid, double rho_s_target) {
    if (!(rho_s_target > 0.0)) throw DomainError("equilibrium density must be positive");
    if (!(preset.amplitude >= 0.0)) throw DomainError("preset amplitude must be nonnegative");
    State s{0.0, ScalarField(grid, rho_s_target), VectorField(grid)};
    if (preset.name == "equilibrium" || preset.amplitude == 0.0) {
        if (std::find(preset_names().begin(), preset_names().end(), preset.name) ==
            preset_names().end()) {
            throw DomainError("unknown preset '" + preset.name + "'");
        }
        return s;
    }
    if (preset.name == "gaussian-bump") {
        s.rho = perturbed_density(gaussian_bump(grid), rho_s_target, preset.amplitude);
    } else if (preset.name == "random") {
        s.rho = perturbed_density(smooth_random(grid, preset.seed), rho_s_target, preset.amplitude);
    } else if (preset.name == "vortex") {
        s.u = vortex(grid, preset.amplitude);
    } else {
        throw DomainError("unknown preset '" + preset.name + "'");
    }
    if (s.rho.min() < 0.0) {
        std::ostringstream os;
        os << "preset '" << preset.name << "' with amplitude " << preset.amplitude
           << " gives negative density (min " << s.rho.min() << ")";
        throw DomainError(os.str());
    }
    return s;
}

}  // namespace isodecay
