#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "isodecay/app.hpp"

int main(int argc, char** argv) {
    using namespace isodecay;
    CLI::App app{"Compressible Navier-Stokes decay-to-equilibrium diagnostics"};
    app.require_subcommand(1);
    app.footer("Config file: [section] headers, 'key = value' lines, '#' comments.\n"
               "Defaults (lyapunov.sigma is required only with sigma_auto = false):\n\n" +
               default_config_text() +
               "\nExit status: 0 success, 2 bad input, 3 numerical failure, 4 failed check.");

    std::string config_path;
    bool svg = false;
    auto* run = app.add_subcommand("run", "Simulate, select sigma, write the diagnostics CSV");
    run->add_option("config", config_path, "config file")->required();
    run->add_flag("--svg", svg, "also write a log-scale plot of V_sigma next to the CSV");

    auto* bog = app.add_subcommand("bogovskii-check", "Self-checks of the divergence solver");
    bog->add_option("config", config_path, "config file")->required();

    auto* ent = app.add_subcommand("entropy-check", "Self-checks of the relative entropy integrand");
    ent->add_option("config", config_path, "config file")->required();

    std::string csv_path;
    std::optional<double> window_start;
    std::optional<double> window_end;
    auto* fit = app.add_subcommand("fit", "Refit exponential decay on an existing CSV");
    fit->add_option("csv", csv_path, "diagnostics CSV")->required();
    fit->add_option("--window-start", window_start, "fit window start time");
    fit->add_option("--window-end", window_end, "fit window end time");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input;
    }

    if (*run) return run_command(config_path, svg, std::cout, std::cerr);
    if (*bog) return bogovskii_check_command(config_path, std::cout, std::cerr);
    if (*ent) return entropy_check_command(config_path, std::cout, std::cerr);
    return fit_command(csv_path, window_start, window_end, std::cout, std::cerr);
}
