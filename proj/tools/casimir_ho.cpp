// casimir-ho — numerical simulator for a quantized cavity field coupled to a
// vibrating wall, with interactions up to third order in the oscillation
// amplitude.

#include <iostream>

#include <CLI11.hpp>

#include "casimir/runner.hpp"

namespace {

casimir::RunConfig load(const std::string& config_path, casimir::Command cmd) {
    if (config_path.empty()) return casimir::default_config(cmd);
    return casimir::parse_config_file(config_path, cmd);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cavity + vibrating-wall simulator (spectra, open-system dynamics, "
                 "perturbation theory, effective couplings)"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON configuration file");
        sub->add_option("--out", out_dir, "output directory (default: config output.path)");
    };

    CLI::App* sc_spectrum = app.add_subcommand("spectrum", "eigenenergy sweep + gap report");
    CLI::App* sc_dynamics = app.add_subcommand("dynamics", "open-system trajectory");
    CLI::App* sc_pt = app.add_subcommand("perturbation", "perturbative energy corrections");
    CLI::App* sc_coupling = app.add_subcommand("coupling", "effective scattering coupling");
    for (auto* sub : {sc_spectrum, sc_dynamics, sc_pt, sc_coupling}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        casimir::Command cmd = casimir::Command::Coupling;
        if (sc_spectrum->parsed()) cmd = casimir::Command::Spectrum;
        if (sc_dynamics->parsed()) cmd = casimir::Command::Dynamics;
        if (sc_pt->parsed()) cmd = casimir::Command::Perturbation;

        casimir::RunConfig cfg = load(config_path, cmd);
        const std::string out = out_dir.empty() ? cfg.output_dir : out_dir;

        switch (cmd) {
            case casimir::Command::Spectrum:
                casimir::run_spectrum(cfg, out, std::cout);
                break;
            case casimir::Command::Dynamics:
                casimir::run_dynamics(cfg, out, std::cout);
                break;
            case casimir::Command::Perturbation:
                casimir::run_perturbation(cfg, out, std::cout);
                break;
            case casimir::Command::Coupling:
                casimir::run_coupling(cfg, std::cout);
                break;
        }
    } catch (const casimir::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const casimir::NumericalAbortError& e) {
        std::cerr << "numerical abort: " << e.what() << " (last good time " << e.last_good_time
                  << ")\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
