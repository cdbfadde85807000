// config.hpp — run configuration: a single JSON file whose defaults are the
// reference parameter set (omega2 = 2 omega1 = 1, gamma = 0.018,
// kappa = 0.006, T_c = 1e-6, T_w = 0.3, kappa0 = 0.003, Delta = 0.09).

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "casimir/hamiltonian.hpp"
#include "casimir/opensys.hpp"
#include "casimir/thermo.hpp"

namespace casimir {

enum class Command { Spectrum, Dynamics, Perturbation, Coupling };

struct RunConfig {
    Command command{Command::Dynamics};

    HamiltonianModel model{ThreeBodyGeometry{0.5, 1.0, 1.0}, 0.07, OrderSet::all()};
    // "first" (Omega = 2 w1), "second" (Omega = w1), "third" (Omega = 2 w1/3)
    std::optional<std::string> resonance;

    std::vector<int> truncations;  // empty = per-command default

    double kappa{0.006};
    double gamma{0.018};
    double T_c{1e-6};
    double T_w{0.3};
    double kappa0{0.003};
    double filter_delta{0.09};

    // dissipator assembly
    double coeff_floor{5e-3};
    // "auto" resolves to T_hot * ln(1e12); <= 0 disables the window
    double energy_window{-1.0};

    // integration
    double t_max_kappa0{30.0};
    double dt{0.0};
    long record_every{0};
    Frame frame{Frame::Interaction};
    bool stop_at_steady_state{false};
    double steady_tol{1e-8};

    PopulationConvention population_convention{PopulationConvention::Dressed};
    std::vector<int> initial_occupation;  // empty = joint bare vacuum

    // spectrum command
    double sweep_omega_min{0.25};
    double sweep_omega_max{1.25};
    int sweep_points{400};
    int n_levels{10};
    int zoom_points{200};

    // perturbation command
    std::vector<int> pt_levels{0};
    int pt_max_order{3};

    std::string output_dir{"out"};

    // resolved defaults
    std::vector<int> effective_truncations() const;
    double resolved_energy_window() const;
    void resolve_resonance();  // applies `resonance` to the model's Omega
};

// Parse + validate; any problem throws ConfigError naming the field and the
// line in the file.
RunConfig parse_config_file(const std::string& path, Command command);
RunConfig parse_config_text(const std::string& text, Command command,
                            const std::string& origin = "<config>");
RunConfig default_config(Command command);

// resolved-config echo for the metadata sidecar
std::string config_to_json(const RunConfig& cfg);

int worker_count_from_env();
std::optional<std::string> cache_dir_from_env();

} // namespace casimir
