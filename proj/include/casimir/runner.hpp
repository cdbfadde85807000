// runner.hpp — implementations behind the CLI subcommands

#pragma once

#include <iosfwd>

#include "casimir/config.hpp"

namespace casimir {

struct GapTableRow {
    std::string resonance;  // "first" | "second" | "third"
    std::string orders;     // "1" | "123"
    double gap{0.0};
    double omega_at_min{0.0};
};

// Sweep + zoom windows; writes spectrum_orders_1.csv / spectrum_orders_123.csv
// (+ .meta.json sidecars) under out_dir and prints the gap table.
std::vector<GapTableRow> run_spectrum(const RunConfig& cfg, const std::string& out_dir,
                                      std::ostream& log);

// Trajectory run; writes trajectory.csv + sidecar. Returns the records.
std::vector<TrajectoryRecord> run_dynamics(const RunConfig& cfg, const std::string& out_dir,
                                           std::ostream& log);

// Perturbative energies/states per level; writes perturbation.csv + sidecar.
void run_perturbation(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);

// Effective scattering coupling report (stdout only).
CouplingBreakdown run_coupling(const RunConfig& cfg, std::ostream& log);

// Re-runs a scalar observable with every truncation raised by two and
// reports the relative change (convergence utility; pass threshold 1e-3).
struct ConvergenceReport {
    double value{0.0};
    double value_refined{0.0};
    double relative_change{0.0};
    bool converged{false};
};

ConvergenceReport convergence_check(const std::function<double(const std::vector<int>&)>& observable,
                                    const std::vector<int>& truncations, double threshold = 1e-3);

std::string build_id();

} // namespace casimir
