// spectrum.hpp — exact diagonalization, mechanical-frequency sweeps and
// avoided-crossing gap extraction.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "casimir/hamiltonian.hpp"

namespace casimir {

struct EigenDecomposition {
    Eigen::VectorXd energies;  // ascending
    Eigen::MatrixXcd states;   // eigenvectors as columns
    std::uint64_t fingerprint{0};
    double residual{0.0};      // max ||H v - E v|| / ||H||
};

// Dense Hermitian eigensolve; throws on non-Hermitian input.
EigenDecomposition diagonalize(const OperatorMatrix& H, std::uint64_t fingerprint = 0);

struct SpectrumSweep {
    std::vector<double> omega_grid;
    // levels(i, k) = E_k(omega_i) - E_0(omega_i); column 0 identically zero
    Eigen::MatrixXd levels;
    OrderSet orders;
    // max_k |E_k(i+1) - E_k(i)| / dOmega, a diagnostic against level-order
    // swaps corrupting curves
    double max_level_slope{0.0};
};

// Diagonalize the model at each grid point (grid strictly increasing) and
// store the lowest n_levels ground-subtracted energies. Points fan out over
// `workers` threads; results are stored in grid order regardless.
SpectrumSweep sweep_spectrum(const HamiltonianModel& model_template,
                             const std::vector<int>& truncations,
                             const std::vector<double>& omega_grid, int n_levels,
                             OrderSet orders, int workers = 1);

struct GapResult {
    double gap{0.0};
    double omega_at_min{0.0};
    bool refined{false};  // parabolic refinement applied (interior minimum)
};

// Minimum of (level k_upper - level k_lower) over a window of the sweep grid.
// Levels are tracked in sorted order, the paper-style plotting convention.
GapResult avoided_crossing_gap(const SpectrumSweep& sweep, int level_lower, int level_upper,
                               double omega_lo, double omega_hi);

// Gap between the two eigenstates tracked by their overlap with a pair of
// diabatic (bare) states. Robust when a spectator level crosses through the
// avoided crossing, where sorted-adjacent tracking reads the wrong pair.
GapResult diabatic_pair_gap(const HamiltonianModel& model_template,
                            const std::vector<int>& truncations,
                            const std::vector<double>& omega_grid,
                            const std::vector<int>& occupation_a,
                            const std::vector<int>& occupation_b, OrderSet orders,
                            int workers = 1);

} // namespace casimir
