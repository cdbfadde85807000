// perturbation.hpp — Rayleigh-Schrodinger theory for H = H0 + eps H1 +
// eps^2 H2 + eps^3 H3, where each order of the perturbation enters at its
// own power of eps, plus closed-form vacuum corrections of the multimode
// models.

#pragma once

#include <map>
#include <utility>
#include <vector>

#include "casimir/hamiltonian.hpp"
#include "casimir/spectrum.hpp"

namespace casimir {

struct PerturbativeResult {
    int level{0};
    double E0{0.0}, E1{0.0}, E2{0.0}, E3{0.0};
    // c^(1)_{nl} and c^(2)_{nl} over the unperturbed basis (entry n is zero)
    Eigen::VectorXcd state1, state2;
    double normalization{1.0};  // C = 1 - eps^2 sum |c1|^2
    int max_order{3};
};

// Energy corrections for level n of eig0 (the H0 eigensystem). E2 contains
// the <n|H2|n> term and E3 the 2<n|H2|l> cross term plus <n|H3|n>, on top of
// the textbook H1 sums. Throws DegenerateLevelError when the level spacing
// around n falls below delta_deg (an active resonance).
PerturbativeResult perturbative_energy(const EigenDecomposition& eig0, const OperatorMatrix& H1,
                                       const OperatorMatrix& H2, const OperatorMatrix& H3, int n,
                                       int max_order, double delta_deg);

// State corrections |n^(1)>, |n^(2)> and the normalization C; epsilon enters
// only through C.
PerturbativeResult perturbative_state(const EigenDecomposition& eig0, const OperatorMatrix& H1,
                                      const OperatorMatrix& H2, int n, int max_order,
                                      double delta_deg, double epsilon);

// Degeneracy guard used by the CLI: 1e-6 times the largest model frequency.
double default_delta_deg(const HamiltonianModel& model);

// Closed-form first-order vacuum corrections and the second-order vacuum
// energy of the 1-D / 3-D multimode models, evaluated at the geometry's
// finite mode cutoff (the sums diverge with cutoff; no regularization).
struct VacuumClosedForms {
    // total amplitude onto |0,...,0,1_b> (all per-mode terms land on one ket)
    double amp_single_phonon{0.0};
    // amplitude onto |2_n, 1_b> per optical mode (space order)
    std::vector<double> amp_two_photon;
    // amplitude onto |1_n 1_m 1_b> for mode pairs n < m sharing transverse
    // indices (3-D) or any n < m (1-D)
    std::map<std::pair<int, int>, double> amp_photon_pair;
    // E0^(2): the <0|H2|0> channel plus the radiation-pressure and
    // counterrotating channels assembled from the amplitude families above
    double energy_second_order{0.0};
};

VacuumClosedForms vacuum_closed_forms(const HamiltonianModel& model);

} // namespace casimir
