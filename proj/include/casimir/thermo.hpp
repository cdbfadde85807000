// thermo.hpp — heat flows, von Neumann entropy, entropy production rate and
// mode populations evaluated on lab-frame density-matrix snapshots.

#pragma once

#include "casimir/opensys.hpp"

namespace casimir {

struct HeatFlows {
    double J_c{0.0};
    double J_w{0.0};
    double imag_c{0.0};  // imaginary parts are numerical diagnostics
    double imag_w{0.0};
};

// J_alpha = Tr[H (L_alpha rho)] with H diagonal in the eigenbasis.
HeatFlows heat_flows(const Eigen::MatrixXcd& rho, const Liouvillian& L);

// S = -sum lambda ln lambda with eigenvalues clipped at `floor` (rho develops
// numerically zero eigenvalues from pure initial states).
double von_neumann_entropy(const Eigen::MatrixXcd& rho, double floor = 1e-14);

// Sigma_dot = -Tr[(L_w rho) ln rho] - Tr[(L_c rho) ln rho] - J_w/T_w - J_c/T_c.
// Bath temperatures come from the Liouvillian's bath specs.
double entropy_production_rate(const Eigen::MatrixXcd& rho, const Liouvillian& L,
                               double eig_floor = 1e-14);

enum class PopulationConvention { Bare, Dressed };

struct ModePopulations {
    double n_wall{0.0};
    double n_mode1{0.0};
    double n_mode2{0.0};
};

// Precomputed number operators in the eigenbasis: bare o^dag o, or O^dag O
// with O reconstructed from the dressed transition table.
class PopulationOps {
public:
    PopulationOps(const EigenDecomposition& eig, const HilbertSpace& space,
                  const std::vector<DressedTransitionTable>& optical_tables,
                  const DressedTransitionTable& wall_table, PopulationConvention convention);

    ModePopulations eval(const Eigen::MatrixXcd& rho) const;
    PopulationConvention convention() const { return convention_; }

private:
    Eigen::MatrixXcd n1_, n2_, nw_;
    PopulationConvention convention_;
};

ModePopulations mode_populations(const Eigen::MatrixXcd& rho, const PopulationOps& ops);

// Recorder assembling the trajectory CSV schema; one eigendecomposition of
// rho is shared by the entropy, ln rho and min-eigenvalue entries.
RecordFn make_record_evaluator(const Liouvillian& L, const PopulationOps& ops, double kappa0);

} // namespace casimir
