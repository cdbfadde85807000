// hamiltonian.hpp — builders for the cavity-wall Hamiltonians up to third
// order in the relative oscillation amplitude epsilon, plus the effective
// two-phonon-two-photon coupling.

#pragma once

#include <array>
#include <variant>
#include <vector>

#include "casimir/fock.hpp"

namespace casimir {

// Two cavity modes + one mechanical mode, frequencies (omega1, omega2, Omega).
struct ThreeBodyGeometry {
    double omega1{0.5};
    double omega2{1.0};
    double Omega{1.0};
    friend bool operator==(const ThreeBodyGeometry&, const ThreeBodyGeometry&) = default;
};

// 1-D cavity of length L, optical modes omega_n = n*pi/L for n = 1..n_max,
// plus the wall mode.
struct OneDGeometry {
    double length{M_PI};
    int n_max{1};
    double Omega{1.0};
    friend bool operator==(const OneDGeometry&, const OneDGeometry&) = default;
};

// 3-D box Lx*Ly*Lz with per-axis mode cutoffs; the wall oscillates along x.
struct ThreeDGeometry {
    double Lx{1.0}, Ly{1.0}, Lz{1.0};
    int nx_max{1}, ny_max{1}, nz_max{1};
    double Omega{1.0};
    friend bool operator==(const ThreeDGeometry&, const ThreeDGeometry&) = default;
};

using Geometry = std::variant<ThreeBodyGeometry, OneDGeometry, ThreeDGeometry>;

// Which interaction orders eps^k H_k to include (H_0 is always present).
struct OrderSet {
    std::array<bool, 3> included{false, false, false};

    static OrderSet all() { return {{true, true, true}}; }
    static OrderSet first_only() { return {{true, false, false}}; }
    static OrderSet from_list(const std::vector<int>& ks);

    bool contains(int k) const { return k >= 1 && k <= 3 && included[static_cast<std::size_t>(k - 1)]; }
    std::vector<int> as_list() const;
    friend bool operator==(const OrderSet&, const OrderSet&) = default;
};

struct HamiltonianModel {
    Geometry geometry;
    double epsilon{0.0};
    OrderSet include_orders = OrderSet::all();

    void validate() const;
    double mechanical_frequency() const;
    void set_mechanical_frequency(double Omega);
    friend bool operator==(const HamiltonianModel&, const HamiltonianModel&) = default;
};

// Mode labels (n_x, n_y, n_z) of the 3-D geometry in the fixed space order
// (lexicographic, mechanical mode last).
std::vector<std::array<int, 3>> three_d_mode_labels(const ThreeDGeometry& g);
double three_d_mode_frequency(const ThreeDGeometry& g, const std::array<int, 3>& n);

// Space with the mode ordering each builder expects.
HilbertSpace default_space(const HamiltonianModel& model, const std::vector<int>& truncations);

// Interaction term H_k (k = 1..3), not scaled by eps^k. H_0 for k = 0.
OperatorMatrix interaction_term(const HilbertSpace& space, const HamiltonianModel& model, int k);

OperatorMatrix build_three_body(const HilbertSpace& space, const HamiltonianModel& model);
OperatorMatrix build_1d_multimode(const HilbertSpace& space, const HamiltonianModel& model);
OperatorMatrix build_3d_multimode(const HilbertSpace& space, const HamiltonianModel& model);
OperatorMatrix build_hamiltonian(const HilbertSpace& space, const HamiltonianModel& model);

// Radiation-pressure term 2 sum_n (kperp^2 - knx^2)/omega_n (n_hat + 1/2) X_b
// (1-D geometry is the kperp -> 0 limit).
OperatorMatrix radiation_pressure_term(const HilbertSpace& space, const HamiltonianModel& model);

// Coefficient functions of the 3-D interaction terms.
double zeta_coefficient(double knx, double kmx, double kperp2);
double theta_coefficient(double knx, double kmx, double kperp2, double omega_n, double omega_m, double Lx);
double chi_coefficient(double knx, double kmx, double kperp2, double omega_n, double omega_m, double Lx);

// Effective two-phonon-two-photon scattering coupling at 2*Omega = 2*omega_1:
// g_virtual from second-order virtual processes, g_H2 the direct quadratic
// contribution.
struct CouplingBreakdown {
    double g_total{0.0};
    double g_virtual{0.0};
    double g_H2{0.0};
    double virtual_fraction{0.0};
};

CouplingBreakdown effective_scattering_coupling(double omega1, double omega2, double Omega);

} // namespace casimir
