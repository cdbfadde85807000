// opensys.hpp — dressed-basis generalized master equation: transition
// tables, frequency-filtered dissipators, RK4 time integration and
// steady-state detection. All density matrices live in the eigenbasis of
// the system Hamiltonian.

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>

#include "casimir/spectrum.hpp"
#include "casimir/trajectory.hpp"

namespace casimir {

// n(omega, T) = 1/(exp(omega/T) - 1); exactly 0 for T <= 0 or omega/T > 700.
double thermal_occupation(double omega, double T);

struct FilterSpec {
    double delta{0.09};
};

// F(omega) = Theta(|omega|) - Theta(|omega| - Delta) with Theta(0) = 1:
// returns 1 iff |omega_mismatch| < delta (secular terms always kept,
// boundary excluded).
int filter_function(double omega_mismatch, const FilterSpec& filter);

enum class BathTarget { Cavity, Wall };

struct BathSpec {
    BathTarget target{BathTarget::Cavity};
    double temperature{0.0};
    double rate{1.0};
    std::vector<int> mode_indices;  // modes whose dressed operators couple to this bath

    void validate() const;
};

// One eigenbasis transition with E_upper > E_lower, coefficient
// <lower|(o + o^dag)|upper>.
struct Transition {
    int lower{0};
    int upper{0};
    double omega{0.0};
    std::complex<double> coeff;
};

struct DressedTransitionTable {
    std::vector<Transition> transitions;
    std::uint64_t eig_fingerprint{0};
    int mode_index{-1};
};

// Enumerate transitions of (bare_op + bare_op^dag) over eigenpairs with
// E_upper > E_lower, dropping |coeff| < coeff_floor. omega_floor < 0 selects
// an automatic degeneracy guard (1e-9 of the spectral scale); transitions
// inside a degenerate eigenspace are not transitions.
DressedTransitionTable dressed_transition_table(const EigenDecomposition& eig,
                                                const OperatorMatrix& bare_op, double coeff_floor,
                                                double omega_floor = -1.0, int mode_index = -1);

// Dressed lowering operator reconstructed from the table (eigenbasis).
Eigen::MatrixXcd dressed_lowering_operator(const DressedTransitionTable& table, long dim);

struct AssemblyOptions {
    FilterSpec filter{};
    // Transitions whose endpoints both sit above E0 + energy_window are
    // dropped (above it when absorption is frozen out, see the rule in the
    // implementation); infinity keeps everything.
    double energy_window{std::numeric_limits<double>::infinity()};
};

// Precomputed action of L_c + L_w in the Hamiltonian eigenbasis. Immutable
// after construction; safe to share read-only across threads.
class Liouvillian {
public:
    struct PairEntry {
        std::int32_t dst{0};  // linear (col-major) index written
        std::int32_t src{0};  // linear index read
        std::complex<double> w;
    };
    struct SideEntry {
        std::int32_t row{0}, col{0};
        std::complex<double> w;
    };
    struct BathTerms {
        BathSpec spec;
        std::vector<PairEntry> absorption;  // S2^dag rho S1 scatters
        std::vector<PairEntry> emission;    // S1 rho S2^dag scatters
        std::vector<SideEntry> left;        // out -= A rho
        std::vector<SideEntry> right;       // out -= rho B
        std::size_t pair_count{0};
    };

    Liouvillian(const EigenDecomposition& eig, std::vector<BathTerms> baths, FilterSpec filter);

    long dim() const { return energies_.size(); }
    const Eigen::VectorXd& energies() const { return energies_; }
    std::uint64_t eig_fingerprint() const { return fingerprint_; }
    const FilterSpec& filter() const { return filter_; }
    int n_baths() const { return static_cast<int>(baths_.size()); }
    const BathSpec& bath(int i) const { return baths_.at(static_cast<std::size_t>(i)).spec; }
    std::size_t term_count() const;

    // out accumulates the dissipator of bath i acting on rho (lab frame).
    void apply_bath(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out, int i) const;
    // dissipators of every bath with a given target summed
    Eigen::MatrixXcd apply_target(const Eigen::MatrixXcd& rho, BathTarget target) const;
    // full right-hand side -i[H, rho] + sum_baths L_i rho
    void apply_full(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const;
    // dissipator-only right-hand side
    void apply_dissipators(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const;

private:
    Eigen::VectorXd energies_;
    std::vector<BathTerms> baths_;
    FilterSpec filter_;
    std::uint64_t fingerprint_{0};
};

// Assemble the generalized dissipator: for every ordered pair of retained
// transitions (t1, t2) of one table with filter(omega_1 - omega_2) = 1, the
// four term groups (absorption/emission x left/right placement), each
// weighted rate/2, thermal factors n(omega, T) and n(omega, T) + 1 and the
// coefficient product c1 conj(c2).
Liouvillian build_liouvillian(const EigenDecomposition& eig,
                              const std::vector<std::pair<BathSpec, std::vector<DressedTransitionTable>>>& baths,
                              const AssemblyOptions& options = {});

enum class Frame {
    Lab,          // RK4 on the full right-hand side
    Interaction   // exact unitary conjugation; RK4 on the slow remainder
};

using RecordFn = std::function<TrajectoryRecord(double t, const Eigen::MatrixXcd& rho_lab)>;

struct EvolveOptions {
    double t_max{0.0};      // natural time units
    double dt{0.0};         // 0 = automatic for the chosen frame
    long record_every{0};   // steps between records; 0 = aim for ~300 records
    Frame frame{Frame::Interaction};
    double trace_tol{1e-6};        // abort threshold on |Tr rho - 1|
    double mineig_abort{-1e-5};    // abort threshold on min eig(rho)
    std::optional<double> steady_tol;  // stop when ||drho/dt||_F < tol ||rho||_F
};

struct EvolveResult {
    std::vector<TrajectoryRecord> records;
    Eigen::MatrixXcd rho_final;  // lab frame, eigenbasis
    double t_final{0.0};
    bool steady_reached{false};
    double final_residual{0.0};
    double dt_used{0.0};
};

// Fixed-step RK4 on rho0 (eigenbasis). Aborts with NumericalAbortError when
// the trace or positivity monitors trip. The recorder runs on lab-frame
// snapshots every record_every steps.
EvolveResult evolve(const Liouvillian& L, const Eigen::MatrixXcd& rho0, const EvolveOptions& opts,
                    const RecordFn& recorder = {});

// Integrate until ||drho/dt||_F < tol * ||rho||_F; throws if max_steps pass
// without convergence.
EvolveResult steady_state(const Liouvillian& L, const Eigen::MatrixXcd& rho0, double tol = 1e-8,
                          EvolveOptions opts = {}, const RecordFn& recorder = {});

// |occupation><occupation| rotated into the eigenbasis.
Eigen::MatrixXcd bare_state_density(const EigenDecomposition& eig, const HilbertSpace& space,
                                    const std::vector<int>& occupation);

struct DensityDiagnostics {
    double trace_deviation{0.0};
    double hermiticity_error{0.0};
    double min_eigenvalue{0.0};
};

DensityDiagnostics density_diagnostics(const Eigen::MatrixXcd& rho);

} // namespace casimir
