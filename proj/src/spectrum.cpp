#include "casimir/spectrum.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace casimir {

EigenDecomposition diagonalize(const OperatorMatrix& H, std::uint64_t fingerprint) {
    const double scale = std::max(1.0, H.mat.cwiseAbs().maxCoeff());
    if (H.hermiticity_error() > 1e-12 * scale)
        throw Error("diagonalize: input operator is not Hermitian");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H.mat);
    if (solver.info() != Eigen::Success) throw Error("diagonalize: eigensolver failed");

    EigenDecomposition out;
    out.energies = solver.eigenvalues();
    out.states = solver.eigenvectors();
    out.fingerprint = fingerprint;

    const double hnorm = std::max(H.mat.norm(), 1e-300);
    out.residual =
        (H.mat * out.states - out.states * out.energies.asDiagonal()).norm() / hnorm;
    if (out.residual > 1e-9) throw Error("diagonalize: eigenpair residual exceeds 1e-9");
    return out;
}

namespace {

// Run fn(i) for i in [0, n) on `workers` threads.
void parallel_for(long n, int workers, const std::function<void(long)>& fn) {
    workers = std::max(1, workers);
    if (workers == 1 || n <= 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mx;
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const long i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lk(err_mx);
                    if (!err) err = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

} // namespace

SpectrumSweep sweep_spectrum(const HamiltonianModel& model_template,
                             const std::vector<int>& truncations,
                             const std::vector<double>& omega_grid, int n_levels,
                             OrderSet orders, int workers) {
    if (omega_grid.empty()) throw Error("sweep_spectrum: empty grid");
    for (std::size_t i = 1; i < omega_grid.size(); ++i)
        if (!(omega_grid[i] > omega_grid[i - 1]))
            throw Error("sweep_spectrum: grid must be strictly increasing");

    SpectrumSweep sweep;
    sweep.omega_grid = omega_grid;
    sweep.orders = orders;

    HamiltonianModel probe = model_template;
    probe.include_orders = orders;
    probe.set_mechanical_frequency(omega_grid.front());
    const HilbertSpace space0 = default_space(probe, truncations);
    if (n_levels < 1 || n_levels > space0.dim())
        throw Error("sweep_spectrum: n_levels outside [1, dim]");

    sweep.levels.resize(static_cast<long>(omega_grid.size()), n_levels);

    parallel_for(static_cast<long>(omega_grid.size()), workers, [&](long i) {
        HamiltonianModel m = model_template;
        m.include_orders = orders;
        m.set_mechanical_frequency(omega_grid[static_cast<std::size_t>(i)]);
        const HilbertSpace space = default_space(m, truncations);
        const auto eig = diagonalize(build_hamiltonian(space, m));
        for (int k = 0; k < n_levels; ++k)
            sweep.levels(i, k) = eig.energies(k) - eig.energies(0);
    });

    for (std::size_t i = 1; i < omega_grid.size(); ++i) {
        const double dOm = omega_grid[i] - omega_grid[i - 1];
        for (int k = 0; k < n_levels; ++k) {
            const double slope =
                std::abs(sweep.levels(static_cast<long>(i), k) - sweep.levels(static_cast<long>(i) - 1, k)) / dOm;
            sweep.max_level_slope = std::max(sweep.max_level_slope, slope);
        }
    }
    return sweep;
}

namespace {

GapResult refine_minimum(const std::vector<double>& omegas, const std::vector<double>& gaps) {
    const auto it = std::min_element(gaps.begin(), gaps.end());
    const std::size_t k = static_cast<std::size_t>(it - gaps.begin());
    GapResult out{gaps[k], omegas[k], false};
    if (k > 0 && k + 1 < gaps.size()) {
        const double y0 = gaps[k - 1], y1 = gaps[k], y2 = gaps[k + 1];
        const double denom = y0 - 2.0 * y1 + y2;
        if (denom > 0.0) {
            const double shift = 0.5 * (y0 - y2) / denom;  // in grid-step units
            if (std::abs(shift) <= 1.0) {
                out.gap = y1 - 0.25 * (y0 - y2) * shift;
                out.omega_at_min = omegas[k] + shift * (omegas[k + 1] - omegas[k]);
                out.refined = true;
            }
        }
    }
    return out;
}

} // namespace

GapResult avoided_crossing_gap(const SpectrumSweep& sweep, int level_lower, int level_upper,
                               double omega_lo, double omega_hi) {
    if (level_upper != level_lower + 1)
        throw Error("avoided_crossing_gap: levels must be adjacent");
    if (level_upper >= sweep.levels.cols() || level_lower < 0)
        throw Error("avoided_crossing_gap: level index out of range");
    std::vector<double> omegas, gaps;
    for (std::size_t i = 0; i < sweep.omega_grid.size(); ++i) {
        const double om = sweep.omega_grid[i];
        if (om < omega_lo || om > omega_hi) continue;
        omegas.push_back(om);
        gaps.push_back(sweep.levels(static_cast<long>(i), level_upper) -
                       sweep.levels(static_cast<long>(i), level_lower));
    }
    if (omegas.empty()) throw Error("avoided_crossing_gap: window contains no grid points");
    return refine_minimum(omegas, gaps);
}

GapResult diabatic_pair_gap(const HamiltonianModel& model_template,
                            const std::vector<int>& truncations,
                            const std::vector<double>& omega_grid,
                            const std::vector<int>& occupation_a,
                            const std::vector<int>& occupation_b, OrderSet orders, int workers) {
    if (omega_grid.empty()) throw Error("diabatic_pair_gap: empty grid");

    std::vector<double> gaps(omega_grid.size());
    parallel_for(static_cast<long>(omega_grid.size()), workers, [&](long i) {
        HamiltonianModel m = model_template;
        m.include_orders = orders;
        m.set_mechanical_frequency(omega_grid[static_cast<std::size_t>(i)]);
        const HilbertSpace space = default_space(m, truncations);
        const auto eig = diagonalize(build_hamiltonian(space, m));
        const long ia = space.index_of(occupation_a);
        const long ib = space.index_of(occupation_b);
        const Eigen::VectorXd ov_a = eig.states.row(ia).cwiseAbs2().transpose();
        const Eigen::VectorXd ov_b = eig.states.row(ib).cwiseAbs2().transpose();
        // Joint selection: the (i < j) pair carrying the most combined weight
        // of the two diabatic states. Scanning the low end of the spectrum is
        // enough; the crossing pair sits within a few levels of the bare pair.
        const long n_scan = std::min<long>(eig.energies.size(), 40);
        double best = -1.0;
        long bi = 0, bj = 1;
        for (long p = 0; p < n_scan; ++p) {
            for (long q = p + 1; q < n_scan; ++q) {
                const double s = ov_a(p) * ov_b(q) + ov_a(q) * ov_b(p);
                if (s > best) {
                    best = s;
                    bi = p;
                    bj = q;
                }
            }
        }
        gaps[static_cast<std::size_t>(i)] = eig.energies(bj) - eig.energies(bi);
    });
    return refine_minimum(omega_grid, gaps);
}

} // namespace casimir
