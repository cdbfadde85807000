#include "casimir/opensys.hpp"

#include <algorithm>
#include <cmath>

namespace casimir {

double thermal_occupation(double omega, double T) {
    if (!(omega > 0.0)) throw Error("thermal_occupation: omega must be > 0");
    if (T <= 0.0) return 0.0;
    const double x = omega / T;
    if (x > 700.0) return 0.0;
    return 1.0 / std::expm1(x);
}

int filter_function(double omega_mismatch, const FilterSpec& filter) {
    if (!(filter.delta > 0.0)) throw Error("FilterSpec: delta must be > 0");
    return std::abs(omega_mismatch) < filter.delta ? 1 : 0;
}

void BathSpec::validate() const {
    if (!(rate > 0.0)) throw Error("BathSpec: rate must be > 0");
    if (temperature < 0.0) throw Error("BathSpec: temperature must be >= 0");
    if (mode_indices.empty()) throw Error("BathSpec: at least one coupled mode required");
}

DressedTransitionTable dressed_transition_table(const EigenDecomposition& eig,
                                                const OperatorMatrix& bare_op, double coeff_floor,
                                                double omega_floor, int mode_index) {
    const long d = eig.energies.size();
    if (bare_op.mat.rows() != d)
        throw Error("dressed_transition_table: operator dimension does not match eigensystem");
    if (omega_floor < 0.0) {
        const double scale = std::max(std::abs(eig.energies(0)), std::abs(eig.energies(d - 1)));
        omega_floor = 1e-9 * std::max(1.0, scale);
    }

    const Eigen::MatrixXcd X =
        eig.states.adjoint() * (bare_op.mat + bare_op.mat.adjoint()) * eig.states;

    DressedTransitionTable table;
    table.eig_fingerprint = eig.fingerprint;
    table.mode_index = mode_index;
    for (long a = 0; a < d; ++a) {
        for (long b = a + 1; b < d; ++b) {
            const double omega = eig.energies(b) - eig.energies(a);
            if (omega <= omega_floor) continue;
            const std::complex<double> c = X(a, b);
            if (std::abs(c) < coeff_floor) continue;
            table.transitions.push_back(
                {static_cast<int>(a), static_cast<int>(b), omega, c});
        }
    }
    return table;
}

Eigen::MatrixXcd dressed_lowering_operator(const DressedTransitionTable& table, long dim) {
    Eigen::MatrixXcd O = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& t : table.transitions) O(t.lower, t.upper) = t.coeff;
    return O;
}

Liouvillian::Liouvillian(const EigenDecomposition& eig, std::vector<BathTerms> baths,
                         FilterSpec filter)
    : energies_(eig.energies), baths_(std::move(baths)), filter_(filter),
      fingerprint_(eig.fingerprint) {}

std::size_t Liouvillian::term_count() const {
    std::size_t n = 0;
    for (const auto& b : baths_)
        n += b.absorption.size() + b.emission.size() + b.left.size() + b.right.size();
    return n;
}

void Liouvillian::apply_bath(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out, int i) const {
    const auto& b = baths_.at(static_cast<std::size_t>(i));
    const std::complex<double>* r = rho.data();
    std::complex<double>* o = out.data();
    for (const auto& e : b.absorption) o[e.dst] += e.w * r[e.src];
    for (const auto& e : b.emission) o[e.dst] += e.w * r[e.src];
    for (const auto& e : b.left) out.row(e.row) -= e.w * rho.row(e.col);
    for (const auto& e : b.right) out.col(e.col) -= e.w * rho.col(e.row);
}

Eigen::MatrixXcd Liouvillian::apply_target(const Eigen::MatrixXcd& rho, BathTarget target) const {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
    for (int i = 0; i < n_baths(); ++i)
        if (baths_[static_cast<std::size_t>(i)].spec.target == target) apply_bath(rho, out, i);
    return out;
}

void Liouvillian::apply_dissipators(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const {
    out.setZero();
    for (int i = 0; i < n_baths(); ++i) apply_bath(rho, out, i);
}

void Liouvillian::apply_full(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const {
    apply_dissipators(rho, out);
    const long d = dim();
    for (long c = 0; c < d; ++c)
        for (long rw = 0; rw < d; ++rw)
            out(rw, c) += std::complex<double>(0.0, -(energies_(rw) - energies_(c))) * rho(rw, c);
}

Liouvillian build_liouvillian(
    const EigenDecomposition& eig,
    const std::vector<std::pair<BathSpec, std::vector<DressedTransitionTable>>>& baths,
    const AssemblyOptions& options) {
    const long d = eig.energies.size();
    const double E0 = eig.energies(0);
    if (!(options.filter.delta > 0.0)) throw Error("build_liouvillian: filter delta must be > 0");

    std::vector<Liouvillian::BathTerms> out_baths;
    for (const auto& [spec, tables] : baths) {
        spec.validate();
        Liouvillian::BathTerms bt;
        bt.spec = spec;
        Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(d, d);
        Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(d, d);
        const double half = spec.rate / 2.0;

        for (const auto& table : tables) {
            if (table.eig_fingerprint != eig.fingerprint)
                throw Error("build_liouvillian: table eigenbasis fingerprint mismatch");

            // Window cut: a transition is irrelevant when its upper endpoint
            // is unreachable and either absorption out of the lower endpoint
            // is frozen (n = 0) or the lower endpoint is unreachable too.
            std::vector<Transition> kept;
            kept.reserve(table.transitions.size());
            for (const auto& t : table.transitions) {
                const double n_t = thermal_occupation(t.omega, spec.temperature);
                const bool lo_in = eig.energies(t.lower) - E0 <= options.energy_window;
                const bool hi_in = eig.energies(t.upper) - E0 <= options.energy_window;
                if (!hi_in && (n_t == 0.0 || !lo_in)) continue;
                kept.push_back(t);
            }
            std::sort(kept.begin(), kept.end(),
                      [](const Transition& a, const Transition& b) { return a.omega < b.omega; });

            std::vector<double> nbar(kept.size());
            for (std::size_t i = 0; i < kept.size(); ++i)
                nbar[i] = thermal_occupation(kept[i].omega, spec.temperature);

            std::size_t win_lo = 0;
            for (std::size_t i1 = 0; i1 < kept.size(); ++i1) {
                const auto& t1 = kept[i1];
                const double n1 = nbar[i1];
                while (win_lo < kept.size() && t1.omega - kept[win_lo].omega >= options.filter.delta)
                    ++win_lo;
                for (std::size_t i2 = win_lo; i2 < kept.size(); ++i2) {
                    const auto& t2 = kept[i2];
                    if (t2.omega - t1.omega >= options.filter.delta) break;
                    const double n2 = nbar[i2];
                    const std::complex<double> cc = t1.coeff * std::conj(t2.coeff);
                    ++bt.pair_count;

                    // sandwiches: S2^dag rho S1 -> (hi2, hi1) from (lo2, lo1);
                    // S1 rho S2^dag -> (lo1, lo2) from (hi1, hi2)
                    if (n1 + n2 != 0.0) {
                        bt.absorption.push_back(
                            {static_cast<std::int32_t>(t2.upper + d * t1.upper),
                             static_cast<std::int32_t>(t2.lower + d * t1.lower),
                             half * (n1 + n2) * cc});
                    }
                    bt.emission.push_back({static_cast<std::int32_t>(t1.lower + d * t2.lower),
                                           static_cast<std::int32_t>(t1.upper + d * t2.upper),
                                           half * (n1 + n2 + 2.0) * cc});

                    // non-sandwich placements collapse onto matrix products
                    // when endpoints coincide
                    if (t1.upper == t2.upper) {
                        A(t1.lower, t2.lower) += half * n2 * cc;
                        B(t1.lower, t2.lower) += half * n1 * cc;
                    }
                    if (t1.lower == t2.lower) {
                        A(t2.upper, t1.upper) += half * (n1 + 1.0) * cc;
                        B(t2.upper, t1.upper) += half * (n2 + 1.0) * cc;
                    }
                }
            }
        }

        for (long c = 0; c < d; ++c) {
            for (long rw = 0; rw < d; ++rw) {
                if (A(rw, c) != 0.0)
                    bt.left.push_back({static_cast<std::int32_t>(rw), static_cast<std::int32_t>(c),
                                       A(rw, c)});
                if (B(rw, c) != 0.0)
                    bt.right.push_back({static_cast<std::int32_t>(rw), static_cast<std::int32_t>(c),
                                        B(rw, c)});
            }
        }
        out_baths.push_back(std::move(bt));
    }
    return Liouvillian(eig, std::move(out_baths), options.filter);
}

// ------------------------------------------------------------- integration

namespace {

// Elementwise conjugation by exp(iHs): M_{jk} -> u_j M_{jk} conj(u_k).
void phase_conjugate(const Eigen::VectorXd& energies, double s, Eigen::MatrixXcd& m) {
    const long d = energies.size();
    Eigen::VectorXcd u(d);
    for (long j = 0; j < d; ++j) u(j) = std::polar(1.0, energies(j) * s);
    m = u.asDiagonal() * m * u.conjugate().asDiagonal();
}

double auto_dt(const Liouvillian& L, Frame frame) {
    const auto& E = L.energies();
    if (frame == Frame::Lab) {
        const double span = E(E.size() - 1) - E(0);
        return 0.02 / std::max(span, 1e-12);
    }
    // Interaction frame: the remaining generator carries the filter width and
    // the dissipative rates; bound the latter by the largest diagonal decay.
    double decay = 0.0;
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(L.dim());
    for (int i = 0; i < L.n_baths(); ++i) {
        // diagonal of A + B is twice the per-state decay rate of that bath
        Eigen::MatrixXcd probe = Eigen::MatrixXcd::Identity(L.dim(), L.dim());
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(L.dim(), L.dim());
        L.apply_bath(probe, out, i);
        for (long j = 0; j < L.dim(); ++j) diag(j) += std::abs(out(j, j).real());
    }
    decay = diag.maxCoeff();
    const double scale = std::max(L.filter().delta, decay);
    return 0.25 / std::max(scale, 1e-12);
}

} // namespace

EvolveResult evolve(const Liouvillian& L, const Eigen::MatrixXcd& rho0, const EvolveOptions& opts,
                    const RecordFn& recorder) {
    const long d = L.dim();
    if (rho0.rows() != d || rho0.cols() != d) throw Error("evolve: state dimension mismatch");
    if (!(opts.t_max > 0.0)) throw Error("evolve: t_max must be > 0");

    const double dt = opts.dt > 0.0 ? opts.dt : auto_dt(L, opts.frame);
    const long n_steps = static_cast<long>(std::ceil(opts.t_max / dt));
    const long record_every =
        opts.record_every > 0 ? opts.record_every : std::max<long>(1, n_steps / 300);

    const bool interaction = opts.frame == Frame::Interaction;
    const auto& E = L.energies();

    // RHS in the chosen frame at time t into `out`
    Eigen::MatrixXcd tmp(d, d);
    auto rhs = [&](double t, const Eigen::MatrixXcd& state, Eigen::MatrixXcd& out) {
        if (!interaction) {
            L.apply_full(state, out);
            return;
        }
        tmp = state;
        phase_conjugate(E, -t, tmp);
        L.apply_dissipators(tmp, out);
        phase_conjugate(E, t, out);
    };

    EvolveResult result;
    result.dt_used = dt;
    Eigen::MatrixXcd rho = rho0;
    Eigen::MatrixXcd k1(d, d), k2(d, d), k3(d, d), k4(d, d), stage(d, d);

    double t = 0.0;
    double last_good = 0.0;

    auto lab_state = [&](double at) {
        Eigen::MatrixXcd lab = rho;
        if (interaction) phase_conjugate(E, -at, lab);
        return lab;
    };

    auto check_and_record = [&](double at) {
        const Eigen::MatrixXcd lab = lab_state(at);
        const double trace_dev = std::abs(lab.trace().real() - 1.0) + std::abs(lab.trace().imag());
        if (trace_dev > opts.trace_tol)
            throw NumericalAbortError("evolve: trace drift exceeded tolerance", last_good);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (lab + lab.adjoint()),
                                                           Eigen::EigenvaluesOnly);
        const double mineig = es.eigenvalues().minCoeff();
        if (mineig < opts.mineig_abort)
            throw NumericalAbortError("evolve: density matrix lost positivity", last_good);
        if (recorder) result.records.push_back(recorder(at, lab));
        last_good = at;

        if (opts.steady_tol) {
            Eigen::MatrixXcd deriv(d, d);
            L.apply_full(lab, deriv);
            const double res = deriv.norm() / std::max(lab.norm(), 1e-300);
            result.final_residual = res;
            if (res < *opts.steady_tol) result.steady_reached = true;
        }
        return;
    };

    check_and_record(0.0);

    for (long step = 0; step < n_steps && !result.steady_reached; ++step) {
        rhs(t, rho, k1);
        stage = rho + (0.5 * dt) * k1;
        rhs(t + 0.5 * dt, stage, k2);
        stage = rho + (0.5 * dt) * k2;
        rhs(t + 0.5 * dt, stage, k3);
        stage = rho + dt * k3;
        rhs(t + dt, stage, k4);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += dt;

        // cheap per-step trace guard; full diagnostics at record points
        double tr = 0.0;
        for (long j = 0; j < d; ++j) tr += rho(j, j).real();
        if (std::abs(tr - 1.0) > opts.trace_tol)
            throw NumericalAbortError("evolve: trace drift exceeded tolerance", last_good);

        if ((step + 1) % record_every == 0 || step + 1 == n_steps) check_and_record(t);
    }

    result.rho_final = lab_state(t);
    result.t_final = t;
    return result;
}

EvolveResult steady_state(const Liouvillian& L, const Eigen::MatrixXcd& rho0, double tol,
                          EvolveOptions opts, const RecordFn& recorder) {
    if (opts.t_max <= 0.0) opts.t_max = 2e4;
    opts.steady_tol = tol;
    EvolveResult res = evolve(L, rho0, opts, recorder);
    if (!res.steady_reached)
        throw Error("steady_state: no convergence within the step budget");
    return res;
}

Eigen::MatrixXcd bare_state_density(const EigenDecomposition& eig, const HilbertSpace& space,
                                    const std::vector<int>& occupation) {
    const long idx = space.index_of(occupation);
    const Eigen::VectorXcd v = eig.states.row(idx).adjoint();  // <alpha|idx>
    return v * v.adjoint();
}

DensityDiagnostics density_diagnostics(const Eigen::MatrixXcd& rho) {
    DensityDiagnostics d;
    d.trace_deviation = std::abs(rho.trace() - std::complex<double>(1.0, 0.0));
    d.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()),
                                                       Eigen::EigenvaluesOnly);
    d.min_eigenvalue = es.eigenvalues().minCoeff();
    return d;
}

} // namespace casimir
