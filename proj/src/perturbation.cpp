#include "casimir/perturbation.hpp"

#include <cmath>

namespace casimir {

namespace {

void check_nondegenerate(const Eigen::VectorXd& E, int n, double delta_deg) {
    for (long m = 0; m < E.size(); ++m) {
        if (m == n) continue;
        if (std::abs(E(n) - E(m)) <= delta_deg)
            throw DegenerateLevelError(
                "perturbation: level spacing below delta_deg, a resonance is active");
    }
}

Eigen::MatrixXcd to_unperturbed_basis(const EigenDecomposition& eig0, const OperatorMatrix& op) {
    return eig0.states.adjoint() * op.mat * eig0.states;
}

} // namespace

PerturbativeResult perturbative_energy(const EigenDecomposition& eig0, const OperatorMatrix& H1,
                                       const OperatorMatrix& H2, const OperatorMatrix& H3, int n,
                                       int max_order, double delta_deg) {
    if (max_order < 1 || max_order > 3)
        throw Error("perturbative_energy: max_order must be 1..3");
    const Eigen::VectorXd& E = eig0.energies;
    if (n < 0 || n >= E.size()) throw Error("perturbative_energy: level index out of range");
    check_nondegenerate(E, n, delta_deg);

    PerturbativeResult out;
    out.level = n;
    out.max_order = max_order;
    out.E0 = E(n);

    const Eigen::MatrixXcd h1 = to_unperturbed_basis(eig0, H1);
    out.E1 = h1(n, n).real();
    if (max_order < 2) return out;

    const Eigen::MatrixXcd h2 = to_unperturbed_basis(eig0, H2);
    const long d = E.size();
    Eigen::VectorXcd v = h1.col(n);  // <l|H1|n>
    Eigen::VectorXcd g = Eigen::VectorXcd::Zero(d);  // c^(1)_{nl}
    double e2 = h2(n, n).real();
    for (long l = 0; l < d; ++l) {
        if (l == n) continue;
        const double dE = E(n) - E(l);
        g(l) = v(l) / dE;
        e2 += std::norm(v(l)) / dE;
    }
    out.E2 = e2;
    out.state1 = g;
    if (max_order < 3) return out;

    const Eigen::MatrixXcd h3 = to_unperturbed_basis(eig0, H3);
    // E3 = sum_{l != n} K_l <l|H1|n> + <n|H3|n> with
    // K_l = sum_{m != n} <n|H1|m> <m|H1|l> / ((En-Em)(En-El))
    //       - <n|H1|n> <n|H1|l> / (En-El)^2 + 2 <n|H2|l> / (En-El)
    const Eigen::VectorXcd gbar = g.conjugate();           // <n|H1|m>/(En-Em)
    const Eigen::VectorXcd chain = h1.adjoint() * gbar;    // sum_m <m|H1|l>^* ... transpose care below
    // chain(l) = sum_m conj(h1(m,l)) gbar(m) = sum_m <l|H1|m>^* <n|H1|m>/(En-Em)
    // We need sum_m <n|H1|m>/(En-Em) * <m|H1|l> = (h1^T gbar)(l).
    const Eigen::VectorXcd path = h1.transpose() * gbar;
    std::complex<double> e3 = 0.0;
    const std::complex<double> h1nn = h1(n, n);
    for (long l = 0; l < d; ++l) {
        if (l == n) continue;
        const double dE = E(n) - E(l);
        std::complex<double> Kl = path(l) / dE;
        Kl -= h1nn * std::conj(v(l)) / (dE * dE);
        Kl += 2.0 * std::conj(h2(l, n)) / dE;
        e3 += Kl * v(l);
    }
    (void)chain;
    e3 += h3(n, n);
    out.E3 = e3.real();
    return out;
}

PerturbativeResult perturbative_state(const EigenDecomposition& eig0, const OperatorMatrix& H1,
                                      const OperatorMatrix& H2, int n, int max_order,
                                      double delta_deg, double epsilon) {
    if (max_order < 1 || max_order > 2)
        throw Error("perturbative_state: max_order must be 1 or 2");
    const Eigen::VectorXd& E = eig0.energies;
    if (n < 0 || n >= E.size()) throw Error("perturbative_state: level index out of range");
    check_nondegenerate(E, n, delta_deg);

    PerturbativeResult out;
    out.level = n;
    out.max_order = max_order;
    out.E0 = E(n);

    const Eigen::MatrixXcd h1 = to_unperturbed_basis(eig0, H1);
    const long d = E.size();
    const Eigen::VectorXcd v = h1.col(n);
    Eigen::VectorXcd c1 = Eigen::VectorXcd::Zero(d);
    double sum_c1_sq = 0.0;
    for (long l = 0; l < d; ++l) {
        if (l == n) continue;
        c1(l) = v(l) / (E(n) - E(l));
        sum_c1_sq += std::norm(c1(l));
    }
    out.state1 = c1;
    out.E1 = h1(n, n).real();
    out.normalization = 1.0 - epsilon * epsilon * sum_c1_sq;
    if (max_order < 2) return out;

    const Eigen::MatrixXcd h2 = to_unperturbed_basis(eig0, H2);
    const Eigen::VectorXcd mixed = h1 * c1;  // sum_m <l|H1|m> c1(m)
    Eigen::VectorXcd c2 = Eigen::VectorXcd::Zero(d);
    const std::complex<double> h1nn = h1(n, n);
    for (long l = 0; l < d; ++l) {
        if (l == n) continue;
        const double dE = E(n) - E(l);
        c2(l) = mixed(l) / dE - v(l) * h1nn / (dE * dE) + h2(l, n) / dE;
    }
    out.state2 = c2;
    return out;
}

double default_delta_deg(const HamiltonianModel& model) {
    double fmax = model.mechanical_frequency();
    if (const auto* tb = std::get_if<ThreeBodyGeometry>(&model.geometry)) {
        fmax = std::max({fmax, tb->omega1, tb->omega2});
    } else if (const auto* od = std::get_if<OneDGeometry>(&model.geometry)) {
        fmax = std::max(fmax, od->n_max * M_PI / od->length);
    } else {
        const auto& td = std::get<ThreeDGeometry>(model.geometry);
        for (const auto& n : three_d_mode_labels(td))
            fmax = std::max(fmax, three_d_mode_frequency(td, n));
    }
    return 1e-6 * fmax;
}

VacuumClosedForms vacuum_closed_forms(const HamiltonianModel& model) {
    model.validate();
    const double Om = model.mechanical_frequency();

    // Per-mode (kx^2, kperp^2, omega) and the transverse-sharing predicate.
    struct Mode {
        double kx2, kperp2, omega;
        int label;  // n for 1-D; flattened (nx,ny,nz) for 3-D
        int nx;
        int trans;  // transverse bucket (ny,nz); -1 in 1-D
    };
    std::vector<Mode> modes;
    if (const auto* od = std::get_if<OneDGeometry>(&model.geometry)) {
        for (int n = 1; n <= od->n_max; ++n) {
            const double k = n * M_PI / od->length;
            modes.push_back({k * k, 0.0, k, n - 1, n, -1});
        }
    } else if (const auto* td = std::get_if<ThreeDGeometry>(&model.geometry)) {
        const auto labels = three_d_mode_labels(*td);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            const auto& n = labels[i];
            const double kx = M_PI * n[0] / td->Lx;
            const double ky = M_PI * n[1] / td->Ly;
            const double kz = M_PI * n[2] / td->Lz;
            modes.push_back({kx * kx, ky * ky + kz * kz,
                             std::sqrt(kx * kx + ky * ky + kz * kz), static_cast<int>(i), n[0],
                             (n[1] - 1) * td->nz_max + (n[2] - 1)});
        }
    } else {
        throw Error("vacuum_closed_forms: requires a 1-D or 3-D multimode geometry");
    }

    VacuumClosedForms out;
    out.amp_two_photon.resize(modes.size());

    double rp_element = 0.0;  // sum_n (knx^2 - kperp^2)/(2 omega_n); amp = rp/Omega
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const auto& m = modes[i];
        rp_element += (m.kx2 - m.kperp2) / (2.0 * m.omega);
        out.amp_two_photon[i] = std::sqrt(2.0) * m.kx2 / (2.0 * m.omega * (2.0 * m.omega + Om));
    }
    out.amp_single_phonon = rp_element / Om;

    for (std::size_t i = 0; i < modes.size(); ++i) {
        for (std::size_t j = i + 1; j < modes.size(); ++j) {
            const auto &a = modes[i], &b = modes[j];
            if (a.trans != b.trans) continue;  // m differs from n in n_x only
            const double sign = ((a.nx + b.nx) % 2 == 0) ? 1.0 : -1.0;
            const double kk = std::sqrt(a.kx2 * b.kx2);
            out.amp_photon_pair[{a.label, b.label}] =
                sign * kk / (std::sqrt(a.omega * b.omega) * (a.omega + b.omega + Om));
        }
    }

    // E0^(2), channel by channel. The <0|H2|0> piece comes from the model's
    // own H2; the remaining channels are |element|^2 / (E0 - E_channel) with
    // the elements implied by the amplitude families:
    //   radiation pressure: element -rp_element, channel energy Omega
    //   two-photon:         element -sqrt2 kx^2/(2 w),  energy 2 w_n + Omega
    //   photon pair:        element -(+-) kn km/sqrt(wn wm), energy wn+wm+Om
    double e2 = 0.0;
    if (std::holds_alternative<OneDGeometry>(model.geometry)) {
        for (const auto& m : modes) e2 += m.omega / 2.0;  // <0|H2|0> of the +8 X^2 Xb^2 form
    } else {
        // <0|H2|0> of the 3-D H2: -2 sum_n [kx^2 kperp^2/w^3 <P^2> +
        // 2 kx^2 zeta_nn / w^5 <X^2>] <Xb^2>
        for (const auto& m : modes) {
            const double zeta_nn = zeta_coefficient(std::sqrt(m.kx2), std::sqrt(m.kx2), m.kperp2);
            e2 += -m.kx2 / (8.0 * std::pow(m.omega, 3)) *
                  (m.kperp2 + 2.0 * zeta_nn / (m.omega * m.omega));
        }
    }
    e2 -= rp_element * rp_element / Om;
    for (const auto& m : modes) e2 -= m.kx2 * m.kx2 / (2.0 * m.omega * m.omega * (2.0 * m.omega + Om));
    for (const auto& [nm, amp] : out.amp_photon_pair) {
        const auto& a = modes[static_cast<std::size_t>(nm.first)];
        const auto& b = modes[static_cast<std::size_t>(nm.second)];
        e2 -= (a.kx2 * b.kx2) / (a.omega * b.omega * (a.omega + b.omega + Om));
    }
    out.energy_second_order = e2;
    return out;
}

} // namespace casimir
