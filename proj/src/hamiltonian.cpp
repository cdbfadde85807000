#include "casimir/hamiltonian.hpp"

#include <cmath>

namespace casimir {

namespace {

double parity_sign(int n, int m) { return ((n + m) % 2 == 0) ? 1.0 : -1.0; }

void check_optical_prefix(const HilbertSpace& space, int n_optical) {
    if (space.n_modes() != n_optical + 1)
        throw Error("hamiltonian: space must have the geometry's optical modes plus one mechanical mode");
    for (int i = 0; i < n_optical; ++i)
        if (space.mode(i).kind != ModeKind::Optical)
            throw Error("hamiltonian: leading modes must be optical");
    if (space.mode(n_optical).kind != ModeKind::Mechanical)
        throw Error("hamiltonian: last mode must be mechanical");
}

} // namespace

OrderSet OrderSet::from_list(const std::vector<int>& ks) {
    OrderSet s;
    for (int k : ks) {
        if (k < 1 || k > 3) throw Error("OrderSet: orders must be 1, 2 or 3");
        s.included[static_cast<std::size_t>(k - 1)] = true;
    }
    return s;
}

std::vector<int> OrderSet::as_list() const {
    std::vector<int> out;
    for (int k = 1; k <= 3; ++k)
        if (contains(k)) out.push_back(k);
    return out;
}

void HamiltonianModel::validate() const {
    if (epsilon < 0.0 || epsilon > 0.2)
        throw Error("HamiltonianModel: epsilon must lie in [0, 0.2] (model premise eps << 1)");
    std::visit(
        [](const auto& g) {
            using G = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<G, ThreeBodyGeometry>) {
                if (!(g.omega1 > 0 && g.omega2 > 0 && g.Omega > 0))
                    throw Error("ThreeBodyGeometry: frequencies must be > 0");
            } else if constexpr (std::is_same_v<G, OneDGeometry>) {
                if (!(g.length > 0)) throw Error("OneDGeometry: length must be > 0");
                if (g.n_max < 1) throw Error("OneDGeometry: mode cutoff must be >= 1");
                if (!(g.Omega > 0)) throw Error("OneDGeometry: Omega must be > 0");
            } else {
                if (!(g.Lx > 0 && g.Ly > 0 && g.Lz > 0))
                    throw Error("ThreeDGeometry: box lengths must be > 0");
                if (g.nx_max < 1 || g.ny_max < 1 || g.nz_max < 1)
                    throw Error("ThreeDGeometry: cutoffs must be >= 1");
                if (!(g.Omega > 0)) throw Error("ThreeDGeometry: Omega must be > 0");
            }
        },
        geometry);
}

double HamiltonianModel::mechanical_frequency() const {
    return std::visit([](const auto& g) { return g.Omega; }, geometry);
}

void HamiltonianModel::set_mechanical_frequency(double Omega) {
    std::visit([Omega](auto& g) { g.Omega = Omega; }, geometry);
}

std::vector<std::array<int, 3>> three_d_mode_labels(const ThreeDGeometry& g) {
    std::vector<std::array<int, 3>> labels;
    labels.reserve(static_cast<std::size_t>(g.nx_max) * g.ny_max * g.nz_max);
    for (int nx = 1; nx <= g.nx_max; ++nx)
        for (int ny = 1; ny <= g.ny_max; ++ny)
            for (int nz = 1; nz <= g.nz_max; ++nz) labels.push_back({nx, ny, nz});
    return labels;
}

double three_d_mode_frequency(const ThreeDGeometry& g, const std::array<int, 3>& n) {
    const double kx = M_PI * n[0] / g.Lx;
    const double ky = M_PI * n[1] / g.Ly;
    const double kz = M_PI * n[2] / g.Lz;
    return std::sqrt(kx * kx + ky * ky + kz * kz);
}

HilbertSpace default_space(const HamiltonianModel& model, const std::vector<int>& truncations) {
    model.validate();
    std::vector<ModeSpec> modes;
    if (const auto* tb = std::get_if<ThreeBodyGeometry>(&model.geometry)) {
        if (truncations.size() != 3) throw Error("default_space: three truncations expected");
        modes = {{ModeKind::Optical, tb->omega1, truncations[0]},
                 {ModeKind::Optical, tb->omega2, truncations[1]},
                 {ModeKind::Mechanical, tb->Omega, truncations[2]}};
    } else if (const auto* od = std::get_if<OneDGeometry>(&model.geometry)) {
        if (truncations.size() != static_cast<std::size_t>(od->n_max) + 1)
            throw Error("default_space: n_max + 1 truncations expected");
        for (int n = 1; n <= od->n_max; ++n)
            modes.push_back({ModeKind::Optical, n * M_PI / od->length, truncations[static_cast<std::size_t>(n - 1)]});
        modes.push_back({ModeKind::Mechanical, od->Omega, truncations.back()});
    } else {
        const auto& td = std::get<ThreeDGeometry>(model.geometry);
        const auto labels = three_d_mode_labels(td);
        if (truncations.size() != labels.size() + 1)
            throw Error("default_space: one truncation per 3-D mode plus the wall expected");
        for (std::size_t i = 0; i < labels.size(); ++i)
            modes.push_back({ModeKind::Optical, three_d_mode_frequency(td, labels[i]),
                             truncations[i]});
        modes.push_back({ModeKind::Mechanical, td.Omega, truncations.back()});
    }
    return build_space(std::move(modes));
}

// ---------------------------------------------------------------- three-body

namespace {

// H_k of the two-mode + wall Hamiltonian. The shared bracket structure
// B(c1, c2, c12) = c1 X1^2 + c2 X2^2 + c12 X1 X2 keeps the term assembly
// uniform across orders.
Eigen::MatrixXcd three_body_term(const HilbertSpace& space, const ThreeBodyGeometry& g, int k) {
    const double w1 = g.omega1, w2 = g.omega2;
    const double sq = std::sqrt(w1 * w2);
    const Eigen::MatrixXcd X1 = quadrature_operator(space, 0, Quadrature::X).mat;
    const Eigen::MatrixXcd X2 = quadrature_operator(space, 1, Quadrature::X).mat;
    const Eigen::MatrixXcd Xb = quadrature_operator(space, 2, Quadrature::X).mat;

    auto bracket = [&](double c1, double c2, double c12, const Eigen::MatrixXcd& A1,
                       const Eigen::MatrixXcd& A2) -> Eigen::MatrixXcd {
        return c1 * (A1 * A1) + c2 * (A2 * A2) + c12 * (A1 * A2);
    };

    switch (k) {
        case 0: {
            Eigen::MatrixXcd h = w1 * number_operator(space, 0).mat;
            h += w2 * number_operator(space, 1).mat;
            h += g.Omega * number_operator(space, 2).mat;
            return h;
        }
        case 1:
            return -4.0 * (bracket(w1, w2, -sq, X1, X2) * Xb);
        case 2:
            return 8.0 * (bracket(w1, w2, -sq, X1, X2) * (Xb * Xb));
        case 3: {
            const Eigen::MatrixXcd P1 = quadrature_operator(space, 0, Quadrature::P).mat;
            const Eigen::MatrixXcd P2 = quadrature_operator(space, 1, Quadrature::P).mat;
            const Eigen::MatrixXcd Xb3 = Xb * Xb * Xb;
            const double c = 16.0 * M_PI * M_PI; // (4 pi)^2
            Eigen::MatrixXcd h = (c / 3.0) * (bracket(w1, 4.0 * w2, -2.0 * sq, P1, P2) * Xb3);
            h += (c / 6.0) * (bracket(w1, 8.0 * w2, -5.0 * sq, X1, X2) * Xb3);
            h += -16.0 * (bracket(w1, -w2, sq, X1, X2) * Xb3);
            return h;
        }
        default:
            throw Error("interaction_term: order must be 0..3");
    }
}

Eigen::MatrixXcd one_d_term(const HilbertSpace& space, const OneDGeometry& g, int k) {
    const int N = g.n_max;
    const long d = space.dim();
    std::vector<double> w(static_cast<std::size_t>(N));
    for (int n = 1; n <= N; ++n) w[static_cast<std::size_t>(n - 1)] = n * M_PI / g.length;

    if (k == 0) {
        Eigen::MatrixXcd h = g.Omega * number_operator(space, N).mat;
        for (int i = 0; i < N; ++i) h += w[static_cast<std::size_t>(i)] * number_operator(space, i).mat;
        return h;
    }

    std::vector<Eigen::MatrixXcd> X(static_cast<std::size_t>(N)), P(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) {
        X[static_cast<std::size_t>(i)] = quadrature_operator(space, i, Quadrature::X).mat;
        P[static_cast<std::size_t>(i)] = quadrature_operator(space, i, Quadrature::P).mat;
    }
    const Eigen::MatrixXcd Xb = quadrature_operator(space, N, Quadrature::X).mat;

    Eigen::MatrixXcd field = Eigen::MatrixXcd::Zero(d, d);
    for (int n = 1; n <= N; ++n) {
        for (int m = 1; m <= N; ++m) {
            const double wn = w[static_cast<std::size_t>(n - 1)], wm = w[static_cast<std::size_t>(m - 1)];
            const double s = parity_sign(n, m) * std::sqrt(wn * wm);
            const auto& Xn = X[static_cast<std::size_t>(n - 1)];
            const auto& Xm = X[static_cast<std::size_t>(m - 1)];
            switch (k) {
                case 1:
                    field += -4.0 * s * (Xn * Xm);
                    break;
                case 2:
                    field += 8.0 * s * (Xn * Xm);
                    break;
                case 3: {
                    const double kn = wn, km = wm; // c = 1, so k_n = omega_n
                    const double L2 = g.length * g.length;
                    field += 16.0 * s *
                             ((kn * km * L2 / 3.0) * (P[static_cast<std::size_t>(n - 1)] * P[static_cast<std::size_t>(m - 1)]) +
                              ((kn * kn + km * km) * L2 / 6.0 - 1.0) * (Xn * Xm));
                    break;
                }
                default:
                    throw Error("interaction_term: order must be 0..3");
            }
        }
    }
    const int pow_b = (k == 1) ? 1 : (k == 2 ? 2 : 3);
    Eigen::MatrixXcd Xbp = Xb;
    for (int i = 1; i < pow_b; ++i) Xbp = Xbp * Xb;
    return field * Xbp;
}

Eigen::MatrixXcd three_d_term(const HilbertSpace& space, const ThreeDGeometry& g, int k) {
    const auto labels = three_d_mode_labels(g);
    const int N = static_cast<int>(labels.size());
    const long d = space.dim();

    auto kx_of = [&](int nx) { return M_PI * nx / g.Lx; };
    auto kperp2_of = [&](const std::array<int, 3>& n) {
        const double ky = M_PI * n[1] / g.Ly;
        const double kz = M_PI * n[2] / g.Lz;
        return ky * ky + kz * kz;
    };
    auto freq = [&](const std::array<int, 3>& n) { return three_d_mode_frequency(g, n); };
    // Mode index of (mx, ny, nz); the m-sums share the transverse indices.
    auto partner = [&](int mode, int mx) {
        const auto& n = labels[static_cast<std::size_t>(mode)];
        return (mx - 1) * g.ny_max * g.nz_max + (n[1] - 1) * g.nz_max + (n[2] - 1);
    };

    if (k == 0) {
        Eigen::MatrixXcd h = g.Omega * number_operator(space, N).mat;
        for (int i = 0; i < N; ++i) h += freq(labels[static_cast<std::size_t>(i)]) * number_operator(space, i).mat;
        return h;
    }

    const Eigen::MatrixXcd Xb = quadrature_operator(space, N, Quadrature::X).mat;
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(d, d);
    Eigen::MatrixXcd field = Eigen::MatrixXcd::Zero(d, d);

    if (k == 1) {
        for (int i = 0; i < N; ++i) {
            const auto& n = labels[static_cast<std::size_t>(i)];
            const double wn = freq(n), kp2 = kperp2_of(n);
            field += 2.0 * (kp2 / wn) * (number_operator(space, i).mat + 0.5 * I);
            const Eigen::MatrixXcd Xn = quadrature_operator(space, i, Quadrature::X).mat;
            for (int mx = 1; mx <= g.nx_max; ++mx) {
                const int j = partner(i, mx);
                const auto& m = labels[static_cast<std::size_t>(j)];
                const double wm = freq(m);
                field += -4.0 * parity_sign(n[0], mx) * kx_of(n[0]) * kx_of(mx) / std::sqrt(wn * wm) *
                         (Xn * quadrature_operator(space, j, Quadrature::X).mat);
            }
        }
        return field * Xb;
    }
    if (k == 2) {
        for (int i = 0; i < N; ++i) {
            const auto& n = labels[static_cast<std::size_t>(i)];
            const double wn = freq(n), kp2 = kperp2_of(n), knx = kx_of(n[0]);
            const Eigen::MatrixXcd Pn = quadrature_operator(space, i, Quadrature::P).mat;
            field += -2.0 * (knx * knx * kp2 / (wn * wn * wn)) * (Pn * Pn);
            const Eigen::MatrixXcd Xn = quadrature_operator(space, i, Quadrature::X).mat;
            for (int mx = 1; mx <= g.nx_max; ++mx) {
                const int j = partner(i, mx);
                const auto& m = labels[static_cast<std::size_t>(j)];
                const double wm = freq(m), kmx = kx_of(mx);
                const double zeta = zeta_coefficient(knx, kmx, kp2);
                field += -4.0 * parity_sign(mx, n[0]) * kmx * knx / std::pow(wn * wm, 2.5) * zeta *
                         (Xn * quadrature_operator(space, j, Quadrature::X).mat);
            }
        }
        return field * (Xb * Xb);
    }
    if (k == 3) {
        // The printed theta coefficient is not symmetric under n <-> m for
        // kperp > 0, which would make the a^dag a cross terms non-Hermitian;
        // only its symmetric part enters a valid Hamiltonian, so the term is
        // assembled as (T + T^dag)/2.
        for (int i = 0; i < N; ++i) {
            const auto& n = labels[static_cast<std::size_t>(i)];
            const double wn = freq(n), kp2 = kperp2_of(n), knx = kx_of(n[0]);
            const Eigen::MatrixXcd an = ladder_operator(space, i, Ladder::Lower).mat;
            for (int mx = 1; mx <= g.nx_max; ++mx) {
                const int j = partner(i, mx);
                const auto& m = labels[static_cast<std::size_t>(j)];
                const double wm = freq(m), kmx = kx_of(mx);
                const double pref = parity_sign(mx, n[0]) * kmx * knx / (6.0 * std::pow(wn * wm, 2.5));
                const double th = theta_coefficient(knx, kmx, kp2, wn, wm, g.Lx);
                const double ch = chi_coefficient(knx, kmx, kp2, wn, wm, g.Lx);
                const Eigen::MatrixXcd am = ladder_operator(space, j, Ladder::Lower).mat;
                field += pref * (th * (an.adjoint() * am + an * am.adjoint()) +
                                 ch * (an * am + am.adjoint() * an.adjoint()));
            }
        }
        Eigen::MatrixXcd h = field * (Xb * Xb * Xb);
        return 0.5 * (h + h.adjoint().eval());
    }
    throw Error("interaction_term: order must be 0..3");
}

} // namespace

double zeta_coefficient(double knx, double kmx, double kperp2) {
    const double kn2 = knx * knx, km2 = kmx * kmx;
    return km2 * (2.0 * kn2 + 3.0 * kperp2) + kperp2 * (3.0 * kn2 + 4.0 * kperp2);
}

double theta_coefficient(double knx, double kmx, double kperp2, double omega_n, double omega_m,
                         double Lx) {
    const double kn2 = knx * knx, km2 = kmx * kmx;
    const double kn4 = kn2 * kn2, km4 = km2 * km2;
    const double kn6 = kn4 * kn2, km6 = km4 * km2;
    const double kp2 = kperp2, kp4 = kperp2 * kperp2;
    const double L2 = Lx * Lx;
    const double wnm = omega_m * omega_n;
    const double wn4 = omega_n * omega_n * omega_n * omega_n;

    double t = 4.0 * km6 * wn4 * L2;
    t += km4 * (4.0 * kn6 * L2 - kp4 * (45.0 + 8.0 * wnm * L2) +
                2.0 * kn2 * kp2 * (-27.0 + 2.0 * (kp2 - 4.0 * wnm) * L2) +
                8.0 * kn4 * (-3.0 + (kp2 - wnm) * L2));
    t -= kp4 * (-4.0 * kn6 * L2 + kn4 * (45.0 + 8.0 * wnm * L2) +
                2.0 * kn2 * kp2 * (51.0 + 6.0 * kp2 * L2 + 8.0 * wnm * L2) +
                8.0 * kp4 * (9.0 + (kp2 + wnm) * L2));
    t -= 2.0 * km2 * kp2 *
         (-4.0 * kn6 * L2 + kn4 * (27.0 - 2.0 * kp2 * L2 + 8.0 * wnm * L2) +
          kp4 * (51.0 + 6.0 * kp2 * L2 + 8.0 * wnm * L2) +
          kn2 * kp2 * (63.0 + 8.0 * (kp2 + 2.0 * wnm) * L2));
    return t;
}

double chi_coefficient(double knx, double kmx, double kperp2, double omega_n, double omega_m,
                       double Lx) {
    const double kn2 = knx * knx, km2 = kmx * kmx;
    const double kn4 = kn2 * kn2, km4 = km2 * km2;
    const double kn6 = kn4 * kn2, km6 = km4 * km2;
    const double kp2 = kperp2, kp4 = kperp2 * kperp2;
    const double L2 = Lx * Lx;
    const double wnm = omega_m * omega_n;
    const double wn4 = omega_n * omega_n * omega_n * omega_n;

    double c = 4.0 * km6 * wn4 * L2;
    c -= kp4 * (-4.0 * kn6 * L2 + kn4 * (45.0 - 8.0 * wnm * L2) +
                2.0 * kn2 * kp2 * (51.0 + 6.0 * kp2 * L2 - 8.0 * wnm * L2) +
                8.0 * kp4 * (9.0 + (kp2 - wnm) * L2));
    c -= 2.0 * km2 * kp2 *
         (-4.0 * kn6 * L2 + kp4 * (51.0 + 6.0 * kp2 * L2 - 8.0 * wnm * L2) +
          kn2 * kp2 * (63.0 + 8.0 * (kp2 - 2.0 * wnm) * L2) -
          kn4 * (-27.0 + 2.0 * (kp2 + 4.0 * wnm) * L2));
    c += km4 * (4.0 * kn6 * L2 + kp4 * (-45.0 + 8.0 * wnm * L2) +
                8.0 * kn4 * (-3.0 + (kp2 + wnm) * L2) +
                2.0 * kn2 * kp2 * (-27.0 + 2.0 * (kp2 + 4.0 * wnm) * L2));
    return c;
}

OperatorMatrix interaction_term(const HilbertSpace& space, const HamiltonianModel& model, int k) {
    model.validate();
    Eigen::MatrixXcd h;
    if (const auto* tb = std::get_if<ThreeBodyGeometry>(&model.geometry)) {
        check_optical_prefix(space, 2);
        h = three_body_term(space, *tb, k);
    } else if (const auto* od = std::get_if<OneDGeometry>(&model.geometry)) {
        check_optical_prefix(space, od->n_max);
        h = one_d_term(space, *od, k);
    } else {
        const auto& td = std::get<ThreeDGeometry>(model.geometry);
        check_optical_prefix(space, td.nx_max * td.ny_max * td.nz_max);
        h = three_d_term(space, td, k);
    }
    return {space, std::move(h), true};
}

namespace {

OperatorMatrix assemble(const HilbertSpace& space, const HamiltonianModel& model) {
    Eigen::MatrixXcd h = interaction_term(space, model, 0).mat;
    double scale = 1.0;
    for (int k = 1; k <= 3; ++k) {
        scale *= model.epsilon;
        if (model.include_orders.contains(k)) h += scale * interaction_term(space, model, k).mat;
    }
    return {space, std::move(h), true};
}

} // namespace

OperatorMatrix build_three_body(const HilbertSpace& space, const HamiltonianModel& model) {
    if (!std::holds_alternative<ThreeBodyGeometry>(model.geometry))
        throw Error("build_three_body: model geometry is not ThreeBody");
    return assemble(space, model);
}

OperatorMatrix build_1d_multimode(const HilbertSpace& space, const HamiltonianModel& model) {
    if (!std::holds_alternative<OneDGeometry>(model.geometry))
        throw Error("build_1d_multimode: model geometry is not OneDMultimode");
    return assemble(space, model);
}

OperatorMatrix build_3d_multimode(const HilbertSpace& space, const HamiltonianModel& model) {
    if (!std::holds_alternative<ThreeDGeometry>(model.geometry))
        throw Error("build_3d_multimode: model geometry is not ThreeDMultimode");
    return assemble(space, model);
}

OperatorMatrix build_hamiltonian(const HilbertSpace& space, const HamiltonianModel& model) {
    return assemble(space, model);
}

OperatorMatrix radiation_pressure_term(const HilbertSpace& space, const HamiltonianModel& model) {
    model.validate();
    const long d = space.dim();
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(d, d);
    Eigen::MatrixXcd field = Eigen::MatrixXcd::Zero(d, d);
    int mech;
    if (const auto* od = std::get_if<OneDGeometry>(&model.geometry)) {
        check_optical_prefix(space, od->n_max);
        mech = od->n_max;
        for (int n = 1; n <= od->n_max; ++n) {
            const double kn = n * M_PI / od->length;
            field += 2.0 * (-kn * kn) / kn * (number_operator(space, n - 1).mat + 0.5 * I);
        }
    } else if (const auto* td = std::get_if<ThreeDGeometry>(&model.geometry)) {
        const auto labels = three_d_mode_labels(*td);
        check_optical_prefix(space, static_cast<int>(labels.size()));
        mech = static_cast<int>(labels.size());
        for (int i = 0; i < mech; ++i) {
            const auto& n = labels[static_cast<std::size_t>(i)];
            const double knx = M_PI * n[0] / td->Lx;
            const double ky = M_PI * n[1] / td->Ly;
            const double kz = M_PI * n[2] / td->Lz;
            const double kp2 = ky * ky + kz * kz;
            const double wn = std::sqrt(knx * knx + kp2);
            field += 2.0 * (kp2 - knx * knx) / wn * (number_operator(space, i).mat + 0.5 * I);
        }
    } else {
        throw Error("radiation_pressure_term: requires a 1-D or 3-D multimode geometry");
    }
    return {space, field * quadrature_operator(space, mech, Quadrature::X).mat, true};
}

CouplingBreakdown effective_scattering_coupling(double omega1, double omega2, double Omega) {
    if (!(Omega > 0)) throw Error("effective_scattering_coupling: Omega must be > 0");
    CouplingBreakdown out;
    out.g_virtual = (omega1 / 2.0) * (2.0 / Omega) * (omega1 + omega2 / 8.0);
    out.g_H2 = omega1 / 2.0;
    out.g_total = out.g_virtual + out.g_H2;
    out.virtual_fraction = out.g_virtual / out.g_total;
    return out;
}

} // namespace casimir
