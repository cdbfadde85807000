#include <doctest.h>

#include "casimir/hamiltonian.hpp"
#include "casimir/spectrum.hpp"

using namespace casimir;

namespace {

HamiltonianModel three_body(double Omega, double eps, OrderSet orders = OrderSet::all()) {
    return {ThreeBodyGeometry{0.5, 1.0, Omega}, eps, orders};
}

} // namespace

TEST_CASE("three-body: eps = 0 spectrum is the uncoupled ladder") {
    auto model = three_body(0.8, 0.0);
    const auto space = default_space(model, {4, 3, 5});
    const auto H = build_three_body(space, model);
    for (long i = 0; i < space.dim(); ++i) {
        const double expected = 0.5 * space.occupation(i, 0) + 1.0 * space.occupation(i, 1) +
                                0.8 * space.occupation(i, 2);
        CHECK(H.mat(i, i).real() == doctest::Approx(expected).epsilon(1e-14));
    }
    CHECK((H.mat - H.mat.diagonal().asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("three-body: hand matrix-element oracle for eps H1") {
    auto model = three_body(0.8, 0.07);
    const auto space = default_space(model, {4, 4, 3});
    const auto H1 = interaction_term(space, model, 1);
    const long bra = space.index_of({0, 0, 1});
    const long ket = space.index_of({0, 0, 0});
    // -eps (omega1 + omega2)/2 from the X^2 vacuum elements
    CHECK((0.07 * H1.mat(bra, ket)).real() == doctest::Approx(-0.0525).epsilon(1e-12));
}

TEST_CASE("three-body: Hermiticity at eps = 0.07, all orders") {
    auto model = three_body(1.0, 0.07);
    const auto space = default_space(model, {6, 4, 8});
    const auto H = build_three_body(space, model);
    CHECK(H.hermiticity_error() < 1e-12);
    for (int k = 1; k <= 3; ++k)
        CHECK(interaction_term(space, model, k).hermiticity_error() < 1e-12);
}

TEST_CASE("three-body: ground-level Hellmann-Feynman slope vanishes") {
    // <0|H1|0> = 0 (odd in X_b), so the ground energy is flat in eps at
    // first order when only H1 is included.
    auto model = three_body(0.8, 0.0, OrderSet::first_only());
    const auto space = default_space(model, {5, 3, 6});
    const auto H1 = interaction_term(space, model, 1);
    CHECK(std::abs(H1.mat(0, 0)) < 1e-14);

    const double e0 = diagonalize(build_three_body(space, model)).energies(0);
    std::vector<double> slopes;
    for (double eps : {1e-3, 5e-4}) {
        auto m = model;
        m.epsilon = eps;
        const double e = diagonalize(build_three_body(space, m)).energies(0);
        slopes.push_back((e - e0) / eps);
    }
    // slope halves with eps => quadratic, not linear
    CHECK(std::abs(slopes[1]) < 0.75 * std::abs(slopes[0]));
}

TEST_CASE("1-D multimode: dispersion and single-mode reduction") {
    HamiltonianModel model{OneDGeometry{M_PI, 1, 0.9}, 0.05, OrderSet::all()};
    const auto space = default_space(model, {5, 4});
    // L = pi => omega_n = n
    CHECK(space.mode(0).frequency == doctest::Approx(1.0));

    // n_max = 1: H1 = -4 omega1 X1^2 Xb, the diagonal term of the three-body form
    const auto H1 = interaction_term(space, model, 1);
    const auto X1 = quadrature_operator(space, 0, Quadrature::X);
    const auto Xb = quadrature_operator(space, 1, Quadrature::X);
    const Eigen::MatrixXcd expected = -4.0 * (X1.mat * X1.mat * Xb.mat);
    CHECK((H1.mat - expected).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("1-D multimode: n = m = 1 H3 momentum coefficient matches three-body") {
    // 16 omega1 k1^2 L^2 / 3 = (16 pi^2/3) omega1, the (4pi)^2/3 omega1 P1^2
    // coefficient of the three-body H3
    HamiltonianModel model{OneDGeometry{M_PI, 1, 0.9}, 0.05, OrderSet::all()};
    const auto space = default_space(model, {5, 5});
    const auto H3 = interaction_term(space, model, 3);

    const auto P1 = quadrature_operator(space, 0, Quadrature::P);
    const auto X1 = quadrature_operator(space, 0, Quadrature::X);
    const auto Xb = quadrature_operator(space, 1, Quadrature::X);
    const Eigen::MatrixXcd Xb3 = Xb.mat * Xb.mat * Xb.mat;
    const double c = 16.0 * M_PI * M_PI / 3.0;
    const Eigen::MatrixXcd expected =
        c * (P1.mat * P1.mat * Xb3) + (c - 16.0) * (X1.mat * X1.mat * Xb3);
    CHECK((H3.mat - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("1-D multimode: verbatim double sum doubles the cross terms") {
    // Documented discrepancy: the (n != m) coefficients of the 1-D double sum
    // are twice the three-body equation's cross terms, while diagonal terms
    // agree. Compare the |1,1,1_b><0,0,0| element of H1 against the
    // three-body build with matched frequencies.
    HamiltonianModel oned{OneDGeometry{M_PI, 2, 0.9}, 0.05, OrderSet::all()};
    const auto space1 = default_space(oned, {4, 4, 3});
    const auto H1_1d = interaction_term(space1, oned, 1);

    HamiltonianModel tb{ThreeBodyGeometry{1.0, 2.0, 0.9}, 0.05, OrderSet::all()};
    const auto space3 = default_space(tb, {4, 4, 3});
    const auto H1_tb = interaction_term(space3, tb, 1);

    const long bra = space1.index_of({1, 1, 1});
    const long ket = space1.index_of({0, 0, 0});
    const double el_1d = H1_1d.mat(bra, ket).real();
    const double el_tb = H1_tb.mat(bra, ket).real();
    CHECK(el_1d == doctest::Approx(2.0 * el_tb).epsilon(1e-12));

    // diagonal (n = m) terms agree
    const long bra2 = space1.index_of({2, 0, 1});
    CHECK(H1_1d.mat(bra2, ket).real() ==
          doctest::Approx(H1_tb.mat(bra2, ket).real()).epsilon(1e-12));
}

TEST_CASE("3-D coefficients: zeta reduction at kperp = 0") {
    const double kn = 2.3, km = 1.1;
    CHECK(zeta_coefficient(kn, km, 0.0) == doctest::Approx(2.0 * km * km * kn * kn));
    // and the printed form at finite kperp
    const double kp2 = 0.7;
    CHECK(zeta_coefficient(kn, km, kp2) ==
          doctest::Approx(km * km * (2 * kn * kn + 3 * kp2) + kp2 * (3 * kn * kn + 4 * kp2)));
}

TEST_CASE("3-D multimode: H0 dispersion and Hermiticity at cutoffs (2,1,1)") {
    HamiltonianModel model{ThreeDGeometry{1.0, 1.0, 1.0, 2, 1, 1, 0.9}, 0.05, OrderSet::all()};
    const auto space = default_space(model, {3, 3, 3});
    const auto H0 = interaction_term(space, model, 0);
    const auto labels = three_d_mode_labels(std::get<ThreeDGeometry>(model.geometry));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double w = three_d_mode_frequency(std::get<ThreeDGeometry>(model.geometry), labels[i]);
        CHECK(space.mode(static_cast<int>(i)).frequency == doctest::Approx(w));
    }
    const auto H = build_3d_multimode(space, model);
    CHECK(H.hermiticity_error() < 1e-12);
    for (int k = 1; k <= 3; ++k)
        CHECK(interaction_term(space, model, k).hermiticity_error() < 1e-12);
}

TEST_CASE("3-D multimode: kperp -> 0 limit of H1 matches the 1-D build") {
    // Shrink the transverse box (Ly, Lz large would send kperp -> 0 but also
    // change omega; instead compare the photon-conserving sign structure at
    // a transversely tight box against the 1-D model with matched omega_n).
    // Direct check: at Ly = Lz -> infinity surrogate (very large), the 3-D H1
    // approaches the 1-D H1 with omega_n = n pi / Lx.
    const double big = 1e6;
    HamiltonianModel td{ThreeDGeometry{M_PI, big, big, 2, 1, 1, 0.9}, 0.05, OrderSet::all()};
    const auto space = default_space(td, {3, 3, 4});
    const auto H1_3d = interaction_term(space, td, 1);

    HamiltonianModel od{OneDGeometry{M_PI, 2, 0.9}, 0.05, OrderSet::all()};
    // same truncations; the 1-D space's mode frequencies differ from the 3-D
    // ones by O(1/big^2)
    const auto space1 = default_space(od, {3, 3, 4});
    const auto H1_1d = interaction_term(space1, od, 1);

    CHECK((H1_3d.mat - H1_1d.mat).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("radiation-pressure term") {
    // kperp = knx cancels the coefficient
    HamiltonianModel td{ThreeDGeometry{1.0, 1.0, 1.0, 1, 1, 1, 0.9}, 0.0, OrderSet::all()};
    {
        // single mode (1,1,1) with Lx = sqrt(2)/... choose Ly = Lz such that
        // kperp^2 = kx^2: kx = pi / Lx, kperp^2 = pi^2 (1/Ly^2 + 1/Lz^2)
        ThreeDGeometry g{1.0, std::sqrt(2.0), std::sqrt(2.0), 1, 1, 1, 0.9};
        HamiltonianModel m{g, 0.0, OrderSet::all()};
        const auto space = default_space(m, {3, 3});
        const auto rp = radiation_pressure_term(space, m);
        CHECK(rp.mat.cwiseAbs().maxCoeff() < 1e-12);
    }
    {
        // 1-D limit: coefficient -2 omega_n (n_hat + 1/2) X_b,
        // so <0,1_b|H_RP|0,0> = -omega_1/2 * <1|Xb|0> * 2 = ... computed directly
        HamiltonianModel m{OneDGeometry{M_PI, 1, 0.9}, 0.0, OrderSet::all()};
        const auto space = default_space(m, {3, 3});
        const auto rp = radiation_pressure_term(space, m);
        const auto n0 = number_operator(space, 0);
        const auto Xb = quadrature_operator(space, 1, Quadrature::X);
        const Eigen::MatrixXcd expected =
            -2.0 * 1.0 *
            ((n0.mat + 0.5 * Eigen::MatrixXcd::Identity(space.dim(), space.dim())) * Xb.mat);
        CHECK((rp.mat - expected).cwiseAbs().maxCoeff() < 1e-13);
    }
    {
        // single 3-D mode: <0,1_b| H_RP |0,0> = (kperp^2 - kx^2)/omega * 1/2 * 2
        ThreeDGeometry g{1.0, 2.0, 2.0, 1, 1, 1, 0.9};
        HamiltonianModel m{g, 0.0, OrderSet::all()};
        const auto space = default_space(m, {3, 3});
        const auto rp = radiation_pressure_term(space, m);
        const double kx = M_PI, kp2 = (M_PI / 2) * (M_PI / 2) * 2.0;
        const double w = std::sqrt(kx * kx + kp2);
        const long bra = space.index_of({0, 1});
        const long ket = space.index_of({0, 0});
        CHECK(rp.mat(bra, ket).real() ==
              doctest::Approx((kp2 - kx * kx) / w * 0.5 * 2.0 * 0.5).epsilon(1e-12));
    }
}

TEST_CASE("effective scattering coupling") {
    {
        const auto c = effective_scattering_coupling(0.5, 1.0, 0.5);
        CHECK(c.g_total == doctest::Approx(0.875).epsilon(1e-15));
        CHECK(c.virtual_fraction == doctest::Approx(5.0 / 7.0).epsilon(1e-12));
        CHECK(c.g_total == doctest::Approx(c.g_virtual + c.g_H2).epsilon(1e-15));
    }
    {
        // Omega -> infinity: pure H2 contribution
        const auto c = effective_scattering_coupling(0.5, 1.0, 1e12);
        CHECK(c.g_total == doctest::Approx(0.25).epsilon(1e-9));
    }
    CHECK_THROWS_AS(effective_scattering_coupling(0.5, 1.0, 0.0), Error);
}

TEST_CASE("epsilon range is enforced") {
    auto model = three_body(1.0, 0.3);
    CHECK_THROWS_AS(model.validate(), Error);
    CHECK_THROWS_AS(default_space(model, {3, 3, 3}), Error);
}
