#include <doctest.h>

#include <random>

#include "casimir/spectrum.hpp"
#include "test_helpers.hpp"

using namespace casimir;

namespace {

HamiltonianModel three_body(double Omega, double eps, OrderSet orders = OrderSet::all()) {
    return {ThreeBodyGeometry{0.5, 1.0, Omega}, eps, orders};
}

} // namespace

TEST_CASE("diagonalize: identity, uncoupled ladder, residual") {
    {
        HilbertSpace space = build_space({{ModeKind::Optical, 1.0, 4}});
        OperatorMatrix I = identity_operator(space);
        const auto eig = diagonalize(I);
        for (long i = 0; i < 4; ++i) CHECK(eig.energies(i) == doctest::Approx(1.0));
    }
    {
        auto model = three_body(0.8, 0.0);
        const auto space = default_space(model, {3, 3, 4});
        const auto eig = diagonalize(build_three_body(space, model));
        // sorted uncoupled energies
        std::vector<double> expected;
        for (long i = 0; i < space.dim(); ++i)
            expected.push_back(0.5 * space.occupation(i, 0) + 1.0 * space.occupation(i, 1) +
                               0.8 * space.occupation(i, 2));
        std::sort(expected.begin(), expected.end());
        for (long i = 0; i < space.dim(); ++i)
            CHECK(eig.energies(i) == doctest::Approx(expected[static_cast<std::size_t>(i)])
                                         .epsilon(1e-13));
    }
    {
        auto model = three_body(1.0, 0.07);
        const auto space = default_space(model, {5, 3, 7});
        const auto H = build_three_body(space, model);
        const auto eig = diagonalize(H);
        CHECK(eig.residual < 1e-9);
        // orthonormal states
        const Eigen::MatrixXcd gram = eig.states.adjoint() * eig.states;
        CHECK((gram - Eigen::MatrixXcd::Identity(space.dim(), space.dim())).cwiseAbs().maxCoeff() <
              1e-10);
    }
    {
        // non-Hermitian input rejected
        HilbertSpace space = build_space({{ModeKind::Optical, 1.0, 3}});
        OperatorMatrix bad = ladder_operator(space, 0, Ladder::Lower);
        CHECK_THROWS_AS(diagonalize(bad), Error);
    }
}

TEST_CASE("sweep: ground subtraction, exact crossing at eps = 0, continuity") {
    auto model = three_body(1.0, 0.0);
    std::vector<double> grid;
    for (int i = 0; i <= 80; ++i) grid.push_back(0.9 + 0.2 * i / 80.0);
    const auto sweep = sweep_spectrum(model, {4, 3, 5}, grid, 6, OrderSet::first_only(), 1);

    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(sweep.levels(static_cast<long>(i), 0) == 0.0);

    // eps = 0: |0,0,1_b> (level 2 below Omega = 1) crosses the E = 1 states
    // |2,0,0>, |0,1,0> exactly at Omega = 2 omega1 = 1
    const auto gap = avoided_crossing_gap(sweep, 2, 3, 0.95, 1.05);
    CHECK(gap.gap < 1e-10);
    CHECK(gap.omega_at_min == doctest::Approx(1.0).epsilon(0.01));

    // level curves move no faster than the largest phonon-number slope
    const int nb_max = 4;  // truncation 5 -> occupations 0..4
    CHECK(sweep.max_level_slope <= nb_max + 1.0);

    CHECK_THROWS_AS(sweep_spectrum(model, {4, 3, 5}, {}, 4, OrderSet::all(), 1), Error);
    CHECK_THROWS_AS(avoided_crossing_gap(sweep, 1, 3, 0.95, 1.05), Error);
}

TEST_CASE("avoided crossing at the first-order resonance, two-level oracle") {
    // eps = 0.07, H1 only: gap ~ sqrt(2) eps omega1 (two-level reduction of
    // the -eps omega1/2 (a1^dag^2 b + h.c.) element). The omega2 spectator
    // sits inside the split, so the diabatic tracker is used.
    auto model = three_body(1.0, 0.07, OrderSet::first_only());
    std::vector<double> grid;
    const int npts = 61;
    for (int i = 0; i < npts; ++i) grid.push_back(0.94 + 0.12 * i / (npts - 1.0));

    const auto gap = diabatic_pair_gap(model, {8, 5, 12}, grid, {2, 0, 0}, {0, 0, 1},
                                       OrderSet::first_only(), 1);
    const double oracle = std::sqrt(2.0) * 0.07 * 0.5;
    CHECK(std::abs(gap.gap - oracle) / oracle < 0.15);
}

TEST_CASE("sweep points agree across worker counts") {
    auto model = three_body(1.0, 0.05);
    std::vector<double> grid;
    for (int i = 0; i < 7; ++i) grid.push_back(0.8 + 0.05 * i);
    const auto s1 = sweep_spectrum(model, {3, 3, 4}, grid, 5, OrderSet::all(), 1);
    const auto s4 = sweep_spectrum(model, {3, 3, 4}, grid, 5, OrderSet::all(), 4);
    CHECK((s1.levels - s4.levels).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("parabolic refinement only on interior minima") {
    // window ending before the eps = 0 crossing: the gap 1 - Omega decreases
    // monotonically, so the minimum sits at the right edge
    auto model = three_body(1.0, 0.0);
    std::vector<double> grid;
    for (int i = 0; i < 21; ++i) grid.push_back(0.90 + 0.004 * i);
    const auto sweep = sweep_spectrum(model, {4, 3, 5}, grid, 6, OrderSet::first_only(), 1);
    const auto edge = avoided_crossing_gap(sweep, 2, 3, 0.90, 0.98);
    CHECK_FALSE(edge.refined);  // minimum at the window edge
}
