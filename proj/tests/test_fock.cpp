#include <doctest.h>

#include "casimir/fock.hpp"

using namespace casimir;

namespace {

HilbertSpace three_mode_space() {
    return build_space({{ModeKind::Optical, 0.5, 8},
                        {ModeKind::Optical, 1.0, 5},
                        {ModeKind::Mechanical, 1.0, 12}});
}

} // namespace

TEST_CASE("build_space dimensions and index map") {
    const auto space = three_mode_space();
    CHECK(space.dim() == 480);

    const auto single = build_space({{ModeKind::Mechanical, 1.0, 3}});
    CHECK(single.dim() == 3);

    CHECK_THROWS_AS(build_space({}), Error);
    CHECK_THROWS_AS(build_space({{ModeKind::Optical, 1.0, 1}}), Error);
    CHECK_THROWS_AS(build_space({{ModeKind::Optical, -1.0, 4}}), Error);

    // row-major occupation map, mode 0 slowest
    CHECK(space.index_of({0, 0, 0}) == 0);
    CHECK(space.index_of({0, 0, 1}) == 1);
    CHECK(space.index_of({0, 1, 0}) == 12);
    CHECK(space.index_of({1, 0, 0}) == 60);
    for (long i : {0L, 59L, 175L, 479L}) {
        std::vector<int> occ(3);
        for (int m = 0; m < 3; ++m) occ[static_cast<std::size_t>(m)] = space.occupation(i, m);
        CHECK(space.index_of(occ) == i);
    }
}

TEST_CASE("ladder operators: matrix elements and adjointness") {
    const auto space = build_space({{ModeKind::Optical, 1.0, 4}});
    const auto a = ladder_operator(space, 0, Ladder::Lower);
    const auto ad = ladder_operator(space, 0, Ladder::Raise);

    CHECK(a.mat(0, 1) == std::complex<double>(1.0, 0.0));
    const Eigen::MatrixXcd n = ad.mat * a.mat;
    CHECK(n(2, 2).real() == doctest::Approx(2.0).epsilon(1e-15));

    // raise is the exact adjoint of lower
    CHECK((ad.mat - a.mat.adjoint()).cwiseAbs().maxCoeff() < 1e-14);

    // truncation edge: <N-1|[a, a^dag]|N-1> = -(N-1)
    const Eigen::MatrixXcd comm = a.mat * ad.mat - ad.mat * a.mat;
    CHECK(comm(3, 3).real() == doctest::Approx(-3.0).epsilon(1e-15));

    CHECK_THROWS_AS(ladder_operator(space, 1, Ladder::Lower), Error);
}

TEST_CASE("quadratures: 1/2 convention and commutator") {
    const auto space = build_space({{ModeKind::Optical, 1.0, 6}});
    const auto X = quadrature_operator(space, 0, Quadrature::X);
    const auto P = quadrature_operator(space, 0, Quadrature::P);

    CHECK(X.mat(1, 0).real() == doctest::Approx(0.5).epsilon(1e-15));
    const Eigen::MatrixXcd X2 = X.mat * X.mat;
    CHECK(X2(0, 0).real() == doctest::Approx(0.25).epsilon(1e-15));

    CHECK(X.hermiticity_error() < 1e-15);
    CHECK(P.hermiticity_error() < 1e-15);

    const Eigen::MatrixXcd comm = X.mat * P.mat - P.mat * X.mat;
    for (int n = 0; n < 5; ++n)  // below the truncation edge
        CHECK(std::abs(comm(n, n) - std::complex<double>(0.0, 0.5)) < 1e-14);

    CHECK_THROWS_AS(quadrature_operator(space, 2, Quadrature::X), Error);
}

TEST_CASE("tensor embedding: operators on distinct modes commute") {
    const auto space = three_mode_space();
    const auto a0 = ladder_operator(space, 0, Ladder::Lower);
    const auto a1 = ladder_operator(space, 1, Ladder::Raise);
    const auto x2 = quadrature_operator(space, 2, Quadrature::X);

    CHECK((a0.mat * a1.mat - a1.mat * a0.mat).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a0.mat * x2.mat - x2.mat * a0.mat).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("number operator spectrum is 0..N-1 per mode") {
    const auto space = build_space({{ModeKind::Optical, 2.0, 3}, {ModeKind::Mechanical, 1.0, 4}});
    const auto n0 = number_operator(space, 0);
    const auto n1 = number_operator(space, 1);
    for (long i = 0; i < space.dim(); ++i) {
        CHECK(n0.mat(i, i).real() == space.occupation(i, 0));
        CHECK(n1.mat(i, i).real() == space.occupation(i, 1));
        CHECK(n0.mat(i, i).real() <= 2.0);
        CHECK(n1.mat(i, i).real() <= 3.0);
    }
}
