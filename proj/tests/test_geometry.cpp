#include <doctest.h>

#include <cmath>

#include "bearform/geometry.hpp"
#include "bearform/rng.hpp"
#include "helpers.hpp"

using namespace bearform;

TEST_CASE("projector: axis-aligned and hand-evaluated cases") {
    const Mat3 pz = projector(UnitVec3({0, 0, 1}));
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            CHECK(pz(r, c) == doctest::Approx(r == c ? (r == 2 ? 0.0 : 1.0) : 0.0).epsilon(1e-15));

    // x already orthogonal to y stays fixed
    const Vec3 fixed = projector(UnitVec3({1, 0, 0})) * Vec3{0, 3, 4};
    CHECK(tst::max_abs_diff(fixed, {0, 3, 4}) <= 1e-15);

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const Mat3 pd = projector(UnitVec3({inv_sqrt2, inv_sqrt2, 0}));
    const double expect[3][3] = {{0.5, -0.5, 0}, {-0.5, 0.5, 0}, {0, 0, 1}};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) CHECK(pd(r, c) == doctest::Approx(expect[r][c]).epsilon(1e-14));
}

TEST_CASE("projector: symmetric, idempotent, PSD with eigenvalues {0,1,1}") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const UnitVec3 y = rng.unit_vec();
        const Mat3 p = projector(y);
        CHECK(p.asymmetry() <= 1e-15);
        CHECK((p * p - p).max_abs() <= 1e-14);
        CHECK((p * y.vec()).norm() <= 1e-14);
        const auto ev = sym_eigenvalues(p);
        CHECK(std::abs(ev[0] - 0.0) <= 1e-10);
        CHECK(std::abs(ev[1] - 1.0) <= 1e-10);
        CHECK(std::abs(ev[2] - 1.0) <= 1e-10);
    }
}

TEST_CASE("skew: cross-product action and projector identity") {
    CHECK(skew({0, 0, 0}).max_abs() == 0.0);
    CHECK(tst::max_abs_diff(skew({0, 0, 1}) * Vec3{1, 0, 0}, {0, 1, 0}) <= 1e-15);

    // -skew(y)^2 = projector(y) for unit y
    const UnitVec3 y({0, 1, 0});
    const Mat3 lhs = (skew(y.vec()) * skew(y.vec())) * -1.0;
    CHECK((lhs - Mat3::diagonal(1, 0, 1)).max_abs() <= 1e-15);

    Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const Vec3 v = rng.vec_in_cube(5.0);
        const Vec3 x = rng.vec_in_cube(5.0);
        CHECK(tst::max_abs_diff(skew(v) * x, v.cross(x)) <= 1e-12);
        const Mat3 s = skew(v);
        CHECK((s + s.transpose()).max_abs() <= 1e-15);

        const UnitVec3 u = rng.unit_vec();
        CHECK(((skew(u.vec()) * skew(u.vec())) * -1.0 - projector(u)).max_abs() <= 1e-14);
    }
}

TEST_CASE("relative_state: fields, antisymmetry, degenerate pair") {
    const RelState r = relative_state(1, 2, {0, 0, 0}, {0, 0, 0}, {0, 2, 0}, {0, 0, 0});
    CHECK(r.dist == doctest::Approx(2.0));
    CHECK(tst::max_abs_diff(r.g_ij.vec(), {0, 1, 0}) <= 1e-15);

    CHECK_THROWS_AS(relative_state(1, 2, {1, 1, 1}, {}, {1, 1, 1}, {}), BearingUndefinedError);
    try {
        relative_state(3, 7, {1, 1, 1}, {}, {1, 1, 1}, {});
    } catch (const BearingUndefinedError& e) {
        CHECK(e.i() == 3);
        CHECK(e.j() == 7);
    }

    const RelState d = relative_state(1, 2, {1, 1, 1}, {}, {2, 2, 2}, {});
    CHECK(d.dist == doctest::Approx(std::sqrt(3.0)));
    const double s = 1.0 / std::sqrt(3.0);
    CHECK(tst::max_abs_diff(d.g_ij.vec(), {s, s, s}) <= 1e-15);

    Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const Vec3 pi = rng.vec_in_cube(4.0);
        const Vec3 pj = pi + rng.vec_in_ball(3.0) + Vec3{0.5, 0, 0};
        const Vec3 vi = rng.vec_in_cube(2.0);
        const Vec3 vj = rng.vec_in_cube(2.0);
        const RelState ij = relative_state(1, 2, pi, vi, pj, vj);
        const RelState ji = relative_state(2, 1, pj, vj, pi, vi);
        CHECK(tst::max_abs_diff(ij.g_ij.vec(), -ji.g_ij.vec()) <= 1e-14);
        CHECK(tst::max_abs_diff(ij.p_ij, -ji.p_ij) <= 1e-14);
        CHECK(std::abs(ij.g_ij.vec().norm() - 1.0) <= 1e-14);
        // g * dist reproduces p componentwise
        CHECK(tst::max_abs_diff(ij.g_ij.vec() * ij.dist, ij.p_ij) <= 1e-9);
    }
}

TEST_CASE("unit vector construction enforces the norm") {
    CHECK_THROWS_AS(UnitVec3({1, 1, 0}), ValidationError);
    CHECK_NOTHROW(UnitVec3({1, 0, 0}));
    CHECK_THROWS_AS(UnitVec3::normalized({0, 0, 0}), ValidationError);
}

TEST_CASE("sym_eigenvalues: 3x3 closed form against hand values") {
    const auto d = sym_eigenvalues(Mat3::diagonal(3, -1, 2));
    CHECK(d[0] == doctest::Approx(-1));
    CHECK(d[1] == doctest::Approx(2));
    CHECK(d[2] == doctest::Approx(3));

    // [[2,1,0],[1,2,0],[0,0,5]] has eigenvalues 1, 3, 5
    Mat3 a = Mat3::diagonal(2, 2, 5);
    a(0, 1) = a(1, 0) = 1.0;
    const auto e = sym_eigenvalues(a);
    CHECK(e[0] == doctest::Approx(1).epsilon(1e-12));
    CHECK(e[1] == doctest::Approx(3).epsilon(1e-12));
    CHECK(e[2] == doctest::Approx(5).epsilon(1e-12));

    // trace and determinant recovered from the spectrum on random symmetrics
    Rng rng(14);
    for (int trial = 0; trial < 200; ++trial) {
        Mat3 s;
        for (int r = 0; r < 3; ++r)
            for (int c = r; c < 3; ++c) s(r, c) = s(c, r) = rng.uniform(-2, 2);
        const auto ev = sym_eigenvalues(s);
        CHECK(ev[0] + ev[1] + ev[2] == doctest::Approx(s.trace()).epsilon(1e-9));
        CHECK(ev[0] * ev[1] * ev[2] == doctest::Approx(s.det()).epsilon(5e-8));
    }
}

TEST_CASE("sym_eigenvalues: 6x6 Jacobi against block-diagonal construction") {
    using namespace tst;
    const Mat6 m = Mat6::from_blocks(Mat3::diagonal(1, 2, 3), Mat3::zero(), Mat3::zero(),
                                     Mat3::diagonal(-1, 7, 0.5));
    const auto ev = sym_eigenvalues(m);
    const double expect[6] = {-1, 0.5, 1, 2, 3, 7};
    for (int k = 0; k < 6; ++k) CHECK(ev[k] == doctest::Approx(expect[k]).epsilon(1e-12));

    // P-shaped matrix 1/2 [[I, eI],[eI, I]]: eigenvalues (1 +- e)/2
    const double eps = 0.1;
    const Mat6 p = Mat6::from_blocks(Mat3::identity() * 0.5, Mat3::identity() * (eps / 2),
                                     Mat3::identity() * (eps / 2), Mat3::identity() * 0.5);
    const auto pev = sym_eigenvalues(p);
    CHECK(pev[0] == doctest::Approx(0.45).epsilon(1e-13));
    CHECK(pev[5] == doctest::Approx(0.55).epsilon(1e-13));
}
