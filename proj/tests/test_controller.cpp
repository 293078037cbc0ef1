#include <doctest.h>

#include <cmath>

#include "bearform/controller.hpp"
#include "bearform/rng.hpp"
#include "helpers.hpp"

using namespace bearform;

namespace {

// snap to a dyadic grid so translation arithmetic is exact in binary
Vec3 snap(const Vec3& v) {
    auto q = [](double x) { return std::round(x * 64.0) / 64.0; };
    return {q(v.x), q(v.y), q(v.z)};
}

} // namespace

TEST_CASE("check_gains: reference gains pass, the bound is sharp") {
    const GainCheck ok = check_gains(1, Gains{3, 10});
    CHECK(ok.admissible);
    CHECK(std::abs(ok.kd_slack - 9.0) <= 1e-12);
    CHECK(std::abs(ok.kp_slack - 0.96) <= 1e-12);
    CHECK(std::abs(ok.kp_limit - 3.96) <= 1e-12);

    const GainCheck over = check_gains(1, Gains{4, 10});
    CHECK_FALSE(over.admissible);
    CHECK(std::abs(over.kp_slack - (-0.04)) <= 1e-12);

    const GainCheck damp = check_gains(2, Gains{0.1, 0.5});
    CHECK_FALSE(damp.admissible);  // kd <= 1/m

    CHECK_THROWS_AS(check_gains(1, Gains{0, 1}), ValidationError);
    CHECK_THROWS_AS(check_gains(1, Gains{1, -2}), ValidationError);
    CHECK_THROWS_AS(check_gains(0, Gains{1, 2}), ValidationError);
}

TEST_CASE("control_input: feedforward passthrough at zero error and under pure scaling") {
    Rng rng(41);
    const Gains gains{3, 10};
    for (int trial = 0; trial < 50; ++trial) {
        const Vec3 p_i = rng.vec_in_cube(3.0);
        const Vec3 p_j = p_i + rng.vec_in_ball(2.0) + Vec3{1.5, 0, 0};
        const Vec3 v_i = rng.vec_in_cube(2.0);
        const Vec3 v_j = rng.vec_in_cube(2.0);
        const Vec3 ustar = rng.vec_in_cube(1.0);
        const RelState rel = relative_state(2, 1, p_i, v_i, p_j, v_j);

        // desired exactly equals actual
        const Vec3 u_eq = control_input({rel}, {{rel.p_ij, rel.v_ij}}, ustar, gains);
        CHECK(tst::max_abs_diff(u_eq, ustar) <= 1e-12);

        // actual offset is twice the desired one, velocities matched
        const Vec3 u_scaled = control_input({rel}, {{rel.p_ij * 0.5, rel.v_ij}}, ustar, gains);
        CHECK(tst::max_abs_diff(u_scaled, ustar) <= 1e-12);
    }

    // neighbor-less agent: feedforward only
    CHECK(tst::max_abs_diff(control_input({}, {}, {1, 2, 3}, gains), {1, 2, 3}) == 0.0);
}

TEST_CASE("control_input: hand-evaluated single-neighbor case") {
    // bearing along z, desired offset (1,0,2), velocity error (0,1,0)
    const Vec3 p_i{0, 0, 0};
    const Vec3 p_j{0, 0, 5};
    const RelState rel = relative_state(2, 1, p_i, {0, 0, 0}, p_j, {0, 1, 0});
    const EdgeDesired des{{1, 0, 2}, {0, 0, 0}};  // v_ij = (0,1,0), v* = 0 -> v~ = (0,1,0)
    const Vec3 u = control_input({rel}, {des}, {0, 0, 0}, Gains{3, 10});
    CHECK(tst::max_abs_diff(u, {-3, 10, 0}) <= 1e-13);
}

TEST_CASE("control_input: exact translation invariance through relative quantities") {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const Vec3 p_i = snap(rng.vec_in_cube(4.0));
        const Vec3 p_j = snap(p_i + rng.vec_in_ball(2.0) + Vec3{1, 0, 0});
        const Vec3 v_i = snap(rng.vec_in_cube(2.0));
        const Vec3 v_j = snap(rng.vec_in_cube(2.0));
        const Vec3 shift = snap(rng.vec_in_cube(8.0));
        const EdgeDesired des{snap(rng.vec_in_ball(2.0) + Vec3{0.5, 0, 0}),
                              snap(rng.vec_in_cube(1.0))};
        const Vec3 ustar = snap(rng.vec_in_cube(1.0));
        const Gains gains = tst::random_admissible_gains(rng, 1);

        const RelState a = relative_state(2, 1, p_i, v_i, p_j, v_j);
        const RelState b = relative_state(2, 1, p_i + shift, v_i, p_j + shift, v_j);
        const Vec3 ua = control_input({a}, {des}, ustar, gains);
        const Vec3 ub = control_input({b}, {des}, ustar, gains);
        CHECK(ua.x == ub.x);
        CHECK(ua.y == ub.y);
        CHECK(ua.z == ub.z);
    }
}

TEST_CASE("bearing term vanishes exactly when bearings are parallel") {
    Rng rng(43);
    for (int trial = 0; trial < 200; ++trial) {
        const UnitVec3 g = rng.unit_vec();
        const double len = rng.uniform(0.2, 4.0);

        const Vec3 aligned = g.vec() * (rng.uniform01() < 0.5 ? len : -len);
        CHECK((projector(g) * aligned).norm() <= 1e-12);

        // tilt the desired offset by at least ~6 degrees
        Vec3 ortho = g.vec().cross(rng.unit_vec().vec());
        if (ortho.norm() < 0.1) ortho = g.vec().cross(Vec3{0, 1, 0});
        const Vec3 tilted =
            UnitVec3::normalized(g.vec() + UnitVec3::normalized(ortho).vec() * 0.1).vec() * len;
        CHECK((projector(g) * tilted).norm() > 1e-4);
    }
}

TEST_CASE("analysis matrices: P spectrum, Q positive semidefinite, Sigma block") {
    const Digraph path = build_digraph(2, {{2, 1}});
    const Gains gains{3, 10};
    const AnalysisMatrices am = build_analysis_matrices(path, 2, {UnitVec3({0, 0, 1})},
                                                        {UnitVec3({0, 1, 0})}, gains);
    const auto pev = sym_eigenvalues(am.P);
    CHECK(pev[0] == doctest::Approx(0.45).epsilon(1e-13));
    CHECK(pev[5] == doctest::Approx(0.55).epsilon(1e-13));
    CHECK(p_lambda_min(gains, 1) == doctest::Approx(0.45));
    CHECK(p_lambda_max(gains, 1) == doctest::Approx(0.55));

    Rng rng(44);
    for (int m : {1, 2, 3}) {
        std::vector<std::pair<int, int>> edges;
        for (int j = 1; j <= m; ++j) edges.emplace_back(m + 1, j);
        const Digraph g = build_digraph(m + 1, edges);
        for (int trial = 0; trial < 3334; ++trial) {
            const Gains gg = tst::random_admissible_gains(rng, m);
            std::vector<UnitVec3> cur, des;
            for (int j = 0; j < m; ++j) {
                cur.push_back(rng.unit_vec());
                des.push_back(rng.unit_vec());
            }
            const AnalysisMatrices a = build_analysis_matrices(g, m + 1, cur, des, gg);
            CHECK(sym_eigenvalues(a.Q)[0] >= -1e-10);
            CHECK(a.Q.asymmetry() <= 1e-14);
            CHECK(a.Sigma.asymmetry() <= 1e-14);
            CHECK(sym_eigenvalues(a.Sigma)[0] >= -1e-12);
        }
    }

    // orthogonal desired bearings: upper-left Sigma block has lambda_min 1
    const Digraph two = build_digraph(3, {{3, 1}, {3, 2}});
    const AnalysisMatrices am2 = build_analysis_matrices(
        two, 3, {UnitVec3({1, 0, 0}), UnitVec3({0, 1, 0})},
        {UnitVec3({1, 0, 0}), UnitVec3({0, 1, 0})}, Gains{1.0, 2.0});
    Mat3 ul;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) ul(r, c) = am2.Sigma(r, c);
    CHECK(sym_eigenvalues(ul)[0] == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(
        build_analysis_matrices(path, 2, {UnitVec3({0, 0, 1})}, {UnitVec3({0, 1, 0})}, Gains{4, 10}),
        ValidationError);
    CHECK_THROWS_AS(build_analysis_matrices(path, 1, {}, {}, Gains{3, 10}), ValidationError);
}

TEST_CASE("closed loop: first-follower derivative equals -A x and P A + A^T P = Q") {
    Rng rng(45);
    const Digraph pair = build_digraph(2, {{2, 1}});
    for (int trial = 0; trial < 1000; ++trial) {
        const Gains gains = tst::random_admissible_gains(rng, 1);

        const Vec3 pstar = rng.vec_in_ball(2.0) + Vec3{0.7, 0, 0};   // desired p_21
        const Vec3 p21 = rng.vec_in_ball(3.0) + Vec3{0.9, 0, 0};     // actual p_21
        const Vec3 vstar = rng.vec_in_cube(2.0);                     // desired v_21
        const Vec3 v_tilde = rng.vec_in_cube(2.0);
        const Vec3 v21 = v_tilde + vstar;
        const Vec3 ustar2 = rng.vec_in_cube(1.5);

        // place the agents: p_21 = p_1 - p_2
        const Vec3 p1 = rng.vec_in_cube(2.0);
        const Vec3 p2 = p1 - p21;
        const Vec3 v1 = rng.vec_in_cube(1.0);
        const Vec3 v2 = v1 - v21;

        const RelState rel = relative_state(2, 1, p2, v2, p1, v1);
        const Vec3 u2 = control_input({rel}, {{pstar, vstar}}, ustar2, gains);

        // (d/dt) x~ from the dynamics: leader applies exactly its feedforward
        const Vec3 dp_tilde = v_tilde;
        const Vec3 dv_tilde = -(u2 - ustar2);

        const AnalysisMatrices am = build_analysis_matrices(
            pair, 2, {rel.g_ij}, {UnitVec3::normalized(pstar)}, gains);
        const ErrorState err{p21 - pstar, v_tilde};
        const Vec6 x_tilde = err.stacked();
        const Vec6 rhs = (am.A * x_tilde) * -1.0;

        CHECK(tst::max_abs_diff(dp_tilde, rhs.a) <= 1e-10);
        CHECK(tst::max_abs_diff(dv_tilde, rhs.b) <= 1e-10);

        const Mat6 residual = am.P * am.A + am.A.transpose() * am.P - am.Q;
        CHECK(residual.max_abs() <= 1e-10);
    }
}
