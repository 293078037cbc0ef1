#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bearform/csv.hpp"
#include "bearform/rng.hpp"
#include "bearform/simulation.hpp"
#include "helpers.hpp"

using namespace bearform;
using tst::kPi;

TEST_CASE("rotating trajectory: exact start, rigid norms, reference velocity") {
    const Scenario sc = tst::pyramid_scenario();
    const RotatingRigidParams* rr = rotating_rigid_params(*sc.desired);
    REQUIRE(rr != nullptr);

    for (int i = 1; i <= 4; ++i) {
        const DesiredSample s0 = sc.desired->at(i, 0.0);
        CHECK(tst::max_abs_diff(s0.p, rr->initial_positions[i - 1]) == 0.0);
        for (double t : {0.7, 3.9, 11.0})
            CHECK(sc.desired->at(i, t).p.norm() ==
                  doctest::Approx(rr->initial_positions[i - 1].norm()).epsilon(1e-13));
    }
    // angular speed 1/2.5 about z moves the first follower along +x initially
    CHECK(tst::max_abs_diff(sc.desired->at(2, 0.0).v, {0.4, 0, 0}) <= 1e-15);
}

TEST_CASE("trajectory families: derivatives match finite differences") {
    const Scenario sc = tst::pyramid_scenario();
    const double h = 1e-5;
    auto check_derivatives = [&](const DesiredTrajectory& d, int agent, double t, double tol_v,
                                 double tol_u) {
        const DesiredSample mid = d.at(agent, t);
        const DesiredSample lo = d.at(agent, t - h);
        const DesiredSample hi = d.at(agent, t + h);
        const Vec3 v_fd = (hi.p - lo.p) / (2.0 * h);
        const Vec3 u_fd = (hi.v - lo.v) / (2.0 * h);
        CHECK(tst::max_abs_diff(mid.v, v_fd) <= tol_v);
        CHECK(tst::max_abs_diff(mid.u, u_fd) <= tol_u);
    };
    for (int i = 2; i <= 4; ++i)
        for (double t : {0.5, 4.0, 9.3}) check_derivatives(*sc.desired, i, t, 1e-9, 1e-9);

    const TrajectoryPtr still = static_trajectory({{0, 0, 0}, {1, 2, 3}});
    CHECK(still->at(2, 5.0).v.norm() == 0.0);
    CHECK(still->at(2, 5.0).u.norm() == 0.0);

    const Mat3 rot = rotation_about(UnitVec3::normalized({1, 1, 1}).vec(), 0.8);
    const TrajectoryPtr moved = similarity_transform(sc.desired, rot, 1.7, {3, -2, 1});
    for (double t : {0.5, 4.0}) check_derivatives(*moved, 3, t, 1e-9, 1e-9);
}

TEST_CASE("sampled trajectory: interpolates a smooth family within tolerance") {
    const Scenario sc = tst::pyramid_scenario();
    std::vector<double> times;
    std::vector<std::vector<Vec3>> pos(4);
    for (double t = 0.0; t <= 10.0 + 1e-9; t += 1e-3) {
        times.push_back(t);
        for (int i = 1; i <= 4; ++i) pos[i - 1].push_back(sc.desired->at(i, t).p);
    }
    const TrajectoryPtr spline = sampled_trajectory(times, pos);
    CHECK(spline->kind() == "custom-sampled");

    for (double t : {0.1234, 2.7185, 8.6}) {
        const DesiredSample truth = sc.desired->at(3, t);
        const DesiredSample got = spline->at(3, t);
        CHECK(tst::max_abs_diff(got.p, truth.p) <= 1e-9);
        CHECK(tst::max_abs_diff(got.v, truth.v) <= 1e-6);   // documented tolerance
        CHECK(tst::max_abs_diff(got.u, truth.u) <= 1e-3);
    }
    // the spline velocity is the exact derivative of the spline position
    const double h = 1e-5;
    for (double t : {0.5, 5.0}) {
        const Vec3 v_fd = (spline->at(2, t + h).p - spline->at(2, t - h).p) / (2.0 * h);
        CHECK(tst::max_abs_diff(spline->at(2, t).v, v_fd) <= 1e-7);
    }
    CHECK_THROWS_AS(spline->at(1, 11.0), ValidationError);
    CHECK_THROWS_AS(sampled_trajectory({0, 1}, {{{0, 0, 0}, {1, 1, 1}}}), ValidationError);
}

TEST_CASE("simulate: staying on the desired trajectory is an equilibrium") {
    Scenario sc = tst::pyramid_scenario(1e-3, 2.0);
    for (int i = 1; i <= 4; ++i) {
        const DesiredSample d = sc.desired->at(i, 0.0);
        sc.initial[i - 1] = {d.p, d.v};
    }
    const TrajectoryLog log = simulate(sc);
    REQUIRE_FALSE(log.violation.has_value());
    for (const auto& e : log.edges)
        CHECK(*std::max_element(e.err_x.begin(), e.err_x.end()) <= 1e-12);
}

TEST_CASE("simulate: pyramid errors contract and L21 never increases") {
    const Scenario sc = tst::pyramid_scenario(1e-3, 10.0);
    const TrajectoryLog log = simulate(sc);
    REQUIRE(log.times.size() == 10001);

    const EdgeLogSeries& e21 = log.edge(2, 1);
    for (std::size_t k = 1; k < e21.err_x.size(); ++k) CHECK(e21.err_x[k] < e21.err_x.front());
    CHECK(e21.err_x.back() < 0.5);  // well into the decay by t = 10

    for (std::size_t k = 1; k < e21.lyap.size(); ++k)
        CHECK(e21.lyap[k] <= e21.lyap[k - 1] + 1e-9);
}

TEST_CASE("simulate: logged controls satisfy the double-integrator bookkeeping") {
    const Scenario sc = tst::pyramid_scenario(1e-3, 1.0);
    const TrajectoryLog log = simulate(sc);
    // v advances by roughly u dt between samples (first-order consistency)
    const std::size_t k = 500;
    for (int a = 0; a < 4; ++a) {
        const Vec3 dv = (log.states[k + 1][a].v - log.states[k][a].v) / sc.sim.dt;
        CHECK(tst::max_abs_diff(dv, log.controls[k][a]) <= 0.2);
    }
}

TEST_CASE("simulate: determinism is bit-exact") {
    const Scenario sc = tst::pyramid_scenario(1e-3, 2.0);
    const TrajectoryLog a = simulate(sc);
    const TrajectoryLog b = simulate(sc);
    CHECK(states_csv(a) == states_csv(b));
    CHECK(edges_csv(a) == edges_csv(b));
}

TEST_CASE("simulate: upstream agents are unaffected by downstream ones, bit for bit") {
    const TrajectoryLog full = simulate(tst::pyramid_scenario(1e-3, 5.0));
    const TrajectoryLog trimmed = simulate(tst::pyramid_prefix(3, 1e-3, 5.0));
    const EdgeLogSeries& f21 = full.edge(2, 1);
    const EdgeLogSeries& t21 = trimmed.edge(2, 1);
    const EdgeLogSeries& f32 = full.edge(3, 2);
    const EdgeLogSeries& t32 = trimmed.edge(3, 2);
    REQUIRE(f21.err_x.size() == t21.err_x.size());
    for (std::size_t k = 0; k < f21.err_x.size(); ++k) {
        CHECK(f21.err_x[k] == t21.err_x[k]);
        CHECK(f32.err_x[k] == t32.err_x[k]);
    }
    for (std::size_t k = 0; k < full.times.size(); ++k)
        for (int a = 0; a < 3; ++a) {
            CHECK(full.states[k][a].p.x == trimmed.states[k][a].p.x);
            CHECK(full.states[k][a].v.z == trimmed.states[k][a].v.z);
        }
}

TEST_CASE("simulate: halving the step shows fourth-order convergence") {
    auto final_flat = [](double dt) {
        const TrajectoryLog log = simulate(tst::pyramid_scenario(dt, 2.0));
        std::vector<double> out;
        for (const AgentState& a : log.states.back()) {
            out.insert(out.end(), {a.p.x, a.p.y, a.p.z, a.v.x, a.v.y, a.v.z});
        }
        return out;
    };
    const auto a = final_flat(0.02), b = final_flat(0.01), c = final_flat(0.005);
    double d_ab = 0.0, d_bc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        d_ab = std::max(d_ab, std::abs(a[k] - b[k]));
        d_bc = std::max(d_bc, std::abs(b[k] - c[k]));
    }
    // measured ratio ~17.3; a 4th-order scheme gives 16
    CHECK(d_ab / d_bc > 10.0);
    CHECK(d_ab / d_bc < 26.0);
}

TEST_CASE("simulate: one coarse step matches a fine-step reference at fifth order") {
    auto end_state_diff = [](double coarse_dt) {
        const TrajectoryLog c = simulate(tst::pyramid_scenario(coarse_dt, 0.01));
        const TrajectoryLog f = simulate(tst::pyramid_scenario(0.001, 0.01));
        double worst = 0.0;
        for (int a = 0; a < 4; ++a) {
            worst = std::max(worst, tst::max_abs_diff(c.states.back()[a].p, f.states.back()[a].p));
            worst = std::max(worst, tst::max_abs_diff(c.states.back()[a].v, f.states.back()[a].v));
        }
        return worst;
    };
    const double e_full = end_state_diff(0.01);   // one step of 0.01
    const double e_half = end_state_diff(0.005);  // two steps of 0.005
    CHECK(e_full <= 5e-6);                        // measured 5.9e-7
    CHECK(e_full / e_half > 8.0);                 // local error scales like dt^5
}

TEST_CASE("simulate: separation guard truncates the log with a violation record") {
    Scenario sc;
    sc.graph = build_digraph(2, {{2, 1}});
    sc.desired = static_trajectory({{0, 0, 0}, {0.6, 0, 0}});
    sc.gains = {Gains{}, Gains{3, 10}};
    sc.initial = {AgentState{{0, 0, 0}, {0, 0, 0}}, AgentState{{0.6, 0, 0}, {-3, 0, 0}}};
    sc.sim = SimParams{1e-3, 5.0, 0.5};
    const TrajectoryLog log = simulate(sc);
    REQUIRE(log.violation.has_value());
    CHECK(log.violation->i == 2);
    CHECK(log.violation->j == 1);
    CHECK(log.violation->distance < 0.5);
    CHECK(log.times.size() < 5001);
    CHECK(log.times.size() == log.states.size());
    // truncated edge series stay aligned with the time grid
    CHECK(log.edge(2, 1).err_x.size() == log.times.size());
}

TEST_CASE("error_series and lyapunov_series recompute the logged values") {
    const Scenario sc = tst::pyramid_scenario(1e-3, 1.0);
    const TrajectoryLog log = simulate(sc);

    const auto errs = error_series(log, *sc.desired, sc.graph);
    REQUIRE(errs.size() == 3);
    for (const EdgeSeries& s : errs) {
        const EdgeLogSeries& logged = log.edge(s.i, s.j);
        for (std::size_t k = 0; k < s.t.size(); ++k)
            CHECK(std::abs(s.value[k] - logged.err_x[k]) <= 1e-12);
    }

    const auto lyap = lyapunov_series(log, *sc.desired, sc.graph, sc.gains);
    for (const EdgeSeries& s : lyap) {
        const EdgeLogSeries& logged = log.edge(s.i, s.j);
        for (std::size_t k = 0; k < s.t.size(); ++k)
            CHECK(std::abs(s.value[k] - logged.lyap[k]) <= 1e-12);
    }

    CHECK_THROWS_AS(error_series(log, *sc.desired, sc.graph, {{1, 2}}), ValidationError);
    CHECK_THROWS_AS(lyapunov_series(log, *sc.desired, sc.graph, sc.gains, {{4, 1}}),
                    ValidationError);
}

TEST_CASE("edge Lyapunov value equals the quadratic form with the 6x6 P") {
    Rng rng(61);
    const Digraph pair = build_digraph(2, {{2, 1}});
    for (int trial = 0; trial < 50; ++trial) {
        const Gains gains = tst::random_admissible_gains(rng, 1);
        Scenario sc;
        sc.graph = pair;
        sc.desired = static_trajectory({{0, 0, 0}, {2, 0, 0}});
        sc.gains = {Gains{}, gains};
        const Vec3 p2 = rng.vec_in_cube(2.0) + Vec3{4, 0, 0};
        sc.initial = {AgentState{{0, 0, 0}, rng.vec_in_cube(1.0)}, AgentState{p2, rng.vec_in_cube(1.0)}};
        sc.sim = SimParams{1e-3, 1e-3, 1e-6};
        const TrajectoryLog log = simulate(sc);

        const AnalysisMatrices am = build_analysis_matrices(
            pair, 2, {UnitVec3({0, 0, 1})}, {UnitVec3({0, 1, 0})}, gains);
        const Vec3 p_tilde = (sc.initial[0].p - sc.initial[1].p) - Vec3{-2, 0, 0};
        const Vec3 v_tilde = sc.initial[0].v - sc.initial[1].v;
        const double oracle = quadratic_form(am.P, Vec6{p_tilde, v_tilde});
        CHECK(log.edge(2, 1).lyap.front() == doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("simulate: input validation") {
    Scenario sc = tst::pyramid_scenario();
    sc.initial.pop_back();
    CHECK_THROWS_AS(simulate(sc), ValidationError);
    Scenario sc2 = tst::pyramid_scenario();
    sc2.sim.dt = -1.0;
    CHECK_THROWS_AS(simulate(sc2), ValidationError);
}

TEST_CASE("simulate: states blowing past double range abort with diagnostics") {
    Scenario sc = tst::static_pair_scenario();
    sc.initial[1].v = {1e200, 0, 0};
    CHECK_THROWS_AS(simulate(sc), SimulationError);
}
