#pragma once

// Shared builders and independent oracles for the test suites. Oracles here
// never call the code path they check.

#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <vector>

#include "bearform/controller.hpp"
#include "bearform/graph.hpp"
#include "bearform/mat6.hpp"
#include "bearform/rng.hpp"
#include "bearform/scenario.hpp"
#include "bearform/simulation.hpp"
#include "bearform/trajectory.hpp"

namespace tst {

using namespace bearform;

inline constexpr double kPi = 3.14159265358979323846;

// Rotating-pyramid scenario: path graph 2<-...<-1, leader at the origin,
// pattern spinning about z with angle t / 2.5, kp = 3, kd = 10.
inline Scenario pyramid_scenario(double dt = 1e-3, double t_end = 30.0) {
    Scenario sc;
    sc.graph = build_digraph(4, {{2, 1}, {3, 2}, {4, 3}});
    const double s3 = std::sqrt(3.0) / 2.0;
    sc.desired = rotating_rigid_trajectory(
        {{0, 0, 0}, {0, 1, 0}, {s3, 0.5, 0}, {0.5, s3, 1}}, UnitVec3({0, 0, 1}), 2.5);
    sc.gains = {Gains{}, Gains{3, 10}, Gains{3, 10}, Gains{3, 10}};
    sc.initial = {AgentState{{0, 0, 0}, {0, 0, 0}}, AgentState{{-1, 2, 1}, {0, 1, 0}},
                  AgentState{{-2, -1, -1}, {1, 0, 0}}, AgentState{{-0.5, -0.5, 1}, {1, 0, -1}}};
    sc.sim = SimParams{dt, t_end, 1e-3};
    sc.pe = PeParams{true, 5.0 * kPi, 0.2, 10.0 * kPi, 1e-2};
    return sc;
}

// The same formation truncated to the first `n` agents of the path.
inline Scenario pyramid_prefix(int n, double dt = 1e-3, double t_end = 30.0) {
    Scenario full = pyramid_scenario(dt, t_end);
    Scenario sc;
    std::vector<std::pair<int, int>> edges;
    for (int i = 2; i <= n; ++i) edges.emplace_back(i, i - 1);
    sc.graph = build_digraph(n, edges);
    const RotatingRigidParams* rr = rotating_rigid_params(*full.desired);
    std::vector<Vec3> p0(rr->initial_positions.begin(), rr->initial_positions.begin() + n);
    sc.desired = rotating_rigid_trajectory(p0, UnitVec3(rr->axis), rr->period_param);
    sc.gains.assign(full.gains.begin(), full.gains.begin() + n);
    sc.initial.assign(full.initial.begin(), full.initial.begin() + n);
    sc.sim = full.sim;
    sc.pe = full.pe;
    return sc;
}

inline Scenario static_pair_scenario(const Vec3& pstar2 = {1, 1, 0}) {
    Scenario sc;
    sc.graph = build_digraph(2, {{2, 1}});
    sc.desired = static_trajectory({{0, 0, 0}, pstar2});
    sc.gains = {Gains{}, Gains{3, 10}};
    sc.initial = {AgentState{{0, 0, 0}, {}}, AgentState{{2, 0.5, 0.5}, {}}};
    sc.sim = SimParams{1e-3, 20.0, 1e-3};
    sc.pe = PeParams{true, 5.0, 0.2, 12.0, 1e-2};
    return sc;
}

// --- oracles ---------------------------------------------------------------

// Windowed average by dense midpoint quadrature of a matrix-valued function;
// independent of the trapezoid path in the analyzer.
inline double dense_pe_margin_oracle(const std::function<Mat3(double)>& sigma, double t0,
                                     double horizon, double T, double window_stride,
                                     double quad_dt) {
    double worst = std::numeric_limits<double>::infinity();
    for (double t = t0; t + T <= t0 + horizon + 1e-12; t += window_stride) {
        const long cells = std::lround(T / quad_dt);
        Mat3 acc = Mat3::zero();
        for (long c = 0; c < cells; ++c) {
            const double mid = t + (static_cast<double>(c) + 0.5) * (T / cells);
            acc += sigma(mid);
        }
        const Mat3 avg = acc * (1.0 / static_cast<double>(cells));
        worst = std::min(worst, sym_eigenvalues(avg)[0]);
    }
    return worst;
}

// Plain recursive cycle search, no coloring tricks.
inline bool brute_force_has_cycle(const Digraph& g) {
    std::function<bool(int, std::set<int>&)> walk = [&](int v, std::set<int>& on_path) -> bool {
        if (!on_path.insert(v).second) return true;
        for (int w : g.neighbors(v))
            if (walk(w, on_path)) return true;
        on_path.erase(v);
        return false;
    };
    for (int v = 1; v <= g.n; ++v) {
        std::set<int> path;
        if (walk(v, path)) return true;
    }
    return false;
}

// Checks the numbering property directly: every agent only senses agents with
// smaller new indices.
inline bool numbering_respects_neighbors(const Digraph& g, const std::vector<int>& numbering) {
    for (int i = 1; i <= g.n; ++i)
        for (int j : g.neighbors(i))
            if (!(numbering[j - 1] < numbering[i - 1])) return false;
    return true;
}

inline Gains random_admissible_gains(Rng& rng, int m) {
    for (;;) {
        const double kd = 1.0 / m + rng.uniform(0.05, 12.0);
        const double limit = 4.0 / m - 4.0 / (kd * kd * m * m * m);
        if (!(limit > 1e-3)) continue;
        const double kp = rng.uniform(0.05 * limit, 0.95 * limit);
        const Gains g{kp, kd};
        if (check_gains(m, g).admissible) return g;
    }
}

inline double max_abs_diff(const Vec3& a, const Vec3& b) {
    return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}

} // namespace tst
