#pragma once

#include <vector>

#include "bearform/geometry.hpp"
#include "bearform/graph.hpp"
#include "bearform/simulation.hpp"

namespace bearform {

// Distributed position estimator state: one estimate per agent, plus the
// symmetric positive-definite correction gain K (validated at construction).
// The leader's estimate is pinned to its true position.
struct ObserverState {
    std::vector<Vec3> p_hat;
    Mat3 K;

    ObserverState(std::vector<Vec3> estimates, const Mat3& gain);
};

struct ObserverLog {
    std::vector<double> times;
    std::vector<std::vector<Vec3>> estimates;     // [step][agent-1]
    std::vector<std::vector<double>> err_norms;   // [step][agent-1]; leader's is 0
};

// d/dt p_hat: v_1 for the leader, and for followers
// v_i - K sum_j pi_{g_ij} (p_hat_i - p_hat_j), bearings taken from the truth.
std::vector<Vec3> observer_rhs(const ObserverState& state, const std::vector<AgentState>& truth,
                               const Digraph& graph);

// Integrates the estimator alongside the scenario's nominal motion (agents
// flying their desired trajectories) with the scenario's fixed step. The
// leader's estimate is exact throughout.
ObserverLog run_observer(const Scenario& scenario, const Mat3& K,
                         const std::vector<Vec3>& p_hat0, double duration);

// Least-squares slope of log(value) after discarding the leading
// skip_fraction of the time span. rate = -slope.
struct RateFit {
    double rate = 0.0;
    double r_squared = 0.0;
};
RateFit fit_exponential_rate(const std::vector<double>& times, const std::vector<double>& values,
                             double skip_fraction = 0.1);

} // namespace bearform
