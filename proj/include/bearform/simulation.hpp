#pragma once

#include <optional>
#include <vector>

#include "bearform/controller.hpp"
#include "bearform/graph.hpp"
#include "bearform/trajectory.hpp"

namespace bearform {

struct AgentState {
    Vec3 p;  // position, m
    Vec3 v;  // velocity, m/s
};

struct SimParams {
    double dt = 1e-3;
    double t_end = 30.0;
    double separation_guard = 1e-3;  // m, abort distance between sensed pairs
};

struct PeParams {
    bool present = false;
    double T = 0.0;
    double mu = 0.0;
    double horizon = 0.0;  // defaults to 2T at parse time
    double dt = 1e-2;
};

// A complete closed-loop experiment: topology, desired motion, gains per
// agent (leader entry unused), initial states, and integration settings.
struct Scenario {
    Digraph graph;
    TrajectoryPtr desired;
    std::vector<Gains> gains;          // gains[i-1]
    std::vector<AgentState> initial;   // initial[i-1]
    SimParams sim;
    PeParams pe;
};

struct SeparationViolation {
    double t = 0.0;
    int i = 0, j = 0;
    double distance = 0.0;
};

// One sensed edge's logged series (aligned with TrajectoryLog::times).
struct EdgeLogSeries {
    int i = 0, j = 0;
    std::vector<double> err_p;  // ||p_ij - p*_ij||
    std::vector<double> err_v;  // ||v_ij - v*_ij||
    std::vector<double> err_x;  // ||x~_ij||
    std::vector<double> lyap;   // x~^T P_i x~
};

struct TrajectoryLog {
    std::vector<double> times;                    // uniform grid, step dt
    std::vector<std::vector<AgentState>> states;  // [step][agent-1]
    std::vector<std::vector<Vec3>> controls;      // [step][agent-1]
    std::vector<EdgeLogSeries> edges;             // one per graph edge
    std::optional<SeparationViolation> violation;

    const EdgeLogSeries& edge(int i, int j) const;
};

// Fixed-step integration of the double-integrator agents under the bearing
// control law, with the desired family evaluated analytically at every stage.
// A separation-guard breach truncates the log and records the violation;
// non-finite states abort with a SimulationError.
TrajectoryLog simulate(const Scenario& scenario);

// Per-edge (t, ||x~_ij||) recomputed from logged states and the desired
// family. `edges` empty means every graph edge; an edge outside the graph is
// rejected.
struct EdgeSeries {
    int i = 0, j = 0;
    std::vector<double> t;
    std::vector<double> value;
};
std::vector<EdgeSeries> error_series(const TrajectoryLog& log, const DesiredTrajectory& desired,
                                     const Digraph& graph,
                                     const std::vector<std::pair<int, int>>& edges = {});

// Per-edge (t, x~^T P_i x~) series, same conventions as error_series.
std::vector<EdgeSeries> lyapunov_series(const TrajectoryLog& log,
                                        const DesiredTrajectory& desired, const Digraph& graph,
                                        const std::vector<Gains>& gains,
                                        const std::vector<std::pair<int, int>>& edges = {});

} // namespace bearform
