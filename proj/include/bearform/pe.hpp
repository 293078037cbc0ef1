#pragma once

#include <map>
#include <optional>
#include <vector>

#include "bearform/geometry.hpp"
#include "bearform/graph.hpp"
#include "bearform/mat3.hpp"
#include "bearform/trajectory.hpp"

namespace bearform {

// Symmetric PSD 3x3 matrix signal on a strictly increasing (possibly
// non-uniform) time grid. Validated at construction.
struct SampledMatrixSignal {
    std::vector<double> times;
    std::vector<Mat3> values;

    SampledMatrixSignal(std::vector<double> t, std::vector<Mat3> v, double psd_tol = 1e-9);
};

// Unit-direction signal sharing the same grid conventions.
struct DirectionSignal {
    std::vector<double> times;
    std::vector<UnitVec3> directions;
};

struct AgentPe {
    double mu_star = 0.0;
    bool is_pe = false;
    std::optional<double> epsilon1;  // best pairwise non-collinearity, m_i >= 2 only
};

struct PEReport {
    double window_T = 0.0;
    double mu_requested = 0.0;
    double mu_star = 0.0;  // worst margin (min over agents for formation checks)
    bool is_pe = false;
    std::map<int, AgentPe> per_agent;   // followers only, formation checks
    std::optional<double> epsilon1;     // worst recorded pairwise margin
    double quadrature_dt = 0.0;         // grid step used (0 = externally sampled)
};

// Worst windowed-average excitation level: the minimum over admissible window
// starts t_k (sample instants with t_k + T inside the span) of
// lambda_min( (1/T) integral_{t_k}^{t_k+T} Sigma ), integrating the piecewise
// linear interpolant of the samples (trapezoid on the grid, exact partial
// cells at window ends). Throws when the span is shorter than T plus one
// sample interval.
double pe_margin(const SampledMatrixSignal& signal, double T);

// Applies pe_margin to pi_{y(t)} and compares against mu in (0,1).
PEReport direction_is_pe(const DirectionSignal& bearings, double T, double mu);

// 1 - max_t |y_i(t)^T y_j(t)|; positive values certify uniform
// non-collinearity. The two signals must share the time grid.
double noncollinearity_margin(const DirectionSignal& y_i, const DirectionSignal& y_j);

// Per-follower check of the summed desired-bearing projectors on the grid
// dt over [0, horizon]. An agent passes when its margin reaches mu; the
// formation passes when every follower does. Pairwise non-collinearity is
// recorded for agents with two or more neighbors.
PEReport formation_is_bearing_pe(const Digraph& graph, const DesiredTrajectory& desired, double T,
                                 double mu, double horizon, double dt);

} // namespace bearform
