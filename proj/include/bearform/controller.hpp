#pragma once

#include <vector>

#include "bearform/geometry.hpp"
#include "bearform/graph.hpp"
#include "bearform/mat6.hpp"

namespace bearform {

// Per-agent control gains. Admissibility for a follower with m neighbors:
// k_d > 1/m and k_p < 4/m - 4/(k_d^2 m^3).
struct Gains {
    double kp = 0.0;
    double kd = 0.0;
};

struct GainCheck {
    bool admissible = false;
    double kd_slack = 0.0;  // k_d - 1/m
    double kp_slack = 0.0;  // 4/m - 4/(k_d^2 m^3) - k_p
    double kp_limit = 0.0;  // 4/m - 4/(k_d^2 m^3)
};

GainCheck check_gains(int m, const Gains& gains);

// Relative tracking error of one sensed edge.
struct ErrorState {
    Vec3 p_tilde;  // p_ij - p*_ij
    Vec3 v_tilde;  // v_ij - v*_ij
    Vec6 stacked() const { return {p_tilde, v_tilde}; }
};

// Desired relative quantities for one edge of agent i.
struct EdgeDesired {
    Vec3 pstar_ij;
    Vec3 vstar_ij;
};

// Acceleration command: sum over neighbors of
// -k_p pi_{g_ij} p*_ij + k_d (v_ij - v*_ij), plus the feedforward u*_i.
// A neighbor-less agent returns the feedforward alone.
Vec3 control_input(const std::vector<RelState>& neighbors, const std::vector<EdgeDesired>& desired,
                   const Vec3& ustar_i, const Gains& gains);

// Scalar constants of the per-edge blocks of the dissipation matrix Q_i:
// c3 = kp/(kd m), c2 = kp/2, c1 = kd - 1/(kd m^2). Positive definiteness of
// [[c3, c2], [c2, c1]] is exactly gain admissibility.
struct QBlockConstants {
    double c1, c2, c3;
};
QBlockConstants q_block_constants(const Gains& gains, int m);

// A-matrix constants: c4 = kp, c5 = kd m.
struct ABlockConstants {
    double c4, c5;
};
ABlockConstants a_block_constants(const Gains& gains, int m);

// Closed-loop analysis matrices of one agent:
//   A(g)  = [[0, -I], [kp sum pi_{g_ij}, kd m I]]
//   P     = 1/2 [[I, I/(kd m)], [I/(kd m), I]]
//   Q(g)  = sum_j [[c3 pi, c2 pi], [c2 pi, c1 I]]  (P A + A^T P = Q)
//   Sigma = [[sum pi_{g*_ij}, 0], [0, I]]
struct AnalysisMatrices {
    Mat6 A;
    Mat6 P;
    Mat6 Q;
    Mat6 Sigma;
};

AnalysisMatrices build_analysis_matrices(const Digraph& graph, int agent,
                                         const std::vector<UnitVec3>& current_bearings,
                                         const std::vector<UnitVec3>& desired_bearings,
                                         const Gains& gains);

// Eigenvalue bounds of P: (1 -/+ 1/(kd m)) / 2.
double p_lambda_min(const Gains& gains, int m);
double p_lambda_max(const Gains& gains, int m);

} // namespace bearform
