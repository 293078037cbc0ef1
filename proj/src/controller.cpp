#include "bearform/controller.hpp"

#include <string>

namespace bearform {

GainCheck check_gains(int m, const Gains& gains) {
    if (m < 1) throw ValidationError("gain check needs at least one neighbor");
    if (!(gains.kp > 0.0) || !(gains.kd > 0.0))
        throw ValidationError("gains must be positive, got kp=" + std::to_string(gains.kp) +
                              " kd=" + std::to_string(gains.kd));
    GainCheck r;
    const double md = static_cast<double>(m);
    r.kd_slack = gains.kd - 1.0 / md;
    r.kp_limit = 4.0 / md - 4.0 / (gains.kd * gains.kd * md * md * md);
    r.kp_slack = r.kp_limit - gains.kp;
    r.admissible = r.kd_slack > 0.0 && r.kp_slack > 0.0;
    return r;
}

Vec3 control_input(const std::vector<RelState>& neighbors, const std::vector<EdgeDesired>& desired,
                   const Vec3& ustar_i, const Gains& gains) {
    if (neighbors.size() != desired.size())
        throw ValidationError("control input: neighbor/desired count mismatch");
    Vec3 u = ustar_i;
    // Admissibility is a load-time invariant, not re-checked per evaluation.
    for (std::size_t e = 0; e < neighbors.size(); ++e) {
        const Mat3 pi = projector(neighbors[e].g_ij);
        const Vec3 v_tilde = neighbors[e].v_ij - desired[e].vstar_ij;
        u += (pi * desired[e].pstar_ij) * (-gains.kp) + v_tilde * gains.kd;
    }
    return u;
}

QBlockConstants q_block_constants(const Gains& gains, int m) {
    const double md = static_cast<double>(m);
    return {gains.kd - 1.0 / (gains.kd * md * md), gains.kp / 2.0, gains.kp / (gains.kd * md)};
}

ABlockConstants a_block_constants(const Gains& gains, int m) {
    return {gains.kp, gains.kd * static_cast<double>(m)};
}

AnalysisMatrices build_analysis_matrices(const Digraph& graph, int agent,
                                         const std::vector<UnitVec3>& current_bearings,
                                         const std::vector<UnitVec3>& desired_bearings,
                                         const Gains& gains) {
    const int m = graph.m(agent);
    if (m < 1) throw ValidationError("analysis matrices need a follower with neighbors");
    if (static_cast<int>(current_bearings.size()) != m ||
        static_cast<int>(desired_bearings.size()) != m)
        throw ValidationError("analysis matrices: bearing count must match neighbor count");
    const GainCheck chk = check_gains(m, gains);
    if (!chk.admissible) throw ValidationError("analysis matrices: gains are not admissible");

    Mat3 sum_pi = Mat3::zero();
    for (const UnitVec3& g : current_bearings) sum_pi += projector(g);
    Mat3 sum_pi_star = Mat3::zero();
    for (const UnitVec3& g : desired_bearings) sum_pi_star += projector(g);

    const double kdm = gains.kd * m;
    const Mat3 I = Mat3::identity();
    AnalysisMatrices out;
    out.A = Mat6::from_blocks(Mat3::zero(), I * -1.0, sum_pi * gains.kp, I * kdm);
    out.P = Mat6::from_blocks(I * 0.5, I * (0.5 / kdm), I * (0.5 / kdm), I * 0.5);
    const QBlockConstants q = q_block_constants(gains, m);
    out.Q = Mat6::from_blocks(sum_pi * q.c3, sum_pi * q.c2, sum_pi * q.c2,
                              I * (q.c1 * static_cast<double>(m)));
    out.Sigma = Mat6::from_blocks(sum_pi_star, Mat3::zero(), Mat3::zero(), I);
    return out;
}

double p_lambda_min(const Gains& gains, int m) {
    return 0.5 * (1.0 - 1.0 / (gains.kd * static_cast<double>(m)));
}

double p_lambda_max(const Gains& gains, int m) {
    return 0.5 * (1.0 + 1.0 / (gains.kd * static_cast<double>(m)));
}

} // namespace bearform
