#pragma once

#include <map>

#include "bearform/controller.hpp"
#include "bearform/graph.hpp"
#include "bearform/mat6.hpp"
#include "bearform/trajectory.hpp"

namespace bearform {

// Lower-bound certificate Q >= gamma * Sigma for one follower, built from the
// block constants of Q and a worst-case bound on alpha = ||p*_ij|| / ||p_ij||
// along trajectories with non-increasing Lyapunov value.
struct GammaCertificate {
    double lambda_M = 0.0;
    double alpha_min_sq = 0.0;
    double gamma = 0.0;
    // echoed inputs
    double c1 = 0.0, c2 = 0.0, c3 = 0.0;
    double min_pstar = 0.0, max_pstar = 0.0, x0_norm = 0.0;
    double lambda_min_P = 0.0, lambda_max_P = 0.0;
};

// Constant c with c Q - A^T A >= 0, via the 2x2 coefficient eigenvalue bounds.
struct CascadeCertificate {
    double c = 0.0;
    double l_Q = 0.0;  // lambda_min [[c3, c2], [c2, c1]]
    double l_A = 0.0;  // lambda_max [[c4^2, c5 c4], [c5 c4, c5^2 + 1]]
    int m = 0;
};

// Exponential-stability certificate: ||x(t)|| <= envelope_coeff ||x(0)||
// exp(-rate t) with rate = sigma / (2T).
struct RateCertificate {
    double T = 0.0;
    double mu = 0.0;
    double gamma = 0.0;
    double c = 0.0;
    double lambda1 = 0.0, lambda2 = 0.0;
    double lambda_Sigma = 0.0;
    double rho = 0.0;
    double sigma = 0.0;
    double rate = 0.0;
    double envelope_coeff = 0.0;
};

// Per-follower convergence-rate bounds through the cascade:
// c_2 = b_2 and c_i = min(c_{i-1}, b_i) / 2 down the chain.
struct CascadeRates {
    std::map<int, double> b;        // unforced-system rate bound per follower
    std::map<int, double> c_rates;  // cascade rate bound per follower
};

// (c3 c1 - c2^2) / (c3 + c1); requires c1 c3 > c2^2.
double lambda_M(double c1, double c2, double c3);

// gamma = lambda_M * alpha_min_sq with
// alpha_min_sq = min_pstar^2 / (sqrt(lmax(P)/lmin(P)) x0_norm + max_pstar)^2.
GammaCertificate gamma_bound(const Gains& gains, int m, double min_pstar, double max_pstar,
                             double x0_norm, const Mat6& P);

// c = (l_A / l_Q) m. Requires c1 c3 > c2^2 so that l_Q > 0.
CascadeCertificate cascade_constant(double c1, double c2, double c3, double c4, double c5, int m);

// rho = lambda2 / (mu T gamma); sigma = 1 / ((1+rho)(1 + rho c T^2 gamma
// lambda_Sigma)); rate = sigma / (2T); envelope = sqrt(lambda2 /
// (lambda1 (1 - sigma))).
RateCertificate es_rate(double T, double mu, double gamma, double c, double lambda1,
                        double lambda2, double lambda_Sigma);

// b maps follower id -> unforced rate bound; all followers of `graph` must be
// present with positive rates. The recurrence runs along the topological
// numbering of the graph.
CascadeRates cascade_rates(const std::map<int, double>& b, const Digraph& graph);

// sup over the sampled horizon of ||Sigma_i(t)|| for follower `agent`,
// computed from the desired bearings (never assumed).
double sigma_norm_bound(const Digraph& graph, const DesiredTrajectory& desired, int agent,
                        double horizon, double dt);

} // namespace bearform
