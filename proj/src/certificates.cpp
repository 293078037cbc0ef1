#include "bearform/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bearform/pe.hpp"

namespace bearform {

namespace {

double eig2_min(double a, double b, double c) {
    // lambda_min of [[a, b], [b, c]]
    const double mean = 0.5 * (a + c);
    const double rad = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    return mean - rad;
}

double eig2_max(double a, double b, double c) {
    const double mean = 0.5 * (a + c);
    const double rad = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    return mean + rad;
}

} // namespace

double lambda_M(double c1, double c2, double c3) {
    if (!(c1 > 0.0) || !(c3 > 0.0) || c2 < 0.0)
        throw ValidationError("lambda_M needs positive diagonal constants");
    if (!(c1 * c3 > c2 * c2))
        throw ValidationError("lambda_M hypothesis violated: c1*c3 = " + std::to_string(c1 * c3) +
                              " <= c2^2 = " + std::to_string(c2 * c2));
    return (c3 * c1 - c2 * c2) / (c3 + c1);
}

GammaCertificate gamma_bound(const Gains& gains, int m, double min_pstar, double max_pstar,
                             double x0_norm, const Mat6& P) {
    const GainCheck chk = check_gains(m, gains);
    if (!chk.admissible) throw ValidationError("gamma bound: gains are not admissible");
    if (!(min_pstar > 0.0)) throw ValidationError("gamma bound: min ||p*|| must be positive");
    if (!(max_pstar >= min_pstar))
        throw ValidationError("gamma bound: max ||p*|| must dominate the min");
    if (x0_norm < 0.0) throw ValidationError("gamma bound: negative initial error norm");

    const auto pev = sym_eigenvalues(P);
    GammaCertificate cert;
    cert.lambda_min_P = pev[0];
    cert.lambda_max_P = pev[5];
    if (!(cert.lambda_min_P > 0.0))
        throw ValidationError("gamma bound: P is not positive definite");

    const QBlockConstants q = q_block_constants(gains, m);
    cert.c1 = q.c1;
    cert.c2 = q.c2;
    cert.c3 = q.c3;
    cert.min_pstar = min_pstar;
    cert.max_pstar = max_pstar;
    cert.x0_norm = x0_norm;
    cert.lambda_M = lambda_M(q.c1, q.c2, q.c3);
    const double reach = std::sqrt(cert.lambda_max_P / cert.lambda_min_P) * x0_norm + max_pstar;
    cert.alpha_min_sq = (min_pstar * min_pstar) / (reach * reach);
    cert.gamma = cert.lambda_M * cert.alpha_min_sq;
    return cert;
}

CascadeCertificate cascade_constant(double c1, double c2, double c3, double c4, double c5,
                                    int m) {
    if (!(c1 > 0.0) || !(c3 > 0.0) || !(c4 > 0.0) || !(c5 > 0.0) || c2 < 0.0)
        throw ValidationError("cascade constant needs positive constants");
    if (m < 1) throw ValidationError("cascade constant needs m >= 1");
    // The coefficient matrix of Q must be positive definite for l_Q > 0; for
    // controller constants this is exactly the gain-admissibility inequality.
    if (!(c1 * c3 > c2 * c2))
        throw ValidationError("cascade constant hypothesis violated: c1*c3 <= c2^2");
    CascadeCertificate cert;
    cert.m = m;
    cert.l_Q = eig2_min(c3, c2, c1);
    cert.l_A = eig2_max(c4 * c4, c5 * c4, c5 * c5 + 1.0);
    cert.c = cert.l_A / cert.l_Q * static_cast<double>(m);
    return cert;
}

RateCertificate es_rate(double T, double mu, double gamma, double c, double lambda1,
                        double lambda2, double lambda_Sigma) {
    for (double v : {T, mu, gamma, c, lambda1, lambda2, lambda_Sigma})
        if (!(v > 0.0)) throw ValidationError("rate certificate needs positive inputs");
    if (!(lambda2 >= lambda1))
        throw ValidationError("rate certificate: lambda2 must dominate lambda1");
    RateCertificate r;
    r.T = T;
    r.mu = mu;
    r.gamma = gamma;
    r.c = c;
    r.lambda1 = lambda1;
    r.lambda2 = lambda2;
    r.lambda_Sigma = lambda_Sigma;
    r.rho = lambda2 / (mu * T * gamma);
    r.sigma = 1.0 / ((1.0 + r.rho) * (1.0 + r.rho * c * T * T * gamma * lambda_Sigma));
    r.rate = r.sigma / (2.0 * T);
    r.envelope_coeff = std::sqrt(lambda2 / (lambda1 * (1.0 - r.sigma)));
    return r;
}

CascadeRates cascade_rates(const std::map<int, double>& b, const Digraph& graph) {
    const std::vector<int> numbering = topological_numbering(graph);
    std::vector<int> by_position(graph.n, 0);  // position -> original id
    for (int i = 1; i <= graph.n; ++i) by_position[numbering[i - 1] - 1] = i;

    CascadeRates out;
    for (int pos = 2; pos <= graph.n; ++pos) {
        const int id = by_position[pos - 1];
        auto it = b.find(id);
        if (it == b.end())
            throw ValidationError("cascade rates: missing rate for follower " + std::to_string(id));
        if (!(it->second > 0.0))
            throw ValidationError("cascade rates: rate for follower " + std::to_string(id) +
                                  " must be positive");
        out.b[id] = it->second;
    }
    if (b.size() != out.b.size())
        throw ValidationError("cascade rates: got rates for unknown agents");

    double prev = 0.0;
    for (int pos = 2; pos <= graph.n; ++pos) {
        const int id = by_position[pos - 1];
        const double bi = out.b[id];
        const double ci = pos == 2 ? bi : 0.5 * std::min(prev, bi);
        out.c_rates[id] = ci;
        prev = ci;
    }
    return out;
}

double sigma_norm_bound(const Digraph& graph, const DesiredTrajectory& desired, int agent,
                        double horizon, double dt) {
    const auto& nbrs = graph.neighbors(agent);
    if (nbrs.empty()) throw ValidationError("sigma bound: agent has no neighbors");
    if (!(dt > 0.0) || !(horizon >= dt))
        throw ValidationError("sigma bound: bad sampling parameters");
    const std::size_t steps = static_cast<std::size_t>(std::llround(horizon / dt));
    double bound = 1.0;  // the identity block
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const DesiredSample di = desired.at(agent, t);
        Mat3 sum = Mat3::zero();
        for (int j : nbrs) {
            const DesiredSample dj = desired.at(j, t);
            sum += projector(UnitVec3::normalized(dj.p - di.p));
        }
        bound = std::max(bound, sym_eigenvalues(sum)[2]);
    }
    return bound;
}

} // namespace bearform
