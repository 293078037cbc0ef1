#include "bearform/pe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace bearform {

namespace {

// Integral of the piecewise-linear interpolant from times[0] to t.
// `prefix[k]` holds the integral up to times[k].
Mat3 integral_to(const std::vector<double>& times, const std::vector<Mat3>& values,
                 const std::vector<Mat3>& prefix, double t) {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t k = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
    if (k >= times.size() - 1) k = times.size() - 2;
    Mat3 acc = prefix[k];
    const double h = times[k + 1] - times[k];
    const double s = (t - times[k]) / h;
    if (s > 0.0) {
        // exact integral of the linear segment over [times[k], t]
        const Mat3 at_t = values[k] * (1.0 - s) + values[k + 1] * s;
        acc += (values[k] + at_t) * (0.5 * (t - times[k]));
    }
    return acc;
}

} // namespace

SampledMatrixSignal::SampledMatrixSignal(std::vector<double> t, std::vector<Mat3> v,
                                         double psd_tol)
    : times(std::move(t)), values(std::move(v)) {
    if (times.size() < 2) throw ValidationError("matrix signal needs at least 2 samples");
    if (times.size() != values.size())
        throw ValidationError("matrix signal: times/values size mismatch");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1]))
            throw ValidationError("matrix signal times must be strictly increasing");
    for (const Mat3& m : values) {
        if (m.asymmetry() > psd_tol)
            throw ValidationError("matrix signal value is not symmetric");
        if (sym_eigenvalues(m)[0] < -psd_tol)
            throw ValidationError("matrix signal value is not positive semidefinite");
    }
}

double pe_margin(const SampledMatrixSignal& signal, double T) {
    if (!(T > 0.0)) throw ValidationError("window length T must be positive");
    const auto& times = signal.times;
    const auto& values = signal.values;
    const double span = times.back() - times.front();
    if (span + 1e-12 < T + (times[1] - times[0]))
        throw ValidationError("signal span " + std::to_string(span) +
                              " shorter than window T plus one sample interval");

    std::vector<Mat3> prefix(times.size());
    prefix[0] = Mat3::zero();
    for (std::size_t k = 1; k < times.size(); ++k)
        prefix[k] = prefix[k - 1] + (values[k - 1] + values[k]) * (0.5 * (times[k] - times[k - 1]));

    double mu_star = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t_end = times[k] + T;
        if (t_end > times.back() + 1e-12) break;
        const Mat3 avg = (integral_to(times, values, prefix, std::min(t_end, times.back())) -
                          prefix[k]) *
                         (1.0 / T);
        mu_star = std::min(mu_star, sym_eigenvalues(avg)[0]);
    }
    return mu_star;
}

PEReport direction_is_pe(const DirectionSignal& bearings, double T, double mu) {
    if (!(mu > 0.0 && mu < 1.0))
        throw ValidationError("PE level mu must lie in (0, 1), got " + std::to_string(mu));
    std::vector<Mat3> projectors;
    projectors.reserve(bearings.directions.size());
    for (const UnitVec3& y : bearings.directions) projectors.push_back(projector(y));
    SampledMatrixSignal signal(bearings.times, std::move(projectors));
    PEReport r;
    r.window_T = T;
    r.mu_requested = mu;
    r.mu_star = pe_margin(signal, T);
    r.is_pe = r.mu_star >= mu;
    return r;
}

double noncollinearity_margin(const DirectionSignal& y_i, const DirectionSignal& y_j) {
    if (y_i.times.size() != y_j.times.size())
        throw ValidationError("non-collinearity: signals have different sample counts");
    if (y_i.directions.size() != y_i.times.size() || y_j.directions.size() != y_j.times.size())
        throw ValidationError("non-collinearity: direction/time sample counts differ");
    for (std::size_t k = 0; k < y_i.times.size(); ++k)
        if (std::abs(y_i.times[k] - y_j.times[k]) > 1e-12)
            throw ValidationError("non-collinearity: time grids do not match");
    double worst = 0.0;
    for (std::size_t k = 0; k < y_i.times.size(); ++k)
        worst = std::max(worst, std::abs(y_i.directions[k].vec().dot(y_j.directions[k].vec())));
    return 1.0 - worst;
}

PEReport formation_is_bearing_pe(const Digraph& graph, const DesiredTrajectory& desired, double T,
                                 double mu, double horizon, double dt) {
    if (!(mu > 0.0 && mu < 1.0))
        throw ValidationError("PE level mu must lie in (0, 1), got " + std::to_string(mu));
    if (!(dt > 0.0) || !(horizon > 0.0))
        throw ValidationError("formation PE check needs positive horizon and dt");
    const StructureReport structure = validate_leader_follower(graph);
    if (!structure.is_leader_follower)
        throw ValidationError("formation PE check requires a leader-follower graph");

    const std::size_t steps = static_cast<std::size_t>(std::llround(horizon / dt));
    std::vector<double> times(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) times[k] = static_cast<double>(k) * dt;

    PEReport report;
    report.window_T = T;
    report.mu_requested = mu;
    report.quadrature_dt = dt;
    report.mu_star = std::numeric_limits<double>::infinity();
    report.is_pe = true;

    for (int i = 1; i <= graph.n; ++i) {
        const auto& nbrs = graph.neighbors(i);
        if (nbrs.empty()) continue;  // leader

        // desired bearings per neighbor on the grid
        std::vector<DirectionSignal> bearings(nbrs.size());
        std::vector<Mat3> sums(times.size(), Mat3::zero());
        for (std::size_t e = 0; e < nbrs.size(); ++e) {
            bearings[e].times = times;
            bearings[e].directions.reserve(times.size());
        }
        for (std::size_t k = 0; k < times.size(); ++k) {
            const double t = times[k];
            const DesiredSample di = desired.at(i, t);
            for (std::size_t e = 0; e < nbrs.size(); ++e) {
                const int j = nbrs[e];
                const DesiredSample dj = desired.at(j, t);
                const Vec3 rel = dj.p - di.p;
                const double dist = rel.norm();
                if (!(dist > kSeparationEps))
                    throw ValidationError("desired bearing undefined for agents " +
                                          std::to_string(i) + " and " + std::to_string(j) +
                                          " at t=" + std::to_string(t));
                const UnitVec3 g(rel / dist, 1e-9);
                bearings[e].directions.push_back(g);
                sums[k] += projector(g);
            }
        }

        AgentPe entry;
        entry.mu_star = pe_margin(SampledMatrixSignal(times, std::move(sums)), T);
        entry.is_pe = entry.mu_star >= mu;
        if (nbrs.size() >= 2) {
            double best = -1.0;
            for (std::size_t a = 0; a < nbrs.size(); ++a)
                for (std::size_t b = a + 1; b < nbrs.size(); ++b)
                    best = std::max(best, noncollinearity_margin(bearings[a], bearings[b]));
            entry.epsilon1 = best;
            if (!report.epsilon1 || best < *report.epsilon1) report.epsilon1 = best;
        }
        report.mu_star = std::min(report.mu_star, entry.mu_star);
        report.is_pe = report.is_pe && entry.is_pe;
        report.per_agent.emplace(i, entry);
    }
    return report;
}

} // namespace bearform
