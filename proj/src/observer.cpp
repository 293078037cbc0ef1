#include "bearform/observer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bearform/rk4.hpp"

namespace bearform {

ObserverState::ObserverState(std::vector<Vec3> estimates, const Mat3& gain)
    : p_hat(std::move(estimates)), K(gain) {
    if (K.asymmetry() > 1e-9) throw ValidationError("observer gain K must be symmetric");
    if (!(sym_eigenvalues(K)[0] > 0.0))
        throw ValidationError("observer gain K must be positive definite");
}

std::vector<Vec3> observer_rhs(const ObserverState& state, const std::vector<AgentState>& truth,
                               const Digraph& graph) {
    if (state.p_hat.size() != truth.size() || static_cast<int>(truth.size()) != graph.n)
        throw ValidationError("observer rhs: state sizes do not match the graph");
    std::vector<Vec3> d(graph.n);
    for (int i = 1; i <= graph.n; ++i) {
        Vec3 rate = truth[i - 1].v;
        if (graph.m(i) > 0) {
            Vec3 correction{};
            for (int j : graph.neighbors(i)) {
                const RelState rel = relative_state(i, j, truth[i - 1].p, truth[i - 1].v,
                                                    truth[j - 1].p, truth[j - 1].v);
                correction += projector(rel.g_ij) * (state.p_hat[i - 1] - state.p_hat[j - 1]);
            }
            rate -= state.K * correction;
        }
        d[i - 1] = rate;
    }
    return d;
}

ObserverLog run_observer(const Scenario& scenario, const Mat3& K,
                         const std::vector<Vec3>& p_hat0, double duration) {
    const int n = scenario.graph.n;
    if (static_cast<int>(p_hat0.size()) != n)
        throw ValidationError("run_observer: initial estimate count must match agent count");
    const double dt = scenario.sim.dt;
    if (!(dt > 0.0) || !(duration >= dt))
        throw ValidationError("run_observer: bad integration settings");

    auto truth_at = [&](double t) {
        std::vector<AgentState> truth(n);
        for (int i = 1; i <= n; ++i) {
            const DesiredSample s = scenario.desired->at(i, t);
            truth[i - 1] = {s.p, s.v};
        }
        return truth;
    };

    // flat estimate vector for followers; the leader is pinned analytically
    ObserverState state(p_hat0, K);
    state.p_hat[0] = truth_at(0.0)[0].p;

    auto rhs = [&](double t, const std::vector<double>& y, std::vector<double>& dydt) {
        const std::vector<AgentState> truth = truth_at(t);
        ObserverState s(state);  // reuse the validated K
        s.p_hat[0] = truth[0].p;
        for (int i = 2; i <= n; ++i)
            s.p_hat[i - 1] = {y[3 * (i - 2) + 0], y[3 * (i - 2) + 1], y[3 * (i - 2) + 2]};
        const std::vector<Vec3> d = [&] {
            try {
                return observer_rhs(s, truth, scenario.graph);
            } catch (const BearingUndefinedError& e) {
                throw BearingUndefinedError(e.i(), e.j(), t);  // attach the run time
            }
        }();
        dydt.resize(y.size());
        for (int i = 2; i <= n; ++i) {
            dydt[3 * (i - 2) + 0] = d[i - 1].x;
            dydt[3 * (i - 2) + 1] = d[i - 1].y;
            dydt[3 * (i - 2) + 2] = d[i - 1].z;
        }
    };

    std::vector<double> y(3 * (n - 1));
    for (int i = 2; i <= n; ++i) {
        y[3 * (i - 2) + 0] = p_hat0[i - 1].x;
        y[3 * (i - 2) + 1] = p_hat0[i - 1].y;
        y[3 * (i - 2) + 2] = p_hat0[i - 1].z;
    }

    const long steps = std::llround(duration / dt);
    ObserverLog log;
    log.times.reserve(steps + 1);
    Rk4Workspace ws;
    for (long k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const std::vector<AgentState> truth = truth_at(t);
        std::vector<Vec3> est(n);
        std::vector<double> err(n);
        est[0] = truth[0].p;
        err[0] = 0.0;
        for (int i = 2; i <= n; ++i) {
            est[i - 1] = {y[3 * (i - 2) + 0], y[3 * (i - 2) + 1], y[3 * (i - 2) + 2]};
            if (!est[i - 1].finite())
                throw SimulationError("observer estimate non-finite at t=" + std::to_string(t));
            err[i - 1] = (est[i - 1] - truth[i - 1].p).norm();
        }
        log.times.push_back(t);
        log.estimates.push_back(std::move(est));
        log.err_norms.push_back(std::move(err));
        if (k == steps) break;
        rk4_step(rhs, t, y, dt, ws);
    }
    return log;
}

RateFit fit_exponential_rate(const std::vector<double>& times, const std::vector<double>& values,
                             double skip_fraction) {
    if (times.size() != values.size())
        throw ValidationError("rate fit: times/values size mismatch");
    if (!(skip_fraction >= 0.0 && skip_fraction < 1.0))
        throw ValidationError("rate fit: skip fraction must lie in [0, 1)");
    const double t0 = times.front() + skip_fraction * (times.back() - times.front());

    std::vector<double> ts, ln;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] < t0) continue;
        if (!(values[k] > 0.0))
            throw ValidationError("rate fit: nonpositive value in fit window at t=" +
                                  std::to_string(times[k]));
        ts.push_back(times[k]);
        ln.push_back(std::log(values[k]));
    }
    if (ts.size() < 10) throw ValidationError("rate fit: needs at least 10 points in the window");

    const double nn = static_cast<double>(ts.size());
    double mt = 0.0, ml = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        mt += ts[k];
        ml += ln[k];
    }
    mt /= nn;
    ml /= nn;
    double stt = 0.0, stl = 0.0, sll = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const double dtk = ts[k] - mt;
        const double dlk = ln[k] - ml;
        stt += dtk * dtk;
        stl += dtk * dlk;
        sll += dlk * dlk;
    }
    RateFit fit;
    const double slope = stl / stt;
    fit.rate = -slope;
    if (sll <= 1e-30) {
        fit.r_squared = 1.0;  // exactly constant in log space
    } else {
        const double ss_res = sll - slope * stl;
        fit.r_squared = 1.0 - std::max(0.0, ss_res) / sll;
    }
    return fit;
}

} // namespace bearform
