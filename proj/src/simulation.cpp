#include "bearform/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bearform/rk4.hpp"

namespace bearform {

namespace {

// P_i restricted to one edge: x~^T P x~ with P = 1/2 [[I, eI], [eI, I]],
// e = 1/(kd m). Evaluated directly, no 6x6 product needed.
double edge_lyapunov(const Vec3& p_tilde, const Vec3& v_tilde, const Gains& gains, int m) {
    const double e = 1.0 / (gains.kd * static_cast<double>(m));
    return 0.5 * (p_tilde.norm_sq() + v_tilde.norm_sq()) + e * p_tilde.dot(v_tilde);
}

struct FlatState {
    static void pack(const std::vector<AgentState>& agents, std::vector<double>& y) {
        y.resize(agents.size() * 6);
        for (std::size_t a = 0; a < agents.size(); ++a) {
            y[6 * a + 0] = agents[a].p.x;
            y[6 * a + 1] = agents[a].p.y;
            y[6 * a + 2] = agents[a].p.z;
            y[6 * a + 3] = agents[a].v.x;
            y[6 * a + 4] = agents[a].v.y;
            y[6 * a + 5] = agents[a].v.z;
        }
    }
    static void unpack(const std::vector<double>& y, std::vector<AgentState>& agents) {
        agents.resize(y.size() / 6);
        for (std::size_t a = 0; a < agents.size(); ++a) {
            agents[a].p = {y[6 * a + 0], y[6 * a + 1], y[6 * a + 2]};
            agents[a].v = {y[6 * a + 3], y[6 * a + 4], y[6 * a + 5]};
        }
    }
};

class ClosedLoop {
public:
    explicit ClosedLoop(const Scenario& s) : s_(s), n_(s.graph.n) {}

    // dydt for the flat (p, v) state; controls optionally captured.
    void operator()(double t, const std::vector<double>& y, std::vector<double>& dydt) const {
        eval(t, y, dydt, nullptr);
    }

    void eval(double t, const std::vector<double>& y, std::vector<double>& dydt,
              std::vector<Vec3>* controls_out) const {
        dydt.resize(y.size());
        std::vector<DesiredSample> des(n_);
        for (int i = 1; i <= n_; ++i) des[i - 1] = s_.desired->at(i, t);

        for (int i = 1; i <= n_; ++i) {
            const Vec3 p_i{y[6 * (i - 1) + 0], y[6 * (i - 1) + 1], y[6 * (i - 1) + 2]};
            const Vec3 v_i{y[6 * (i - 1) + 3], y[6 * (i - 1) + 4], y[6 * (i - 1) + 5]};
            // also rejects magnitudes whose squared norms overflow downstream
            if (!(p_i.norm_sq() < 1e300) || !(v_i.norm_sq() < 1e300))
                throw SimulationError("non-finite or diverging state of agent " +
                                      std::to_string(i) + " at t=" + std::to_string(t));

            Vec3 u = des[i - 1].u;
            const Gains& gains = s_.gains[i - 1];
            for (int j : s_.graph.neighbors(i)) {
                const Vec3 p_j{y[6 * (j - 1) + 0], y[6 * (j - 1) + 1], y[6 * (j - 1) + 2]};
                const Vec3 v_j{y[6 * (j - 1) + 3], y[6 * (j - 1) + 4], y[6 * (j - 1) + 5]};
                const RelState rel = relative_state(i, j, p_i, v_i, p_j, v_j, kSeparationEps, t);
                const Vec3 pstar = des[j - 1].p - des[i - 1].p;
                const Vec3 vstar = des[j - 1].v - des[i - 1].v;
                const Vec3 v_tilde = rel.v_ij - vstar;
                u += (projector(rel.g_ij) * pstar) * (-gains.kp) + v_tilde * gains.kd;
            }

            dydt[6 * (i - 1) + 0] = v_i.x;
            dydt[6 * (i - 1) + 1] = v_i.y;
            dydt[6 * (i - 1) + 2] = v_i.z;
            dydt[6 * (i - 1) + 3] = u.x;
            dydt[6 * (i - 1) + 4] = u.y;
            dydt[6 * (i - 1) + 5] = u.z;
            if (controls_out) (*controls_out)[i - 1] = u;
        }
    }

private:
    const Scenario& s_;
    int n_;
};

} // namespace

const EdgeLogSeries& TrajectoryLog::edge(int i, int j) const {
    for (const EdgeLogSeries& e : edges)
        if (e.i == i && e.j == j) return e;
    throw ValidationError("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                          ") not in the log");
}

TrajectoryLog simulate(const Scenario& scenario) {
    const int n = scenario.graph.n;
    if (static_cast<int>(scenario.initial.size()) != n)
        throw ValidationError("simulate: initial state count must match agent count");
    if (static_cast<int>(scenario.gains.size()) != n)
        throw ValidationError("simulate: gains count must match agent count");
    if (scenario.desired->agents() < n)
        throw ValidationError("simulate: desired trajectory covers too few agents");
    if (!(scenario.sim.dt > 0.0) || !(scenario.sim.t_end >= scenario.sim.dt))
        throw ValidationError("simulate: bad integration settings");

    const double dt = scenario.sim.dt;
    const long steps = std::llround(scenario.sim.t_end / dt);

    TrajectoryLog log;
    log.times.reserve(steps + 1);
    log.states.reserve(steps + 1);
    log.controls.reserve(steps + 1);
    for (auto [i, j] : scenario.graph.edges) {
        EdgeLogSeries e;
        e.i = i;
        e.j = j;
        log.edges.push_back(std::move(e));
    }

    ClosedLoop loop(scenario);
    std::vector<double> y;
    FlatState::pack(scenario.initial, y);
    Rk4Workspace ws;
    std::vector<AgentState> agents = scenario.initial;
    std::vector<Vec3> controls(n);
    std::vector<double> scratch;

    for (long k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        FlatState::unpack(y, agents);

        for (const AgentState& a : agents)
            if (!a.p.finite() || !a.v.finite())
                throw SimulationError("non-finite state at t=" + std::to_string(t));

        // separation guard over sensed pairs
        for (auto [i, j] : scenario.graph.edges) {
            const double d = (agents[j - 1].p - agents[i - 1].p).norm();
            if (d < scenario.sim.separation_guard) {
                log.violation = SeparationViolation{t, i, j, d};
                return log;
            }
        }

        loop.eval(t, y, scratch, &controls);
        log.times.push_back(t);
        log.states.push_back(agents);
        log.controls.push_back(controls);
        for (std::size_t e = 0; e < scenario.graph.edges.size(); ++e) {
            const auto [i, j] = scenario.graph.edges[e];
            const DesiredSample di = scenario.desired->at(i, t);
            const DesiredSample dj = scenario.desired->at(j, t);
            const Vec3 p_tilde = (agents[j - 1].p - agents[i - 1].p) - (dj.p - di.p);
            const Vec3 v_tilde = (agents[j - 1].v - agents[i - 1].v) - (dj.v - di.v);
            EdgeLogSeries& series = log.edges[e];
            series.err_p.push_back(p_tilde.norm());
            series.err_v.push_back(v_tilde.norm());
            series.err_x.push_back(std::sqrt(p_tilde.norm_sq() + v_tilde.norm_sq()));
            series.lyap.push_back(
                edge_lyapunov(p_tilde, v_tilde, scenario.gains[i - 1], scenario.graph.m(i)));
        }

        if (k == steps) break;
        try {
            rk4_step(loop, t, y, dt, ws);
        } catch (const BearingUndefinedError& err) {
            // a mid-step collapse below the bearing threshold counts as a
            // separation violation at this step
            log.violation = SeparationViolation{t, err.i(), err.j(), 0.0};
            return log;
        }
    }
    return log;
}

namespace {

std::vector<std::pair<int, int>> resolve_edges(const Digraph& graph,
                                               const std::vector<std::pair<int, int>>& edges) {
    if (edges.empty()) return graph.edges;
    for (auto [i, j] : edges)
        if (!graph.has_edge(i, j))
            throw ValidationError("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                                  ") is not in the graph");
    return edges;
}

} // namespace

std::vector<EdgeSeries> error_series(const TrajectoryLog& log, const DesiredTrajectory& desired,
                                     const Digraph& graph,
                                     const std::vector<std::pair<int, int>>& edges) {
    std::vector<EdgeSeries> out;
    for (auto [i, j] : resolve_edges(graph, edges)) {
        EdgeSeries s;
        s.i = i;
        s.j = j;
        s.t = log.times;
        s.value.reserve(log.times.size());
        for (std::size_t k = 0; k < log.times.size(); ++k) {
            const double t = log.times[k];
            const DesiredSample di = desired.at(i, t);
            const DesiredSample dj = desired.at(j, t);
            const auto& st = log.states[k];
            const Vec3 p_tilde = (st[j - 1].p - st[i - 1].p) - (dj.p - di.p);
            const Vec3 v_tilde = (st[j - 1].v - st[i - 1].v) - (dj.v - di.v);
            s.value.push_back(std::sqrt(p_tilde.norm_sq() + v_tilde.norm_sq()));
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<EdgeSeries> lyapunov_series(const TrajectoryLog& log,
                                        const DesiredTrajectory& desired, const Digraph& graph,
                                        const std::vector<Gains>& gains,
                                        const std::vector<std::pair<int, int>>& edges) {
    std::vector<EdgeSeries> out;
    for (auto [i, j] : resolve_edges(graph, edges)) {
        EdgeSeries s;
        s.i = i;
        s.j = j;
        s.t = log.times;
        s.value.reserve(log.times.size());
        for (std::size_t k = 0; k < log.times.size(); ++k) {
            const double t = log.times[k];
            const DesiredSample di = desired.at(i, t);
            const DesiredSample dj = desired.at(j, t);
            const auto& st = log.states[k];
            const Vec3 p_tilde = (st[j - 1].p - st[i - 1].p) - (dj.p - di.p);
            const Vec3 v_tilde = (st[j - 1].v - st[i - 1].v) - (dj.v - di.v);
            s.value.push_back(edge_lyapunov(p_tilde, v_tilde, gains[i - 1], graph.m(i)));
        }
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace bearform
