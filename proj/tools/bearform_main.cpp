// bearform - bearing-only leader-follower formation toolkit.
//
// Subcommands: simulate, observe, check-pe, analyze-gains, plot.
// Exit status: 0 success, 1 validation error, 2 runtime abort.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "bearform/certificates.hpp"
#include "bearform/csv.hpp"
#include "bearform/observer.hpp"
#include "bearform/pe.hpp"
#include "bearform/rng.hpp"
#include "bearform/scenario.hpp"
#include "bearform/simulation.hpp"
#include "bearform/svg.hpp"

namespace fs = std::filesystem;
using namespace bearform;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct CommonOpts {
    std::string scenario;
    std::string out = ".";
    double dt_override = 0.0;
    double t_end_override = 0.0;
};

Scenario load(const CommonOpts& opts) {
    if (opts.scenario.empty()) throw ValidationError("missing --scenario <path>");
    Scenario sc = parse_scenario(opts.scenario);
    if (opts.dt_override > 0.0) sc.sim.dt = opts.dt_override;
    if (opts.t_end_override > 0.0) sc.sim.t_end = opts.t_end_override;
    return sc;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory '" + dir + "': " + ec.message());
}

std::string edge_label(int i, int j) { return std::to_string(i) + "-" + std::to_string(j); }

int run_one_simulation(const Scenario& sc, const std::string& outdir, bool quiet = false) {
    ensure_dir(outdir);
    const TrajectoryLog log = simulate(sc);
    write_file(outdir + "/states.csv", states_csv(log));
    write_file(outdir + "/edges.csv", edges_csv(log));
    if (log.violation) {
        const SeparationViolation& v = *log.violation;
        std::string kv;
        kv += "t = " + format_double(v.t) + "\n";
        kv += "i = " + std::to_string(v.i) + "\n";
        kv += "j = " + std::to_string(v.j) + "\n";
        kv += "distance = " + format_double(v.distance) + "\n";
        write_file(outdir + "/violation.kv", kv);
        std::fprintf(stderr,
                     "error: runtime: separation violation between agents %d and %d at t=%s\n",
                     v.i, v.j, format_double(v.t).c_str());
        return kExitRuntime;
    }
    if (!quiet) {
        std::printf("simulated %zu steps over %s s; outputs in %s\n", log.times.size() - 1,
                    format_double(log.times.back()).c_str(), outdir.c_str());
        for (const EdgeLogSeries& e : log.edges)
            std::printf("  edge %s: |x~(0)| = %.6g  |x~(T)| = %.6g\n",
                        edge_label(e.i, e.j).c_str(), e.err_x.front(), e.err_x.back());
    }
    return kExitOk;
}

int cmd_simulate(const CommonOpts& opts, const std::string& batch_dir) {
    if (batch_dir.empty()) return run_one_simulation(load(opts), opts.out);

    std::vector<fs::path> cfgs;
    for (const auto& entry : fs::directory_iterator(batch_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".cfg")
            cfgs.push_back(entry.path());
    std::sort(cfgs.begin(), cfgs.end());
    if (cfgs.empty()) throw ValidationError("batch directory has no .cfg scenarios");

    std::vector<std::future<int>> jobs;
    for (const fs::path& cfg : cfgs)
        jobs.push_back(std::async(std::launch::async, [&opts, cfg] {
            CommonOpts o = opts;
            o.scenario = cfg.string();
            try {
                return run_one_simulation(load(o), opts.out + "/" + cfg.stem().string(), true);
            } catch (const ValidationError& e) {
                std::fprintf(stderr, "error: validation: %s: %s\n", cfg.string().c_str(),
                             e.what());
                return kExitValidation;
            } catch (const Error& e) {
                std::fprintf(stderr, "error: runtime: %s: %s\n", cfg.string().c_str(), e.what());
                return kExitRuntime;
            }
        }));
    int worst = kExitOk;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        const int code = jobs[k].get();
        std::printf("%s: %s\n", cfgs[k].stem().string().c_str(), code == kExitOk ? "ok" : "failed");
        worst = std::max(worst, code);
    }
    return worst;
}

int cmd_observe(const CommonOpts& opts, double duration, double k_gain, unsigned seed,
                double init_radius) {
    const Scenario sc = load(opts);
    ensure_dir(opts.out);
    if (duration <= 0.0) duration = sc.sim.t_end;
    Rng rng(seed);
    std::vector<Vec3> phat0(sc.graph.n);
    for (int i = 1; i <= sc.graph.n; ++i)
        phat0[i - 1] = sc.desired->at(i, 0.0).p + rng.vec_in_ball(init_radius);
    const ObserverLog log = run_observer(sc, Mat3::identity() * k_gain, phat0, duration);
    write_file(opts.out + "/observer.csv", observer_csv(log));

    std::printf("observer ran %s s with K = %g I; outputs in %s\n",
                format_double(duration).c_str(), k_gain, opts.out.c_str());
    for (int i = 2; i <= sc.graph.n; ++i) {
        // fit above the numeric floor only
        std::vector<double> t, e;
        const double e0 = log.err_norms.front()[i - 1];
        for (std::size_t kk = 0; kk < log.times.size(); ++kk) {
            if (e0 > 0.0 && log.err_norms[kk][i - 1] < 1e-9 * e0) break;
            t.push_back(log.times[kk]);
            e.push_back(log.err_norms[kk][i - 1]);
        }
        std::string fitted = "rate n/a";
        try {
            const RateFit fit = fit_exponential_rate(t, e, 0.1);
            char buf[64];
            std::snprintf(buf, sizeof buf, "rate %.4f (r2 %.4f)", fit.rate, fit.r_squared);
            fitted = buf;
        } catch (const ValidationError&) {
        }
        std::printf("  agent %d: |p~(0)| = %.6g  |p~(T)| = %.3e  %s\n", i, e0,
                    log.err_norms.back()[i - 1], fitted.c_str());
    }
    return kExitOk;
}

int cmd_check_pe(const CommonOpts& opts, bool kv) {
    const Scenario sc = load(opts);
    if (!sc.pe.present)
        throw ValidationError("check-pe needs a [pe] section (window T and level mu)");
    const PEReport rep =
        formation_is_bearing_pe(sc.graph, *sc.desired, sc.pe.T, sc.pe.mu, sc.pe.horizon, sc.pe.dt);

    std::printf("bearing PE check: T = %g s, mu = %g, horizon = %g s, dt = %g s\n", rep.window_T,
                rep.mu_requested, sc.pe.horizon, sc.pe.dt);
    std::printf("quadrature error estimate: O(dt^2) ~ %.1e\n", sc.pe.dt * sc.pe.dt);
    std::printf("%-8s %-14s %-8s %-10s\n", "agent", "mu_star", "pe", "epsilon1");
    for (const auto& [agent, pe] : rep.per_agent) {
        char eps[32] = "-";
        if (pe.epsilon1) std::snprintf(eps, sizeof eps, "%.6g", *pe.epsilon1);
        std::printf("%-8d %-14.8g %-8s %-10s\n", agent, pe.mu_star, pe.is_pe ? "yes" : "no", eps);
    }
    std::printf("formation: mu_star = %.8g -> %s at mu = %g\n", rep.mu_star,
                rep.is_pe ? "bearing PE" : "NOT bearing PE", rep.mu_requested);
    if (kv) std::fputs(pe_kv(rep).c_str(), stdout);
    if (opts.out != ".") {
        ensure_dir(opts.out);
        write_file(opts.out + "/pe.kv", pe_kv(rep));
    }
    return kExitOk;
}

int cmd_analyze_gains(const CommonOpts& opts) {
    const Scenario sc = load(opts);
    if (!sc.pe.present)
        throw ValidationError("analyze-gains needs a [pe] section (window T and level mu)");
    const PEReport rep =
        formation_is_bearing_pe(sc.graph, *sc.desired, sc.pe.T, sc.pe.mu, sc.pe.horizon, sc.pe.dt);

    std::map<int, double> rates;
    for (int i = 1; i <= sc.graph.n; ++i) {
        const int m = sc.graph.m(i);
        if (m == 0) continue;
        const Gains& g = sc.gains[i - 1];
        const GainCheck chk = check_gains(m, g);
        std::printf("agent %d (m = %d, kp = %g, kd = %g):\n", i, m, g.kp, g.kd);
        std::printf("  gain slacks: kd - 1/m = %.6g, kp limit - kp = %.6g\n", chk.kd_slack,
                    chk.kp_slack);
        std::printf("  P spectrum: [%.6g, %.6g]\n", p_lambda_min(g, m), p_lambda_max(g, m));

        double min_p = 1e300, max_p = 0.0, x0 = 0.0;
        const long samples = std::lround(sc.pe.horizon / sc.pe.dt);
        for (int j : sc.graph.neighbors(i)) {
            for (long k = 0; k <= samples; ++k) {
                const double t = static_cast<double>(k) * sc.pe.dt;
                const double d = (sc.desired->at(j, t).p - sc.desired->at(i, t).p).norm();
                min_p = std::min(min_p, d);
                max_p = std::max(max_p, d);
            }
            const DesiredSample di = sc.desired->at(i, 0.0), dj = sc.desired->at(j, 0.0);
            const Vec3 p_t = (sc.initial[j - 1].p - sc.initial[i - 1].p) - (dj.p - di.p);
            const Vec3 v_t = (sc.initial[j - 1].v - sc.initial[i - 1].v) - (dj.v - di.v);
            x0 = std::max(x0, std::sqrt(p_t.norm_sq() + v_t.norm_sq()));
        }

        const Mat3 I3 = Mat3::identity();
        const double kdm = g.kd * m;
        const Mat6 P = Mat6::from_blocks(I3 * 0.5, I3 * (0.5 / kdm), I3 * (0.5 / kdm), I3 * 0.5);
        const GammaCertificate gc = gamma_bound(g, m, min_p, max_p, x0, P);
        std::printf("  gamma certificate: lambda_M = %.6g, min alpha^2 = %.6g, gamma = %.6g\n",
                    gc.lambda_M, gc.alpha_min_sq, gc.gamma);

        const QBlockConstants qc = q_block_constants(g, m);
        const ABlockConstants ac = a_block_constants(g, m);
        const CascadeCertificate cc = cascade_constant(qc.c1, qc.c2, qc.c3, ac.c4, ac.c5, m);
        std::printf("  cascade constant: l_Q = %.6g, l_A = %.6g, c = %.6g\n", cc.l_Q, cc.l_A, cc.c);

        const double mu_star = rep.per_agent.at(i).mu_star;
        const double mu_used = std::min(sc.pe.mu, mu_star);
        if (!(mu_used > 0.0)) {
            std::printf("  PE margin %.3g: no excitation, no rate certificate\n", mu_star);
            continue;
        }
        if (mu_star < sc.pe.mu)
            std::printf("  note: margin %.6g below requested mu %.6g; certifying at the margin\n",
                        mu_star, sc.pe.mu);
        const double lsig = sigma_norm_bound(sc.graph, *sc.desired, i, sc.pe.horizon, sc.pe.dt);
        const RateCertificate rc = es_rate(sc.pe.T, mu_used, gc.gamma, cc.c, p_lambda_min(g, m),
                                           p_lambda_max(g, m), lsig);
        std::printf("  rate certificate: sigma = %.6g, rate = %.6g 1/s, envelope coeff = %.6g\n",
                    rc.sigma, rc.rate, rc.envelope_coeff);
        rates[i] = rc.rate;
    }

    if (static_cast<int>(rates.size()) == sc.graph.n - 1) {
        const CascadeRates cr = cascade_rates(rates, sc.graph);
        std::printf("cascade rates through the chain:\n");
        for (const auto& [agent, rate] : cr.c_rates)
            std::printf("  agent %d: >= %.6g 1/s\n", agent, rate);
    } else {
        std::printf("cascade rates: skipped (not every follower has a rate certificate)\n");
    }
    return kExitOk;
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : csv) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

int cmd_plot(const CommonOpts& opts, const std::string& mode, const std::string& data_dir,
             const std::string& out_file, bool log_y, const std::string& series_filter) {
    const auto wanted = split_list(series_filter);
    auto selected = [&](const std::string& label) {
        if (wanted.empty()) return true;
        return std::find(wanted.begin(), wanted.end(), label) != wanted.end();
    };

    if (mode == "errors" || mode == "lyapunov") {
        const auto tables = read_edges_csv(data_dir + "/edges.csv");
        std::vector<Series> series;
        for (const EdgeTable& e : tables) {
            const std::string label = edge_label(e.i, e.j);
            if (!selected(label)) continue;
            Series s;
            s.label = (mode == "errors" ? "|x~| " : "L ") + label;
            s.t = e.t;
            s.y = mode == "errors" ? e.err_x : e.lyap;
            series.push_back(std::move(s));
        }
        PlotSpec spec;
        spec.title = mode == "errors" ? "Relative error norms" : "Edge Lyapunov functions";
        spec.y_label = mode == "errors" ? "||x~_ij||" : "x~' P x~";
        spec.log_y = log_y;
        write_file(out_file, render_line_chart(series, spec));
    } else if (mode == "observer") {
        const ObserverTable table = read_observer_csv(data_dir + "/observer.csv");
        std::vector<Series> series;
        for (int a = 2; a <= table.agents; ++a) {
            const std::string label = std::to_string(a);
            if (!selected(label)) continue;
            Series s;
            s.label = "agent " + label;
            s.t = table.times;
            for (const auto& row : table.err_norms) s.y.push_back(row[a - 1]);
            series.push_back(std::move(s));
        }
        PlotSpec spec;
        spec.title = "Position estimation errors";
        spec.y_label = "||p^ - p||";
        spec.log_y = log_y;
        write_file(out_file, render_line_chart(series, spec));
    } else if (mode == "traj3d") {
        const StatesTable table = read_states_csv(data_dir + "/states.csv");
        std::vector<Path3> paths;
        for (int a = 1; a <= table.agents; ++a) {
            if (!selected(std::to_string(a))) continue;
            Path3 p;
            p.label = "agent " + std::to_string(a);
            for (const auto& row : table.states) p.points.push_back(row[a - 1].p);
            paths.push_back(std::move(p));
        }
        Plot3Spec spec3;
        spec3.title = "Agent trajectories";
        if (!opts.scenario.empty()) {
            const Scenario sc = load(opts);
            for (int a = 1; a <= sc.graph.n; ++a) {
                if (!selected(std::to_string(a))) continue;
                Path3 p;
                p.label = "desired " + std::to_string(a);
                p.dashed = true;
                for (double t : table.times) p.points.push_back(sc.desired->at(a, t).p);
                paths.push_back(std::move(p));
            }
            for (auto [i, j] : sc.graph.edges)
                spec3.links.emplace_back(table.states.back()[i - 1].p,
                                         table.states.back()[j - 1].p);
        }
        write_file(out_file, render_trajectories_3d(paths, spec3));
    } else {
        throw ValidationError("unknown plot mode '" + mode +
                              "' (expected errors, lyapunov, observer, or traj3d)");
    }
    std::printf("wrote %s\n", out_file.c_str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bearing-only leader-follower formation toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    CommonOpts opts;
    app.add_option("--scenario", opts.scenario, "scenario file");
    app.add_option("--out", opts.out, "output directory");
    app.add_option("--dt", opts.dt_override, "integration step override [s]");
    app.add_option("--t-end", opts.t_end_override, "simulation length override [s]");

    auto* sim = app.add_subcommand("simulate", "integrate the closed-loop formation");
    std::string batch_dir;
    sim->add_option("--batch", batch_dir, "run every .cfg scenario in this directory");

    auto* obs = app.add_subcommand("observe", "run the distributed position estimator");
    double duration = 0.0, k_gain = 1.0, init_radius = 1.0;
    unsigned seed = 1;
    obs->add_option("--duration", duration, "observer run length [s] (default: t_end)");
    obs->add_option("--k", k_gain, "scalar observer gain, K = k I");
    obs->add_option("--seed", seed, "seed for the random initial estimates");
    obs->add_option("--init-radius", init_radius, "radius of the initial estimate offsets [m]");

    auto* pe =
        app.add_subcommand("check-pe", "verify persistence of excitation of the desired formation");
    bool kv = false;
    pe->add_flag("--kv", kv, "also print a machine-readable key-value block");

    auto* ag =
        app.add_subcommand("analyze-gains", "compute stability certificates for the scenario");

    auto* plot = app.add_subcommand("plot", "render SVG charts from CSV outputs");
    std::string mode = "errors", data_dir = ".", out_file = "plot.svg", series_filter;
    bool log_y = false;
    plot->add_option("--mode", mode, "errors | lyapunov | observer | traj3d");
    plot->add_option("--data", data_dir, "directory holding the CSV outputs");
    plot->add_option("--svg", out_file, "output SVG path");
    plot->add_flag("--log-y", log_y, "logarithmic y axis");
    plot->add_option("--series", series_filter, "comma-separated selection (edges i-j or agents)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (sim->parsed()) return cmd_simulate(opts, batch_dir);
        if (obs->parsed()) return cmd_observe(opts, duration, k_gain, seed, init_radius);
        if (pe->parsed()) return cmd_check_pe(opts, kv);
        if (ag->parsed()) return cmd_analyze_gains(opts);
        if (plot->parsed()) return cmd_plot(opts, mode, data_dir, out_file, log_y, series_filter);
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: validation: %s\n", e.what());
        return kExitValidation;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: runtime: %s\n", e.what());
        return kExitRuntime;
    }
    return kExitOk;
}
