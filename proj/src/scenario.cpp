#include "bearform/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace bearform {

namespace {

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

struct Section {
    int line = 0;
    std::map<std::string, Entry> keys;
    std::vector<std::pair<std::string, int>> repeated;  // edge lines keep order
};

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& s, const std::string& key, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (trim(s.substr(used)).empty()) return v;
    } catch (...) {
    }
    throw ParseError("key '" + key + "': expected a number, got '" + s + "'", line);
}

int to_int(const std::string& s, const std::string& key, int line) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (trim(s.substr(used)).empty()) return v;
    } catch (...) {
    }
    throw ParseError("key '" + key + "': expected an integer, got '" + s + "'", line);
}

Vec3 to_vec3(const std::string& s, const std::string& key, int line) {
    std::istringstream in(s);
    double x, y, z;
    if (in >> x >> y >> z) {
        std::string rest;
        if (!(in >> rest)) return {x, y, z};
    }
    throw ParseError("key '" + key + "': expected three numbers, got '" + s + "'", line);
}

class ScenarioText {
public:
    ScenarioText(const std::string& text, const std::string& name) : name_(name) {
        static const std::vector<std::string> known = {"graph", "desired", "gains",
                                                       "initial", "sim", "pe"};
        std::istringstream in(text);
        std::string raw;
        int line = 0;
        std::string current;
        while (std::getline(in, raw)) {
            ++line;
            std::string s = raw;
            if (auto pos = s.find('#'); pos != std::string::npos) s = s.substr(0, pos);
            s = trim(s);
            if (s.empty()) continue;
            if (s.front() == '[') {
                if (s.back() != ']') throw ParseError("malformed section header '" + s + "'", line);
                current = trim(s.substr(1, s.size() - 2));
                if (std::find(known.begin(), known.end(), current) == known.end())
                    throw ParseError("unknown section '" + current + "'", line);
                if (sections_.count(current))
                    throw ParseError("duplicate section '" + current + "'", line);
                sections_[current].line = line;
                continue;
            }
            const auto eq = s.find('=');
            if (eq == std::string::npos)
                throw ParseError("expected 'key = value', got '" + s + "'", line);
            if (current.empty())
                throw ParseError("key outside any [section]: '" + s + "'", line);
            const std::string key = trim(s.substr(0, eq));
            const std::string value = trim(s.substr(eq + 1));
            if (key.empty() || value.empty())
                throw ParseError("expected 'key = value', got '" + s + "'", line);
            Section& sec = sections_[current];
            if (key == "edge" && current == "graph") {
                sec.repeated.emplace_back(value, line);
            } else {
                if (sec.keys.count(key))
                    throw ParseError("duplicate key '" + key + "' in [" + current + "]", line);
                sec.keys[key] = Entry{value, line, false};
            }
        }
    }

    bool has(const std::string& section) const { return sections_.count(section) != 0; }

    Section& section(const std::string& name) { return sections_.at(name); }

    const Entry* find(const std::string& section, const std::string& key) {
        auto sit = sections_.find(section);
        if (sit == sections_.end()) return nullptr;
        auto kit = sit->second.keys.find(key);
        if (kit == sit->second.keys.end()) return nullptr;
        kit->second.used = true;
        return &kit->second;
    }

    const Entry& require(const std::string& section, const std::string& key) {
        const Entry* e = find(section, key);
        if (!e)
            throw ParseError("missing key '" + key + "' in [" + section + "]",
                             sections_.at(section).line);
        return *e;
    }

    void check_all_used() const {
        for (const auto& [sname, sec] : sections_)
            for (const auto& [key, entry] : sec.keys)
                if (!entry.used)
                    throw ParseError("unknown key '" + key + "' in [" + sname + "]", entry.line);
    }

    void require_sections(const std::vector<std::string>& names) const {
        std::string missing;
        for (const auto& n : names)
            if (!sections_.count(n)) missing += (missing.empty() ? "" : ", ") + ("[" + n + "]");
        if (!missing.empty()) throw ParseError("missing required sections: " + missing);
    }

private:
    std::string name_;
    std::map<std::string, Section> sections_;
};

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

Scenario parse_scenario_text(const std::string& text, const std::string&) {
    ScenarioText doc(text, "");
    doc.require_sections({"graph", "desired", "gains", "initial", "sim"});

    // --- graph ---
    const int n = to_int(doc.require("graph", "agents").value, "agents",
                         doc.require("graph", "agents").line);
    std::vector<std::pair<int, int>> edges;
    for (const auto& [value, line] : doc.section("graph").repeated) {
        std::istringstream in(value);
        int i, j;
        std::string rest;
        if (!(in >> i >> j) || (in >> rest))
            throw ParseError("edge: expected two agent ids, got '" + value + "'", line);
        edges.emplace_back(i, j);
    }
    Scenario sc;
    try {
        sc.graph = build_digraph(n, edges);
    } catch (const ValidationError& e) {
        throw ParseError(std::string("graph: ") + e.what(), doc.section("graph").line);
    }
    const StructureReport structure = validate_leader_follower(sc.graph);
    if (!structure.is_leader_follower) {
        std::string why;
        if (!structure.is_acyclic) {
            why = "directed cycle through agents";
            for (int v : *structure.cycle) why += " " + std::to_string(v);
        } else if (structure.unreachable) {
            why = "agent " + std::to_string(*structure.unreachable) + " cannot reach the leader";
        } else {
            why = "no single neighbor-less leader";
        }
        throw ParseError("graph is not leader-follower: " + why, doc.section("graph").line);
    }

    // --- desired ---
    const Entry& kind = doc.require("desired", "kind");
    std::vector<Vec3> desired_p0(n);
    for (int i = 1; i <= n; ++i) {
        const std::string key = "p" + std::to_string(i);
        const Entry& e = doc.require("desired", key);
        desired_p0[i - 1] = to_vec3(e.value, key, e.line);
    }
    if (kind.value == "rotating-rigid") {
        const Entry& axis_e = doc.require("desired", "axis");
        const Vec3 axis_v = to_vec3(axis_e.value, "axis", axis_e.line);
        const Entry& period_e = doc.require("desired", "period");
        const double period = to_double(period_e.value, "period", period_e.line);
        if (!(period > 0.0)) throw ParseError("period must be positive", period_e.line);
        UnitVec3 axis = [&] {
            try {
                return UnitVec3::normalized(axis_v);
            } catch (const ValidationError&) {
                throw ParseError("axis must be a nonzero vector", axis_e.line);
            }
        }();
        sc.desired = rotating_rigid_trajectory(desired_p0, axis, period);
    } else if (kind.value == "static") {
        sc.desired = static_trajectory(desired_p0);
    } else {
        throw ParseError("unknown desired kind '" + kind.value +
                             "' (expected rotating-rigid or static)",
                         kind.line);
    }

    // --- gains ---
    sc.gains.assign(n, Gains{});
    const Entry* kp_global = doc.find("gains", "kp");
    const Entry* kd_global = doc.find("gains", "kd");
    for (int i = 1; i <= n; ++i) {
        // the leader takes no gains; overrides for it fall through to the
        // unknown-key rejection
        if (sc.graph.m(i) == 0) continue;
        const Entry* kp_i = doc.find("gains", "kp_" + std::to_string(i));
        const Entry* kd_i = doc.find("gains", "kd_" + std::to_string(i));
        const Entry* kp_e = kp_i ? kp_i : kp_global;
        const Entry* kd_e = kd_i ? kd_i : kd_global;
        if (!kp_e) throw ParseError("missing key 'kp' in [gains] for follower " + std::to_string(i),
                                    doc.section("gains").line);
        if (!kd_e) throw ParseError("missing key 'kd' in [gains] for follower " + std::to_string(i),
                                    doc.section("gains").line);
        Gains g{to_double(kp_e->value, "kp", kp_e->line), to_double(kd_e->value, "kd", kd_e->line)};
        GainCheck chk = [&] {
            try {
                return check_gains(sc.graph.m(i), g);
            } catch (const ValidationError& e) {
                throw ParseError(std::string("agent ") + std::to_string(i) + ": " + e.what(),
                                 kp_e->line);
            }
        }();
        if (chk.kd_slack <= 0.0)
            throw ParseError("gain bound violated: kd = " + fmt17(g.kd) + " <= " +
                                 fmt17(1.0 / sc.graph.m(i)) + " for agent " + std::to_string(i),
                             kd_e->line);
        if (chk.kp_slack <= 0.0)
            throw ParseError("gain bound violated: kp = " + fmt17(g.kp) +
                                 " >= " + fmt17(chk.kp_limit) + " for agent " + std::to_string(i),
                             kp_e->line);
        sc.gains[i - 1] = g;
    }

    // --- initial ---
    sc.initial.assign(n, AgentState{});
    for (int i = 1; i <= n; ++i) {
        const std::string pkey = "p" + std::to_string(i);
        const std::string vkey = "v" + std::to_string(i);
        const Entry& pe = doc.require("initial", pkey);
        const Entry& ve = doc.require("initial", vkey);
        sc.initial[i - 1].p = to_vec3(pe.value, pkey, pe.line);
        sc.initial[i - 1].v = to_vec3(ve.value, vkey, ve.line);
    }

    // --- sim ---
    const Entry& dt_e = doc.require("sim", "dt");
    const Entry& tend_e = doc.require("sim", "t_end");
    sc.sim.dt = to_double(dt_e.value, "dt", dt_e.line);
    sc.sim.t_end = to_double(tend_e.value, "t_end", tend_e.line);
    if (!(sc.sim.dt > 0.0)) throw ParseError("dt must be positive", dt_e.line);
    if (!(sc.sim.t_end >= sc.sim.dt)) throw ParseError("t_end must be at least dt", tend_e.line);
    if (const Entry* g = doc.find("sim", "separation_guard")) {
        sc.sim.separation_guard = to_double(g->value, "separation_guard", g->line);
        if (sc.sim.separation_guard < 0.0)
            throw ParseError("separation_guard must be nonnegative", g->line);
    }

    // --- pe (optional) ---
    if (doc.has("pe")) {
        sc.pe.present = true;
        const Entry& T_e = doc.require("pe", "T");
        const Entry& mu_e = doc.require("pe", "mu");
        sc.pe.T = to_double(T_e.value, "T", T_e.line);
        sc.pe.mu = to_double(mu_e.value, "mu", mu_e.line);
        if (!(sc.pe.T > 0.0)) throw ParseError("T must be positive", T_e.line);
        if (!(sc.pe.mu > 0.0 && sc.pe.mu < 1.0))
            throw ParseError("mu must lie in (0, 1)", mu_e.line);
        sc.pe.horizon = 2.0 * sc.pe.T;
        if (const Entry* h = doc.find("pe", "horizon")) {
            sc.pe.horizon = to_double(h->value, "horizon", h->line);
            if (!(sc.pe.horizon > sc.pe.T))
                throw ParseError("horizon must exceed the window T", h->line);
        }
        if (const Entry* d = doc.find("pe", "dt")) {
            sc.pe.dt = to_double(d->value, "dt", d->line);
            if (!(sc.pe.dt > 0.0)) throw ParseError("pe dt must be positive", d->line);
        }
    }

    doc.check_all_used();

    // bearings must exist at t = 0, both actual and desired
    for (auto [i, j] : sc.graph.edges) {
        const double d_actual = (sc.initial[j - 1].p - sc.initial[i - 1].p).norm();
        if (!(d_actual > kSeparationEps))
            throw ParseError("agents " + std::to_string(i) + " and " + std::to_string(j) +
                             " coincide at t = 0; bearing undefined");
        const double d_star = (sc.desired->at(j, 0.0).p - sc.desired->at(i, 0.0).p).norm();
        if (!(d_star > kSeparationEps))
            throw ParseError("desired positions of agents " + std::to_string(i) + " and " +
                             std::to_string(j) + " coincide at t = 0");
    }
    return sc;
}

Scenario parse_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_scenario_text(text.str(), path);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

std::string write_scenario(const Scenario& sc) {
    std::ostringstream out;
    out << "[graph]\n";
    out << "agents = " << sc.graph.n << "\n";
    for (auto [i, j] : sc.graph.edges) out << "edge = " << i << " " << j << "\n";

    out << "\n[desired]\n";
    if (const RotatingRigidParams* rr = rotating_rigid_params(*sc.desired)) {
        out << "kind = rotating-rigid\n";
        out << "axis = " << fmt17(rr->axis.x) << " " << fmt17(rr->axis.y) << " "
            << fmt17(rr->axis.z) << "\n";
        out << "period = " << fmt17(rr->period_param) << "\n";
        for (int i = 1; i <= sc.graph.n; ++i) {
            const Vec3& p = rr->initial_positions[i - 1];
            out << "p" << i << " = " << fmt17(p.x) << " " << fmt17(p.y) << " " << fmt17(p.z)
                << "\n";
        }
    } else if (const std::vector<Vec3>* sp = static_positions(*sc.desired)) {
        out << "kind = static\n";
        for (int i = 1; i <= sc.graph.n; ++i) {
            const Vec3& p = (*sp)[i - 1];
            out << "p" << i << " = " << fmt17(p.x) << " " << fmt17(p.y) << " " << fmt17(p.z)
                << "\n";
        }
    } else {
        throw ValidationError("cannot serialize desired family of kind '" + sc.desired->kind() +
                              "'");
    }

    out << "\n[gains]\n";
    for (int i = 1; i <= sc.graph.n; ++i) {
        if (sc.graph.m(i) == 0) continue;
        out << "kp_" << i << " = " << fmt17(sc.gains[i - 1].kp) << "\n";
        out << "kd_" << i << " = " << fmt17(sc.gains[i - 1].kd) << "\n";
    }

    out << "\n[initial]\n";
    for (int i = 1; i <= sc.graph.n; ++i) {
        const AgentState& a = sc.initial[i - 1];
        out << "p" << i << " = " << fmt17(a.p.x) << " " << fmt17(a.p.y) << " " << fmt17(a.p.z)
            << "\n";
        out << "v" << i << " = " << fmt17(a.v.x) << " " << fmt17(a.v.y) << " " << fmt17(a.v.z)
            << "\n";
    }

    out << "\n[sim]\n";
    out << "dt = " << fmt17(sc.sim.dt) << "\n";
    out << "t_end = " << fmt17(sc.sim.t_end) << "\n";
    out << "separation_guard = " << fmt17(sc.sim.separation_guard) << "\n";

    if (sc.pe.present) {
        out << "\n[pe]\n";
        out << "T = " << fmt17(sc.pe.T) << "\n";
        out << "mu = " << fmt17(sc.pe.mu) << "\n";
        out << "horizon = " << fmt17(sc.pe.horizon) << "\n";
        out << "dt = " << fmt17(sc.pe.dt) << "\n";
    }
    return out.str();
}

} // namespace bearform
