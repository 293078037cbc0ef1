#include "bearform/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace bearform {

namespace {

std::string trim_copy(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_field(const std::string& s, const std::string& path, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (...) {
    }
    throw ValidationError(path + ":" + std::to_string(line) + ": malformed numeric field '" + s +
                          "'");
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string states_csv(const TrajectoryLog& log) {
    std::ostringstream out;
    out << "t,agent,px,py,pz,vx,vy,vz,ux,uy,uz\n";
    for (std::size_t k = 0; k < log.times.size(); ++k) {
        const std::string t = format_double(log.times[k]);
        for (std::size_t a = 0; a < log.states[k].size(); ++a) {
            const AgentState& s = log.states[k][a];
            const Vec3& u = log.controls[k][a];
            out << t << ',' << (a + 1) << ',' << format_double(s.p.x) << ','
                << format_double(s.p.y) << ',' << format_double(s.p.z) << ','
                << format_double(s.v.x) << ',' << format_double(s.v.y) << ','
                << format_double(s.v.z) << ',' << format_double(u.x) << ',' << format_double(u.y)
                << ',' << format_double(u.z) << '\n';
        }
    }
    return out.str();
}

std::string edges_csv(const TrajectoryLog& log) {
    std::ostringstream out;
    out << "t,i,j,err_p_norm,err_v_norm,err_x_norm,lyapunov\n";
    for (std::size_t k = 0; k < log.times.size(); ++k) {
        const std::string t = format_double(log.times[k]);
        for (const EdgeLogSeries& e : log.edges) {
            out << t << ',' << e.i << ',' << e.j << ',' << format_double(e.err_p[k]) << ','
                << format_double(e.err_v[k]) << ',' << format_double(e.err_x[k]) << ','
                << format_double(e.lyap[k]) << '\n';
        }
    }
    return out.str();
}

std::string observer_csv(const ObserverLog& log) {
    std::ostringstream out;
    out << "t,agent,phat_x,phat_y,phat_z,err_norm\n";
    for (std::size_t k = 0; k < log.times.size(); ++k) {
        const std::string t = format_double(log.times[k]);
        for (std::size_t a = 0; a < log.estimates[k].size(); ++a) {
            const Vec3& p = log.estimates[k][a];
            out << t << ',' << (a + 1) << ',' << format_double(p.x) << ',' << format_double(p.y)
                << ',' << format_double(p.z) << ',' << format_double(log.err_norms[k][a]) << '\n';
        }
    }
    return out.str();
}

std::string pe_kv(const PEReport& r) {
    std::ostringstream out;
    out << "window_T = " << format_double(r.window_T) << "\n";
    out << "mu_requested = " << format_double(r.mu_requested) << "\n";
    out << "mu_star = " << format_double(r.mu_star) << "\n";
    out << "is_pe = " << (r.is_pe ? "true" : "false") << "\n";
    if (r.quadrature_dt > 0.0) out << "quadrature_dt = " << format_double(r.quadrature_dt) << "\n";
    if (r.epsilon1) out << "epsilon1 = " << format_double(*r.epsilon1) << "\n";
    for (const auto& [agent, pe] : r.per_agent) {
        const std::string prefix = "agent_" + std::to_string(agent) + "_";
        out << prefix << "mu_star = " << format_double(pe.mu_star) << "\n";
        out << prefix << "is_pe = " << (pe.is_pe ? "true" : "false") << "\n";
        if (pe.epsilon1) out << prefix << "epsilon1 = " << format_double(*pe.epsilon1) << "\n";
    }
    return out.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << contents;
    if (!out) throw Error("write failed for '" + path + "'");
}

StatesTable read_states_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || split_csv_line(line).size() != 11)
        throw ValidationError(path + ": not a states CSV");
    StatesTable table;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim_copy(line).empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 11)
            throw ValidationError(path + ":" + std::to_string(lineno) + ": expected 11 fields");
        const double t = parse_field(f[0], path, lineno);
        const int agent = static_cast<int>(parse_field(f[1], path, lineno));
        if (table.times.empty() || t > table.times.back()) {
            table.times.push_back(t);
            table.states.emplace_back();
            table.controls.emplace_back();
        }
        AgentState s;
        s.p = {parse_field(f[2], path, lineno), parse_field(f[3], path, lineno),
               parse_field(f[4], path, lineno)};
        s.v = {parse_field(f[5], path, lineno), parse_field(f[6], path, lineno),
               parse_field(f[7], path, lineno)};
        table.states.back().push_back(s);
        table.controls.back().push_back({parse_field(f[8], path, lineno),
                                         parse_field(f[9], path, lineno),
                                         parse_field(f[10], path, lineno)});
        table.agents = std::max(table.agents, agent);
    }
    return table;
}

std::vector<EdgeTable> read_edges_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || split_csv_line(line).size() != 7)
        throw ValidationError(path + ": not an edges CSV");
    std::vector<EdgeTable> tables;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim_copy(line).empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 7)
            throw ValidationError(path + ":" + std::to_string(lineno) + ": expected 7 fields");
        const double t = parse_field(f[0], path, lineno);
        const int i = static_cast<int>(parse_field(f[1], path, lineno));
        const int j = static_cast<int>(parse_field(f[2], path, lineno));
        EdgeTable* table = nullptr;
        for (EdgeTable& e : tables)
            if (e.i == i && e.j == j) table = &e;
        if (!table) {
            tables.push_back(EdgeTable{i, j, {}, {}, {}, {}, {}});
            table = &tables.back();
        }
        table->t.push_back(t);
        table->err_p.push_back(parse_field(f[3], path, lineno));
        table->err_v.push_back(parse_field(f[4], path, lineno));
        table->err_x.push_back(parse_field(f[5], path, lineno));
        table->lyap.push_back(parse_field(f[6], path, lineno));
    }
    return tables;
}

ObserverTable read_observer_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || split_csv_line(line).size() != 6)
        throw ValidationError(path + ": not an observer CSV");
    ObserverTable table;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim_copy(line).empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 6)
            throw ValidationError(path + ":" + std::to_string(lineno) + ": expected 6 fields");
        const double t = parse_field(f[0], path, lineno);
        const int agent = static_cast<int>(parse_field(f[1], path, lineno));
        if (table.times.empty() || t > table.times.back()) {
            table.times.push_back(t);
            table.estimates.emplace_back();
            table.err_norms.emplace_back();
        }
        table.estimates.back().push_back({parse_field(f[2], path, lineno),
                                          parse_field(f[3], path, lineno),
                                          parse_field(f[4], path, lineno)});
        table.err_norms.back().push_back(parse_field(f[5], path, lineno));
        table.agents = std::max(table.agents, agent);
    }
    return table;
}

} // namespace bearform
