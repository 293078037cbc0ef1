#pragma once

#include <map>
#include <string>
#include <vector>

#include "bearform/observer.hpp"
#include "bearform/pe.hpp"
#include "bearform/simulation.hpp"

namespace bearform {

// All writers emit a fixed column order, 17-significant-digit decimals, and
// LF line endings; identical inputs produce byte-identical files.
std::string format_double(double v);

// t, agent, px, py, pz, vx, vy, vz, ux, uy, uz
std::string states_csv(const TrajectoryLog& log);
// t, i, j, err_p_norm, err_v_norm, err_x_norm, lyapunov
std::string edges_csv(const TrajectoryLog& log);
// t, agent, phat_x, phat_y, phat_z, err_norm
std::string observer_csv(const ObserverLog& log);
// key = value block
std::string pe_kv(const PEReport& report);

void write_file(const std::string& path, const std::string& contents);

// Readers for the plot command (and round-trip tests).
struct StatesTable {
    std::vector<double> times;                    // unique, ascending
    std::vector<std::vector<AgentState>> states;  // [step][agent-1]
    std::vector<std::vector<Vec3>> controls;
    int agents = 0;
};
StatesTable read_states_csv(const std::string& path);

struct EdgeTable {
    int i = 0, j = 0;
    std::vector<double> t, err_p, err_v, err_x, lyap;
};
std::vector<EdgeTable> read_edges_csv(const std::string& path);

struct ObserverTable {
    std::vector<double> times;
    std::vector<std::vector<Vec3>> estimates;    // [step][agent-1]
    std::vector<std::vector<double>> err_norms;  // [step][agent-1]
    int agents = 0;
};
ObserverTable read_observer_csv(const std::string& path);

} // namespace bearform
