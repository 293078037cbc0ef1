#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "bearform/errors.hpp"

namespace bearform {

// Directed sensing topology. Edge (i, j) means agent i senses agent j;
// N_i collects the agents that i senses. Agent ids are 1-based.
struct Digraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> neighbor_sets;  // neighbor_sets[i-1] = N_i, sorted

    const std::vector<int>& neighbors(int i) const { return neighbor_sets[i - 1]; }
    int m(int i) const { return static_cast<int>(neighbor_sets[i - 1].size()); }
    bool has_edge(int i, int j) const;
};

// Structural verdict for the leader-follower property: the graph must be
// acyclic and every vertex must reach a single neighbor-less root.
struct StructureReport {
    bool is_acyclic = false;
    bool has_spanning_tree = false;
    bool is_leader_follower = false;
    bool is_minimal = false;
    int leader = 0;                              // root id when is_leader_follower
    std::optional<std::vector<int>> ordering;    // new index per agent (ordering[i-1])
    std::optional<std::vector<int>> cycle;       // witness when not acyclic
    std::optional<int> unreachable;              // witness when no spanning tree
};

// Throws ValidationError on self-loops, duplicate edges, or out-of-range
// endpoints; the message names the offending edge.
Digraph build_digraph(int n, const std::vector<std::pair<int, int>>& edges);

// Never throws for structural defects; they are reported with witnesses.
StructureReport validate_leader_follower(const Digraph& g);

// Renumbering such that every agent only senses lower-numbered agents and the
// leader becomes agent 1. Ties broken by smallest original id. Returns the new
// index of each agent. Throws ValidationError when the structure is invalid.
std::vector<int> topological_numbering(const Digraph& g);

// The same graph with agents renamed by `numbering` (as returned above).
Digraph renumbered(const Digraph& g, const std::vector<int>& numbering);

} // namespace bearform
