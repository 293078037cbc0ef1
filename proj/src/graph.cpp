#include "bearform/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <string>

namespace bearform {

namespace {

std::string edge_str(int i, int j) {
    return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

// Iterative coloring DFS; on a back edge returns the cycle found on the stack.
std::optional<std::vector<int>> find_cycle(const Digraph& g) {
    enum class Color { White, Grey, Black };
    std::vector<Color> color(g.n, Color::White);
    std::vector<int> stack;

    struct Frame {
        int v;
        std::size_t next = 0;
    };
    for (int start = 1; start <= g.n; ++start) {
        if (color[start - 1] != Color::White) continue;
        std::vector<Frame> frames{{start}};
        color[start - 1] = Color::Grey;
        stack.push_back(start);
        while (!frames.empty()) {
            Frame& f = frames.back();
            const auto& nb = g.neighbors(f.v);
            if (f.next < nb.size()) {
                const int w = nb[f.next++];
                if (color[w - 1] == Color::White) {
                    color[w - 1] = Color::Grey;
                    stack.push_back(w);
                    frames.push_back({w});
                } else if (color[w - 1] == Color::Grey) {
                    auto it = std::find(stack.begin(), stack.end(), w);
                    return std::vector<int>(it, stack.end());
                }
            } else {
                color[f.v - 1] = Color::Black;
                stack.pop_back();
                frames.pop_back();
            }
        }
    }
    return std::nullopt;
}

// Vertices that reach `root` along sensing edges.
std::vector<bool> reaches(const Digraph& g, int root) {
    // breadth-first over reversed edges
    std::vector<std::vector<int>> rev(g.n);
    for (auto [i, j] : g.edges) rev[j - 1].push_back(i);
    std::vector<bool> seen(g.n, false);
    std::queue<int> q;
    seen[root - 1] = true;
    q.push(root);
    while (!q.empty()) {
        const int v = q.front();
        q.pop();
        for (int w : rev[v - 1])
            if (!seen[w - 1]) {
                seen[w - 1] = true;
                q.push(w);
            }
    }
    return seen;
}

} // namespace

bool Digraph::has_edge(int i, int j) const {
    const auto& nb = neighbor_sets[i - 1];
    return std::binary_search(nb.begin(), nb.end(), j);
}

Digraph build_digraph(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n < 2) throw ValidationError("agent count must be at least 2, got " + std::to_string(n));
    Digraph g;
    g.n = n;
    g.neighbor_sets.assign(n, {});
    std::set<std::pair<int, int>> seen;
    for (auto [i, j] : edges) {
        if (i < 1 || i > n || j < 1 || j > n)
            throw ValidationError("edge endpoint out of range: " + edge_str(i, j));
        if (i == j) throw ValidationError("self-loop rejected: " + edge_str(i, j));
        if (!seen.insert({i, j}).second)
            throw ValidationError("duplicate edge rejected: " + edge_str(i, j));
        g.edges.emplace_back(i, j);
        g.neighbor_sets[i - 1].push_back(j);
    }
    for (auto& nb : g.neighbor_sets) std::sort(nb.begin(), nb.end());
    return g;
}

StructureReport validate_leader_follower(const Digraph& g) {
    StructureReport r;
    r.cycle = find_cycle(g);
    r.is_acyclic = !r.cycle.has_value();

    // Candidate root: smallest vertex with an empty neighbor set; fall back to
    // scanning every vertex so cyclic graphs still get a truthful answer.
    int candidate = 0;
    for (int i = 1; i <= g.n; ++i)
        if (g.m(i) == 0) {
            candidate = i;
            break;
        }
    auto all_reach = [&](int root) {
        auto seen = reaches(g, root);
        return std::find(seen.begin(), seen.end(), false) == seen.end();
    };
    if (candidate != 0 && all_reach(candidate)) {
        r.has_spanning_tree = true;
        r.leader = candidate;
    } else {
        for (int v = 1; v <= g.n && !r.has_spanning_tree; ++v)
            if (all_reach(v)) {
                r.has_spanning_tree = true;
                r.leader = v;
            }
        if (!r.has_spanning_tree) {
            const int probe = candidate != 0 ? candidate : 1;
            auto seen = reaches(g, probe);
            for (int v = 1; v <= g.n; ++v)
                if (!seen[v - 1]) {
                    r.unreachable = v;
                    break;
                }
        }
    }

    r.is_leader_follower =
        r.is_acyclic && r.has_spanning_tree && r.leader != 0 && g.m(r.leader) == 0;

    if (r.is_leader_follower) {
        bool minimal = true;
        for (int i = 1; i <= g.n; ++i)
            if (i != r.leader && g.m(i) != 1) minimal = false;
        r.is_minimal = minimal;

        // Kahn over reversed edges, min-heap on original id: an agent is
        // numbered once everything it senses already has a number.
        std::vector<std::vector<int>> rev(g.n);
        std::vector<int> pending(g.n, 0);
        for (auto [i, j] : g.edges) {
            rev[j - 1].push_back(i);
            ++pending[i - 1];
        }
        std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
        for (int i = 1; i <= g.n; ++i)
            if (pending[i - 1] == 0) ready.push(i);
        std::vector<int> numbering(g.n, 0);
        int next = 1;
        while (!ready.empty()) {
            const int v = ready.top();
            ready.pop();
            numbering[v - 1] = next++;
            for (int w : rev[v - 1])
                if (--pending[w - 1] == 0) ready.push(w);
        }
        r.ordering = std::move(numbering);
    }
    return r;
}

std::vector<int> topological_numbering(const Digraph& g) {
    StructureReport r = validate_leader_follower(g);
    if (!r.is_leader_follower) {
        std::string why = !r.is_acyclic ? "graph has a directed cycle"
                                        : "graph has no directed spanning tree";
        throw ValidationError("not a leader-follower structure: " + why);
    }
    return *r.ordering;
}

Digraph renumbered(const Digraph& g, const std::vector<int>& numbering) {
    std::vector<std::pair<int, int>> edges;
    edges.reserve(g.edges.size());
    for (auto [i, j] : g.edges) edges.emplace_back(numbering[i - 1], numbering[j - 1]);
    std::sort(edges.begin(), edges.end());
    return build_digraph(g.n, edges);
}

} // namespace bearform
