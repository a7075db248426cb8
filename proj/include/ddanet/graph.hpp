#ifndef DDANET_GRAPH_HPP
#define DDANET_GRAPH_HPP

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ddanet/spectral.hpp"

namespace ddanet {

// Undirected edge with i < j, zero-based.
struct Edge {
    int i = 0;
    int j = 0;
};

inline bool operator==(Edge a, Edge b) { return a.i == b.i && a.j == b.j; }
inline bool operator<(Edge a, Edge b) { return a.i != b.i ? a.i < b.i : a.j < b.j; }

// Candidate edge together with its index in the fixed (lexicographic) ordering.
// The associated edge vector a_l has +1 at i, -1 at j, zeros elsewhere.
struct EdgeVec {
    int index = 0;
    int i = 0;
    int j = 0;
};

inline Edge to_edge(const EdgeVec& e) { return Edge{e.i, e.j}; }

// Simple undirected graph; edge list kept sorted lexicographically so every
// vector indexed by edges has a fixed meaning. Positions, when present, are
// 2D coordinates in the unit square. Treat instances as immutable once built.
struct Graph {
    int n = 0;
    std::vector<Edge> edges;
    std::vector<std::array<double, 2>> positions;  // empty or size n

    bool has_positions() const { return !positions.empty(); }
};

// Validates (no self-loops, no duplicates, indices in range), sorts the edges.
Graph make_graph(int n, std::vector<Edge> edges,
                 std::vector<std::array<double, 2>> positions = {});

int max_degree(const Graph& g);
bool is_connected(const Graph& g);
double edge_length(const Graph& g, Edge e);

// L = sum_l a_l a_l^T
SymMatrix laplacian(const Graph& g);

// P = I - L / (2 (1 + delta_max)); doubly stochastic, symmetric, PSD.
// Rejects delta_max below the max degree encoded on the diagonal of L.
SymMatrix consensus_matrix(const SymMatrix& L, int delta_max);

// The K = n(n-1)/2 - m complement edges in lexicographic order.
std::vector<EdgeVec> candidate_edges(const Graph& g);

// Uniform positions on the unit square, edges between pairs at distance
// <= radius. If disconnected, the radius is grown by 5% until connected
// (sqrt(2) yields the complete graph, so the loop terminates).
Graph random_sensor_graph(int n, double radius, uint64_t seed);

// Exponential communication-cost model: c = tau1 * exp(tau2 * (d - d0)).
struct CostModel {
    double tau1 = 10.0;
    double tau2 = 0.5;
    double d0 = 0.7;
};

double edge_cost(Edge e, const Graph& g, const CostModel& model);
std::vector<double> edge_costs(const Graph& g, const std::vector<EdgeVec>& candidates,
                               const CostModel& model);

// A base graph plus timed single-edge additions. delta_max defaults to the
// max degree of the final graph so the mixing matrix of every intermediate
// graph stays doubly stochastic and PSD; a larger override is accepted (used
// to keep mixing matrices comparable across runs of a sweep).
struct DynamicNetwork {
    Graph base;
    std::vector<std::pair<long, Edge>> additions;  // (t, edge), t >= 1, strictly increasing
    int delta_max = 0;
};

DynamicNetwork make_dynamic_network(Graph base, std::vector<std::pair<long, Edge>> additions,
                                    int delta_max_override = 0);

Graph graph_at(const DynamicNetwork& net, long t);

// Text format: "n m", then m lines "i j" (1-based, sorted), then optionally a
// line "positions" followed by n lines "x y".
void save_graph(const Graph& g, const std::string& path);
Graph load_graph(const std::string& path);

}  // namespace ddanet

#endif
