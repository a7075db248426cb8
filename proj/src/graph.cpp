#include "ddanet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ddanet/rng.hpp"

namespace ddanet {

Graph make_graph(int n, std::vector<Edge> edges, std::vector<std::array<double, 2>> positions) {
    if (n < 0) throw std::invalid_argument("make_graph: negative node count");
    if (!positions.empty() && static_cast<int>(positions.size()) != n)
        throw std::invalid_argument("make_graph: positions must cover every node");
    for (Edge& e : edges) {
        if (e.i == e.j) throw std::invalid_argument("make_graph: self-loop");
        if (e.i > e.j) std::swap(e.i, e.j);
        if (e.i < 0 || e.j >= n) throw std::invalid_argument("make_graph: endpoint out of range");
    }
    std::sort(edges.begin(), edges.end());
    for (size_t l = 1; l < edges.size(); ++l)
        if (edges[l] == edges[l - 1]) throw std::invalid_argument("make_graph: duplicate edge");
    return Graph{n, std::move(edges), std::move(positions)};
}

int max_degree(const Graph& g) {
    std::vector<int> deg(g.n, 0);
    for (Edge e : g.edges) {
        ++deg[e.i];
        ++deg[e.j];
    }
    int d = 0;
    for (int v : deg) d = std::max(d, v);
    return d;
}

bool is_connected(const Graph& g) {
    if (g.n <= 1) return true;
    std::vector<std::vector<int>> adj(g.n);
    for (Edge e : g.edges) {
        adj[e.i].push_back(e.j);
        adj[e.j].push_back(e.i);
    }
    std::vector<char> seen(g.n, 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v : adj[u])
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
    }
    return count == g.n;
}

double edge_length(const Graph& g, Edge e) {
    if (!g.has_positions()) throw std::invalid_argument("edge_length: graph has no positions");
    const double dx = g.positions[e.i][0] - g.positions[e.j][0];
    const double dy = g.positions[e.i][1] - g.positions[e.j][1];
    return std::sqrt(dx * dx + dy * dy);
}

SymMatrix laplacian(const Graph& g) {
    SymMatrix L(g.n);
    for (Edge e : g.edges) {
        L.add(e.i, e.i, 1.0);
        L.add(e.j, e.j, 1.0);
        L.add(e.i, e.j, -1.0);
    }
    return L;
}

SymMatrix consensus_matrix(const SymMatrix& L, int delta_max) {
    const int n = L.n();
    int max_deg = 0;
    for (int i = 0; i < n; ++i)
        max_deg = std::max(max_deg, static_cast<int>(std::lround(L(i, i))));
    if (delta_max < max_deg)
        throw std::invalid_argument("consensus_matrix: delta_max below current max degree");
    SymMatrix P = SymMatrix::identity(n);
    const double scale = 1.0 / (2.0 * (1.0 + delta_max));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) P.set(i, j, P(i, j) - scale * L(i, j));
    return P;
}

std::vector<EdgeVec> candidate_edges(const Graph& g) {
    std::vector<EdgeVec> out;
    size_t pos = 0;
    int index = 0;
    for (int i = 0; i < g.n; ++i) {
        for (int j = i + 1; j < g.n; ++j) {
            while (pos < g.edges.size() && g.edges[pos] < Edge{i, j}) ++pos;
            const bool present = pos < g.edges.size() && g.edges[pos] == Edge{i, j};
            if (!present) out.push_back(EdgeVec{index++, i, j});
        }
    }
    return out;
}

Graph random_sensor_graph(int n, double radius, uint64_t seed) {
    if (n < 2) throw std::invalid_argument("random_sensor_graph: need n >= 2");
    if (!(radius > 0.0) || radius > std::sqrt(2.0) + 1e-12)
        throw std::invalid_argument("random_sensor_graph: radius outside (0, sqrt(2)]");
    Rng rng(seed);
    std::vector<std::array<double, 2>> pos(n);
    for (int i = 0; i < n; ++i) {
        pos[i][0] = rng.uniform01();
        pos[i][1] = rng.uniform01();
    }
    double r = radius;
    for (;;) {
        std::vector<Edge> edges;
        const double r2 = r * r;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double dx = pos[i][0] - pos[j][0];
                const double dy = pos[i][1] - pos[j][1];
                if (dx * dx + dy * dy <= r2) edges.push_back(Edge{i, j});
            }
        Graph g = make_graph(n, std::move(edges), pos);
        if (is_connected(g)) return g;
        r = std::min(r * 1.05, std::sqrt(2.0));
    }
}

double edge_cost(Edge e, const Graph& g, const CostModel& model) {
    const double d = edge_length(g, e);
    return model.tau1 * std::exp(model.tau2 * (d - model.d0));
}

std::vector<double> edge_costs(const Graph& g, const std::vector<EdgeVec>& candidates,
                               const CostModel& model) {
    std::vector<double> c(candidates.size());
    for (size_t l = 0; l < candidates.size(); ++l) c[l] = edge_cost(to_edge(candidates[l]), g, model);
    return c;
}

DynamicNetwork make_dynamic_network(Graph base, std::vector<std::pair<long, Edge>> additions,
                                    int delta_max_override) {
    std::vector<Edge> all = base.edges;
    long prev_t = 0;
    for (auto& [t, e] : additions) {
        if (t < 1) throw std::invalid_argument("make_dynamic_network: addition times start at 1");
        if (t <= prev_t)
            throw std::invalid_argument("make_dynamic_network: at most one addition per step");
        prev_t = t;
        if (e.i > e.j) std::swap(e.i, e.j);
        if (std::find(all.begin(), all.end(), e) != all.end())
            throw std::invalid_argument("make_dynamic_network: edge already present");
        all.push_back(e);
    }
    const Graph final_graph = make_graph(base.n, all);
    const int needed = max_degree(final_graph);
    int delta_max = needed;
    if (delta_max_override != 0) {
        if (delta_max_override < needed)
            throw std::invalid_argument("make_dynamic_network: delta_max override below horizon max degree");
        delta_max = delta_max_override;
    }
    return DynamicNetwork{std::move(base), std::move(additions), delta_max};
}

Graph graph_at(const DynamicNetwork& net, long t) {
    std::vector<Edge> edges = net.base.edges;
    for (const auto& [s, e] : net.additions) {
        if (s > t) break;
        edges.push_back(e);
    }
    return make_graph(net.base.n, std::move(edges), net.base.positions);
}

void save_graph(const Graph& g, const std::string& path) {
    std::ostringstream os;
    os << g.n << " " << g.edges.size() << "\n";
    for (Edge e : g.edges) os << e.i + 1 << " " << e.j + 1 << "\n";
    if (g.has_positions()) {
        os << "positions\n";
        char buf[64];
        for (const auto& p : g.positions) {
            std::snprintf(buf, sizeof(buf), "%.12g %.12g\n", p[0], p[1]);
            os << buf;
        }
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("save_graph: cannot open " + path);
    f << os.str();
}

Graph load_graph(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_graph: cannot open " + path);
    int n = 0;
    size_t m = 0;
    if (!(f >> n >> m)) throw std::runtime_error("load_graph: bad header in " + path);
    std::vector<Edge> edges(m);
    for (size_t l = 0; l < m; ++l) {
        int i = 0, j = 0;
        if (!(f >> i >> j)) throw std::runtime_error("load_graph: truncated edge list in " + path);
        edges[l] = Edge{i - 1, j - 1};
    }
    std::vector<std::array<double, 2>> pos;
    std::string word;
    if (f >> word) {
        if (word != "positions") throw std::runtime_error("load_graph: unexpected token " + word);
        pos.resize(n);
        for (int i = 0; i < n; ++i)
            if (!(f >> pos[i][0] >> pos[i][1]))
                throw std::runtime_error("load_graph: truncated positions in " + path);
    }
    return make_graph(n, std::move(edges), std::move(pos));
}

}  // namespace ddanet
