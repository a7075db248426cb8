#include "ddanet/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ddanet/rng.hpp"

namespace ddanet::proto {

std::vector<AgentState> make_agents(const Graph& g, const SymMatrix& P) {
    if (P.n() != g.n) throw std::invalid_argument("make_agents: matrix size != node count");
    std::vector<AgentState> agents(g.n);
    for (int i = 0; i < g.n; ++i) {
        agents[i].id = i;
        double row_sum = 0.0;
        for (int j = 0; j < g.n; ++j) {
            const double w = P(i, j);
            if (w == 0.0) continue;
            if (w < 0.0) throw std::invalid_argument("make_agents: negative mixing weight");
            agents[i].neighbor_row.emplace_back(j, w);
            row_sum += w;
        }
        if (std::fabs(row_sum - 1.0) > 1e-9)
            throw std::invalid_argument("make_agents: row of P does not sum to 1");
    }
    return agents;
}

namespace {

std::vector<double> seeded_start(int n, uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v = rng.gaussian_vector(n);
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    for (double& x : v) x -= mean;
    double nv = 0.0;
    for (double x : v) nv += x * x;
    nv = std::sqrt(nv);
    for (double& x : v) x /= nv;
    return v;
}

long long off_diag_links(const std::vector<AgentState>& agents) {
    long long links = 0;
    for (const AgentState& a : agents)
        for (const auto& [j, w] : a.neighbor_row)
            if (j != a.id) ++links;
    return links;  // directed links, = 2 |E| for the symmetric case
}

}  // namespace

void consensus_round(std::vector<AgentState>& agents, std::vector<double>& scratch) {
    const int n = static_cast<int>(agents.size());
    const int dim = agents.empty() ? 0 : static_cast<int>(agents.front().phi_local.size());
    scratch.assign(static_cast<size_t>(n) * dim, 0.0);
    for (int i = 0; i < n; ++i) {
        double* dst = scratch.data() + static_cast<size_t>(i) * dim;
        for (const auto& [j, w] : agents[i].neighbor_row) {
            const double* src = agents[j].phi_local.data();
            for (int k = 0; k < dim; ++k) dst[k] += w * src[k];
        }
    }
    for (int i = 0; i < n; ++i) {
        const double* src = scratch.data() + static_cast<size_t>(i) * dim;
        std::copy(src, src + dim, agents[i].phi_local.data());
    }
}

void consensus_round(std::vector<AgentState>& agents) {
    std::vector<double> scratch;
    consensus_round(agents, scratch);
}

EigvecResult decentralized_top_eigvec(const Graph& g, std::vector<AgentState> agents,
                                      int n1, int n2, uint64_t seed) {
    const int n = g.n;
    if (n1 < 1 || n2 < 1)
        throw std::invalid_argument("decentralized_top_eigvec: need N1, N2 >= 1");
    if (static_cast<int>(agents.size()) != n)
        throw std::invalid_argument("decentralized_top_eigvec: agent count != node count");
    if (!is_connected(g))
        throw std::invalid_argument("decentralized_top_eigvec: graph must be connected");

    EigvecResult out;
    const long long links = off_diag_links(agents);

    uint64_t start_seed = seed;
    std::vector<double> y;
    std::vector<double> y_next(n), scratch;

restart:
    y = seeded_start(n, start_seed);
    for (int s = 0; s < n1; ++s) {
        // inner loop: phi_i(0) = y_i e_i, then n2 mixing rounds
        for (AgentState& a : agents) {
            a.y_local = y[a.id];
            a.phi_local.assign(n, 0.0);
            a.phi_local[a.id] = a.y_local;
        }
        for (int q = 0; q < n2; ++q) {
            consensus_round(agents, scratch);
            out.stats.rounds += 1;
            out.stats.messages += links * n;
        }
        // power-iteration-like correction from the consensus estimate
        for (int i = 0; i < n; ++i) {
            const AgentState& a = agents[i];
            double mix = 0.0;
            for (const auto& [j, w] : a.neighbor_row) mix += w * agents[j].y_local;
            double ones_phi = 0.0, norm_phi = 0.0;
            for (double x : a.phi_local) {
                ones_phi += x;
                norm_phi += x * x;
            }
            norm_phi = std::sqrt(norm_phi);
            if (norm_phi < 1e-250) {
                out.stats.reseeds += 1;
                start_seed = splitmix64(start_seed);
                goto restart;
            }
            y_next[i] = (mix - ones_phi) / (static_cast<double>(n) * norm_phi);
        }
        y = y_next;
        out.stats.rounds += 1;
        out.stats.messages += links;
    }

    out.y = y;

    // alignment against the centralized eigenvector of the same matrix
    SymMatrix P(n);
    for (const AgentState& a : agents)
        for (const auto& [j, w] : a.neighbor_row) P.set(a.id, j, w);
    PowerOpts opts;
    opts.seed = seed;
    opts.detect_degenerate = false;
    const PowerResult centralized = top_eig_deflated(P, opts);
    double dot = 0.0, ny = 0.0;
    for (int i = 0; i < n; ++i) {
        dot += y[i] * centralized.pair.vector[i];
        ny += y[i] * y[i];
    }
    ny = std::sqrt(ny);
    out.stats.final_error = ny > 0.0 ? 1.0 - std::fabs(dot) / ny : 1.0;
    return out;
}

std::vector<double> max_consensus(std::vector<double> values, const Graph& g, int rounds,
                                  uint64_t seed) {
    if (static_cast<int>(values.size()) != g.n)
        throw std::invalid_argument("max_consensus: value count != node count");
    std::vector<std::vector<int>> adj(g.n);
    for (Edge e : g.edges) {
        adj[e.i].push_back(e.j);
        adj[e.j].push_back(e.i);
    }
    Rng rng(seed);
    for (int r = 0; r < rounds; ++r) {
        const int b = static_cast<int>(rng.below(g.n));
        for (int j : adj[b]) values[j] = std::max(values[j], values[b]);
    }
    return values;
}

std::vector<double> decentralized_subgradient_round(std::vector<double> w, double kappa,
                                                    double gamma,
                                                    const std::vector<double>& costs,
                                                    const std::vector<double>& y,
                                                    const std::vector<EdgeVec>& candidates) {
    if (w.size() != candidates.size() || costs.size() != candidates.size())
        throw std::invalid_argument("decentralized_subgradient_round: length mismatch");
    for (size_t l = 0; l < candidates.size(); ++l) {
        const double diff = y[candidates[l].i] - y[candidates[l].j];
        // same association as the centralized iterate, so both routes agree
        // to the last bit when fed the same eigenvector
        const double next = w[l] - kappa * (gamma * costs[l] - diff * diff);
        w[l] = std::min(1.0, std::max(0.0, next));
    }
    return w;
}

int decentralized_greedy_pick(const Graph& g, const std::vector<double>& y, double gamma,
                              const std::vector<double>& costs,
                              const std::vector<EdgeVec>& candidates, uint64_t seed,
                              ProtocolStats* stats) {
    if (candidates.empty())
        throw std::invalid_argument("decentralized_greedy_pick: no candidates");
    const int n = g.n;

    struct Scored {
        double score;
        int index;
        bool better_than(const Scored& o) const {
            return score != o.score ? score > o.score : index < o.index;
        }
    };

    // each candidate edge is owned by its lower-index endpoint
    std::vector<Scored> local(n, Scored{-std::numeric_limits<double>::infinity(), -1});
    for (size_t l = 0; l < candidates.size(); ++l) {
        const EdgeVec& e = candidates[l];
        const double diff = y[e.i] - y[e.j];
        const Scored s{diff * diff - gamma * costs[l], static_cast<int>(l)};
        if (s.better_than(local[e.i])) local[e.i] = s;
    }

    std::vector<std::vector<int>> adj(n);
    for (Edge e : g.edges) {
        adj[e.i].push_back(e.j);
        adj[e.j].push_back(e.i);
    }

    Rng rng(seed);
    const long cap = 1000L * n;
    long long rounds = 0, messages = 0;
    for (long r = 0; r < cap; ++r) {
        bool agreed = true;
        for (int i = 1; i < n; ++i)
            if (local[i].index != local[0].index) {
                agreed = false;
                break;
            }
        if (agreed && local[0].index >= 0) break;
        const int b = static_cast<int>(rng.below(n));
        for (int j : adj[b]) {
            if (local[b].better_than(local[j])) local[j] = local[b];
            messages += 2;  // (score, index) pair
        }
        ++rounds;
    }
    for (int i = 1; i < n; ++i)
        if (local[i].index != local[0].index)
            throw std::runtime_error("decentralized_greedy_pick: consensus did not settle");
    if (stats != nullptr) {
        stats->rounds = rounds;
        stats->messages = messages;
    }
    return local[0].index;
}

}  // namespace ddanet::proto
