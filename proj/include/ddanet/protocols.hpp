#ifndef DDANET_PROTOCOLS_HPP
#define DDANET_PROTOCOLS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "ddanet/graph.hpp"
#include "ddanet/spectral.hpp"

namespace ddanet::proto {

// Per-agent view used by the message-passing simulations. neighbor_row holds
// the agent's row of a doubly stochastic mixing matrix (self weight included);
// entries are nonnegative and sum to 1.
struct AgentState {
    int id = 0;
    double y_local = 0.0;
    std::vector<double> phi_local;                   // inner-loop working vector
    std::vector<std::pair<int, double>> neighbor_row;  // (j, P_ij), j in N_i + self
};

std::vector<AgentState> make_agents(const Graph& g, const SymMatrix& P);

// Message counts are in scalars: an edge carrying an R^n payload in one
// direction counts as n.
struct ProtocolStats {
    long long rounds = 0;
    long long messages = 0;
    double final_error = 0.0;  // 1 - |cos angle| against the centralized eigenvector
    int reseeds = 0;
};

// One recorded protocol observation; quantity names the recorded variable
// (the eigenvector protocol records "y" after each outer round).
struct TraceRow {
    long round = 0;
    int agent = 0;
    const char* quantity = "y";
    double value = 0.0;
};

struct EigvecResult {
    std::vector<double> y;  // stacked agent estimates, proportional to the top
                            // eigenvector of P - 1 1^T / n
    ProtocolStats stats;
    std::vector<TraceRow> trace;  // filled when tracing is requested
};

// CSV columns: round,agent,quantity,value
void save_protocol_trace_csv(const std::vector<TraceRow>& trace, const std::string& path);

// One synchronous averaging round on the agents' phi vectors:
// phi_i <- sum_{j in N_i} P_ij phi_j. Conserves sum_i phi_i exactly up to
// roundoff since the mixing weights are doubly stochastic.
void consensus_round(std::vector<AgentState>& agents, std::vector<double>& scratch);
void consensus_round(std::vector<AgentState>& agents);

// Distributed power iteration: N2 average-consensus rounds propagate each
// agent's scaled basis vector, then a power-iteration-like correction updates
// the local estimate. The start vector matches the centralized one for the
// same seed, so trajectories are directly comparable.
EigvecResult decentralized_top_eigvec(const Graph& g, std::vector<AgentState> agents,
                                      int n1, int n2, uint64_t seed);

// Random-broadcast-max: each round a uniformly random node pushes its value to
// its neighbors, who keep the elementwise max. min(v) is available through
// max of (1 - v) or negation on the caller's side.
std::vector<double> max_consensus(std::vector<double> values, const Graph& g, int rounds,
                                  uint64_t seed);

// One local step of the distributed box-constrained subgradient update:
// w_l <- clamp01(w_l - kappa gamma c_l + kappa (y_i - y_j)^2), each candidate
// edge owned by its lower-index endpoint.
std::vector<double> decentralized_subgradient_round(std::vector<double> w, double kappa,
                                                    double gamma,
                                                    const std::vector<double>& costs,
                                                    const std::vector<double>& y,
                                                    const std::vector<EdgeVec>& candidates);

// Each agent maximizes (y_i - y_j)^2 - gamma c_l over its own candidates, then
// a random-broadcast max-consensus on (score, index) pairs -- score descending,
// index ascending -- yields the global argmax. Returns the winning candidate
// index. Throws if the consensus has not settled within the round cap.
int decentralized_greedy_pick(const Graph& g, const std::vector<double>& y, double gamma,
                              const std::vector<double>& costs,
                              const std::vector<EdgeVec>& candidates, uint64_t seed,
                              ProtocolStats* stats = nullptr);

}  // namespace ddanet::proto

#endif
