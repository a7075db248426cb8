#ifndef DDANET_DESIGN_HPP
#define DDANET_DESIGN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ddanet/graph.hpp"
#include "ddanet/spectral.hpp"

namespace ddanet::design {

enum class Mode { C1, C2 };  // box constraint, or box intersected with 1^T w = k

std::string mode_name(Mode m);
Mode parse_mode(const std::string& s);

struct SelectionProblem {
    Graph base;
    std::vector<EdgeVec> candidates;  // complement edges, lexicographic
    std::vector<double> costs;        // strictly positive, aligned with candidates
    double gamma = 0.0;
    Mode mode = Mode::C1;
    int k = 0;  // C2 only, 0 <= k <= K
};

SelectionProblem make_problem(const Graph& base, const CostModel& cost, double gamma,
                              Mode mode, int k = 0);

// L(w) = L0 + sum_l w_l a_l a_l^T
SymMatrix weighted_laplacian(const SelectionProblem& p, const std::vector<double>& w);

// P(w) = I - L(w)/n; PSD for w in the unit box.
SymMatrix design_mixing_matrix(const SelectionProblem& p, const std::vector<double>& w);

// phi(w) = n lambda_1(P(w) - 1 1^T/n) + gamma c^T w, i.e. the connectivity
// distance n - lambda_{n-1}(L(w)) plus the cost penalty.
double objective_phi(const SelectionProblem& p, const std::vector<double>& w,
                     uint64_t eig_seed = 0x5EEDULL);

// Entry l: -(y_i - y_j)^2 + gamma c_l, with y the top deflated eigenvector.
std::vector<double> subgradient_phi(const SelectionProblem& p, const std::vector<double>& w,
                                    uint64_t eig_seed = 0x5EEDULL);

// Elementwise clamp to [0,1].
std::vector<double> project_box(std::vector<double> v);

// Euclidean projection onto [0,1]^K intersected with {1^T w = k}: bisection on
// the multiplier until the bracket is free of breakpoints, then the closed
// form over the interior set. Output sums to k within 1e-10.
std::vector<double> project_capped_simplex(const std::vector<double>& v, int k);

struct SelectionResult {
    std::vector<double> w_relaxed;       // best iterate, in [0,1]^K
    std::vector<uint8_t> w_binary;       // rounded
    std::vector<double> objective_trace; // phi at w^(0), w^(1), ...
    std::vector<EdgeVec> selected_edges; // candidates with w_binary = 1
};

struct SolveOpts {
    int iters = 2000;
    double step_scale = 5.0;  // kappa_l = step_scale / sqrt(l); 5 = 1/(0.2)
    double rho = 0.5;         // C1 rounding threshold
    uint64_t seed = 0x5EEDULL;
};

// Projected subgradient descent from w^(0) = 0.5 * 1; returns the best
// iterate seen, not the last (the method is non-monotone).
SelectionResult projected_subgradient_solve(const SelectionProblem& p, const SolveOpts& opts = {});

// C1: indicator(w - rho >= 0). C2: k largest entries, ties to the lower index.
std::vector<uint8_t> round_selection(const std::vector<double>& w_relaxed, Mode mode,
                                     double rho, int k);

// One edge at a time, maximizing (v_i - v_j)^2 - gamma c_l against the current
// Fiedler vector, which is recomputed after every addition. Ties break to the
// lower candidate index. With gamma = 0 this greedily maximizes algebraic
// connectivity.
std::vector<EdgeVec> greedy_select(const SelectionProblem& p, int budget,
                                   uint64_t eig_seed = 0x5EEDULL);

// Text round-trip: "K gamma mode k" header, then w_relaxed, then w_binary.
void save_selection(const std::string& path, const SelectionProblem& p, const SelectionResult& r);
SelectionResult load_selection(const std::string& path, const SelectionProblem& p);

}  // namespace ddanet::design

#endif
