#ifndef DDANET_DDA_HPP
#define DDANET_DDA_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ddanet/graph.hpp"
#include "ddanet/spectral.hpp"

namespace ddanet::engine {

// l1 regression over the l2 ball: f_i(x) = |y_i - b_i^T x|, X = {||x|| <= R}.
// Each f_i is Lipschitz with constant ||b_i||, so L = max_i ||b_i||.
struct ProblemInstance {
    int p = 0;
    int n = 0;
    std::vector<double> y;               // n
    std::vector<std::vector<double>> b;  // n rows of length p
    double radius = 5.0;
    double lipschitz = 0.0;
};

ProblemInstance make_instance(int p, std::vector<double> y, std::vector<std::vector<double>> b,
                              double radius);

// data drawn from the standard normal distribution
ProblemInstance random_l1_instance(int n, int p, double radius, uint64_t seed);

double local_objective(const ProblemInstance& inst, int i, const double* x);
double full_objective(const ProblemInstance& inst, const double* x);

// argmin_{||x|| <= R} { z^T x + ||x||^2 / (2 alpha) } = -alpha z, pulled back
// to the sphere when it lands outside.
std::vector<double> prox_step(const std::vector<double>& z, double alpha, double radius);

// g = -sign(y_i - b_i^T x) b_i, with sign(0) = 0.
std::vector<double> l1_subgradient(const std::vector<double>& x, double y_i,
                                   const std::vector<double>& b_i);

// Per-agent dual/primal iterates, flattened n x p row-major. Running averages
// are kept as plain sums and divided on read, so xbar(t) = (1/t) sum x(s)
// is computed literally.
struct DdaState {
    int n = 0, p = 0;
    long t = 0;  // completed steps
    std::vector<double> z, x, xsum;
};

DdaState make_state(int n, int p);
std::vector<double> running_average(const DdaState& s, int i);

using MixRows = std::vector<std::vector<std::pair<int, double>>>;
MixRows mix_rows(const SymMatrix& P);

// One synchronous round: z_i <- sum_j P_ji z_j + g_i(x_i), then the proximal
// step with the given alpha. P must match the current graph sparsity.
void dda_step(DdaState& s, const MixRows& rows, const ProblemInstance& inst, double alpha);

enum class Ordering { greedy, as_given };

// Greedy ordering of the selected edges: repeatedly take the edge with the
// largest squared Fiedler-coordinate gap, recomputing the Fiedler vector of
// the grown graph after each pick. Ties to the lexicographically lower edge.
std::vector<EdgeVec> greedy_schedule(const std::vector<EdgeVec>& selected, const Graph& base,
                                     uint64_t eig_seed = 0x5EEDULL);

// One edge enters at t = (q-1)*Delta + 1 for q = 1.. floor(T/Delta), until the
// selected list is exhausted.
struct ScheduleSpec {
    std::vector<EdgeVec> selected;
    Ordering ordering = Ordering::greedy;
    long delta = 1;
};

std::vector<std::pair<long, Edge>> materialize_schedule(const ScheduleSpec& spec, long T,
                                                        const Graph& base,
                                                        uint64_t eig_seed = 0x5EEDULL);

struct CheckRow {
    long t = 0;
    double max_regret = 0.0;  // max_i f(xbar_i(t)) - f*
    double max_fhat = 0.0;    // max_i f(xbar_i(t))
    double sigma2_Pt = 0.0;
    double lambda_n1_Lt = 0.0;
    long edges_added = 0;
};

struct Trajectory {
    std::vector<CheckRow> rows;
    double sigma2_P0 = 0.0;
    double step_constant = 0.0;
    double f_star = 0.0;
    int delta_max = 0;
    long T = 0;
    DdaState final_state;
};

struct RunOpts {
    long T = 0;
    double step_constant = 0.0;    // 0 -> R sqrt(1 - sigma2(P0)) / L
    long checkpoint_every = 0;     // 0 -> max(1, T/1000)
    double f_star = 0.0;           // reference optimum for the regret column
    int delta_max_override = 0;    // 0 -> max degree of the final graph
};

// Mixing matrix, sigma2 and algebraic connectivity for one stretch of the
// evolving topology. sigma2(P_t) = 1 - lambda_{n-1}(L_t) / (2 (1 + delta_max))
// exactly, so each segment needs a single eigendecomposition.
struct TimelineSegment {
    long t_start = 0;
    MixRows rows;
    double sigma2 = 0.0;
    double lambda_n1 = 0.0;
    long edges_added = 0;
};

struct NetworkTimeline {
    int n = 0;
    int delta_max = 0;
    std::vector<TimelineSegment> segments;  // first segment is the base graph at t = 0
    double sigma2_P0() const { return segments.front().sigma2; }
};

// Precompute the per-segment spectra once; trials over the same schedule can
// share the result.
NetworkTimeline build_timeline(const Graph& base, const std::vector<std::pair<long, Edge>>& additions,
                               int delta_max_override = 0);

// Runs DDA for T steps over the evolving network, starting from z = 0, with
// alpha_t = a / sqrt(t) and the convention alpha_0 = alpha_1.
Trajectory run_dda(const ProblemInstance& inst, const NetworkTimeline& timeline,
                   const RunOpts& opts);
Trajectory run_dda(const ProblemInstance& inst, const Graph& base, const ScheduleSpec& spec,
                   const RunOpts& opts);

std::vector<double> regret_series(const Trajectory& traj);

// Reference optimum for f over the ball. Two routes: a long projected dual
// averaging run (seeded tie-break perturbation) polished by tail averaging,
// and a deterministic smoothed reweighted-least-squares refinement with the
// smoothing driven to 1e-12. f_star is the smallest feasible value seen;
// converged is false when the two routes disagree beyond tolerance.
struct OracleResult {
    double f_star = 0.0;
    std::vector<double> x_star;
    double f_dual_averaging = 0.0;
    double f_smoothed = 0.0;
    bool converged = true;
};

OracleResult reference_optimum(const ProblemInstance& inst, long iters = 1000000,
                               uint64_t seed = 7);

// Trajectory CSV: t, max_regret, sigma2_Pt, lambda_n1_Lt, edges_added_cumulative
void save_trajectory_csv(const Trajectory& traj, const std::string& path);

}  // namespace ddanet::engine

#endif
