#ifndef DDANET_THEORY_HPP
#define DDANET_THEORY_HPP

#include <utility>
#include <vector>

#include "ddanet/graph.hpp"
#include "ddanet/spectral.hpp"

namespace ddanet::theory {

// Guaranteed connectivity gain from adding one edge to a connected graph:
// u (a^T v)^2 / (6 / gap + 1), v the Fiedler vector and gap the spectral gap
// lambda_{n-2} - lambda_{n-1} of the previous Laplacian. A zero gap makes the
// bound collapse to 0 (its limit); *flagged is set when that happens.
double prop1_increment_bound(const SymMatrix& L_prev, Edge e, int u, bool* flagged = nullptr);

// b = 1 / (2 (1 + delta_max) + 12 (1 + delta_max) / gap); converts the
// connectivity increment into a sigma2 decrement. Zero gap -> 0, flagged.
double b_coefficient(const SymMatrix& L, int delta_max, bool* flagged = nullptr);
double b_coefficient_from_gap(double gap, int delta_max);

// One value per scheduled addition, in schedule order: b_{i-1} (a^T v_{i-1})^2
// computed from the exact spectrum of the graph before the addition. These
// depend only on the addition order, not on the times.
std::vector<double> per_addition_terms(const Graph& base, const std::vector<Edge>& ordered_edges,
                                       int delta_max);

// Spread per-addition values onto the time axis (index i-1 holds the term of
// time step i); times strictly increasing, truncated at T.
std::vector<double> spread_terms(const std::vector<double>& per_addition,
                                 const std::vector<long>& times, long T);

// Both orderings combined: terms for the additions of a dynamic network.
std::vector<double> schedule_terms(const DynamicNetwork& net, long T);

struct MixingTimeResult {
    long delta_star = 1;
    double beta_star = 1.0;
    double lower_bound_rhs = 0.0;  // value of the mixing-time constraint at the solution
    bool clamped = false;          // a partial term sum reached sigma2(P0)
};

// Smallest integer delta with delta >= log(T sqrt(n))/log(1/s0)
//                                    - log(1/beta(delta))/log(1/s0),
// where log beta(delta) = sum_{k=1}^{delta-1} log(1 - S_k / s0) and S_k is the
// running term sum. The static cap ceil(log(T sqrt n)/log(1/s0)) is always
// feasible. Factors are floored at 1e-12 when a term sum overshoots s0.
MixingTimeResult solve_mixing_time(const std::vector<double>& terms, double sigma2_P0, long T,
                                   int n);

// Closed form for the static network: ceil(log(T sqrt n) / log(1/s0)).
long corollary1_delta(double sigma2_P0, long T, int n);

// ceil of the constraint right-hand side at a given beta.
long approx_delta(double beta_star, double sigma2_P0, long T, int n);

// Network deviation bound: sum_t (L^2 alpha_t / T) (6 delta_star + 9).
double net_bound(long delta_star, const std::vector<double>& alphas, double lipschitz, long T);

// First-order suboptimality term with psi(x*) <= R^2:
// R^2/(T alpha_T) + (L^2 / 2T) sum_t alpha_{t-1}, convention alpha_0 = alpha_1.
double opt_bound(double radius, double lipschitz, const std::vector<double>& alphas, long T);

// Explicit end-to-end bound R^2/(a sqrt T) + a L^2 (12 delta_star + 19)/sqrt T
// with a = R sqrt(1 - sigma2(P0)) / L unless overridden.
double thm2_bound(double radius, double lipschitz, double sigma2_P0, long delta_star, long T,
                  double step_constant = 0.0);

// Convergence-time scale (1/eps^2) (1 - s0) / (1 - alpha s0)^2 with
// alpha = 1 - sum(terms)/s0 clamped to [0, 1]. Constant factor fixed at 1;
// meaningful for trends, not point predictions.
double prop3_convergence_time(double epsilon, double sigma2_P0, const std::vector<double>& terms);

struct ScheduleComparison {
    MixingTimeResult early;
    MixingTimeResult late;
    bool verdict = false;  // delta*(early) <= delta*(late)
};

// Same additions at elementwise earlier vs later times.
ScheduleComparison corollary3_check(const std::vector<double>& per_addition,
                                    const std::vector<long>& times_early,
                                    const std::vector<long>& times_late, double sigma2_P0,
                                    long T, int n);

struct BoundReport {
    MixingTimeResult mixing;
    double net_bound = 0.0;
    double opt_bound = 0.0;
    double thm2_bound_at_T = 0.0;
    std::vector<std::pair<long, double>> thm2_bound_series;  // (t, bound at horizon t)
    double prop3_scale = 0.0;
    double alpha_coeff = 0.0;
    double total_terms = 0.0;
};

BoundReport make_bound_report(const std::vector<double>& terms, double sigma2_P0, long T, int n,
                              double radius, double lipschitz, double epsilon,
                              const std::vector<long>& checkpoint_times,
                              double step_constant = 0.0);

}  // namespace ddanet::theory

#endif
