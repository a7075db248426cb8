#include "ddanet/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ddanet::theory {

namespace {
constexpr double kGapFloor = 1e-12;
constexpr double kLogFloor = 1e-12;
}  // namespace

double prop1_increment_bound(const SymMatrix& L_prev, Edge e, int u, bool* flagged) {
    const int n = L_prev.n();
    if (n < 3) throw std::invalid_argument("prop1_increment_bound: need n >= 3");
    if (flagged != nullptr) *flagged = false;
    if (u == 0) return 0.0;
    const std::vector<EigPair> eigs = full_spectrum(L_prev);
    const double gap = eigs[n - 3].value - eigs[n - 2].value;
    if (gap <= kGapFloor) {
        if (flagged != nullptr) *flagged = true;
        return 0.0;
    }
    const std::vector<double>& v = eigs[n - 2].vector;
    const double av = v[e.i] - v[e.j];
    return av * av / (6.0 / gap + 1.0);
}

double b_coefficient_from_gap(double gap, int delta_max) {
    if (gap <= kGapFloor) return 0.0;
    return 1.0 / (2.0 * (1.0 + delta_max) + 12.0 * (1.0 + delta_max) / gap);
}

double b_coefficient(const SymMatrix& L, int delta_max, bool* flagged) {
    const int n = L.n();
    if (n < 3) throw std::invalid_argument("b_coefficient: need n >= 3");
    const std::vector<EigPair> eigs = full_spectrum(L);
    const double gap = eigs[n - 3].value - eigs[n - 2].value;
    if (flagged != nullptr) *flagged = gap <= kGapFloor;
    return b_coefficient_from_gap(gap, delta_max);
}

std::vector<double> per_addition_terms(const Graph& base, const std::vector<Edge>& ordered_edges,
                                       int delta_max) {
    if (base.n < 3 && !ordered_edges.empty())
        throw std::invalid_argument("per_addition_terms: need n >= 3");
    std::vector<double> terms;
    terms.reserve(ordered_edges.size());
    std::vector<Edge> edges = base.edges;
    for (Edge e : ordered_edges) {
        const SymMatrix L = laplacian(make_graph(base.n, edges));
        const std::vector<EigPair> eigs = full_spectrum(L);
        const double gap = eigs[base.n - 3].value - eigs[base.n - 2].value;
        const std::vector<double>& v = eigs[base.n - 2].vector;
        const double av = v[e.i] - v[e.j];
        terms.push_back(b_coefficient_from_gap(gap, delta_max) * av * av);
        edges.push_back(e);
    }
    return terms;
}

std::vector<double> spread_terms(const std::vector<double>& per_addition,
                                 const std::vector<long>& times, long T) {
    if (per_addition.size() != times.size())
        throw std::invalid_argument("spread_terms: one time per addition");
    std::vector<double> out;
    long prev = 0;
    for (size_t i = 0; i < times.size(); ++i) {
        if (times[i] <= prev) throw std::invalid_argument("spread_terms: times strictly increasing");
        prev = times[i];
        if (times[i] > T) break;
        if (static_cast<long>(out.size()) < times[i]) out.resize(times[i], 0.0);
        out[times[i] - 1] = per_addition[i];
    }
    return out;
}

std::vector<double> schedule_terms(const DynamicNetwork& net, long T) {
    std::vector<Edge> edges;
    std::vector<long> times;
    for (const auto& [t, e] : net.additions) {
        if (t > T) break;
        times.push_back(t);
        edges.push_back(e);
    }
    return spread_terms(per_addition_terms(net.base, edges, net.delta_max), times, T);
}

namespace {

double static_cap_value(double sigma2_P0, long T, int n) {
    return std::log(static_cast<double>(T) * std::sqrt(static_cast<double>(n))) /
           std::log(1.0 / sigma2_P0);
}

}  // namespace

long corollary1_delta(double sigma2_P0, long T, int n) {
    return std::max(1L, static_cast<long>(std::ceil(static_cap_value(sigma2_P0, T, n))));
}

long approx_delta(double beta_star, double sigma2_P0, long T, int n) {
    if (!(beta_star > 0.0) || beta_star > 1.0 + 1e-12)
        throw std::invalid_argument("approx_delta: beta in (0, 1]");
    const double rhs =
        static_cap_value(sigma2_P0, T, n) - std::log(1.0 / beta_star) / std::log(1.0 / sigma2_P0);
    return std::max(1L, static_cast<long>(std::ceil(rhs)));
}

MixingTimeResult solve_mixing_time(const std::vector<double>& terms, double sigma2_P0, long T,
                                   int n) {
    if (!(sigma2_P0 > 0.0) || !(sigma2_P0 < 1.0))
        throw std::invalid_argument("solve_mixing_time: sigma2(P0) in (0,1)");
    if (T < 1) throw std::invalid_argument("solve_mixing_time: T >= 1");

    MixingTimeResult res;
    const double log_inv_s0 = std::log(1.0 / sigma2_P0);
    const double cap_value = static_cap_value(sigma2_P0, T, n);
    const long cap = std::max(1L, static_cast<long>(std::ceil(cap_value)));

    double log_beta = 0.0;  // beta(1) = 1
    double running_sum = 0.0;
    for (long delta = 1; delta <= cap; ++delta) {
        const double rhs = cap_value - (-log_beta) / log_inv_s0;
        if (static_cast<double>(delta) >= rhs || delta == cap) {
            res.delta_star = delta;
            res.beta_star = std::exp(log_beta);
            res.lower_bound_rhs = rhs;
            return res;
        }
        // extend beta from delta to delta+1: one more factor, at k = delta
        if (delta - 1 < static_cast<long>(terms.size()))
            running_sum += terms[delta - 1];
        double factor = 1.0 - running_sum / sigma2_P0;
        if (factor < kLogFloor) {
            factor = kLogFloor;
            res.clamped = true;
        }
        log_beta += std::log(factor);
    }
    // unreachable: the cap always satisfies the constraint
    res.delta_star = cap;
    res.beta_star = std::exp(log_beta);
    res.lower_bound_rhs = cap_value - (-log_beta) / log_inv_s0;
    return res;
}

double net_bound(long delta_star, const std::vector<double>& alphas, double lipschitz, long T) {
    if (delta_star < 1) throw std::invalid_argument("net_bound: delta_star >= 1");
    if (static_cast<long>(alphas.size()) < T)
        throw std::invalid_argument("net_bound: need alpha_1..alpha_T");
    double s = 0.0;
    for (long t = 1; t <= T; ++t) s += alphas[t - 1];
    return s * lipschitz * lipschitz / static_cast<double>(T) * (6.0 * delta_star + 9.0);
}

double opt_bound(double radius, double lipschitz, const std::vector<double>& alphas, long T) {
    if (static_cast<long>(alphas.size()) < T)
        throw std::invalid_argument("opt_bound: need alpha_1..alpha_T");
    double s = alphas[0];  // alpha_0 = alpha_1
    for (long t = 2; t <= T; ++t) s += alphas[t - 2];
    return radius * radius / (static_cast<double>(T) * alphas[T - 1]) +
           lipschitz * lipschitz / (2.0 * static_cast<double>(T)) * s;
}

double thm2_bound(double radius, double lipschitz, double sigma2_P0, long delta_star, long T,
                  double step_constant) {
    if (delta_star < 1 || T < 1) throw std::invalid_argument("thm2_bound: delta_star, T >= 1");
    if (sigma2_P0 < 0.0 || sigma2_P0 >= 1.0)
        throw std::invalid_argument("thm2_bound: sigma2(P0) in [0,1)");
    const double a = step_constant > 0.0
                         ? step_constant
                         : radius * std::sqrt(1.0 - sigma2_P0) / lipschitz;
    const double sqrt_T = std::sqrt(static_cast<double>(T));
    return radius * radius / (a * sqrt_T) +
           a * lipschitz * lipschitz * (12.0 * delta_star + 19.0) / sqrt_T;
}

double prop3_convergence_time(double epsilon, double sigma2_P0, const std::vector<double>& terms) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("prop3_convergence_time: epsilon > 0");
    double total = 0.0;
    for (double v : terms) total += v;
    double alpha = 1.0 - total / sigma2_P0;
    alpha = std::min(1.0, std::max(0.0, alpha));
    const double denom = 1.0 - alpha * sigma2_P0;
    return (1.0 - sigma2_P0) / (epsilon * epsilon * denom * denom);
}

ScheduleComparison corollary3_check(const std::vector<double>& per_addition,
                                    const std::vector<long>& times_early,
                                    const std::vector<long>& times_late, double sigma2_P0,
                                    long T, int n) {
    if (times_early.size() != per_addition.size() || times_late.size() != per_addition.size())
        throw std::invalid_argument("corollary3_check: schedules must cover the same edge set");
    for (size_t i = 0; i < times_early.size(); ++i)
        if (times_early[i] > times_late[i])
            throw std::invalid_argument("corollary3_check: early times must be elementwise <=");
    ScheduleComparison cmp;
    cmp.early = solve_mixing_time(spread_terms(per_addition, times_early, T), sigma2_P0, T, n);
    cmp.late = solve_mixing_time(spread_terms(per_addition, times_late, T), sigma2_P0, T, n);
    cmp.verdict = cmp.early.delta_star <= cmp.late.delta_star;
    return cmp;
}

BoundReport make_bound_report(const std::vector<double>& terms, double sigma2_P0, long T, int n,
                              double radius, double lipschitz, double epsilon,
                              const std::vector<long>& checkpoint_times, double step_constant) {
    BoundReport rep;
    rep.mixing = solve_mixing_time(terms, sigma2_P0, T, n);
    const double a = step_constant > 0.0
                         ? step_constant
                         : radius * std::sqrt(1.0 - sigma2_P0) / lipschitz;
    std::vector<double> alphas(T);
    for (long t = 1; t <= T; ++t) alphas[t - 1] = a / std::sqrt(static_cast<double>(t));
    rep.net_bound = net_bound(rep.mixing.delta_star, alphas, lipschitz, T);
    rep.opt_bound = opt_bound(radius, lipschitz, alphas, T);
    rep.thm2_bound_at_T = thm2_bound(radius, lipschitz, sigma2_P0, rep.mixing.delta_star, T, a);
    for (long t : checkpoint_times)
        rep.thm2_bound_series.emplace_back(
            t, thm2_bound(radius, lipschitz, sigma2_P0, rep.mixing.delta_star, t, a));
    rep.prop3_scale = prop3_convergence_time(epsilon, sigma2_P0, terms);
    for (double v : terms) rep.total_terms += v;
    rep.alpha_coeff = std::min(1.0, std::max(0.0, 1.0 - rep.total_terms / sigma2_P0));
    return rep;
}

}  // namespace ddanet::theory
