#include "ddanet/dda.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ddanet/rng.hpp"

namespace ddanet::engine {

ProblemInstance make_instance(int p, std::vector<double> y, std::vector<std::vector<double>> b,
                              double radius) {
    ProblemInstance inst;
    inst.p = p;
    inst.n = static_cast<int>(y.size());
    if (b.size() != y.size()) throw std::invalid_argument("make_instance: y/b length mismatch");
    if (!(radius > 0.0)) throw std::invalid_argument("make_instance: radius must be positive");
    for (const auto& row : b) {
        if (static_cast<int>(row.size()) != p)
            throw std::invalid_argument("make_instance: b row dimension != p");
        double nrm = 0.0;
        for (double v : row) nrm += v * v;
        inst.lipschitz = std::max(inst.lipschitz, std::sqrt(nrm));
    }
    inst.y = std::move(y);
    inst.b = std::move(b);
    inst.radius = radius;
    return inst;
}

ProblemInstance random_l1_instance(int n, int p, double radius, uint64_t seed) {
    Rng rng(seed);
    std::vector<double> y(n);
    std::vector<std::vector<double>> b(n, std::vector<double>(p));
    for (int i = 0; i < n; ++i) {
        y[i] = rng.normal();
        for (int k = 0; k < p; ++k) b[i][k] = rng.normal();
    }
    return make_instance(p, std::move(y), std::move(b), radius);
}

double local_objective(const ProblemInstance& inst, int i, const double* x) {
    double r = inst.y[i];
    for (int k = 0; k < inst.p; ++k) r -= inst.b[i][k] * x[k];
    return std::fabs(r);
}

double full_objective(const ProblemInstance& inst, const double* x) {
    double s = 0.0;
    for (int i = 0; i < inst.n; ++i) s += local_objective(inst, i, x);
    return s / static_cast<double>(inst.n);
}

std::vector<double> prox_step(const std::vector<double>& z, double alpha, double radius) {
    if (!(alpha > 0.0)) throw std::invalid_argument("prox_step: alpha must be positive");
    std::vector<double> x(z.size());
    double zn = 0.0;
    for (double v : z) zn += v * v;
    zn = std::sqrt(zn);
    if (alpha * zn <= radius) {
        for (size_t k = 0; k < z.size(); ++k) x[k] = -alpha * z[k];
    } else {
        const double scale = radius / zn;
        for (size_t k = 0; k < z.size(); ++k) x[k] = -scale * z[k];
    }
    return x;
}

std::vector<double> l1_subgradient(const std::vector<double>& x, double y_i,
                                   const std::vector<double>& b_i) {
    double r = y_i;
    for (size_t k = 0; k < b_i.size(); ++k) r -= b_i[k] * x[k];
    std::vector<double> g(b_i.size(), 0.0);
    if (r > 0.0)
        for (size_t k = 0; k < b_i.size(); ++k) g[k] = -b_i[k];
    else if (r < 0.0)
        for (size_t k = 0; k < b_i.size(); ++k) g[k] = b_i[k];
    return g;
}

DdaState make_state(int n, int p) {
    DdaState s;
    s.n = n;
    s.p = p;
    s.z.assign(static_cast<size_t>(n) * p, 0.0);
    s.x.assign(static_cast<size_t>(n) * p, 0.0);
    s.xsum.assign(static_cast<size_t>(n) * p, 0.0);
    return s;
}

std::vector<double> running_average(const DdaState& s, int i) {
    std::vector<double> avg(s.p, 0.0);
    if (s.t == 0) return avg;
    const double* src = s.xsum.data() + static_cast<size_t>(i) * s.p;
    for (int k = 0; k < s.p; ++k) avg[k] = src[k] / static_cast<double>(s.t);
    return avg;
}

MixRows mix_rows(const SymMatrix& P) {
    MixRows rows(P.n());
    for (int i = 0; i < P.n(); ++i)
        for (int j = 0; j < P.n(); ++j)
            if (P(i, j) != 0.0) rows[i].emplace_back(j, P(i, j));
    return rows;
}

void dda_step(DdaState& s, const MixRows& rows, const ProblemInstance& inst, double alpha) {
    if (static_cast<int>(rows.size()) != s.n || inst.n != s.n || inst.p != s.p)
        throw std::invalid_argument("dda_step: dimension mismatch");
    const int p = s.p;
    std::vector<double> znext(static_cast<size_t>(s.n) * p, 0.0);
    for (int i = 0; i < s.n; ++i) {
        double* dst = znext.data() + static_cast<size_t>(i) * p;
        for (const auto& [j, w] : rows[i]) {
            const double* src = s.z.data() + static_cast<size_t>(j) * p;
            for (int k = 0; k < p; ++k) dst[k] += w * src[k];
        }
        // subgradient at the current primal iterate
        double r = inst.y[i];
        const double* xi = s.x.data() + static_cast<size_t>(i) * p;
        const double* bi = inst.b[i].data();
        for (int k = 0; k < p; ++k) r -= bi[k] * xi[k];
        if (r > 0.0)
            for (int k = 0; k < p; ++k) dst[k] -= bi[k];
        else if (r < 0.0)
            for (int k = 0; k < p; ++k) dst[k] += bi[k];
    }
    s.z.swap(znext);
    for (int i = 0; i < s.n; ++i) {
        double* xi = s.x.data() + static_cast<size_t>(i) * p;
        const double* zi = s.z.data() + static_cast<size_t>(i) * p;
        double zn = 0.0;
        for (int k = 0; k < p; ++k) zn += zi[k] * zi[k];
        zn = std::sqrt(zn);
        const double scale = alpha * zn <= inst.radius ? -alpha : -inst.radius / zn;
        double* sum_i = s.xsum.data() + static_cast<size_t>(i) * p;
        for (int k = 0; k < p; ++k) {
            xi[k] = scale * zi[k];
            sum_i[k] += xi[k];
        }
    }
    s.t += 1;
}

std::vector<EdgeVec> greedy_schedule(const std::vector<EdgeVec>& selected, const Graph& base,
                                     uint64_t eig_seed) {
    std::vector<EdgeVec> order;
    order.reserve(selected.size());
    std::vector<char> taken(selected.size(), 0);
    std::vector<Edge> edges = base.edges;
    std::vector<double> warm;
    for (size_t t = 0; t < selected.size(); ++t) {
        const Graph g = make_graph(base.n, edges);
        PowerOpts opts;
        opts.seed = derive_seed(eig_seed, t);
        opts.warm_start = warm.empty() ? nullptr : &warm;
        opts.detect_degenerate = false;
        const PowerResult fied = fiedler_pair(laplacian(g), opts);
        warm = fied.pair.vector;
        int best = -1;
        double best_score = 0.0;
        for (size_t l = 0; l < selected.size(); ++l) {
            if (taken[l]) continue;
            const double diff = fied.pair.vector[selected[l].i] - fied.pair.vector[selected[l].j];
            const double score = diff * diff;
            const bool wins = best < 0 || score > best_score ||
                              (score == best_score && to_edge(selected[l]) < to_edge(selected[best]));
            if (wins) {
                best = static_cast<int>(l);
                best_score = score;
            }
        }
        taken[best] = 1;
        order.push_back(selected[best]);
        edges.push_back(to_edge(selected[best]));
    }
    return order;
}

std::vector<std::pair<long, Edge>> materialize_schedule(const ScheduleSpec& spec, long T,
                                                        const Graph& base, uint64_t eig_seed) {
    if (spec.delta < 1) throw std::invalid_argument("materialize_schedule: Delta >= 1");
    const std::vector<EdgeVec> order = spec.ordering == Ordering::greedy
                                           ? greedy_schedule(spec.selected, base, eig_seed)
                                           : spec.selected;
    std::vector<std::pair<long, Edge>> additions;
    const long slots = T / spec.delta;
    for (long q = 1; q <= slots && q <= static_cast<long>(order.size()); ++q)
        additions.emplace_back((q - 1) * spec.delta + 1, to_edge(order[q - 1]));
    return additions;
}

NetworkTimeline build_timeline(const Graph& base, const std::vector<std::pair<long, Edge>>& additions,
                               int delta_max_override) {
    const DynamicNetwork net = make_dynamic_network(base, additions, delta_max_override);
    const int n = net.base.n;
    NetworkTimeline tl;
    tl.n = n;
    tl.delta_max = net.delta_max;
    std::vector<Edge> edges = net.base.edges;
    long added = 0;
    long t_start = 0;
    for (size_t idx = 0; idx <= net.additions.size(); ++idx) {
        const Graph g = make_graph(n, edges);
        const SymMatrix L = laplacian(g);
        TimelineSegment seg;
        seg.t_start = t_start;
        seg.edges_added = added;
        if (n >= 2) {
            const std::vector<EigPair> eigs = full_spectrum(L);
            seg.lambda_n1 = eigs[n - 2].value;
        } else {
            seg.lambda_n1 = 0.0;
        }
        seg.sigma2 = n >= 2 ? 1.0 - seg.lambda_n1 / (2.0 * (1.0 + net.delta_max)) : 0.0;
        seg.rows = mix_rows(consensus_matrix(L, net.delta_max));
        tl.segments.push_back(std::move(seg));
        if (idx == net.additions.size()) break;
        t_start = net.additions[idx].first;
        edges.push_back(net.additions[idx].second);
        ++added;
    }
    return tl;
}

Trajectory run_dda(const ProblemInstance& inst, const Graph& base, const ScheduleSpec& spec,
                   const RunOpts& opts) {
    if (opts.T < 1) throw std::invalid_argument("run_dda: T >= 1");
    if (!is_connected(base)) throw std::invalid_argument("run_dda: base graph must be connected");
    if (spec.delta < 1 || spec.delta > opts.T)
        throw std::invalid_argument("run_dda: Delta outside [1, T]");
    const auto additions = materialize_schedule(spec, opts.T, base);
    return run_dda(inst, build_timeline(base, additions, opts.delta_max_override), opts);
}

Trajectory run_dda(const ProblemInstance& inst, const NetworkTimeline& timeline,
                   const RunOpts& opts) {
    if (opts.T < 1) throw std::invalid_argument("run_dda: T >= 1");
    if (inst.n != timeline.n) throw std::invalid_argument("run_dda: instance size != node count");
    const std::vector<TimelineSegment>& segs = timeline.segments;

    Trajectory traj;
    traj.T = opts.T;
    traj.delta_max = timeline.delta_max;
    traj.sigma2_P0 = segs.front().sigma2;
    traj.f_star = opts.f_star;
    const double a = opts.step_constant > 0.0
                         ? opts.step_constant
                         : inst.radius * std::sqrt(1.0 - traj.sigma2_P0) / inst.lipschitz;
    traj.step_constant = a;
    const long cadence = opts.checkpoint_every > 0 ? opts.checkpoint_every
                                                   : std::max(1L, opts.T / 1000);

    DdaState state = make_state(inst.n, inst.p);
    size_t seg_idx = 0;
    std::vector<double> xbar(inst.p);
    for (long t = 0; t < opts.T; ++t) {
        while (seg_idx + 1 < segs.size() && segs[seg_idx + 1].t_start <= t) ++seg_idx;
        const double alpha = a / std::sqrt(static_cast<double>(std::max(t, 1L)));
        dda_step(state, segs[seg_idx].rows, inst, alpha);

        const long s = t + 1;
        if (s % cadence == 0 || s == opts.T) {
            size_t at = seg_idx;
            while (at + 1 < segs.size() && segs[at + 1].t_start <= s) ++at;
            CheckRow row;
            row.t = s;
            double worst = 0.0;
            for (int i = 0; i < inst.n; ++i) {
                const double* sum_i = state.xsum.data() + static_cast<size_t>(i) * inst.p;
                for (int k = 0; k < inst.p; ++k) xbar[k] = sum_i[k] / static_cast<double>(s);
                worst = std::max(worst, full_objective(inst, xbar.data()));
            }
            row.max_fhat = worst;
            row.max_regret = worst - opts.f_star;
            row.sigma2_Pt = segs[at].sigma2;
            row.lambda_n1_Lt = segs[at].lambda_n1;
            row.edges_added = segs[at].edges_added;
            traj.rows.push_back(row);
        }
    }
    traj.final_state = std::move(state);
    return traj;
}

std::vector<double> regret_series(const Trajectory& traj) {
    std::vector<double> r(traj.rows.size());
    for (size_t i = 0; i < traj.rows.size(); ++i) r[i] = traj.rows[i].max_regret;
    return r;
}

namespace {

// solve A x = rhs for SPD A of size p (tiny); returns false if not SPD
bool cholesky_solve(std::vector<double> A, std::vector<double>& rhs, int p) {
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = A[static_cast<size_t>(i) * p + j];
            for (int k = 0; k < j; ++k)
                s -= A[static_cast<size_t>(i) * p + k] * A[static_cast<size_t>(j) * p + k];
            if (i == j) {
                if (s <= 0.0) return false;
                A[static_cast<size_t>(i) * p + j] = std::sqrt(s);
            } else {
                A[static_cast<size_t>(i) * p + j] = s / A[static_cast<size_t>(j) * p + j];
            }
        }
    }
    for (int i = 0; i < p; ++i) {
        double s = rhs[i];
        for (int k = 0; k < i; ++k) s -= A[static_cast<size_t>(i) * p + k] * rhs[k];
        rhs[i] = s / A[static_cast<size_t>(i) * p + i];
    }
    for (int i = p - 1; i >= 0; --i) {
        double s = rhs[i];
        for (int k = i + 1; k < p; ++k) s -= A[static_cast<size_t>(k) * p + i] * rhs[k];
        rhs[i] = s / A[static_cast<size_t>(i) * p + i];
    }
    return true;
}

}  // namespace

OracleResult reference_optimum(const ProblemInstance& inst, long iters, uint64_t seed) {
    const int p = inst.p;
    OracleResult out;

    // Route 1: projected dual averaging on the full objective, best value and
    // a tail average over the final 10% of iterates.
    Rng rng(seed);
    std::vector<double> z(p);
    for (int k = 0; k < p; ++k) z[k] = 1e-9 * rng.normal();  // seed-dependent tie-break
    std::vector<double> x(p, 0.0), g(p), tail(p, 0.0);
    double f_best = full_objective(inst, x.data());
    std::vector<double> x_best = x;
    const long tail_from = iters - iters / 10;
    long tail_count = 0;
    for (long t = 1; t <= iters; ++t) {
        std::fill(g.begin(), g.end(), 0.0);
        for (int i = 0; i < inst.n; ++i) {
            double r = inst.y[i];
            const double* bi = inst.b[i].data();
            for (int k = 0; k < p; ++k) r -= bi[k] * x[k];
            if (r > 0.0)
                for (int k = 0; k < p; ++k) g[k] -= bi[k];
            else if (r < 0.0)
                for (int k = 0; k < p; ++k) g[k] += bi[k];
        }
        for (int k = 0; k < p; ++k) z[k] += g[k] / static_cast<double>(inst.n);
        const double alpha = inst.radius / (inst.lipschitz * std::sqrt(static_cast<double>(t)));
        x = prox_step(z, alpha, inst.radius);
        const double f = full_objective(inst, x.data());
        if (f < f_best) {
            f_best = f;
            x_best = x;
        }
        if (t > tail_from) {
            for (int k = 0; k < p; ++k) tail[k] += x[k];
            ++tail_count;
        }
    }
    if (tail_count > 0) {
        for (int k = 0; k < p; ++k) tail[k] /= static_cast<double>(tail_count);
        const double f_tail = full_objective(inst, tail.data());
        if (f_tail < f_best) {
            f_best = f_tail;
            x_best = tail;
        }
    }
    out.f_dual_averaging = f_best;

    // Route 2: smoothing continuation; each smoothed problem is solved by
    // reweighted least squares on the p x p normal equations.
    std::vector<double> xs = x_best;
    for (double mu = 1.0; mu >= 1e-12; mu *= 0.1) {
        for (int it = 0; it < 200; ++it) {
            std::vector<double> A(static_cast<size_t>(p) * p, 0.0), rhs(p, 0.0);
            for (int i = 0; i < inst.n; ++i) {
                double r = inst.y[i];
                const double* bi = inst.b[i].data();
                for (int k = 0; k < p; ++k) r -= bi[k] * xs[k];
                const double wi = 1.0 / std::sqrt(r * r + mu * mu);
                for (int a2 = 0; a2 < p; ++a2) {
                    rhs[a2] += wi * inst.y[i] * bi[a2];
                    for (int b2 = 0; b2 < p; ++b2)
                        A[static_cast<size_t>(a2) * p + b2] += wi * bi[a2] * bi[b2];
                }
            }
            double tr = 0.0;
            for (int k = 0; k < p; ++k) tr += A[static_cast<size_t>(k) * p + k];
            for (int k = 0; k < p; ++k) A[static_cast<size_t>(k) * p + k] += 1e-14 * tr;
            std::vector<double> xnew = rhs;
            if (!cholesky_solve(A, xnew, p)) break;
            double delta = 0.0, nx = 0.0;
            for (int k = 0; k < p; ++k) {
                delta += (xnew[k] - xs[k]) * (xnew[k] - xs[k]);
                nx += xnew[k] * xnew[k];
            }
            xs = xnew;
            if (std::sqrt(delta) <= 1e-14 * (1.0 + std::sqrt(nx))) break;
        }
    }
    double nx = 0.0;
    for (double v : xs) nx += v * v;
    nx = std::sqrt(nx);
    if (nx > inst.radius)
        for (double& v : xs) v *= inst.radius / nx;  // keep the candidate feasible
    out.f_smoothed = full_objective(inst, xs.data());

    if (out.f_smoothed < out.f_dual_averaging) {
        out.f_star = out.f_smoothed;
        out.x_star = xs;
    } else {
        out.f_star = out.f_dual_averaging;
        out.x_star = x_best;
    }
    out.converged =
        std::fabs(out.f_dual_averaging - out.f_smoothed) <= 1e-3 * std::max(1.0, out.f_star);
    return out;
}

void save_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ostringstream os;
    os << "t,max_regret,sigma2_Pt,lambda_n1_Lt,edges_added_cumulative\n";
    char buf[160];
    for (const CheckRow& r : traj.rows) {
        std::snprintf(buf, sizeof(buf), "%ld,%.12g,%.12g,%.12g,%ld\n", r.t, r.max_regret,
                      r.sigma2_Pt, r.lambda_n1_Lt, r.edges_added);
        os << buf;
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp);
        if (!f) throw std::runtime_error("save_trajectory_csv: cannot open " + tmp);
        f << os.str();
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("save_trajectory_csv: rename failed for " + path);
}

}  // namespace ddanet::engine
