#include "ddanet/design.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ddanet/rng.hpp"

namespace ddanet::design {

std::string mode_name(Mode m) { return m == Mode::C1 ? "C1" : "C2"; }

Mode parse_mode(const std::string& s) {
    if (s == "C1") return Mode::C1;
    if (s == "C2") return Mode::C2;
    throw std::invalid_argument("parse_mode: unknown constraint mode " + s);
}

SelectionProblem make_problem(const Graph& base, const CostModel& cost, double gamma,
                              Mode mode, int k) {
    SelectionProblem p;
    p.base = base;
    p.candidates = candidate_edges(base);
    p.costs = edge_costs(base, p.candidates, cost);
    for (double c : p.costs)
        if (!(c > 0.0)) throw std::invalid_argument("make_problem: costs must be positive");
    if (gamma < 0.0) throw std::invalid_argument("make_problem: gamma must be nonnegative");
    p.gamma = gamma;
    p.mode = mode;
    if (mode == Mode::C2 && (k < 0 || k > static_cast<int>(p.candidates.size())))
        throw std::invalid_argument("make_problem: k outside [0, K]");
    p.k = k;
    return p;
}

namespace {

void check_box(const SelectionProblem& p, const std::vector<double>& w) {
    if (w.size() != p.candidates.size())
        throw std::invalid_argument("design: weight vector length != K");
    for (double x : w)
        if (x < -1e-12 || x > 1.0 + 1e-12)
            throw std::invalid_argument("design: weights outside the unit box");
}

// phi, its subgradient, and the eigenvector behind both, from one eigensolve
struct PhiEval {
    double phi;
    std::vector<double> grad;
    std::vector<double> y;
};

PhiEval eval_phi(const SelectionProblem& p, const std::vector<double>& w, uint64_t seed,
                 const std::vector<double>* warm) {
    const int n = p.base.n;
    PowerOpts opts;
    opts.seed = seed;
    opts.warm_start = warm;
    opts.detect_degenerate = false;
    const PowerResult top = top_eig_deflated(design_mixing_matrix(p, w), opts);
    PhiEval out;
    out.y = top.pair.vector;
    out.phi = n * top.pair.value;
    out.grad.resize(w.size());
    for (size_t l = 0; l < w.size(); ++l) {
        const double diff = out.y[p.candidates[l].i] - out.y[p.candidates[l].j];
        out.grad[l] = -diff * diff + p.gamma * p.costs[l];
        out.phi += p.gamma * p.costs[l] * w[l];
    }
    return out;
}

}  // namespace

SymMatrix weighted_laplacian(const SelectionProblem& p, const std::vector<double>& w) {
    SymMatrix L = laplacian(p.base);
    for (size_t l = 0; l < w.size(); ++l) {
        if (w[l] == 0.0) continue;
        const EdgeVec& e = p.candidates[l];
        L.add(e.i, e.i, w[l]);
        L.add(e.j, e.j, w[l]);
        L.add(e.i, e.j, -w[l]);
    }
    return L;
}

SymMatrix design_mixing_matrix(const SelectionProblem& p, const std::vector<double>& w) {
    const int n = p.base.n;
    SymMatrix L = weighted_laplacian(p, w);
    SymMatrix P = SymMatrix::identity(n);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) P.set(i, j, P(i, j) - inv_n * L(i, j));
    return P;
}

double objective_phi(const SelectionProblem& p, const std::vector<double>& w, uint64_t eig_seed) {
    check_box(p, w);
    return eval_phi(p, w, eig_seed, nullptr).phi;
}

std::vector<double> subgradient_phi(const SelectionProblem& p, const std::vector<double>& w,
                                    uint64_t eig_seed) {
    check_box(p, w);
    return eval_phi(p, w, eig_seed, nullptr).grad;
}

std::vector<double> project_box(std::vector<double> v) {
    for (double& x : v) x = std::min(1.0, std::max(0.0, x));
    return v;
}

std::vector<double> project_capped_simplex(const std::vector<double>& v, int k) {
    const int K = static_cast<int>(v.size());
    if (k < 0 || k > K) throw std::invalid_argument("project_capped_simplex: k outside [0, K]");
    if (K == 0) return {};
    if (k == 0) return std::vector<double>(K, 0.0);
    if (k == K) return std::vector<double>(K, 1.0);

    const auto h = [&](double mu) {
        double s = 0.0;
        for (double x : v) s += std::min(1.0, std::max(0.0, x - mu));
        return s - static_cast<double>(k);
    };

    double lo = *std::min_element(v.begin(), v.end()) - 1.0;  // h(lo) = K - k >= 0
    double hi = *std::max_element(v.begin(), v.end());        // h(hi) = -k <= 0

    const auto breakpoints_inside = [&](double a, double b) {
        int count = 0;
        for (double x : v) {
            if (x > a && x < b) ++count;
            if (x - 1.0 > a && x - 1.0 < b) ++count;
        }
        return count;
    };

    double mu = 0.0;
    bool hit_root = false;
    int guard = 0;
    while (breakpoints_inside(lo, hi) > 0) {
        if (++guard > 500) break;  // bracket width is far below breakpoint spacing by now
        const double mid = 0.5 * (lo + hi);
        const double hm = h(mid);
        if (hm == 0.0) {
            mu = mid;
            hit_root = true;
            break;
        }
        if (hm > 0.0)
            lo = mid;
        else
            hi = mid;
    }

    if (!hit_root) {
        // On a breakpoint-free bracket h is affine; the clamp state of every
        // entry is fixed for mu strictly inside it, so the multiplier has a
        // closed form over the interior set.
        double sum_interior = 0.0;
        int interior = 0, ones = 0;
        for (double x : v) {
            if (x - 1.0 >= hi)
                ++ones;  // stays clamped at 1
            else if (x <= lo)
                ;  // stays clamped at 0
            else {
                sum_interior += x;
                ++interior;
            }
        }
        if (interior > 0)
            mu = (sum_interior + static_cast<double>(ones - k)) / static_cast<double>(interior);
        else
            mu = 0.5 * (lo + hi);  // h constant and equal to zero on the bracket
    }

    std::vector<double> w(v);
    for (double& x : w) x = std::min(1.0, std::max(0.0, x - mu));
    const double resid = std::accumulate(w.begin(), w.end(), 0.0) - static_cast<double>(k);
    if (std::fabs(resid) > 1e-10)
        throw std::runtime_error("project_capped_simplex: multiplier equation not solved");
    return w;
}

SelectionResult projected_subgradient_solve(const SelectionProblem& p, const SolveOpts& opts) {
    if (opts.iters < 1) throw std::invalid_argument("projected_subgradient_solve: iters >= 1");
    const int K = static_cast<int>(p.candidates.size());
    SelectionResult res;
    if (K == 0) {
        res.objective_trace = {objective_phi(p, {})};
        return res;
    }

    std::vector<double> w(K, 0.5);
    if (p.mode == Mode::C2) w = project_capped_simplex(w, p.k);

    std::vector<double> best_w = w;
    double best_phi = 0.0;
    std::vector<double> warm;

    for (int l = 0; l <= opts.iters; ++l) {
        PhiEval ev = eval_phi(p, w, derive_seed(opts.seed, l), warm.empty() ? nullptr : &warm);
        warm = ev.y;
        res.objective_trace.push_back(ev.phi);
        if (l == 0 || ev.phi < best_phi) {
            best_phi = ev.phi;
            best_w = w;
        }
        if (l == opts.iters) break;
        const double kappa = opts.step_scale / std::sqrt(static_cast<double>(l + 1));
        for (int i = 0; i < K; ++i) w[i] -= kappa * ev.grad[i];
        w = p.mode == Mode::C1 ? project_box(std::move(w)) : project_capped_simplex(w, p.k);
    }

    res.w_relaxed = best_w;
    res.w_binary = round_selection(best_w, p.mode, opts.rho, p.k);
    for (int l = 0; l < K; ++l)
        if (res.w_binary[l]) res.selected_edges.push_back(p.candidates[l]);
    return res;
}

std::vector<uint8_t> round_selection(const std::vector<double>& w_relaxed, Mode mode,
                                     double rho, int k) {
    const int K = static_cast<int>(w_relaxed.size());
    std::vector<uint8_t> w(K, 0);
    if (mode == Mode::C1) {
        for (int l = 0; l < K; ++l) w[l] = w_relaxed[l] - rho >= 0.0 ? 1 : 0;
    } else {
        if (k < 0 || k > K) throw std::invalid_argument("round_selection: k outside [0, K]");
        std::vector<int> order(K);
        for (int l = 0; l < K; ++l) order[l] = l;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return w_relaxed[a] != w_relaxed[b] ? w_relaxed[a] > w_relaxed[b] : a < b;
        });
        for (int r = 0; r < k; ++r) w[order[r]] = 1;
    }
    return w;
}

std::vector<EdgeVec> greedy_select(const SelectionProblem& p, int budget, uint64_t eig_seed) {
    const int K = static_cast<int>(p.candidates.size());
    if (budget < 0 || budget > K)
        throw std::invalid_argument("greedy_select: budget outside [0, K]");
    std::vector<double> w(K, 0.0);
    std::vector<char> taken(K, 0);
    std::vector<EdgeVec> picks;
    picks.reserve(budget);
    std::vector<double> warm;
    for (int t = 0; t < budget; ++t) {
        PowerOpts opts;
        opts.seed = derive_seed(eig_seed, t);
        opts.warm_start = warm.empty() ? nullptr : &warm;
        opts.detect_degenerate = false;
        const PowerResult fied = fiedler_pair(weighted_laplacian(p, w), opts);
        warm = fied.pair.vector;
        int best = -1;
        double best_score = 0.0;
        for (int l = 0; l < K; ++l) {
            if (taken[l]) continue;
            const double diff = fied.pair.vector[p.candidates[l].i] - fied.pair.vector[p.candidates[l].j];
            const double score = diff * diff - p.gamma * p.costs[l];
            if (best < 0 || score > best_score) {
                best = l;
                best_score = score;
            }
        }
        taken[best] = 1;
        w[best] = 1.0;
        picks.push_back(p.candidates[best]);
    }
    return picks;
}

void save_selection(const std::string& path, const SelectionProblem& p, const SelectionResult& r) {
    std::ostringstream os;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", p.gamma);
    os << p.candidates.size() << " " << buf << " " << mode_name(p.mode) << " " << p.k << "\n";
    for (size_t l = 0; l < r.w_relaxed.size(); ++l) {
        std::snprintf(buf, sizeof(buf), "%.12g", r.w_relaxed[l]);
        os << (l ? " " : "") << buf;
    }
    os << "\n";
    for (size_t l = 0; l < r.w_binary.size(); ++l) os << (l ? " " : "") << int(r.w_binary[l]);
    os << "\n";
    std::ofstream f(path);
    if (!f) throw std::runtime_error("save_selection: cannot open " + path);
    f << os.str();
}

SelectionResult load_selection(const std::string& path, const SelectionProblem& p) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_selection: cannot open " + path);
    size_t K = 0;
    double gamma = 0.0;
    std::string mode;
    int k = 0;
    if (!(f >> K >> gamma >> mode >> k))
        throw std::runtime_error("load_selection: bad header in " + path);
    if (K != p.candidates.size())
        throw std::runtime_error("load_selection: K does not match the problem");
    SelectionResult r;
    r.w_relaxed.resize(K);
    for (size_t l = 0; l < K; ++l)
        if (!(f >> r.w_relaxed[l])) throw std::runtime_error("load_selection: truncated weights");
    r.w_binary.resize(K);
    for (size_t l = 0; l < K; ++l) {
        int b = 0;
        if (!(f >> b)) throw std::runtime_error("load_selection: truncated binary vector");
        r.w_binary[l] = static_cast<uint8_t>(b);
        if (b) r.selected_edges.push_back(p.candidates[l]);
    }
    return r;
}

}  // namespace ddanet::design
