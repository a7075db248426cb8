#include "ddanet/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ddanet/rng.hpp"

namespace ddanet {

void SymMatrix::matvec(const double* x, double* y) const {
    for (int i = 0; i < n_; ++i) {
        const double* row = a_.data() + static_cast<size_t>(i) * n_;
        double s = 0.0;
        for (int j = 0; j < n_; ++j) s += row[j] * x[j];
        y[i] = s;
    }
}

std::vector<double> SymMatrix::matvec(const std::vector<double>& x) const {
    std::vector<double> y(n_);
    matvec(x.data(), y.data());
    return y;
}

double SymMatrix::frob_norm() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
}

double SymMatrix::off_diag_norm() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            if (i != j) {
                const double v = (*this)(i, j);
                s += v * v;
            }
    return std::sqrt(s);
}

void canonical_sign(std::vector<double>& v) {
    for (double x : v) {
        if (std::fabs(x) > 1e-14) {
            if (x < 0.0)
                for (double& y : v) y = -y;
            return;
        }
    }
}

namespace {

double vec_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

void project_against_ones(std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    for (double& x : v) x -= mean;
}

// y = (P - 1 1^T / n) x
void deflated_apply(const SymMatrix& P, const std::vector<double>& x, std::vector<double>& y) {
    P.matvec(x.data(), y.data());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    for (double& v : y) v -= mean;
}

std::vector<double> seeded_start(int n, uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v = rng.gaussian_vector(n);
    project_against_ones(v);
    double nv = vec_norm(v);
    while (nv < 1e-12) {  // astronomically unlikely; reseed
        v = Rng(splitmix64(seed)).gaussian_vector(n);
        project_against_ones(v);
        nv = vec_norm(v);
    }
    for (double& x : v) x /= nv;
    return v;
}

struct PowerCore {
    double value = 0.0;
    double second = 0.0;  // Ritz estimate of the runner-up eigenvalue
    std::vector<double> vec;
    int iters = 0;
    bool pair_resolved = false;
};

// Power iteration on a two-dimensional subspace with a Rayleigh-Ritz step per
// round. The leading Ritz value converges at the (lambda_3/lambda_1)^2 rate,
// so a nearly repeated top pair does not slow the value down, and the gap
// between the two Ritz values exposes degeneracy directly.
PowerCore power_on_deflated(const SymMatrix& P, const PowerOpts& opts) {
    const int n = P.n();
    PowerCore out;
    if (n == 1) {
        out.vec = {1.0};
        return out;  // deflation annihilates everything
    }
    std::vector<double> v1;
    if (opts.warm_start != nullptr && static_cast<int>(opts.warm_start->size()) == n) {
        v1 = *opts.warm_start;
        project_against_ones(v1);
        const double nv = vec_norm(v1);
        if (nv > 1e-12)
            for (double& x : v1) x /= nv;
        else
            v1 = seeded_start(n, opts.seed);
    } else {
        v1 = seeded_start(n, opts.seed);
    }
    std::vector<double> v2 = seeded_start(n, splitmix64(opts.seed ^ 0x9E37ULL));
    const bool block2 = n >= 3;
    if (block2) {
        double d = 0.0;
        for (int i = 0; i < n; ++i) d += v1[i] * v2[i];
        for (int i = 0; i < n; ++i) v2[i] -= d * v1[i];
        const double nv = vec_norm(v2);
        if (nv > 1e-12)
            for (double& x : v2) x /= nv;
    }

    const double annihilated = 1e-14 * std::max(1.0, P.frob_norm());
    const int cap = opts.max_iters > 0 ? opts.max_iters : 100000;
    std::vector<double> w1(n), w2(n);
    double theta_prev = 0.0;
    for (int it = 1; it <= cap; ++it) {
        out.iters = it;
        deflated_apply(P, v1, w1);
        double theta1 = 0.0;
        for (int i = 0; i < n; ++i) theta1 += v1[i] * w1[i];
        if (vec_norm(w1) <= annihilated) {  // operator vanishes on the subspace
            out.value = theta1;
            out.vec = v1;
            out.pair_resolved = n >= 3;
            out.second = theta1;
            return out;
        }
        if (block2) {
            deflated_apply(P, v2, w2);
            // 2x2 Rayleigh-Ritz on span{v1, v2}
            double s12 = 0.0, s22 = 0.0;
            for (int i = 0; i < n; ++i) {
                s12 += v1[i] * w2[i];
                s22 += v2[i] * w2[i];
            }
            const double tr = theta1 + s22;
            const double det = theta1 * s22 - s12 * s12;
            const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
            const double hi = tr / 2.0 + disc;
            const double lo = tr / 2.0 - disc;
            // rotate the subspace images into Ritz order; take the eigenvector
            // branch whose leading entry stays away from 0/0 once the block
            // has (nearly) diagonalized, otherwise noise re-mixes a converged
            // vector
            double c, s;
            if (theta1 >= s22) {
                c = hi - s22;
                s = s12;
            } else {
                c = s12;
                s = hi - theta1;
            }
            const double rn = std::sqrt(c * c + s * s);
            if (rn > 1e-300) {
                c /= rn;
                s /= rn;
            } else {
                c = 1.0;
                s = 0.0;
            }
            std::vector<double>& r1 = w1;
            std::vector<double>& r2 = w2;
            for (int i = 0; i < n; ++i) {
                const double a = w1[i], b = w2[i];
                r1[i] = c * a + s * b;
                r2[i] = -s * a + c * b;
            }
            theta1 = hi;
            out.second = lo;
            // re-orthonormalize for the next round
            double n1 = vec_norm(r1);
            if (n1 <= annihilated) {
                out.value = hi;
                for (int i = 0; i < n; ++i) v1[i] = c * v1[i] + s * v2[i];
                const double nv = vec_norm(v1);
                if (nv > 1e-300)
                    for (double& x : v1) x /= nv;
                out.vec = v1;
                return out;
            }
            for (int i = 0; i < n; ++i) v1[i] = r1[i] / n1;
            double d = 0.0;
            for (int i = 0; i < n; ++i) d += v1[i] * r2[i];
            for (int i = 0; i < n; ++i) r2[i] -= d * v1[i];
            double n2 = vec_norm(r2);
            if (n2 <= 1e-300) {
                v2 = seeded_start(n, splitmix64(opts.seed + it));
                d = 0.0;
                for (int i = 0; i < n; ++i) d += v1[i] * v2[i];
                for (int i = 0; i < n; ++i) v2[i] -= d * v1[i];
                n2 = vec_norm(v2);
            } else {
                v2 = r2;
            }
            for (double& x : v2) x /= n2;
            out.pair_resolved = true;
        } else {
            const double wn = vec_norm(w1);
            for (int i = 0; i < n; ++i) v1[i] = w1[i] / wn;
        }
        if (it % 64 == 0) {
            project_against_ones(v1);  // shed accumulated roundoff along 1
            const double nv = vec_norm(v1);
            for (double& x : v1) x /= nv;
        }
        if (it > 1 && std::fabs(theta1 - theta_prev) < opts.tol) {
            theta_prev = theta1;
            break;
        }
        theta_prev = theta1;
    }
    out.value = theta_prev;
    out.vec = v1;
    return out;
}

}  // namespace

std::vector<EigPair> full_spectrum(const SymMatrix& A, double tol) {
    const int n = A.n();
    if (n == 0) return {};
    SymMatrix B = A;
    std::vector<double> V(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) V[static_cast<size_t>(i) * n + i] = 1.0;

    const double scale = std::max(A.frob_norm(), 1e-300);
    const int max_sweeps = 64;
    int sweep = 0;
    while (B.off_diag_norm() > tol * scale) {
        if (++sweep > max_sweeps)
            throw std::runtime_error("full_spectrum: Jacobi failed to converge (ill-formed input?)");
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = B(p, q);
                if (std::fabs(apq) <= 1e-300 * scale) continue;
                const double app = B(p, p);
                const double aqq = B(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (int k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double bkp = B(k, p);
                    const double bkq = B(k, q);
                    B.set(k, p, c * bkp - s * bkq);
                    B.set(k, q, s * bkp + c * bkq);
                }
                // the (p,p),(q,q),(p,q) entries take the two-sided update
                const double bpp = c * c * app - 2.0 * s * c * apq + s * s * aqq;
                const double bqq = s * s * app + 2.0 * s * c * apq + c * c * aqq;
                B.set(p, p, bpp);
                B.set(q, q, bqq);
                B.set(p, q, 0.0);

                for (int k = 0; k < n; ++k) {
                    double* vk = V.data() + static_cast<size_t>(k) * n;
                    const double vkp = vk[p];
                    const double vkq = vk[q];
                    vk[p] = c * vkp - s * vkq;
                    vk[q] = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return B(a, a) > B(b, b); });

    std::vector<EigPair> out(n);
    for (int idx = 0; idx < n; ++idx) {
        const int col = order[idx];
        out[idx].value = B(col, col);
        out[idx].vector.resize(n);
        for (int k = 0; k < n; ++k) out[idx].vector[k] = V[static_cast<size_t>(k) * n + col];
        canonical_sign(out[idx].vector);
    }
    return out;
}

PowerResult top_eig_deflated(const SymMatrix& P, const PowerOpts& opts) {
    PowerResult res;
    PowerCore top = power_on_deflated(P, opts);
    res.pair.value = top.value;
    res.pair.vector = top.vec;
    res.iters = top.iters;
    canonical_sign(res.pair.vector);
    if (opts.detect_degenerate && top.pair_resolved &&
        std::fabs(top.value - top.second) <= 1e-10 * std::max(1.0, std::fabs(top.value)))
        res.degenerate = true;
    return res;
}

PowerResult fiedler_pair(const SymMatrix& L, const PowerOpts& opts) {
    const int n = L.n();
    SymMatrix P = SymMatrix::identity(n);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) P.set(i, j, P(i, j) - inv_n * L(i, j));
    PowerResult res = top_eig_deflated(P, opts);
    res.pair.value = static_cast<double>(n) - static_cast<double>(n) * res.pair.value;
    return res;
}

double spectral_gap(const SymMatrix& L) {
    const int n = L.n();
    if (n < 3) throw std::invalid_argument("spectral_gap: need n >= 3");
    const std::vector<EigPair> eigs = full_spectrum(L);
    return eigs[n - 3].value - eigs[n - 2].value;
}

double sigma2(const SymMatrix& P) {
    const int n = P.n();
    if (n < 2) return 0.0;
    const std::vector<EigPair> eigs = full_spectrum(P);
    return eigs[1].value;
}

double sigma2_general(const std::vector<double>& a, int n) {
    if (n < 2) return 0.0;
    SymMatrix G(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k)
                s += a[static_cast<size_t>(k) * n + i] * a[static_cast<size_t>(k) * n + j];
            G.set(i, j, s);
        }
    }
    const std::vector<EigPair> eigs = full_spectrum(G);
    return std::sqrt(std::max(0.0, eigs[1].value));
}

}  // namespace ddanet
