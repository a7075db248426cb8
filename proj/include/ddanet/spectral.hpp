#ifndef DDANET_SPECTRAL_HPP
#define DDANET_SPECTRAL_HPP

#include <cstdint>
#include <vector>

namespace ddanet {

// Dense symmetric matrix. Full row-major storage, but both triangles are
// written together so symmetry is exact by construction.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n, 0.0) {}

    static SymMatrix identity(int n) {
        SymMatrix m(n);
        for (int i = 0; i < n; ++i) m.a_[static_cast<size_t>(i) * n + i] = 1.0;
        return m;
    }

    int n() const { return n_; }

    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }

    void set(int i, int j, double v) {
        a_[static_cast<size_t>(i) * n_ + j] = v;
        a_[static_cast<size_t>(j) * n_ + i] = v;
    }

    void add(int i, int j, double v) {
        a_[static_cast<size_t>(i) * n_ + j] += v;
        if (i != j) a_[static_cast<size_t>(j) * n_ + i] += v;
    }

    void matvec(const double* x, double* y) const;
    std::vector<double> matvec(const std::vector<double>& x) const;

    double frob_norm() const;
    double off_diag_norm() const;

    const double* data() const { return a_.data(); }
    double* data() { return a_.data(); }

private:
    int n_ = 0;
    std::vector<double> a_;
};

struct EigPair {
    double value = 0.0;
    std::vector<double> vector;  // unit norm, first nonzero component positive
};

struct PowerOpts {
    uint64_t seed = 0x5EEDULL;   // start vector is a seeded unit vector, projected against 1
    double tol = 1e-12;          // stop when successive Rayleigh quotients differ by less
    int max_iters = 0;           // 0 -> ceil(10 n log n)
    const std::vector<double>* warm_start = nullptr;
    bool detect_degenerate = true;
};

struct PowerResult {
    EigPair pair;
    int iters = 0;
    bool degenerate = false;  // top pair of the deflated matrix nearly repeated;
                              // value still valid, vector is some top-eigenspace unit vector
};

// Full eigendecomposition by cyclic Jacobi rotations; eigenvalues sorted in
// decreasing order. Throws if the off-diagonal norm has not dropped below
// tol * ||A||_F after the sweep cap. Serves as the oracle for every other
// spectral routine here.
std::vector<EigPair> full_spectrum(const SymMatrix& A, double tol = 1e-12);

// Largest eigenpair of P - (1/n) 1 1^T by power iteration. For a doubly
// stochastic symmetric PSD P this is (sigma2(P), its eigenvector).
PowerResult top_eig_deflated(const SymMatrix& P, const PowerOpts& opts = {});

// Algebraic connectivity lambda_{n-1}(L) and its eigenvector, computed through
// the identity lambda_{n-1}(L) = n - n * lambda_1(I - L/n - 1 1^T/n).
PowerResult fiedler_pair(const SymMatrix& L, const PowerOpts& opts = {});

// lambda_{n-2}(L) - lambda_{n-1}(L); requires n >= 3.
double spectral_gap(const SymMatrix& L);

// Second-largest singular value of a symmetric PSD matrix (= second-largest
// eigenvalue). Computed from the full decomposition.
double sigma2(const SymMatrix& P);

// Second-largest singular value of a (possibly non-symmetric) square matrix A
// given row-major; via the top two eigenvalues of A^T A. Used for products of
// mixing matrices.
double sigma2_general(const std::vector<double>& a, int n);

// first nonzero component made positive, in place
void canonical_sign(std::vector<double>& v);

}  // namespace ddanet

#endif
