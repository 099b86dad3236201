#pragma once

// Small dense symmetric linear algebra, special functions, root finding,
// and the deterministic counter-based RNG used throughout.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fmb {

/// Error with a stable machine-readable code, surfaced as-is by the CLI.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

// ---------------------------------------------------------------------------
// RNG
// ---------------------------------------------------------------------------

/// Counter-based splittable generator: draw i of stream s under seed q is a
/// pure function of (q, s, i), so replicate streams are independent and any
/// draw sequence is reproducible on every platform without jump-ahead state.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream_id = 0)
        : seed_(seed), stream_(stream_id), counter_(0) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

    /// Uniform draw on the open interval (0,1).
    double uniform();
    /// Standard exponential via inversion, -log(U).
    double exponential();
    /// Standard normal (Box-Muller, one value per two uniforms).
    double normal();
    /// Uniform integer in [0, n). n = 0 is a domain error.
    std::size_t index(std::size_t n);

    std::uint64_t next_u64();

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_;
};

// ---------------------------------------------------------------------------
// Symmetric matrices
// ---------------------------------------------------------------------------

/// Dense symmetric matrix of small dimension (r + p <= ~16 in practice).
class SymMatrix {
public:
    SymMatrix() : dim_(0) {}
    explicit SymMatrix(std::size_t dim) : dim_(dim), a_(dim * dim, 0.0) {}

    /// Builds from a full row-major square matrix. Asymmetry beyond
    /// `sym_tol` (relative to the largest entry) is rejected; smaller
    /// asymmetry is averaged away.
    static SymMatrix from_dense(const std::vector<double>& a, std::size_t dim,
                                double sym_tol = 1e-12);

    static SymMatrix identity(std::size_t dim);

    std::size_t dim() const { return dim_; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
    void set(std::size_t i, std::size_t j, double v) {
        a_[i * dim_ + j] = v;
        a_[j * dim_ + i] = v;
    }
    const std::vector<double>& data() const { return a_; }

    std::vector<double> multiply(const std::vector<double>& x) const;
    double quad_form(const std::vector<double>& x) const;  // x' M x
    double max_abs() const;

private:
    std::size_t dim_;
    std::vector<double> a_;
};

struct EigenResult {
    std::vector<double> values;   // descending
    std::vector<double> vectors;  // column j (row-major, dim x dim) pairs with values[j]
};

/// Cyclic Jacobi sweeps; robust for the tiny dimensions we use.
/// Throws Error("eigen_no_convergence") if the off-diagonal residual fails
/// to fall below tol * max|m| within the sweep budget.
EigenResult sym_eigen(const SymMatrix& m, double tol = 1e-14, int max_sweeps = 64);

struct PseudoInverse {
    SymMatrix inverse;
    std::size_t rank;  // eigenvalues kept (nu)
};

/// Moore-Penrose inverse by eigen decomposition. Eigenvalues at or below
/// rank_tol * lambda_max are inverted as zero. An eigenvalue below
/// -rank_tol * lambda_max raises Error("not_psd").
PseudoInverse pseudo_inverse(const SymMatrix& m, double rank_tol = 1e-10);

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

/// Bessel J1: power series for |z| <= 25, Hankel asymptotics beyond.
double bessel_j1(double z);
double bessel_j0(double z);

double normal_cdf(double x);
double normal_quantile(double p);

double chi2_cdf(double x, int df);
double chi2_quantile(double p, int df);

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

/// Secant iteration from (x0, x1); once a sign-changing bracket is seen,
/// secant steps leaving it fall back to bisection. Converges when |f| < tol
/// or the bracket width < tol. Throws Error("no_root") with the last
/// iterate in the message after max_iter steps.
double secant_root(const std::function<double(double)>& f, double x0, double x1,
                   double tol = 1e-10, int max_iter = 200);

}  // namespace fmb
