#pragma once

// Generalized Empirical Likelihood layer: rho families, inner Lagrange
// multiplier ascent, outer profiled minimization, and the stacked
// first-order-condition system Psi.

#include <cstddef>
#include <functional>
#include <vector>

#include "fmb/smoothing.hpp"

namespace fmb {

enum class RhoKind { EL, ET, CUE };

RhoKind rho_kind_from_name(const std::string& name);
std::string rho_kind_name(RhoKind kind);

struct RhoDerivs {
    double value;
    double d1;
    double d2;
};

/// Standardized rho families, rho'(0) = rho''(0) = -1:
///   EL  rho(v) = log(1 - v), v < 1
///   ET  rho(v) = -exp(v)
///   CUE rho(v) = -v - v^2/2
/// EL outside its domain raises Error("domain_violation").
RhoDerivs rho(double v, RhoKind kind);

struct GelProblem {
    // beta -> T x r raw moment series (data captured by the closure).
    std::function<MomentSeries(const std::vector<double>&)> moment_fn;
    // Optional analytic raw derivative series, one T x r block per
    // parameter; empty function falls back to central finite differences.
    std::function<std::vector<MomentSeries>(const std::vector<double>&)> deriv_fn;
    std::size_t p = 0;
    std::size_t r = 0;
    RhoKind rho_kind = RhoKind::ET;
    KernelSpec spec{KernelFamily::Bartlett};
    double bandwidth = 0.0;
    std::vector<double> box_lo, box_hi;  // compact parameter box
};

struct GelEstimate {
    std::vector<double> beta_hat;
    std::vector<double> lambda_hat;
    double criterion = 0.0;  // profiled criterion at beta_hat
    bool inner_converged = false;
    bool outer_converged = false;
    bool at_boundary = false;
};

/// P-hat(beta, lambda) = T^{-1} sum_t [rho(kappa lambda' g_Tt) - rho(0)],
/// with g_Tt the exponent-(-1) smoothed series and kappa = kappa1/kappa2.
double gel_criterion(const GelProblem& prob, const std::vector<double>& beta,
                     const std::vector<double>& lambda);

/// Inner maximizer lambda(beta): damped Newton ascent from lambda = 0 with
/// step halving to stay inside Lambda_T(beta). Gradient max-norm below
/// 1e-9 at return; Error("inner_diverged") after the iteration budget.
std::vector<double> inner_lambda(const GelProblem& prob, const std::vector<double>& beta,
                                 bool* converged = nullptr);

/// Outer argmin of the profiled criterion over the box: Nelder-Mead with
/// vertex projection onto the box, default 5 jittered multi-starts keeping
/// the best. Error("outer_diverged") if every start fails.
GelEstimate outer_beta(const GelProblem& prob, const std::vector<double>& start,
                       std::size_t starts = 5, std::uint64_t jitter_seed = 1);

struct GelFoc {
    std::vector<double> psi1_bar;  // r-vector, mean of rho1(kappa l'g) g_Tt
    std::vector<double> psi2_bar;  // p-vector, mean of rho1(kappa l'g) (dg/db)' lambda
    std::vector<double> psi_t;     // T x (r+p) stacked rows [Psi1,t | Psi2,t]
};

GelFoc gel_foc(const GelProblem& prob, const std::vector<double>& beta,
               const std::vector<double>& lambda);

}  // namespace fmb
