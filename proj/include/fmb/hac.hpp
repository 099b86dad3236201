#pragma once

// Long-run covariance estimation: the automatically positive semi-definite
// outer-product form built from smoothed series, and the weighted
// lag-covariance form it rearranges into.

#include <vector>

#include "fmb/numerics.hpp"
#include "fmb/smoothing.hpp"

namespace fmb {

struct LongRunCov {
    SymMatrix omega;        // Omega-hat
    SymMatrix inverse;      // generalized inverse
    std::size_t rank = 0;   // nu, retained eigenvalues
    KernelSpec spec{KernelFamily::Bartlett};
    double bandwidth = 0.0;
};

/// Omega-hat = (kappa_1^2 B_T)(kappa_2 T)^{-1} sum_t {g_Tt - gbar}{g_Tt - gbar}'
/// from an exponent -1 smoothed series (the B_T factor is dropped for an
/// exponent -1/2 input, which carries it already). The sum over t runs over
/// the full convolution footprint, which makes the estimator the exact
/// positive semi-definite rearrangement of the weighted lag-covariance form.
LongRunCov lr_cov_smoothed(const SmoothedSeries& sm, const MomentSeries& raw,
                           bool center = true, double rank_tol = 1e-10);

/// Scalar long-run variance kappa_1^2 (T kappa_2)^{-1} sum_t psi_Tt^2 for the
/// r = 1, exponent -1/2 pipeline (uncentered). Non-positive output raises
/// Error("degenerate_variance").
double lr_scalar(const SmoothedSeries& sm, const MomentSeries& raw);

/// Lag-s sample covariance Gamma-hat_s = T^{-1} sum g_t g_{t+s}'.
std::vector<double> lag_cov(const MomentSeries& raw, long s);

/// Omega-hat = kappa_1^2 sum_s k*_T(s/B_T) Gamma-hat_s with the full-support
/// Riemann weights. Equals the uncentered lr_cov_smoothed entrywise.
SymMatrix lr_cov_lagform(const MomentSeries& raw, const KernelSpec& spec, double bandwidth);

}  // namespace fmb
