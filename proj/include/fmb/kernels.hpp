#pragma once

// Smoothing kernel families, their induced self-convolution kernels, and
// the finite-sample Riemann approximations used by the HAC estimator.

#include <memory>
#include <string>

namespace fmb {

enum class KernelFamily { Truncated, Bartlett, BesselQS };

KernelFamily kernel_family_from_name(const std::string& name);
std::string kernel_family_name(KernelFamily f);

/// Kernel family plus its analytic constants kappa_1 = int k,
/// kappa_2 = int k^2, kappa = kappa_1/kappa_2, and the characteristic
/// exponent q of the induced kernel (drives bandwidth-rate warnings).
class KernelSpec {
public:
    explicit KernelSpec(KernelFamily family);

    KernelFamily family() const { return family_; }
    double kappa1() const { return kappa1_; }
    double kappa2() const { return kappa2_; }
    double kappa() const { return kappa1_ / kappa2_; }
    int char_exponent() const { return char_exponent_; }

    /// Half-width of the effective support in units of the bandwidth:
    /// 1 for the compact families, `qs_truncation` for BesselQS, whose
    /// weights beyond |x| = 40 are below 1e-4.
    double support() const { return support_; }

    /// Override for the BesselQS truncation point (config knob).
    void set_qs_truncation(double s);

    double eval(double x) const;

private:
    KernelFamily family_;
    double kappa1_, kappa2_;
    int char_exponent_;
    double support_;
};

double eval_kernel(const KernelSpec& spec, double x);

/// Induced kernel k*(a) = kappa_2^{-1} int k(b-a) k(b) db. Closed forms for
/// the compact families; numeric self-convolution cached on a grid for
/// BesselQS (quadrature error < 1e-6 on the truncated support).
double eval_induced(const KernelSpec& spec, double a);

/// Riemann-sum approximation k*_T(s/B_T) with the finite summation limits
/// max[1-T, 1-T+s] .. min[T-1, T-1+s].
double induced_riemann(const KernelSpec& spec, long s, double bandwidth, long T);

/// Riemann weight summed over the full overlap support of the (truncated)
/// kernel, independent of T. Coincides with induced_riemann whenever the
/// kernel footprint fits inside T-1; it is the weight under which the
/// lag-covariance HAC form is an exact rearrangement of the smoothed form.
double induced_riemann_full(const KernelSpec& spec, long s, double bandwidth);

/// Empirical constant kappa_hat_j = B_T^{-1} sum_{s=1-T}^{T-1} k(s/B_T)^j.
double kappa_hat(const KernelSpec& spec, int j, double bandwidth, long T);

}  // namespace fmb
