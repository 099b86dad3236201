#pragma once

// Kernel convolution of raw moment-indicator series and the taper-weight
// diagnostic induced at the sample edges.

#include <cstddef>
#include <vector>

#include "fmb/kernels.hpp"

namespace fmb {

/// T x r matrix of raw moment indicators, row t = g_t(beta) (or the scalar
/// psi_t(theta) when r = 1). Row-major storage.
class MomentSeries {
public:
    MomentSeries() : T_(0), r_(0) {}
    MomentSeries(std::size_t T, std::size_t r);

    static MomentSeries from_values(std::vector<double> values, std::size_t T, std::size_t r);

    std::size_t T() const { return T_; }
    std::size_t r() const { return r_; }
    double operator()(std::size_t t, std::size_t j) const { return v_[t * r_ + j]; }
    void set(std::size_t t, std::size_t j, double x) { v_[t * r_ + j] = x; }
    const std::vector<double>& values() const { return v_; }

private:
    std::size_t T_, r_;
    std::vector<double> v_;
};

/// Kernel-convolved series with its provenance (kernel, bandwidth, scaling
/// exponent), so any downstream quantity is exactly reproducible.
struct SmoothedSeries {
    std::vector<double> values;  // T x r, row-major
    std::size_t T = 0;
    std::size_t r = 0;
    KernelSpec spec{KernelFamily::Bartlett};
    double bandwidth = 0.0;
    double scale_exponent = -1.0;  // -1/2 (scalar pipeline) or -1 (GEL pipeline)

    double operator()(std::size_t t, std::size_t j) const { return values[t * r + j]; }

    /// Row t of the smoothed series for any integer index t, including rows
    /// outside [0, T) where the convolution footprint still overlaps the
    /// sample. Used by the variance estimators.
    std::vector<double> row_at(const MomentSeries& raw, long t) const;

    /// Index half-width of the kernel footprint, ceil(support * B_T).
    long footprint() const;

    std::vector<double> mean() const;  // over rows 0..T-1
};

/// values[t] = B_T^e sum_{s=t-T}^{t-1} k(s/B_T) raw[t-s], e in {-1/2, -1}.
SmoothedSeries smooth_series(const MomentSeries& raw, const KernelSpec& spec,
                             double bandwidth, double scale_exponent);

/// Tapering window w(t) = B_T^{-1/2} sum_{s=1-t}^{T-t} k(s/B_T), t = 1..T.
std::vector<double> taper_weights(std::size_t T, const KernelSpec& spec, double bandwidth);

}  // namespace fmb
