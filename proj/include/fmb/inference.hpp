#pragma once

// Statistic inversion: one- and two-sided CIs, confidence regions by
// level sets, confidence distributions/curves, bootstrap p-values,
// and the slicing/marginalization helpers used for reporting.

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "fmb/statistics.hpp"

namespace fmb {

enum class IntervalKind { one_sided_upper, two_sided_equal_tail };

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.0;  // 1 - alpha
    IntervalKind kind = IntervalKind::two_sided_equal_tail;
};

struct ConfidenceCurvePoints {
    std::vector<double> grid;   // ascending theta values
    std::vector<double> hstar;  // H*_S(theta)
    std::vector<double> cv;     // CV*(theta) = 2 min(hstar, 1-hstar)
};

// Scalar statistic as a function of the hypothesized parameter value.
using ScalarStat = std::function<double(double)>;
// Q-statistic as a function of a parameter point.
using QFunction = std::function<QStat(const std::vector<double>&)>;

struct RegionResult {
    std::vector<unsigned char> mask;  // 1 = inside the region
    double threshold = 0.0;           // bootstrap quantile used
};

// One-sided upper CI [lo, c] with S-hat(c) = q*_{1-alpha} (increasing case).
// S-hat must be strictly monotone on [lo, hi]; checked by a 16-point scan.
ConfidenceInterval invert_one_sided(const ScalarStat& s_of, const BootstrapDraws& draws,
                                    double alpha, double lo, double hi);

// Equal-tailed two-sided CI (c1, c2] from the alpha/2 and 1-alpha/2 quantiles.
ConfidenceInterval invert_two_sided(const ScalarStat& s_of, const BootstrapDraws& draws,
                                    double alpha, double lo, double hi);

// Level set {beta : Q-hat(beta) <= q*_{1-alpha}} over an explicit grid of points.
RegionResult confidence_region(const QFunction& q_of, const BootstrapDraws& draws, double alpha,
                               const std::vector<std::vector<double>>& grid);

// H*_S(theta) = P*[S* <= S-hat(theta)] over a grid.
ConfidenceCurvePoints confidence_distribution(const ScalarStat& s_of, const BootstrapDraws& draws,
                                              std::vector<double> grid);

// Fills cv = 2 min(hstar, 1 - hstar) pointwise.
void confidence_curve(ConfidenceCurvePoints& cd);

// Bootstrap p-values off the curve; theta0 off-grid interpolates hstar linearly,
// outside the grid is a domain error.
double p_value_one_sided(const ConfidenceCurvePoints& cd, double theta0);
double p_value_equal_tail(const ConfidenceCurvePoints& cd, double theta0);

// 1-D equal-tailed interval on coordinate free_index with the remaining
// coordinates pinned at `fixed` (whose free_index entry is ignored).
ConfidenceInterval slice_region(const QFunction& q_of, const BootstrapDraws& draws, double alpha,
                                const std::vector<double>& fixed, std::size_t free_index,
                                const std::vector<double>& grid1d);

// Marginalize a confidence curve over the two nuisance axes of a 3-D grid by
// trapezoidal integration, renormalized so the maximum equals 1.
// cv is laid out row-major: index = (i0*n1 + i1)*n2 + i2.
ConfidenceCurvePoints marginal_curve(const std::vector<double>& cv,
                                     const std::array<std::vector<double>, 3>& axes,
                                     std::size_t target_index);

}  // namespace fmb
