#pragma once

// ACD(1,1) duration model: simulation, conditional-mean recursion with
// analytic parameter derivatives, moment conditions, and the descriptive
// statistics used for real-data reporting.

#include <cstddef>
#include <string>
#include <vector>

#include "fmb/numerics.hpp"
#include "fmb/smoothing.hpp"

namespace fmb {

/// x_l = eps_l m_l, m_l = omega + beta1 x_{l-1} + beta2 m_{l-1}, eps ~ E(1).
struct ACDParams {
    double omega;
    double beta1;
    double beta2;

    ACDParams(double w, double b1, double b2);

    double unconditional_mean() const { return omega / (1.0 - beta1 - beta2); }
};

/// Simulates N durations after discarding `burn_in` start-up draws;
/// the recursion starts at the unconditional mean.
std::vector<double> simulate_acd(const ACDParams& params, std::size_t N, std::size_t burn_in,
                                 Rng& rng);

struct AcdRecursion {
    std::vector<double> m;
    std::vector<double> dm_db1;
    std::vector<double> dm_db2;
    std::vector<double> dm_domega;
};

/// Conditional mean and its parameter derivatives along observed data,
/// initialized at the stationary values.
AcdRecursion acd_recursion(const std::vector<double>& data, const ACDParams& params);

/// r = 3 moment indicators per observation:
///   g1 = ((x - m)/m^2) dm/dbeta1
///   g2 = ((x - m)/m^2) dm/dbeta2
///   g3 = x - (1 - beta1 - beta2)^{-1}   (omega fixed at 1)
/// With free_omega the same stack is evaluated at the supplied omega and
/// g3 centers on the unconditional mean omega/(1 - beta1 - beta2), so the
/// three-parameter application can move omega as an extra coordinate.
MomentSeries acd_moments(const std::vector<double>& data, const ACDParams& params,
                         bool free_omega = false);

struct SummaryStats {
    double min, max, median, mean, iqr, sd, skewness, excess_kurtosis;
    std::size_t n;
};

/// Type-7 interpolated quantiles, N-1 denominator sd, biased moment-ratio
/// skewness and excess kurtosis. Zero variance raises
/// Error("degenerate_variance") since the moment ratios are undefined.
SummaryStats summary_stats(const std::vector<double>& series);

/// Single numeric column, optional non-numeric header row.
std::vector<double> read_series_csv(const std::string& path);
void write_series_csv(const std::string& path, const std::vector<double>& series,
                      const std::string& header = "x");

}  // namespace fmb
