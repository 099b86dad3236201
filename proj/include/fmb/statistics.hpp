#pragma once

// The four test statistics (S-hat, S*, Q-hat, Q*) and the i.i.d. resampling
// engine over smoothed moment indicators.

#include <cstdint>
#include <functional>
#include <vector>

#include "fmb/hac.hpp"
#include "fmb/numerics.hpp"
#include "fmb/smoothing.hpp"

namespace fmb {

enum class StatisticKind { S, Q };

/// Replicate statistics with the RNG metadata that produced them.
class BootstrapDraws {
public:
    BootstrapDraws(std::vector<double> replicates, StatisticKind kind, std::uint64_t seed);

    std::size_t size() const { return replicates_.size(); }
    const std::vector<double>& replicates() const { return replicates_; }
    const std::vector<double>& sorted() const { return sorted_; }
    StatisticKind kind() const { return kind_; }
    std::uint64_t seed() const { return seed_; }

    /// Type-1 empirical quantile: sorted value at index ceil(p R).
    double quantile(double p) const;

private:
    std::vector<double> replicates_;
    std::vector<double> sorted_;
    StatisticKind kind_;
    std::uint64_t seed_;
};

double bootstrap_quantile(const BootstrapDraws& draws, double p);

/// Studentized scalar statistic S-hat(theta) = T^{1/2} psibar_T / sigma-hat,
/// where sigma-hat^2 = B_T * lr_scalar so that S-hat is asymptotically
/// standard normal and S-hat^2 matches the quadratic-form pipeline at r = 1.
double s_stat(const MomentSeries& raw, const KernelSpec& spec, double bandwidth);

/// One i.i.d. resample of T rows from the pool {B_T^{1/2} g_Tt}, optionally
/// recentered so the pool mean is exactly zero. Returns a T x r matrix.
std::vector<double> resample_smoothed(const SmoothedSeries& sm, bool recenter, Rng& rng);

/// Bootstrap scalar statistic from one resampled T x 1 column.
double s_star(const std::vector<double>& resampled);

struct QStat {
    double value = 0.0;
    std::size_t rank = 0;   // nu for the chi^2_nu reference
    bool degenerate = false;
};

/// Q-hat(beta) = T gbar' Omega-hat^{-1} gbar with centered Omega-hat and the
/// generalized inverse.
QStat q_stat(const MomentSeries& raw, const KernelSpec& spec, double bandwidth);

/// One bootstrap replicate Q*: a recentered resample with its own
/// replicate-specific covariance Omega-hat* (never the fixed Omega-hat).
QStat q_star(const SmoothedSeries& sm, Rng& rng);

/// Runs R replicates of S* (scalar) from independent streams of `seed`.
BootstrapDraws bootstrap_s(const SmoothedSeries& sm, std::size_t R, std::uint64_t seed);

/// Runs R replicates of Q* from independent streams of `seed`.
BootstrapDraws bootstrap_q(const SmoothedSeries& sm, std::size_t R, std::uint64_t seed);

/// Emits a warning line when B_T leaves the higher-order window
/// (T^{1/4}, T^{1/2}); returns true when inside.
bool bandwidth_in_window(double bandwidth, std::size_t T, std::string* message = nullptr);

}  // namespace fmb
