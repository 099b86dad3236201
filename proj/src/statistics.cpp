#include "fmb/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fmb {

BootstrapDraws::BootstrapDraws(std::vector<double> replicates, StatisticKind kind,
                               std::uint64_t seed)
    : replicates_(std::move(replicates)), kind_(kind), seed_(seed) {
    if (replicates_.empty()) throw Error("domain", "BootstrapDraws: R must be >= 1");
    for (double v : replicates_)
        if (!std::isfinite(v)) throw Error("non_finite", "BootstrapDraws: non-finite replicate");
    sorted_ = replicates_;
    std::sort(sorted_.begin(), sorted_.end());
}

double BootstrapDraws::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw Error("domain", "quantile: p outside (0,1)");
    const std::size_t R = sorted_.size();
    std::size_t k = static_cast<std::size_t>(std::ceil(p * static_cast<double>(R)));
    if (k < 1) k = 1;
    if (k > R) k = R;
    return sorted_[k - 1];
}

double bootstrap_quantile(const BootstrapDraws& draws, double p) { return draws.quantile(p); }

double s_stat(const MomentSeries& raw, const KernelSpec& spec, double bandwidth) {
    if (raw.r() != 1) throw Error("domain", "s_stat: scalar pipeline requires r = 1");
    auto sm = smooth_series(raw, spec, bandwidth, -0.5);
    const double sigma2 = bandwidth * lr_scalar(sm, raw);
    const double num = std::sqrt(static_cast<double>(sm.T)) * sm.mean()[0];
    return num / std::sqrt(sigma2);
}

std::vector<double> resample_smoothed(const SmoothedSeries& sm, bool recenter, Rng& rng) {
    const std::size_t T = sm.T, r = sm.r;
    // Bridge to the exponent -1/2 view {B^{1/2} g_Tt} without re-smoothing.
    const double bridge = (sm.scale_exponent == -1.0) ? std::sqrt(sm.bandwidth) : 1.0;
    std::vector<double> pool(sm.values);
    for (double& v : pool) v *= bridge;
    if (recenter) {
        std::vector<double> m(r, 0.0);
        for (std::size_t t = 0; t < T; ++t)
            for (std::size_t j = 0; j < r; ++j) m[j] += pool[t * r + j];
        for (std::size_t j = 0; j < r; ++j) m[j] /= static_cast<double>(T);
        for (std::size_t t = 0; t < T; ++t)
            for (std::size_t j = 0; j < r; ++j) pool[t * r + j] -= m[j];
    }
    std::vector<double> out(T * r);
    for (std::size_t t = 0; t < T; ++t) {
        const std::size_t pick = rng.index(T);
        for (std::size_t j = 0; j < r; ++j) out[t * r + j] = pool[pick * r + j];
    }
    return out;
}

double s_star(const std::vector<double>& resampled) {
    const std::size_t T = resampled.size();
    if (T == 0) throw Error("domain", "s_star: empty resample");
    double mean = 0.0, sq = 0.0;
    for (double v : resampled) {
        mean += v;
        sq += v * v;
    }
    mean /= static_cast<double>(T);
    const double var = sq / static_cast<double>(T);
    if (var <= 0.0) throw Error("degenerate_variance", "s_star: zero bootstrap variance");
    return std::sqrt(static_cast<double>(T)) * mean / std::sqrt(var);
}

QStat q_stat(const MomentSeries& raw, const KernelSpec& spec, double bandwidth) {
    auto sm = smooth_series(raw, spec, bandwidth, -1.0);
    auto cov = lr_cov_smoothed(sm, raw, /*center=*/true);
    QStat out;
    out.rank = cov.rank;
    if (cov.rank == 0) {
        out.degenerate = true;
        return out;
    }
    auto gbar = sm.mean();
    out.value = static_cast<double>(sm.T) * cov.inverse.quad_form(gbar);
    return out;
}

QStat q_star(const SmoothedSeries& sm, Rng& rng) {
    const std::size_t T = sm.T, r = sm.r;
    auto draw = resample_smoothed(sm, /*recenter=*/true, rng);

    std::vector<double> sum(r, 0.0);
    std::vector<double> outer(r * r, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
        const double* row = &draw[t * r];
        for (std::size_t i = 0; i < r; ++i) {
            sum[i] += row[i];
            for (std::size_t j = i; j < r; ++j) outer[i * r + j] += row[i] * row[j];
        }
    }
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < i; ++j) outer[i * r + j] = outer[j * r + i];
    for (double& v : outer) v /= static_cast<double>(T);

    // Replicate-specific covariance: the pool is recentered, so the
    // i.i.d. second-moment matrix is the display's Omega-hat*.
    auto omega_star = SymMatrix::from_dense(outer, r, 1e-9);
    auto pinv = pseudo_inverse(omega_star);
    QStat out;
    out.rank = pinv.rank;
    if (pinv.rank == 0) {
        out.degenerate = true;
        return out;
    }
    out.value = pinv.inverse.quad_form(sum) / static_cast<double>(T);
    return out;
}

BootstrapDraws bootstrap_s(const SmoothedSeries& sm, std::size_t R, std::uint64_t seed) {
    if (sm.r != 1) throw Error("domain", "bootstrap_s: scalar pipeline requires r = 1");
    std::vector<double> reps(R);
    for (std::size_t i = 0; i < R; ++i) {
        Rng rng(seed, i + 1);
        reps[i] = s_star(resample_smoothed(sm, /*recenter=*/false, rng));
    }
    return BootstrapDraws(std::move(reps), StatisticKind::S, seed);
}

BootstrapDraws bootstrap_q(const SmoothedSeries& sm, std::size_t R, std::uint64_t seed) {
    std::vector<double> reps(R);
    for (std::size_t i = 0; i < R; ++i) {
        Rng rng(seed, i + 1);
        reps[i] = q_star(sm, rng).value;
    }
    return BootstrapDraws(std::move(reps), StatisticKind::Q, seed);
}

bool bandwidth_in_window(double bandwidth, std::size_t T, std::string* message) {
    const double lo = std::pow(static_cast<double>(T), 0.25);
    const double hi = std::sqrt(static_cast<double>(T));
    const bool ok = bandwidth > lo && bandwidth < hi;
    if (!ok && message) {
        *message = "bandwidth " + std::to_string(bandwidth) +
                   " is outside the higher-order window (T^{1/4}, T^{1/2}) = (" +
                   std::to_string(lo) + ", " + std::to_string(hi) + ")";
    }
    return ok;
}

}  // namespace fmb
