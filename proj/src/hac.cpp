#include "fmb/hac.hpp"

#include <cmath>

namespace fmb {

namespace {

// Accumulates sum_t {row_t - c}{row_t - c}' over the full footprint
// t in [1-K, T+K], where rows outside [1, T] are partial-window
// convolutions of the same sample.
std::vector<double> footprint_outer_sum(const SmoothedSeries& sm, const MomentSeries& raw,
                                        const std::vector<double>& center) {
    const long K = sm.footprint();
    const long T = static_cast<long>(sm.T);
    const std::size_t r = sm.r;
    std::vector<double> acc(r * r, 0.0);
    std::vector<double> row(r);
    for (long t = 1 - K; t <= T + K; ++t) {
        if (t >= 1 && t <= T) {
            for (std::size_t j = 0; j < r; ++j) row[j] = sm(t - 1, j);
        } else {
            row = sm.row_at(raw, t);
        }
        for (std::size_t j = 0; j < r; ++j) row[j] -= center[j];
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = i; j < r; ++j) acc[i * r + j] += row[i] * row[j];
    }
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < i; ++j) acc[i * r + j] = acc[j * r + i];
    return acc;
}

}  // namespace

LongRunCov lr_cov_smoothed(const SmoothedSeries& sm, const MomentSeries& raw, bool center,
                           double rank_tol) {
    const std::size_t r = sm.r;
    const std::vector<double> c =
        center ? sm.mean() : std::vector<double>(r, 0.0);
    auto acc = footprint_outer_sum(sm, raw, c);

    // Exponent -1 rows need the B_T factor of the display; exponent -1/2
    // rows carry it already (scaling bridge).
    const double scale_sq = (sm.scale_exponent == -1.0) ? sm.bandwidth : 1.0;
    const double f = sm.spec.kappa1() * sm.spec.kappa1() * scale_sq /
                     (sm.spec.kappa2() * static_cast<double>(sm.T));
    for (double& v : acc) v *= f;

    LongRunCov out;
    out.omega = SymMatrix::from_dense(acc, r, 1e-9);
    out.spec = sm.spec;
    out.bandwidth = sm.bandwidth;
    auto pinv = pseudo_inverse(out.omega, rank_tol);
    out.inverse = pinv.inverse;
    out.rank = pinv.rank;
    return out;
}

double lr_scalar(const SmoothedSeries& sm, const MomentSeries& raw) {
    if (sm.r != 1) throw Error("domain", "lr_scalar: series must be scalar");
    if (sm.scale_exponent != -0.5)
        throw Error("domain", "lr_scalar: series must use scale exponent -1/2");
    auto acc = footprint_outer_sum(sm, raw, {0.0});
    const double v = sm.spec.kappa1() * sm.spec.kappa1() * acc[0] /
                     (sm.spec.kappa2() * static_cast<double>(sm.T));
    if (v <= 0.0) throw Error("degenerate_variance", "lr_scalar: non-positive variance");
    return v;
}

std::vector<double> lag_cov(const MomentSeries& raw, long s) {
    const long T = static_cast<long>(raw.T());
    const std::size_t r = raw.r();  // |s| >= T leaves the sum empty: zero matrix
    std::vector<double> g(r * r, 0.0);
    const long lo = std::max<long>(1, 1 - s), hi = std::min<long>(T, T - s);
    for (long t = lo; t <= hi; ++t)
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                g[i * r + j] += raw(t - 1, i) * raw(t + s - 1, j);
    for (double& v : g) v /= static_cast<double>(T);
    return g;
}

SymMatrix lr_cov_lagform(const MomentSeries& raw, const KernelSpec& spec, double bandwidth) {
    if (bandwidth <= 0.0) throw Error("domain", "lr_cov_lagform: bandwidth must be positive");
    const long T = static_cast<long>(raw.T());
    const std::size_t r = raw.r();
    const long K = static_cast<long>(std::ceil(spec.support() * bandwidth));
    const long smax = std::min(T - 1, 2 * K);  // induced support is twice the kernel's
    std::vector<double> acc(r * r, 0.0);
    for (long s = -smax; s <= smax; ++s) {
        const double w = induced_riemann_full(spec, s, bandwidth);
        if (w == 0.0) continue;
        auto g = lag_cov(raw, s);
        for (std::size_t i = 0; i < r * r; ++i) acc[i] += w * g[i];
    }
    const double k1 = spec.kappa1();
    for (double& v : acc) v *= k1 * k1;
    return SymMatrix::from_dense(acc, r, 1e-9);
}

}  // namespace fmb
