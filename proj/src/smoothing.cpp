#include "fmb/smoothing.hpp"

#include <cmath>
#include <string>

#include "fmb/numerics.hpp"

namespace fmb {

MomentSeries::MomentSeries(std::size_t T, std::size_t r) : T_(T), r_(r), v_(T * r, 0.0) {
    if (T < 2) throw Error("domain", "MomentSeries: T must be >= 2");
    if (r < 1) throw Error("domain", "MomentSeries: r must be >= 1");
}

MomentSeries MomentSeries::from_values(std::vector<double> values, std::size_t T,
                                       std::size_t r) {
    MomentSeries m(T, r);
    if (values.size() != T * r) throw Error("domain", "MomentSeries: size mismatch");
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!std::isfinite(values[i]))
            throw Error("non_finite", "MomentSeries: non-finite entry at row " +
                                          std::to_string(i / r));
    m.v_ = std::move(values);
    return m;
}

long SmoothedSeries::footprint() const {
    return static_cast<long>(std::ceil(spec.support() * bandwidth));
}

std::vector<double> SmoothedSeries::row_at(const MomentSeries& raw, long t) const {
    // 1-based convolution: row t pulls raw index u = t - s, u in [1, T],
    // restricted to the kernel footprint |t - u| <= K.
    const long K = footprint();
    const long Tl = static_cast<long>(T);
    const double scale = std::pow(bandwidth, scale_exponent);
    std::vector<double> out(r, 0.0);
    const long ulo = std::max<long>(1, t - K), uhi = std::min<long>(Tl, t + K);
    for (long u = ulo; u <= uhi; ++u) {
        const double w = spec.eval((t - u) / bandwidth);
        if (w == 0.0) continue;
        for (std::size_t j = 0; j < r; ++j) out[j] += w * raw(u - 1, j);
    }
    for (std::size_t j = 0; j < r; ++j) out[j] *= scale;
    return out;
}

std::vector<double> SmoothedSeries::mean() const {
    std::vector<double> m(r, 0.0);
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t j = 0; j < r; ++j) m[j] += values[t * r + j];
    for (std::size_t j = 0; j < r; ++j) m[j] /= static_cast<double>(T);
    return m;
}

SmoothedSeries smooth_series(const MomentSeries& raw, const KernelSpec& spec,
                             double bandwidth, double scale_exponent) {
    if (bandwidth <= 0.0) throw Error("domain", "smooth_series: bandwidth must be positive");
    if (scale_exponent != -0.5 && scale_exponent != -1.0)
        throw Error("domain", "smooth_series: scale_exponent must be -1/2 or -1");

    SmoothedSeries out;
    out.T = raw.T();
    out.r = raw.r();
    out.spec = spec;
    out.bandwidth = bandwidth;
    out.scale_exponent = scale_exponent;
    out.values.assign(out.T * out.r, 0.0);

    for (std::size_t t = 0; t < out.T; ++t) {
        auto row = out.row_at(raw, static_cast<long>(t) + 1);
        for (std::size_t j = 0; j < out.r; ++j) {
            if (!std::isfinite(row[j]))
                throw Error("non_finite",
                            "smooth_series: non-finite output at row " + std::to_string(t));
            out.values[t * out.r + j] = row[j];
        }
    }
    return out;
}

std::vector<double> taper_weights(std::size_t T, const KernelSpec& spec, double bandwidth) {
    if (bandwidth <= 0.0) throw Error("domain", "taper_weights: bandwidth must be positive");
    const double scale = 1.0 / std::sqrt(bandwidth);
    const long K = static_cast<long>(std::ceil(spec.support() * bandwidth));
    std::vector<double> w(T, 0.0);
    for (long t = 1; t <= static_cast<long>(T); ++t) {
        const long lo = std::max(1 - t, -K), hi = std::min(static_cast<long>(T) - t, K);
        double sum = 0.0;
        for (long s = lo; s <= hi; ++s) sum += spec.eval(s / bandwidth);
        w[t - 1] = scale * sum;
    }
    return w;
}

}  // namespace fmb
