#include "fmb/kernels.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "fmb/numerics.hpp"

namespace fmb {

KernelFamily kernel_family_from_name(const std::string& name) {
    if (name == "truncated") return KernelFamily::Truncated;
    if (name == "bartlett") return KernelFamily::Bartlett;
    if (name == "bessel_qs") return KernelFamily::BesselQS;
    throw Error("domain", "unknown kernel family: " + name);
}

std::string kernel_family_name(KernelFamily f) {
    switch (f) {
        case KernelFamily::Truncated: return "truncated";
        case KernelFamily::Bartlett: return "bartlett";
        case KernelFamily::BesselQS: return "bessel_qs";
    }
    return "?";
}

KernelSpec::KernelSpec(KernelFamily family) : family_(family) {
    switch (family) {
        case KernelFamily::Truncated:
            kappa1_ = 2.0;
            kappa2_ = 2.0;
            char_exponent_ = 1;  // induced Bartlett
            support_ = 1.0;
            break;
        case KernelFamily::Bartlett:
            kappa1_ = 1.0;
            kappa2_ = 2.0 / 3.0;
            char_exponent_ = 2;  // induced Parzen
            support_ = 1.0;
            break;
        case KernelFamily::BesselQS:
            kappa1_ = std::sqrt(5.0 * M_PI / 2.0);
            kappa2_ = 2.0 * M_PI;
            char_exponent_ = 2;  // induced QS
            support_ = 40.0;
            break;
    }
}

void KernelSpec::set_qs_truncation(double s) {
    if (family_ != KernelFamily::BesselQS)
        throw Error("domain", "qs_truncation applies to the bessel_qs family only");
    if (s <= 0.0) throw Error("domain", "qs_truncation must be positive");
    support_ = s;
}

double KernelSpec::eval(double x) const {
    const double ax = std::abs(x);
    switch (family_) {
        case KernelFamily::Truncated:
            return ax <= 1.0 ? 1.0 : 0.0;
        case KernelFamily::Bartlett:
            return ax <= 1.0 ? 1.0 - ax : 0.0;
        case KernelFamily::BesselQS: {
            if (ax > support_) return 0.0;
            const double c = std::sqrt(5.0 * M_PI / 8.0);
            if (x == 0.0) return c * 3.0 * M_PI / 5.0;
            return c * bessel_j1(6.0 * M_PI * x / 5.0) / x;
        }
    }
    return 0.0;
}

double eval_kernel(const KernelSpec& spec, double x) { return spec.eval(x); }

namespace {

double parzen(double x) {
    const double ax = std::abs(x);
    if (ax <= 1.0) return 1.0 - 6.0 * (ax / 2.0) * (ax / 2.0) + 6.0 * std::pow(ax / 2.0, 3);
    if (ax <= 2.0) return 2.0 * std::pow(1.0 - ax / 2.0, 3);
    return 0.0;
}

// 8-point Gauss-Legendre nodes/weights on [-1,1].
constexpr double kGlx[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                            0.9602898564975363};
constexpr double kGlw[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                            0.1012285362903763};

// Self-convolution of the truncated BesselQS kernel by composite quadrature.
double qs_convolution(const KernelSpec& spec, double a) {
    const double S = spec.support();
    const double lo = std::max(-S, a - S), hi = std::min(S, a + S);
    if (lo >= hi) return 0.0;
    const int n = static_cast<int>(std::ceil((hi - lo) / 0.2));
    const double h = (hi - lo) / n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double c = lo + (i + 0.5) * h;
        for (int k = 0; k < 4; ++k) {
            const double bp = c + 0.5 * h * kGlx[k];
            const double bm = c - 0.5 * h * kGlx[k];
            sum += kGlw[k] * (spec.eval(bp - a) * spec.eval(bp) + spec.eval(bm - a) * spec.eval(bm));
        }
    }
    return sum * 0.5 * h / spec.kappa2();
}

// Lazily filled grid for the induced QS kernel, Catmull-Rom interpolated.
class QsInducedCache {
public:
    double value(const KernelSpec& spec, double a) {
        a = std::abs(a);
        const double S = spec.support();
        if (a >= 2.0 * S) return 0.0;
        std::lock_guard<std::mutex> lock(mu_);
        auto& grid = grids_[S];
        const double h = 0.005;
        const double u = a / h;
        const long i1 = static_cast<long>(std::floor(u));
        const double t = u - i1;
        double y[4];
        for (int k = 0; k < 4; ++k) y[k] = at(grid, spec, i1 - 1 + k, h);
        // Catmull-Rom
        return y[1] + 0.5 * t * (y[2] - y[0] +
                                 t * (2.0 * y[0] - 5.0 * y[1] + 4.0 * y[2] - y[3] +
                                      t * (3.0 * (y[1] - y[2]) + y[3] - y[0])));
    }

private:
    double at(std::map<long, double>& grid, const KernelSpec& spec, long i, double h) {
        const long idx = std::abs(i);  // k* is even
        auto it = grid.find(idx);
        if (it != grid.end()) return it->second;
        double v = qs_convolution(spec, idx * h);
        grid[idx] = v;
        return v;
    }

    std::mutex mu_;
    std::map<double, std::map<long, double>> grids_;
};

QsInducedCache& qs_cache() {
    static QsInducedCache cache;
    return cache;
}

}  // namespace

double eval_induced(const KernelSpec& spec, double a) {
    const double ax = std::abs(a);
    switch (spec.family()) {
        case KernelFamily::Truncated:  // induced Bartlett on [-2,2]
            return ax <= 2.0 ? 1.0 - ax / 2.0 : 0.0;
        case KernelFamily::Bartlett:  // induced Parzen
            return parzen(a);
        case KernelFamily::BesselQS:
            return qs_cache().value(spec, a);
    }
    return 0.0;
}

double induced_riemann(const KernelSpec& spec, long s, double bandwidth, long T) {
    if (bandwidth <= 0.0) throw Error("domain", "induced_riemann: bandwidth must be positive");
    if (std::labs(s) >= T) throw Error("domain", "induced_riemann: |s| must be < T");
    const long K = static_cast<long>(std::ceil(spec.support() * bandwidth));
    long lo = std::max(1 - T, 1 - T + s), hi = std::min(T - 1, T - 1 + s);
    // k((t-s)/B) k(t/B) vanishes outside |t| <= K and |t-s| <= K.
    lo = std::max(lo, std::max(-K, s - K));
    hi = std::min(hi, std::min(K, s + K));
    double sum = 0.0;
    for (long t = lo; t <= hi; ++t)
        sum += spec.eval((t - s) / bandwidth) * spec.eval(t / bandwidth);
    return sum / (spec.kappa2() * bandwidth);
}

double induced_riemann_full(const KernelSpec& spec, long s, double bandwidth) {
    if (bandwidth <= 0.0) throw Error("domain", "induced_riemann_full: bandwidth must be positive");
    const long K = static_cast<long>(std::ceil(spec.support() * bandwidth));
    const long lo = std::max(-K, s - K), hi = std::min(K, s + K);
    double sum = 0.0;
    for (long t = lo; t <= hi; ++t)
        sum += spec.eval((t - s) / bandwidth) * spec.eval(t / bandwidth);
    return sum / (spec.kappa2() * bandwidth);
}

double kappa_hat(const KernelSpec& spec, int j, double bandwidth, long T) {
    if (bandwidth <= 0.0) throw Error("domain", "kappa_hat: bandwidth must be positive");
    if (T < 2) throw Error("domain", "kappa_hat: T must be >= 2");
    if (j != 1 && j != 2) throw Error("domain", "kappa_hat: j must be 1 or 2");
    const long K = static_cast<long>(std::ceil(spec.support() * bandwidth));
    const long lim = std::min(T - 1, K);
    double sum = 0.0;
    for (long s = -lim; s <= lim; ++s) {
        double k = spec.eval(s / bandwidth);
        sum += (j == 1) ? k : k * k;
    }
    return sum / bandwidth;
}

}  // namespace fmb
