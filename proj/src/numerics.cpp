#include "fmb/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fmb {

// ---------------------------------------------------------------------------
// RNG
// ---------------------------------------------------------------------------

namespace {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::next_u64() {
    // Two mixing rounds over (seed, stream, counter); counter increments
    // per draw so the value is a pure function of the triple.
    std::uint64_t h = mix64(seed_ ^ 0x6a09e667f3bcc909ULL);
    h = mix64(h ^ mix64(stream_ ^ 0xbb67ae8584caa73bULL));
    h = mix64(h ^ mix64(counter_++));
    return h;
}

double Rng::uniform() {
    // 53 significant bits, offset by half an ulp so 0 and 1 are excluded.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

double Rng::exponential() { return -std::log(uniform()); }

double Rng::normal() {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::size_t Rng::index(std::size_t n) {
    if (n == 0) throw Error("domain", "draw_index: n must be positive");
    // Rejection sampling removes the modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return static_cast<std::size_t>(x % n);
}

// ---------------------------------------------------------------------------
// SymMatrix
// ---------------------------------------------------------------------------

SymMatrix SymMatrix::from_dense(const std::vector<double>& a, std::size_t dim,
                                double sym_tol) {
    if (a.size() != dim * dim) throw Error("domain", "from_dense: size mismatch");
    double scale = 0.0;
    for (double v : a) scale = std::max(scale, std::abs(v));
    SymMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i; j < dim; ++j) {
            double asym = std::abs(a[i * dim + j] - a[j * dim + i]);
            if (asym > sym_tol * std::max(scale, 1.0))
                throw Error("not_symmetric", "from_dense: asymmetry " + std::to_string(asym));
            m.set(i, j, 0.5 * (a[i * dim + j] + a[j * dim + i]));
        }
    }
    return m;
}

SymMatrix SymMatrix::identity(std::size_t dim) {
    SymMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.set(i, i, 1.0);
    return m;
}

std::vector<double> SymMatrix::multiply(const std::vector<double>& x) const {
    std::vector<double> y(dim_, 0.0);
    for (std::size_t i = 0; i < dim_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) s += a_[i * dim_ + j] * x[j];
        y[i] = s;
    }
    return y;
}

double SymMatrix::quad_form(const std::vector<double>& x) const {
    auto y = multiply(x);
    return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

double SymMatrix::max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
}

// ---------------------------------------------------------------------------
// Jacobi eigensolver
// ---------------------------------------------------------------------------

EigenResult sym_eigen(const SymMatrix& m, double tol, int max_sweeps) {
    const std::size_t n = m.dim();
    if (n == 0) throw Error("domain", "sym_eigen: empty matrix");
    std::vector<double> a = m.data();
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    const double scale = std::max(m.max_abs(), 1e-300);
    auto off_diag = [&]() {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) s = std::max(s, std::abs(a[p * n + q]));
        return s;
    };

    int sweep = 0;
    while (off_diag() > tol * scale) {
        if (++sweep > max_sweeps)
            throw Error("eigen_no_convergence",
                        "sym_eigen: off-diagonal residual " + std::to_string(off_diag()) +
                            " after " + std::to_string(max_sweeps) + " sweeps");
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = a[p * n + q];
                if (std::abs(apq) <= 1e-300) continue;
                double app = a[p * n + p], aqq = a[q * n + q];
                double theta = 0.5 * (aqq - app) / apq;
                double t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                if (theta < 0.0) t = -t;
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = a[q * n + p] = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    double aip = a[i * n + p], aiq = a[i * n + q];
                    a[i * n + p] = a[p * n + i] = c * aip - s * aiq;
                    a[i * n + q] = a[q * n + i] = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    double vip = v[i * n + p], viq = v[i * n + q];
                    v[i * n + p] = c * vip - s * viq;
                    v[i * n + q] = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a[i * n + i] > a[j * n + j]; });

    EigenResult r;
    r.values.resize(n);
    r.vectors.assign(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        r.values[j] = a[order[j] * n + order[j]];
        for (std::size_t i = 0; i < n; ++i) r.vectors[i * n + j] = v[i * n + order[j]];
    }
    return r;
}

PseudoInverse pseudo_inverse(const SymMatrix& m, double rank_tol) {
    auto eig = sym_eigen(m);
    const std::size_t n = m.dim();
    double lmax = 0.0;
    for (double l : eig.values) lmax = std::max(lmax, std::abs(l));
    const double cut = rank_tol * lmax;
    for (double l : eig.values)
        if (l < -cut)
            throw Error("not_psd", "pseudo_inverse: eigenvalue " + std::to_string(l) +
                                       " below -" + std::to_string(cut));
    PseudoInverse out{SymMatrix(n), 0};
    for (std::size_t k = 0; k < n; ++k) {
        if (eig.values[k] <= cut) continue;
        ++out.rank;
        double w = 1.0 / eig.values[k];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                out.inverse.set(i, j, out.inverse(i, j) +
                                          w * eig.vectors[i * n + k] * eig.vectors[j * n + k]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Bessel functions
// ---------------------------------------------------------------------------

namespace {

// Power series J_nu(z) = (z/2)^nu sum_j (-1)^j (z/2)^(2j) / (j! (j+nu)!),
// nu in {0,1}. Long double accumulation keeps the cancellation near the
// |z| = 25 crossover below 1e-10 absolute.
long double j_series(long double z, int nu) {
    const long double half = z / 2.0L;
    long double term = 1.0L;
    for (int k = 1; k <= nu; ++k) term *= half / k;  // (z/2)^nu / nu!
    long double sum = term;
    const long double x2 = half * half;
    for (int j = 1; j < 200; ++j) {
        term *= -x2 / (static_cast<long double>(j) * (j + nu));
        sum += term;
        if (std::abs(term) < 1e-14L * std::max(std::abs(sum), 1e-30L) &&
            std::abs(term) < 1e-20L + 1e-16L)
            break;
    }
    return sum;
}

// Hankel asymptotic expansion, mu = 4 nu^2.
double j_asymptotic(double x, int nu) {
    const double mu = 4.0 * nu * nu;
    const double w = 8.0 * x;
    double p = 1.0, q = 0.0;
    double term = 1.0;
    // P: even k, Q: odd k.
    for (int k = 1; k <= 10; ++k) {
        term *= (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * w);
        if (k % 2 == 1)
            q += (k % 4 == 1) ? term : -term;
        else
            p += (k % 4 == 2) ? -term : term;
    }
    const double chi = x - (0.5 * nu + 0.25) * M_PI;
    return std::sqrt(2.0 / (M_PI * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j1(double z) {
    const double az = std::abs(z);
    double v = (az <= 25.0) ? static_cast<double>(j_series(az, 1)) : j_asymptotic(az, 1);
    return z < 0.0 ? -v : v;
}

double bessel_j0(double z) {
    const double az = std::abs(z);
    return (az <= 25.0) ? static_cast<double>(j_series(az, 0)) : j_asymptotic(az, 0);
}

// ---------------------------------------------------------------------------
// Distributions
// ---------------------------------------------------------------------------

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw Error("domain", "normal_quantile: p outside (0,1)");
    // Acklam's rational approximation, then one Halley step on the cdf.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double e = normal_cdf(x) - p;
    double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

namespace {

// Regularized lower incomplete gamma P(a,x): series for x < a+1,
// continued fraction for the complement otherwise.
double gamma_p(double a, double x) {
    if (x <= 0.0) return 0.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a, sum = 1.0 / a, del = sum;
        for (int n = 0; n < 500; ++n) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-16) break;
        }
        return sum * std::exp(-x + a * std::log(x) - lg);
    }
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return 1.0 - std::exp(-x + a * std::log(x) - lg) * h;
}

}  // namespace

double chi2_cdf(double x, int df) {
    if (df < 1) throw Error("domain", "chi2_cdf: df must be >= 1");
    if (x < 0.0) return 0.0;
    return gamma_p(0.5 * df, 0.5 * x);
}

double chi2_quantile(double p, int df) {
    if (!(p > 0.0 && p < 1.0)) throw Error("domain", "chi2_quantile: p outside (0,1)");
    if (df < 1) throw Error("domain", "chi2_quantile: df must be >= 1");
    double lo = 0.0, hi = 1.0;
    while (chi2_cdf(hi, df) < p) hi *= 2.0;
    while (hi - lo > 1e-9) {
        double mid = 0.5 * (lo + hi);
        (chi2_cdf(mid, df) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

double secant_root(const std::function<double(double)>& f, double x0, double x1,
                   double tol, int max_iter) {
    double f0 = f(x0), f1 = f(x1);
    if (!std::isfinite(f0) || !std::isfinite(f1))
        throw Error("domain", "secant_root: f not finite at the starting points");
    bool have_bracket = (f0 > 0.0) != (f1 > 0.0);
    double blo = std::min(x0, x1), bhi = std::max(x0, x1);
    double flo = x0 < x1 ? f0 : f1;

    for (int it = 0; it < max_iter; ++it) {
        if (std::abs(f1) < tol) return x1;
        double x2;
        if (f1 != f0) {
            x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        } else {
            x2 = have_bracket ? 0.5 * (blo + bhi) : x1 + (x1 - x0);
        }
        if (have_bracket && (x2 <= blo || x2 >= bhi)) x2 = 0.5 * (blo + bhi);
        double f2 = f(x2);
        if (!std::isfinite(f2))
            throw Error("no_root", "secant_root: f not finite at " + std::to_string(x2));
        if (!have_bracket && (f2 > 0.0) != (f1 > 0.0)) {
            have_bracket = true;
            blo = std::min(x1, x2);
            bhi = std::max(x1, x2);
            flo = x1 < x2 ? f1 : f2;
        } else if (have_bracket && x2 > blo && x2 < bhi) {
            if ((f2 > 0.0) == (flo > 0.0)) {
                blo = x2;
                flo = f2;
            } else {
                bhi = x2;
            }
        }
        if (have_bracket && bhi - blo < tol) return 0.5 * (blo + bhi);
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
    }
    throw Error("no_root", "secant_root: no convergence, last iterate " + std::to_string(x1));
}

}  // namespace fmb
