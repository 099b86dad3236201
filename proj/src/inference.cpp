#include "fmb/inference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fmb/numerics.hpp"

namespace fmb {

namespace {

// 16-point scan: returns +1 (strictly increasing), -1 (strictly decreasing),
// throws otherwise. Also reports the scanned min/max of s_of.
int monotone_direction(const ScalarStat& s_of, double lo, double hi, double* smin, double* smax) {
    constexpr int n = 16;
    double prev = 0.0;
    int dir = 0;
    *smin = *smax = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
        const double s = s_of(x);
        if (!std::isfinite(s)) throw Error("domain", "statistic not finite at " + std::to_string(x));
        if (i == 0) {
            *smin = *smax = s;
        } else {
            const int d = (s > prev) ? 1 : (s < prev ? -1 : 0);
            if (d == 0 || (dir != 0 && d != dir))
                throw Error("monotonicity_violated",
                            "statistic is not strictly monotone on the bracket near " +
                                std::to_string(x));
            dir = d;
            *smin = std::min(*smin, s);
            *smax = std::max(*smax, s);
        }
        prev = s;
    }
    return dir;
}

double solve_level(const ScalarStat& s_of, double target, double lo, double hi, double smin,
                   double smax) {
    if (target < smin || target > smax)
        throw Error("quantile_out_of_range",
                    "bootstrap quantile " + std::to_string(target) +
                        " outside the statistic's range on the bracket [" + std::to_string(smin) +
                        ", " + std::to_string(smax) + "]");
    return secant_root([&](double x) { return s_of(x) - target; }, lo, hi);
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error("domain", "alpha outside (0,1)");
}

}  // namespace

ConfidenceInterval invert_one_sided(const ScalarStat& s_of, const BootstrapDraws& draws,
                                    double alpha, double lo, double hi) {
    check_alpha(alpha);
    double smin, smax;
    const int dir = monotone_direction(s_of, lo, hi, &smin, &smax);
    const double q = draws.quantile(dir > 0 ? 1.0 - alpha : alpha);
    ConfidenceInterval ci;
    ci.kind = IntervalKind::one_sided_upper;
    ci.level = 1.0 - alpha;
    ci.lower = lo;
    ci.upper = solve_level(s_of, q, lo, hi, smin, smax);
    return ci;
}

ConfidenceInterval invert_two_sided(const ScalarStat& s_of, const BootstrapDraws& draws,
                                    double alpha, double lo, double hi) {
    check_alpha(alpha);
    double smin, smax;
    const int dir = monotone_direction(s_of, lo, hi, &smin, &smax);
    const double s1 = draws.quantile(alpha / 2.0);
    const double s2 = draws.quantile(1.0 - alpha / 2.0);
    const double c1 = solve_level(s_of, s1, lo, hi, smin, smax);
    const double c2 = solve_level(s_of, s2, lo, hi, smin, smax);
    ConfidenceInterval ci;
    ci.kind = IntervalKind::two_sided_equal_tail;
    ci.level = 1.0 - alpha;
    ci.lower = dir > 0 ? c1 : c2;
    ci.upper = dir > 0 ? c2 : c1;
    return ci;
}

RegionResult confidence_region(const QFunction& q_of, const BootstrapDraws& draws, double alpha,
                               const std::vector<std::vector<double>>& grid) {
    check_alpha(alpha);
    RegionResult out;
    out.threshold = draws.quantile(1.0 - alpha);
    out.mask.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        out.mask[i] = q_of(grid[i]).value <= out.threshold ? 1 : 0;
    return out;
}

ConfidenceCurvePoints confidence_distribution(const ScalarStat& s_of, const BootstrapDraws& draws,
                                              std::vector<double> grid) {
    const auto& sorted = draws.sorted();
    const double R = static_cast<double>(sorted.size());
    ConfidenceCurvePoints cd;
    cd.grid = std::move(grid);
    cd.hstar.resize(cd.grid.size());
    for (std::size_t i = 0; i < cd.grid.size(); ++i) {
        const double s = s_of(cd.grid[i]);
        const auto it = std::upper_bound(sorted.begin(), sorted.end(), s);
        cd.hstar[i] = static_cast<double>(it - sorted.begin()) / R;
    }
    return cd;
}

void confidence_curve(ConfidenceCurvePoints& cd) {
    cd.cv.resize(cd.hstar.size());
    for (std::size_t i = 0; i < cd.hstar.size(); ++i)
        cd.cv[i] = 2.0 * std::min(cd.hstar[i], 1.0 - cd.hstar[i]);
}

namespace {

double interp_hstar(const ConfidenceCurvePoints& cd, double theta0) {
    if (cd.grid.empty()) throw Error("domain", "empty confidence distribution");
    if (theta0 < cd.grid.front() || theta0 > cd.grid.back())
        throw Error("domain", "theta0 outside the tabulated grid");
    const auto it = std::lower_bound(cd.grid.begin(), cd.grid.end(), theta0);
    const std::size_t j = static_cast<std::size_t>(it - cd.grid.begin());
    if (j == 0 || cd.grid[j] == theta0) return cd.hstar[j];
    const double w = (theta0 - cd.grid[j - 1]) / (cd.grid[j] - cd.grid[j - 1]);
    return (1.0 - w) * cd.hstar[j - 1] + w * cd.hstar[j];
}

}  // namespace

double p_value_one_sided(const ConfidenceCurvePoints& cd, double theta0) {
    return interp_hstar(cd, theta0);
}

double p_value_equal_tail(const ConfidenceCurvePoints& cd, double theta0) {
    const double h = interp_hstar(cd, theta0);
    return 2.0 * std::min(h, 1.0 - h);
}

ConfidenceInterval slice_region(const QFunction& q_of, const BootstrapDraws& draws, double alpha,
                                const std::vector<double>& fixed, std::size_t free_index,
                                const std::vector<double>& grid1d) {
    check_alpha(alpha);
    if (free_index >= fixed.size()) throw Error("domain", "free_index out of range");
    if (grid1d.size() < 2) throw Error("domain", "slice grid needs at least 2 points");
    const double thr = draws.quantile(1.0 - alpha);

    std::vector<double> q(grid1d.size());
    std::vector<double> point = fixed;
    for (std::size_t i = 0; i < grid1d.size(); ++i) {
        point[free_index] = grid1d[i];
        q[i] = q_of(point).value;
    }
    std::size_t first = grid1d.size(), last = 0;
    for (std::size_t i = 0; i < q.size(); ++i)
        if (q[i] <= thr) {
            first = std::min(first, i);
            last = std::max(last, i);
        }
    if (first == grid1d.size())
        throw Error("empty_slice", "level set empty on the slice grid (threshold " +
                                       std::to_string(thr) + ")");

    // Refine the boundary by linear interpolation of Q-hat across the crossing cells.
    double lower = grid1d[first];
    if (first > 0) {
        const double w = (thr - q[first - 1]) / (q[first] - q[first - 1]);
        lower = grid1d[first - 1] + w * (grid1d[first] - grid1d[first - 1]);
    }
    double upper = grid1d[last];
    if (last + 1 < grid1d.size()) {
        const double w = (thr - q[last]) / (q[last + 1] - q[last]);
        upper = grid1d[last] + w * (grid1d[last + 1] - grid1d[last]);
    }
    ConfidenceInterval ci;
    ci.kind = IntervalKind::two_sided_equal_tail;
    ci.level = 1.0 - alpha;
    ci.lower = lower;
    ci.upper = upper;
    return ci;
}

ConfidenceCurvePoints marginal_curve(const std::vector<double>& cv,
                                     const std::array<std::vector<double>, 3>& axes,
                                     std::size_t target_index) {
    if (target_index > 2) throw Error("domain", "target_index must be 0, 1, or 2");
    const std::size_t n0 = axes[0].size(), n1 = axes[1].size(), n2 = axes[2].size();
    if (n0 == 0 || n1 == 0 || n2 == 0) throw Error("domain", "empty grid axis");
    if (cv.size() != n0 * n1 * n2) throw Error("domain", "cv length does not match the grid");

    // Trapezoid weights; a single-point axis gets weight 1 (degenerates to slicing).
    auto weights = [](const std::vector<double>& ax) {
        std::vector<double> w(ax.size(), 1.0);
        if (ax.size() >= 2) {
            for (std::size_t i = 0; i < ax.size(); ++i) {
                const double left = i > 0 ? ax[i] - ax[i - 1] : 0.0;
                const double right = i + 1 < ax.size() ? ax[i + 1] - ax[i] : 0.0;
                w[i] = 0.5 * (left + right);
            }
        }
        return w;
    };
    const std::array<std::vector<double>, 3> w = {weights(axes[0]), weights(axes[1]),
                                                  weights(axes[2])};

    ConfidenceCurvePoints out;
    out.grid = axes[target_index];
    out.cv.assign(out.grid.size(), 0.0);
    for (std::size_t i0 = 0; i0 < n0; ++i0)
        for (std::size_t i1 = 0; i1 < n1; ++i1)
            for (std::size_t i2 = 0; i2 < n2; ++i2) {
                const std::array<std::size_t, 3> idx = {i0, i1, i2};
                double mass = cv[(i0 * n1 + i1) * n2 + i2];
                for (std::size_t a = 0; a < 3; ++a)
                    if (a != target_index) mass *= w[a][idx[a]];
                out.cv[idx[target_index]] += mass;
            }
    const double mx = *std::max_element(out.cv.begin(), out.cv.end());
    if (mx > 0.0)
        for (double& v : out.cv) v /= mx;
    return out;
}

}  // namespace fmb
