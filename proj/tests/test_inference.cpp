#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "fmb/inference.hpp"
#include "fmb/numerics.hpp"

using namespace fmb;

namespace {

BootstrapDraws normal_draws(std::size_t R, std::uint64_t seed) {
    Rng rng(seed, 0);
    std::vector<double> v(R);
    for (auto& x : v) x = rng.normal();
    return BootstrapDraws(std::move(v), StatisticKind::S, seed);
}

}  // namespace

TEST_CASE("two-sided inversion on an affine statistic") {
    // S(theta) = 2(theta - 1): endpoints are exactly quantile/2 + 1
    auto s_of = [](double th) { return 2.0 * (th - 1.0); };
    auto draws = normal_draws(999, 42);
    auto ci = invert_two_sided(s_of, draws, 0.05, -5.0, 5.0);
    CHECK(ci.lower == doctest::Approx(draws.quantile(0.025) / 2.0 + 1.0).epsilon(1e-9));
    CHECK(ci.upper == doctest::Approx(draws.quantile(0.975) / 2.0 + 1.0).epsilon(1e-9));
    CHECK(ci.lower <= ci.upper);
    CHECK(ci.level == doctest::Approx(0.95));
}

TEST_CASE("decreasing statistic flips the endpoint ordering") {
    auto s_of = [](double th) { return -2.0 * (th - 1.0); };
    auto draws = normal_draws(999, 42);
    auto ci = invert_two_sided(s_of, draws, 0.05, -5.0, 5.0);
    CHECK(ci.lower == doctest::Approx(-draws.quantile(0.975) / 2.0 + 1.0).epsilon(1e-9));
    CHECK(ci.upper == doctest::Approx(-draws.quantile(0.025) / 2.0 + 1.0).epsilon(1e-9));
}

TEST_CASE("one-sided inversion and bracket errors") {
    auto s_of = [](double th) { return th; };
    auto draws = normal_draws(501, 9);
    auto ci = invert_one_sided(s_of, draws, 0.05, -10.0, 10.0);
    CHECK(ci.lower == -10.0);
    CHECK(ci.upper == doctest::Approx(draws.quantile(0.95)).epsilon(1e-9));
    CHECK(ci.kind == IntervalKind::one_sided_upper);
    // bracket too narrow
    CHECK_THROWS_WITH_AS(invert_one_sided(s_of, draws, 0.05, -0.01, 0.01),
                         doctest::Contains("outside the statistic's range"), Error);
    // non-monotone statistic
    auto bump = [](double th) { return th * th; };
    CHECK_THROWS_WITH_AS(invert_two_sided(bump, draws, 0.05, -1.0, 1.0),
                         doctest::Contains("monotone"), Error);
}

TEST_CASE("interval nesting in alpha") {
    auto s_of = [](double th) { return th; };
    auto draws = normal_draws(2001, 4);
    auto wide = invert_two_sided(s_of, draws, 0.01, -10.0, 10.0);
    auto mid = invert_two_sided(s_of, draws, 0.05, -10.0, 10.0);
    auto narrow = invert_two_sided(s_of, draws, 0.5, -10.0, 10.0);
    CHECK(wide.lower <= mid.lower);
    CHECK(mid.lower <= narrow.lower);
    CHECK(narrow.upper <= mid.upper);
    CHECK(mid.upper <= wide.upper);
}

TEST_CASE("reparameterization invariance under exp") {
    auto draws = normal_draws(999, 33);
    auto s_theta = [](double th) { return 3.0 * (th - 0.4); };
    auto s_eta = [&](double eta) { return s_theta(std::log(eta)); };
    auto ci_t = invert_two_sided(s_theta, draws, 0.05, -2.0, 2.0);
    auto ci_e = invert_two_sided(s_eta, draws, 0.05, std::exp(-2.0), std::exp(2.0));
    CHECK(ci_e.lower == doctest::Approx(std::exp(ci_t.lower)).epsilon(1e-8));
    CHECK(ci_e.upper == doctest::Approx(std::exp(ci_t.upper)).epsilon(1e-8));
}

TEST_CASE("confidence region threshold and membership") {
    auto draws = normal_draws(400, 2);
    QFunction q_of = [](const std::vector<double>& b) {
        QStat q;
        q.value = b[0] * b[0] + b[1] * b[1];
        q.rank = 2;
        return q;
    };
    std::vector<std::vector<double>> grid;
    for (double x = -2.0; x <= 2.0; x += 0.5)
        for (double y = -2.0; y <= 2.0; y += 0.5) grid.push_back({x, y});
    auto reg = confidence_region(q_of, draws, 0.1, grid);
    CHECK(reg.threshold == draws.quantile(0.9));
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(static_cast<bool>(reg.mask[i]) ==
              (grid[i][0] * grid[i][0] + grid[i][1] * grid[i][1] <= reg.threshold));
    // threshold below min Q -> empty mask, legal
    auto draws_low = BootstrapDraws({-1.0, -1.0, -1.0}, StatisticKind::Q, 0);
    auto empty = confidence_region(q_of, draws_low, 0.1, grid);
    for (auto m : empty.mask) CHECK(m == 0);
}

TEST_CASE("confidence distribution, curve, and p-values") {
    auto draws = BootstrapDraws({-2.0, -1.0, 0.0, 1.0, 2.0}, StatisticKind::S, 0);
    auto s_of = [](double th) { return th; };
    std::vector<double> grid = {-3.0, -1.5, 0.0, 1.5, 3.0};
    auto cd = confidence_distribution(s_of, draws, grid);
    CHECK(cd.hstar[0] == 0.0);   // below the minimum replicate
    CHECK(cd.hstar[2] == 0.6);   // replicates <= 0: three of five
    CHECK(cd.hstar[4] == 1.0);
    // monotone grid + increasing statistic -> nondecreasing hstar
    for (std::size_t i = 1; i < cd.hstar.size(); ++i) CHECK(cd.hstar[i] >= cd.hstar[i - 1]);

    confidence_curve(cd);
    for (std::size_t i = 0; i < cd.cv.size(); ++i) {
        CHECK(cd.cv[i] == 2.0 * std::min(cd.hstar[i], 1.0 - cd.hstar[i]));
        CHECK(cd.cv[i] >= 0.0);
        CHECK(cd.cv[i] <= 1.0);
    }

    CHECK(p_value_one_sided(cd, 0.0) == 0.6);
    // interpolation halfway between grid points
    CHECK(p_value_one_sided(cd, 0.75) == doctest::Approx(0.5 * (0.6 + 0.8)).epsilon(1e-12));
    CHECK(p_value_equal_tail(cd, 0.0) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK_THROWS_AS(p_value_one_sided(cd, 5.0), Error);
    CHECK_THROWS_AS(p_value_equal_tail(cd, -4.0), Error);
}

TEST_CASE("hstar = 0.5 gives cv = 1 and hstar = 0.975 gives equal-tail p = 0.05") {
    ConfidenceCurvePoints cd;
    cd.grid = {0.0, 1.0};
    cd.hstar = {0.5, 0.975};
    confidence_curve(cd);
    CHECK(cd.cv[0] == 1.0);
    CHECK(p_value_equal_tail(cd, 1.0) == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("slice nesting and the empty slice error") {
    auto draws = BootstrapDraws({1.0, 2.0, 3.0, 4.0}, StatisticKind::Q, 0);
    QFunction q_of = [](const std::vector<double>& b) {
        QStat q;
        q.value = 10.0 * (b[0] - 0.5) * (b[0] - 0.5) + b[1] * b[1];
        q.rank = 2;
        return q;
    };
    std::vector<double> grid;
    for (double x = -1.0; x <= 2.0; x += 0.01) grid.push_back(x);
    auto tight = slice_region(q_of, draws, 0.5, {0.0, 0.0}, 0, grid);
    auto loose = slice_region(q_of, draws, 0.25, {0.0, 0.0}, 0, grid);
    CHECK(loose.lower <= tight.lower);
    CHECK(tight.upper <= loose.upper);
    // the minimizer of the sliced Q sits inside its own interval
    CHECK(tight.lower <= 0.5);
    CHECK(0.5 <= tight.upper);
    // pin the nuisance far away -> level set empty
    CHECK_THROWS_WITH_AS(slice_region(q_of, draws, 0.25, {0.0, 50.0}, 0, grid),
                         doctest::Contains("empty"), Error);
}

TEST_CASE("marginal curve: degenerate nuisance axes reduce to slicing") {
    std::array<std::vector<double>, 3> axes = {
        std::vector<double>{0.0, 0.5, 1.0}, std::vector<double>{7.0}, std::vector<double>{3.0}};
    std::vector<double> cv = {0.2, 1.0, 0.4};
    auto out = marginal_curve(cv, axes, 0);
    REQUIRE(out.cv.size() == 3);
    CHECK(out.cv[0] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(out.cv[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(out.cv[2] == doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("marginal curve: constant-in-nuisance cv is unchanged up to scaling") {
    std::array<std::vector<double>, 3> axes = {std::vector<double>{0.0, 1.0, 2.0},
                                               std::vector<double>{0.0, 0.3, 0.9},
                                               std::vector<double>{0.0, 0.5}};
    std::vector<double> cv(3 * 3 * 2);
    const double vals[3] = {0.25, 1.0, 0.5};
    for (int i0 = 0; i0 < 3; ++i0)
        for (int i1 = 0; i1 < 3; ++i1)
            for (int i2 = 0; i2 < 2; ++i2) cv[(i0 * 3 + i1) * 2 + i2] = vals[i0];
    auto out = marginal_curve(cv, axes, 0);
    for (int i = 0; i < 3; ++i) CHECK(out.cv[i] == doctest::Approx(vals[i]).epsilon(1e-12));
    // max renormalized to 1 exactly
    CHECK(*std::max_element(out.cv.begin(), out.cv.end()) == doctest::Approx(1.0).epsilon(1e-15));
}
