#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fmb/numerics.hpp"
#include "fmb/smoothing.hpp"

using namespace fmb;

namespace {

MomentSeries tiny_series() {
    return MomentSeries::from_values({0.7, -1.1, 0.4, 2.2, -0.6}, 5, 1);
}

}  // namespace

TEST_CASE("smoothing matches the display on a hand-computed series") {
    KernelSpec ba(KernelFamily::Bartlett);
    auto raw = tiny_series();
    const double want_half[5] = {1.0606601717798207e-01, -3.8890872965260126e-01,
                                 6.7175144212722016e-01, 1.4849242404917500e+00,
                                 3.5355339059327384e-01};
    const double want_one[5] = {7.4999999999999956e-02, -2.7500000000000008e-01,
                                4.7499999999999998e-01, 1.0500000000000000e+00,
                                2.5000000000000006e-01};
    auto sh = smooth_series(raw, ba, 2.0, -0.5);
    auto so = smooth_series(raw, ba, 2.0, -1.0);
    for (int t = 0; t < 5; ++t) {
        CHECK(sh(t, 0) == doctest::Approx(want_half[t]).epsilon(1e-14));
        CHECK(so(t, 0) == doctest::Approx(want_one[t]).epsilon(1e-14));
    }
}

TEST_CASE("scaling bridge: exponent -1/2 equals sqrt(B) times exponent -1") {
    KernelSpec qs(KernelFamily::BesselQS);
    Rng rng(5, 0);
    MomentSeries raw(40, 2);
    for (std::size_t t = 0; t < 40; ++t)
        for (std::size_t j = 0; j < 2; ++j) raw.set(t, j, rng.normal());
    const double B = 3.0;
    auto a = smooth_series(raw, qs, B, -0.5);
    auto b = smooth_series(raw, qs, B, -1.0);
    for (std::size_t i = 0; i < a.values.size(); ++i)
        CHECK(a.values[i] == doctest::Approx(std::sqrt(B) * b.values[i]).epsilon(1e-14));
}

TEST_CASE("smoothing is linear in the raw series") {
    KernelSpec ba(KernelFamily::Bartlett);
    Rng rng(9, 0);
    MomentSeries x(30, 1), y(30, 1), z(30, 1);
    for (std::size_t t = 0; t < 30; ++t) {
        const double a = rng.normal(), b = rng.normal();
        x.set(t, 0, a);
        y.set(t, 0, b);
        z.set(t, 0, 2.0 * a - 3.0 * b);
    }
    auto sx = smooth_series(x, ba, 3.0, -1.0);
    auto sy = smooth_series(y, ba, 3.0, -1.0);
    auto sz = smooth_series(z, ba, 3.0, -1.0);
    for (std::size_t t = 0; t < 30; ++t)
        CHECK(sz(t, 0) == doctest::Approx(2.0 * sx(t, 0) - 3.0 * sy(t, 0)).epsilon(1e-12));
}

TEST_CASE("taper weights match the appendix display and the mean identity") {
    KernelSpec ba(KernelFamily::Bartlett);
    const double want[5] = {1.0606601717798214, 1.4142135623730951, 1.4142135623730951,
                            1.4142135623730951, 1.0606601717798214};
    auto w = taper_weights(5, ba, 2.0);
    for (int t = 0; t < 5; ++t) CHECK(w[t] == doctest::Approx(want[t]).epsilon(1e-14));

    // T^{1/2} mean(smoothed) = T^{-1/2} sum w(t) raw[t]
    auto raw = tiny_series();
    auto sm = smooth_series(raw, ba, 2.0, -0.5);
    double lhs = std::sqrt(5.0) * sm.mean()[0];
    double rhs = 0.0;
    for (int t = 0; t < 5; ++t) rhs += w[t] * raw(t, 0);
    rhs /= std::sqrt(5.0);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("row_at extends the convolution beyond the sample") {
    KernelSpec ba(KernelFamily::Bartlett);
    auto raw = tiny_series();
    auto sm = smooth_series(raw, ba, 2.0, -1.0);
    // 1-based rows inside the sample agree with the stored values
    for (long t = 1; t <= 5; ++t)
        CHECK(sm.row_at(raw, t)[0] == doctest::Approx(sm(t - 1, 0)).epsilon(1e-15));
    // one step past the end: only the lag-1 contribution B^{-1} k(1/2) x_T
    auto past = sm.row_at(raw, 6);
    CHECK(past[0] == doctest::Approx(0.5 * 0.5 * (-0.6)).epsilon(1e-14));
    // beyond the footprint: zero
    CHECK(sm.row_at(raw, 6 + sm.footprint())[0] == 0.0);
}

TEST_CASE("input validation") {
    KernelSpec ba(KernelFamily::Bartlett);
    CHECK_THROWS_AS(MomentSeries::from_values({1.0}, 1, 1), Error);
    CHECK_THROWS_AS(MomentSeries::from_values({1.0, std::nan("")}, 2, 1), Error);
    auto raw = tiny_series();
    CHECK_THROWS_AS(smooth_series(raw, ba, 0.0, -0.5), Error);
    CHECK_THROWS_AS(smooth_series(raw, ba, 2.0, -0.7), Error);
}
