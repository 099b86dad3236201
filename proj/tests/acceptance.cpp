// Acceptance gate: one pass/fail line per criterion. Criteria 5-6 run a
// 200-replicate smoke variant by default (tolerance 0.08); set
// FMB_ACCEPTANCE_FULL=1 for the 2000-replicate run (tolerance 0.03).

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "fmb/acd.hpp"
#include "fmb/bench.hpp"
#include "fmb/gel.hpp"
#include "fmb/inference.hpp"

using namespace fmb;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
    std::printf("criterion %d: %s — %s\n", criterion, pass ? "PASS" : "FAIL", what.c_str());
    if (!pass) ++g_failures;
}

double parzen(double x) {
    const double u = std::abs(x) / 2.0;
    if (u >= 1.0) return 0.0;
    if (u <= 0.5) return 1.0 - 6.0 * u * u + 6.0 * u * u * u;
    return 2.0 * std::pow(1.0 - u, 3.0);
}

double qs_star(double x) {
    if (x == 0.0) return 1.0;
    const double z = 6.0 * M_PI * x / 5.0;
    return 25.0 / (12.0 * M_PI * M_PI * x * x) * (std::sin(z) / z - std::cos(z));
}

void criterion_1() {
    KernelSpec tr(KernelFamily::Truncated), ba(KernelFamily::Bartlett),
        qs(KernelFamily::BesselQS);
    double err_tr = 0.0, err_ba = 0.0, err_qs = 0.0;
    for (double a = -3.0; a <= 3.0; a += 0.01) {
        const double bart = std::abs(a) >= 2.0 ? 0.0 : 1.0 - std::abs(a) / 2.0;
        err_tr = std::max(err_tr, std::abs(eval_induced(tr, a) - bart));
        err_ba = std::max(err_ba, std::abs(eval_induced(ba, a) - parzen(a)));
    }
    for (double a = 0.1; a <= 3.0; a += 0.01)
        err_qs = std::max(err_qs, std::abs(eval_induced(qs, a) - qs_star(a)));
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "kernel identities: max err truncated %.2e, bartlett %.2e, bessel_qs %.2e",
                  err_tr, err_ba, err_qs);
    report(1, err_tr < 1e-8 && err_ba < 1e-8 && err_qs < 1e-3, buf);
}

void criterion_2() {
    double worst = 0.0;
    int instance = 0;
    for (auto fam : {KernelFamily::Truncated, KernelFamily::Bartlett, KernelFamily::BesselQS}) {
        KernelSpec spec(fam);
        for (double B : {2.0, 3.0, 5.0}) {
            for (int k = 0; k < 23 && instance < 200; ++k) {
                ++instance;
                Rng rng(4000 + instance, 0);
                MomentSeries raw(200, 3);
                for (std::size_t t = 0; t < 200; ++t)
                    for (std::size_t j = 0; j < 3; ++j) raw.set(t, j, rng.normal());
                auto sm = smooth_series(raw, spec, B, -1.0);
                auto a = lr_cov_smoothed(sm, raw, false);
                auto b = lr_cov_lagform(raw, spec, B);
                const double scale = a.omega.max_abs();
                for (std::size_t i = 0; i < 3; ++i)
                    for (std::size_t j = 0; j < 3; ++j)
                        worst = std::max(worst, std::abs(a.omega(i, j) - b(i, j)) / scale);
            }
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "HAC form equivalence over %d instances: worst relative gap %.2e", instance,
                  worst);
    report(2, worst < 1e-10 && instance == 200, buf);
}

double ks_stat(std::vector<double> draws, double (*cdf)(double)) {
    std::sort(draws.begin(), draws.end());
    const double n = static_cast<double>(draws.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < draws.size(); ++i) {
        const double f = cdf(draws[i]);
        ks = std::max(ks, std::abs((i + 1) / n - f));
        ks = std::max(ks, std::abs(i / n - f));
    }
    return ks;
}

void criterion_3() {
    const std::size_t T = 2000, R = 2000;
    ACDParams truth(1.0, 0.25, 0.25);
    Rng rng(314, 0);
    auto x = simulate_acd(truth, T, 500, rng);
    KernelSpec spec(KernelFamily::Bartlett);
    const double B = 9.0;  // inside (T^{1/4}, T^{1/2}) = (6.7, 44.7)

    // scalar pipeline at the location estimate: S* should be N(0,1)
    auto moments = [&x](double th) {
        MomentSeries m(x.size(), 1);
        for (std::size_t t = 0; t < x.size(); ++t) m.set(t, 0, x[t] - th);
        return m;
    };
    const double theta_hat = secant_root(
        [&](double th) { return smooth_series(moments(th), spec, B, -0.5).mean()[0]; }, 1.0,
        3.0);
    auto sm = smooth_series(moments(theta_hat), spec, B, -0.5);
    auto s_draws = bootstrap_s(sm, R, 11);
    const double ks_s = ks_stat(s_draws.replicates(), +[](double v) { return normal_cdf(v); });

    // Q* from the recentered r = 3 pool at the truth: chi^2_3
    auto g = acd_moments(x, truth);
    auto smq = smooth_series(g, spec, B, -1.0);
    auto q_draws = bootstrap_q(smq, R, 12);
    const double ks_q =
        ks_stat(q_draws.replicates(), +[](double v) { return chi2_cdf(v, 3.0); });

    char buf[160];
    std::snprintf(buf, sizeof buf, "pivotality at T=2000: KS(S*,N(0,1)) = %.3f, KS(Q*,chi2_3) = %.3f",
                  ks_s, ks_q);
    report(3, ks_s < 0.05 && ks_q < 0.05, buf);
}

void criterion_4() {
    Rng rng(55, 0);
    std::vector<double> x(400);
    for (auto& v : x) v = 0.4 + rng.normal() + 0.5 * (v = rng.normal(), v);  // mild noise mix
    KernelSpec spec(KernelFamily::Bartlett);
    const double B = 5.0;
    auto moments = [&x](double th) {
        MomentSeries m(x.size(), 1);
        for (std::size_t t = 0; t < x.size(); ++t) m.set(t, 0, x[t] - th);
        return m;
    };
    auto s_theta = [&](double th) { return s_stat(moments(th), spec, B); };
    auto s_eta = [&](double eta) { return s_theta(std::log(eta)); };
    const double th0 = secant_root(
        [&](double th) { return smooth_series(moments(th), spec, B, -0.5).mean()[0]; }, -2.0,
        3.0);
    auto sm = smooth_series(moments(th0), spec, B, -0.5);
    auto draws = bootstrap_s(sm, 999, 77);
    auto ci_t = invert_two_sided(s_theta, draws, 0.05, th0 - 1.0, th0 + 1.0);
    auto ci_e =
        invert_two_sided(s_eta, draws, 0.05, std::exp(th0 - 1.0), std::exp(th0 + 1.0));
    const double gap = std::max(std::abs(ci_e.lower - std::exp(ci_t.lower)),
                                std::abs(ci_e.upper - std::exp(ci_t.upper)));
    char buf[160];
    std::snprintf(buf, sizeof buf, "reparameterization invariance under exp: endpoint gap %.2e",
                  gap);
    report(4, gap < 1e-8, buf);
}

void criteria_5_6(bool full) {
    const std::size_t reps = full ? 2000 : 200;
    const double tol = full ? 0.03 : 0.08;

    CoverageConfig cfg;
    cfg.n = 100;
    cfg.bandwidth = 3.0;
    cfg.mc_reps = reps;
    cfg.bootstrap_r = 1000;
    cfg.alphas = {0.01, 0.05, 0.10, 0.25};
    cfg.methods = {"fmb", "s", "wald"};
    cfg.seed = 20260826;
    auto rep = run_coverage(cfg);

    auto cell = [&](const std::string& m, double nominal) {
        for (const auto& c : rep.cells)
            if (c.method == m && std::abs(c.nominal - nominal) < 1e-9) return c;
        return CoverageCell{};
    };
    const double fmb_want[4] = {0.954, 0.908, 0.862, 0.754};
    const double wald_want[4] = {0.923, 0.843, 0.774, 0.619};
    const double noms[4] = {0.99, 0.95, 0.90, 0.75};
    bool ok = true;
    std::string detail;
    char buf[96];
    for (int i = 0; i < 4; ++i) {
        const auto f = cell("fmb", noms[i]);
        const auto w = cell("wald", noms[i]);
        if (std::abs(f.empirical - fmb_want[i]) > tol) ok = false;
        if (std::abs(w.empirical - wald_want[i]) > tol) ok = false;
        std::snprintf(buf, sizeof buf, " [%.2f: fmb %.3f wald %.3f]", noms[i], f.empirical,
                      w.empirical);
        detail += buf;
    }
    const auto f95 = cell("fmb", 0.95), s95 = cell("s", 0.95);
    const bool order = f95.empirical >= s95.empirical - 2.0 * s95.mc_se;
    if (!order) ok = false;
    std::snprintf(buf, sizeof buf, " fmb>=s at 0.95: %.3f vs %.3f", f95.empirical,
                  s95.empirical);
    report(5, ok,
           (full ? "N=100 coverage benchmark (full, tol 0.03):"
                 : "N=100 coverage benchmark (smoke, tol 0.08):") +
               detail + buf);

    // criterion 6: N = 250, B = 5, nominal 0.90 -> 0.881
    CoverageConfig cfg63;
    cfg63.n = 250;
    cfg63.bandwidth = 5.0;
    cfg63.mc_reps = reps;
    cfg63.bootstrap_r = 1000;
    cfg63.alphas = {0.10};
    cfg63.methods = {"fmb"};
    cfg63.seed = 20260827;
    auto rep3 = run_coverage(cfg63);
    const double got = rep3.cells.front().empirical;
    std::snprintf(buf, sizeof buf,
                  "N=250 coverage spot check: fmb at B=5, nominal 0.90 -> %.3f", got);
    report(6, std::abs(got - 0.881) <= tol, buf);
}

void criterion_7() {
    bool ok = true;
    std::string notes;
    // standardization
    for (auto kind : {RhoKind::EL, RhoKind::ET, RhoKind::CUE}) {
        auto r0 = rho(0.0, kind);
        if (std::abs(r0.d1 + 1.0) > 1e-12 || std::abs(r0.d2 + 1.0) > 1e-12) ok = false;
    }
    // CUE closed form + FOC + gradient consistency on a mean model
    Rng rng(3, 0);
    std::vector<double> x(200);
    for (auto& v : x) v = 0.5 + rng.normal();
    GelProblem prob;
    prob.moment_fn = [&x](const std::vector<double>& b) {
        MomentSeries m(x.size(), 1);
        for (std::size_t t = 0; t < x.size(); ++t) m.set(t, 0, x[t] - b[0]);
        return m;
    };
    prob.p = prob.r = 1;
    prob.rho_kind = RhoKind::CUE;
    prob.spec = KernelSpec(KernelFamily::Bartlett);
    prob.bandwidth = 3.0;
    prob.box_lo = {-5.0};
    prob.box_hi = {5.0};

    auto lam = inner_lambda(prob, {0.3});
    auto sm = smooth_series(prob.moment_fn({0.3}), prob.spec, prob.bandwidth, -1.0);
    double gbar = 0.0, m2 = 0.0;
    for (std::size_t t = 0; t < sm.T; ++t) {
        gbar += sm(t, 0);
        m2 += sm(t, 0) * sm(t, 0);
    }
    gbar /= static_cast<double>(sm.T);
    m2 /= static_cast<double>(sm.T);
    const double closed = -gbar / (prob.spec.kappa() * m2);
    if (std::abs(lam[0] - closed) > 1e-9) ok = false;

    prob.rho_kind = RhoKind::ET;
    auto est = outer_beta(prob, {0.0});
    auto foc = gel_foc(prob, est.beta_hat, est.lambda_hat);
    if (std::abs(foc.psi1_bar[0]) > 1e-6 || std::abs(foc.psi2_bar[0]) > 1e-6) ok = false;

    const double h = 1e-6;
    auto foc2 = gel_foc(prob, {0.2}, {0.05});
    const double fd = (gel_criterion(prob, {0.2}, {0.05 + h}) -
                       gel_criterion(prob, {0.2}, {0.05 - h})) /
                      (2.0 * h);
    const double an = prob.spec.kappa() * foc2.psi1_bar[0];
    if (std::abs(an - fd) > 1e-5 * std::max(1.0, std::abs(fd))) ok = false;

    report(7, ok, "GEL: standardization, CUE closed form, FOC means, gradient consistency");
}

void criterion_8() {
    bool ok = true;
    KernelSpec ba(KernelFamily::Bartlett);

    // recentering exactness
    Rng rng(2, 0);
    MomentSeries raw(80, 2);
    for (std::size_t t = 0; t < 80; ++t)
        for (std::size_t j = 0; j < 2; ++j) raw.set(t, j, rng.normal());
    auto sm = smooth_series(raw, ba, 3.0, -1.0);
    {
        // mean of the recentered pool reconstructed from T single draws is
        // bounded by the pool's span; exactness checked via the pool itself
        const double bridge = std::sqrt(3.0);
        std::vector<double> mean(2, 0.0);
        for (std::size_t t = 0; t < 80; ++t)
            for (std::size_t j = 0; j < 2; ++j) mean[j] += bridge * sm(t, j);
        double recentered_sum = 0.0;
        for (std::size_t t = 0; t < 80; ++t)
            for (std::size_t j = 0; j < 2; ++j)
                recentered_sum += (bridge * sm(t, j) - mean[j] / 80.0);
        if (std::abs(recentered_sum) > 1e-10) ok = false;
    }

    // quantile nesting
    {
        Rng r2(5, 0);
        std::vector<double> v(501);
        for (auto& d : v) d = r2.normal();
        BootstrapDraws d(std::move(v), StatisticKind::S, 5);
        if (!(d.quantile(0.9) <= d.quantile(0.95) && d.quantile(0.95) <= d.quantile(0.99)))
            ok = false;
    }

    // cv identity
    {
        ConfidenceCurvePoints cd;
        cd.grid = {0.0, 1.0, 2.0};
        cd.hstar = {0.1, 0.5, 0.9};
        confidence_curve(cd);
        if (cd.cv[1] != 1.0 || cd.cv[0] != 0.2 || std::abs(cd.cv[2] - 0.2) > 1e-15) ok = false;
    }

    // PSD HAC + Moore-Penrose
    {
        auto cov = lr_cov_smoothed(sm, raw);
        auto eig = sym_eigen(cov.omega);
        if (eig.values.back() < -1e-10 * eig.values.front()) ok = false;
        for (std::size_t i = 0; i < 2 && ok; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                double s = 0.0;
                for (std::size_t a = 0; a < 2; ++a)
                    for (std::size_t b = 0; b < 2; ++b)
                        s += cov.omega(i, a) * cov.inverse(a, b) * cov.omega(b, j);
                if (std::abs(s - cov.omega(i, j)) > 1e-8 * cov.omega.max_abs()) ok = false;
            }
    }

    // smoothing linearity + scaling bridge
    {
        auto a = smooth_series(raw, ba, 3.0, -0.5);
        for (std::size_t i = 0; i < a.values.size(); ++i)
            if (std::abs(a.values[i] - std::sqrt(3.0) * sm.values[i]) >
                1e-13 * std::max(1.0, std::abs(a.values[i])))
                ok = false;
    }

    // ACD stationarity guard
    {
        bool threw = false;
        try {
            ACDParams bad(1.0, 0.6, 0.4);
        } catch (const Error&) {
            threw = true;
        }
        if (!threw) ok = false;
    }

    // end-to-end seeded determinism
    {
        ACDParams p(1.0, 0.25, 0.25);
        Rng ra(9, 1), rb(9, 1);
        if (simulate_acd(p, 50, 100, ra) != simulate_acd(p, 50, 100, rb)) ok = false;
        auto d1 = bootstrap_q(sm, 30, 17);
        auto d2 = bootstrap_q(sm, 30, 17);
        if (d1.replicates() != d2.replicates()) ok = false;
    }

    // bandwidth window warning logic
    {
        std::string msg;
        if (bandwidth_in_window(2.0, 500, &msg)) ok = false;
        if (msg.empty()) ok = false;
        if (!bandwidth_in_window(6.0, 500, nullptr)) ok = false;
    }

    report(8, ok, "property suite: recentering, nesting, cv identity, PSD, MP, bridge, guards");
}

}  // namespace

int main() {
    const char* full_env = std::getenv("FMB_ACCEPTANCE_FULL");
    const bool full = full_env && std::string(full_env) == "1";
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criteria_5_6(full);
    criterion_7();
    criterion_8();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed (%s variant for criteria 5-6)\n",
                full ? "full" : "smoke");
    return 0;
}
