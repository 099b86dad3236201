#include "fmb/bench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "fmb/acd.hpp"
#include "fmb/hac.hpp"
#include "fmb/numerics.hpp"

namespace fmb {

bool method_s(double q_value, std::size_t nu, double alpha) {
    if (nu == 0) throw Error("domain", "method_s: zero degrees of freedom");
    return q_value <= chi2_quantile(1.0 - alpha, static_cast<double>(nu));
}

namespace {

// Jacobian of the smoothed moment mean: r x p, column-major by parameter.
// Analytic raw derivatives when available, else central finite differences;
// either way smoothed with the problem's kernel (smoothing is linear).
std::vector<std::vector<double>> smoothed_jacobian(const GelProblem& prob,
                                                   const std::vector<double>& beta) {
    std::vector<std::vector<double>> cols(prob.p);
    if (prob.deriv_fn) {
        auto raw_d = prob.deriv_fn(beta);
        for (std::size_t j = 0; j < prob.p; ++j)
            cols[j] = smooth_series(raw_d[j], prob.spec, prob.bandwidth, -1.0).mean();
        return cols;
    }
    for (std::size_t j = 0; j < prob.p; ++j) {
        const double h = std::max(1e-6, 1e-6 * std::abs(beta[j]));
        auto bp = beta, bm = beta;
        bp[j] += h;
        bm[j] -= h;
        // keep the stencil inside the feasible box (one-sided at a boundary)
        if (j < prob.box_hi.size()) bp[j] = std::min(bp[j], prob.box_hi[j]);
        if (j < prob.box_lo.size()) bm[j] = std::max(bm[j], prob.box_lo[j]);
        const double spread = bp[j] - bm[j];
        if (spread <= 0.0) throw Error("replicate_failed", "smoothed_jacobian: degenerate box");
        auto mp = smooth_series(prob.moment_fn(bp), prob.spec, prob.bandwidth, -1.0).mean();
        auto mm = smooth_series(prob.moment_fn(bm), prob.spec, prob.bandwidth, -1.0).mean();
        cols[j].resize(prob.r);
        for (std::size_t i = 0; i < prob.r; ++i) cols[j][i] = (mp[i] - mm[i]) / spread;
    }
    return cols;
}

}  // namespace

bool method_wald(const GelProblem& prob, const GelEstimate& est, const std::vector<double>& beta0,
                 double alpha) {
    const std::size_t p = prob.p, r = prob.r;
    if (beta0.size() != p || est.beta_hat.size() != p)
        throw Error("domain", "method_wald: dimension mismatch");

    auto raw = prob.moment_fn(est.beta_hat);
    auto sm = smooth_series(raw, prob.spec, prob.bandwidth, -1.0);
    auto cov = lr_cov_smoothed(sm, raw, /*center=*/true);
    auto jac = smoothed_jacobian(prob, est.beta_hat);

    // A = G' Omega^{-1} G, p x p.
    std::vector<double> a(p * p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        auto oj = cov.inverse.multiply(jac[j]);
        for (std::size_t i = 0; i < p; ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k < r; ++k) s += jac[i][k] * oj[k];
            a[i * p + j] = s;
        }
    }
    auto A = SymMatrix::from_dense(a, p, 1e-8);
    auto eig = sym_eigen(A);
    if (eig.values.front() <= 0.0 || eig.values.back() <= 1e-10 * eig.values.front())
        throw Error("replicate_failed", "method_wald: singular G' Omega^{-1} G");

    std::vector<double> d(p);
    for (std::size_t j = 0; j < p; ++j) d[j] = est.beta_hat[j] - beta0[j];
    const double w = static_cast<double>(raw.T()) * A.quad_form(d);
    return w <= chi2_quantile(1.0 - alpha, static_cast<double>(p));
}

bool method_lr(const GelProblem& prob, const std::vector<double>& beta0, const GelEstimate& est,
               double alpha, double lr_constant) {
    bool ok = false;
    std::vector<double> lam0;
    try {
        lam0 = inner_lambda(prob, beta0, &ok);
    } catch (const Error& e) {
        throw Error("replicate_failed", std::string("method_lr: ") + e.what());
    }
    if (!ok) throw Error("replicate_failed", "method_lr: inner ascent failed at beta0");
    const double p0 = gel_criterion(prob, beta0, lam0);
    const std::size_t T = prob.moment_fn(beta0).T();
    const double k1 = prob.spec.kappa1(), k2 = prob.spec.kappa2();
    double lr = lr_constant * 2.0 * static_cast<double>(T) * k2 / (k1 * k1 * prob.bandwidth) *
                (p0 - est.criterion);
    lr = std::max(lr, 0.0);
    return lr <= chi2_quantile(1.0 - alpha, static_cast<double>(prob.r));
}

namespace {

bool known_method(const std::string& m) {
    return m == "fmb" || m == "s" || m == "wald" || m == "lr";
}

}  // namespace

CoverageReport run_coverage(const CoverageConfig& config) {
    if (config.mc_reps == 0) throw Error("domain", "run_coverage: mc_reps must be >= 1");
    if (config.methods.empty()) throw Error("domain", "run_coverage: no methods selected");
    for (const auto& m : config.methods)
        if (!known_method(m)) throw Error("domain", "run_coverage: unknown method '" + m + "'");
    for (double a : config.alphas)
        if (!(a > 0.0 && a < 1.0)) throw Error("domain", "run_coverage: alpha outside (0,1)");
    if (config.beta_true.size() != 2) throw Error("domain", "run_coverage: beta_true must be 2-D");

    const ACDParams truth(1.0, config.beta_true[0], config.beta_true[1]);
    KernelSpec spec(config.family);
    const std::size_t n_alpha = config.alphas.size();

    std::map<std::string, std::vector<std::size_t>> covered;  // method -> per-alpha counts
    std::map<std::string, std::size_t> valid, failed;
    for (const auto& m : config.methods) {
        covered[m].assign(n_alpha, 0);
        valid[m] = failed[m] = 0;
    }
    std::vector<std::uint64_t> failed_reps;

    for (std::size_t rep = 0; rep < config.mc_reps; ++rep) {
        Rng sim_rng(config.seed, rep + 1);
        auto data = simulate_acd(truth, config.n, config.burn_in, sim_rng);

        GelProblem prob;
        prob.moment_fn = [&data](const std::vector<double>& b) {
            return acd_moments(data, ACDParams(1.0, b[0], b[1]));
        };
        prob.p = 2;
        prob.r = 3;
        prob.rho_kind = config.rho_kind;
        prob.spec = spec;
        prob.bandwidth = config.bandwidth;
        prob.box_lo = {0.0, 0.0};
        prob.box_hi = {0.9, 0.9};

        auto raw0 = acd_moments(data, truth);
        auto q0 = q_stat(raw0, spec, config.bandwidth);

        GelEstimate est;
        bool have_est = false;
        try {
            est = outer_beta(prob, {0.2, 0.2}, config.outer_starts,
                             config.seed ^ (0x9e3779b97f4a7c15ULL * (rep + 1)));
            have_est = true;
        } catch (const Error&) {
        }

        bool rep_failed = false;
        for (const auto& m : config.methods) {
            try {
                std::vector<bool> cov_flags(n_alpha);
                if (m == "s") {
                    for (std::size_t a = 0; a < n_alpha; ++a)
                        cov_flags[a] = method_s(q0.value, prob.r, config.alphas[a]);
                } else if (m == "fmb") {
                    if (!have_est) throw Error("replicate_failed", "estimation failed");
                    auto sm_hat = smooth_series(prob.moment_fn(est.beta_hat), spec,
                                                config.bandwidth, -1.0);
                    auto draws = bootstrap_q(sm_hat, config.bootstrap_r,
                                             config.seed + 0x51ed270b * (rep + 1));
                    for (std::size_t a = 0; a < n_alpha; ++a)
                        cov_flags[a] = q0.value <= draws.quantile(1.0 - config.alphas[a]);
                } else if (m == "wald") {
                    if (!have_est) throw Error("replicate_failed", "estimation failed");
                    for (std::size_t a = 0; a < n_alpha; ++a)
                        cov_flags[a] = method_wald(prob, est, config.beta_true, config.alphas[a]);
                } else {  // lr
                    if (!have_est) throw Error("replicate_failed", "estimation failed");
                    for (std::size_t a = 0; a < n_alpha; ++a)
                        cov_flags[a] = method_lr(prob, config.beta_true, est, config.alphas[a],
                                                 config.lr_constant);
                }
                ++valid[m];
                for (std::size_t a = 0; a < n_alpha; ++a)
                    if (cov_flags[a]) ++covered[m][a];
            } catch (const Error&) {
                ++failed[m];
                rep_failed = true;
            }
        }
        if (rep_failed) failed_reps.push_back(rep);
    }

    for (const auto& m : config.methods) {
        if (failed[m] * 20 > config.mc_reps)
            throw Error("replicate_failures", "method '" + m + "' failed on " +
                                                  std::to_string(failed[m]) + " of " +
                                                  std::to_string(config.mc_reps) + " replicates");
    }

    CoverageReport report;
    report.n = config.n;
    report.bandwidth = config.bandwidth;
    report.mc_reps = config.mc_reps;
    report.seed = config.seed;
    report.failed_replicates = failed_reps;
    for (const auto& m : config.methods) {
        report.failure_methods.push_back(m);
        report.failure_counts.push_back(failed[m]);
        for (std::size_t a = 0; a < n_alpha; ++a) {
            CoverageCell cell;
            cell.method = m;
            cell.nominal = 1.0 - config.alphas[a];
            const double v = static_cast<double>(valid[m]);
            cell.empirical = v > 0 ? static_cast<double>(covered[m][a]) / v : 0.0;
            cell.mc_se = v > 0 ? std::sqrt(cell.empirical * (1.0 - cell.empirical) / v) : 0.0;
            report.cells.push_back(cell);
        }
    }
    return report;
}

void write_coverage_csv(const CoverageReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("io", "cannot write '" + path + "'");
    out.precision(10);
    out << "method,n,bandwidth,nominal,empirical,mc_se,mc_reps,seed\n";
    for (const auto& c : report.cells)
        out << c.method << ',' << report.n << ',' << report.bandwidth << ',' << c.nominal << ','
            << c.empirical << ',' << c.mc_se << ',' << report.mc_reps << ',' << report.seed
            << "\n";
}

}  // namespace fmb
