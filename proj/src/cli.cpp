// Command-line front door: simulate, summary, estimate, ci, region, curve,
// coverage. Outputs are CSV/JSON for external tooling; all randomness flows
// from --seed. Errors surface as a JSON object on stderr with a stable
// "code" field; exit 2 on validation errors, 1 on computational failures.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fmb/acd.hpp"
#include "fmb/bench.hpp"
#include "fmb/gel.hpp"
#include "fmb/hac.hpp"
#include "fmb/inference.hpp"

using nlohmann::json;

namespace {

struct Common {
    std::string kernel = "bartlett";
    double bandwidth = 3.0;
    std::uint64_t seed = 12345;
    std::size_t bootstrap_r = 1000;
    double alpha = 0.05;
    std::string input, output;
    int threads = 1;
};

int exit_code_for(const fmb::Error& e) {
    const auto& c = e.code();
    return (c == "domain" || c == "usage" || c == "parse" || c == "io") ? 2 : 1;
}

void emit_error(const std::string& code, const std::string& message) {
    json err = {{"code", code}, {"message", message}};
    std::cerr << err.dump() << "\n";
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw fmb::Error("io", "cannot write '" + path + "'");
    return file;
}

void warn_bandwidth(double bandwidth, std::size_t T) {
    std::string msg;
    if (!fmb::bandwidth_in_window(bandwidth, T, &msg))
        std::cerr << "warning: " << msg << "\n";
}

// The scalar location pipeline: psi_t(theta) = x_t - theta.
fmb::MomentSeries location_moments(const std::vector<double>& x, double theta) {
    fmb::MomentSeries m(x.size(), 1);
    for (std::size_t t = 0; t < x.size(); ++t) m.set(t, 0, x[t] - theta);
    return m;
}

struct LocationFit {
    double theta_hat;  // root of the smoothed mean
    double se;         // sigma-hat / sqrt(T)
};

LocationFit fit_location(const std::vector<double>& x, const fmb::KernelSpec& spec,
                         double bandwidth) {
    double lo = x[0], hi = x[0], mean = 0.0;
    for (double v : x) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        mean += v;
    }
    mean /= static_cast<double>(x.size());
    const double span = std::max(hi - lo, 1e-8);
    const double theta_hat = fmb::secant_root(
        [&](double th) {
            return fmb::smooth_series(location_moments(x, th), spec, bandwidth, -0.5).mean()[0];
        },
        mean - span, mean + span);
    auto sm = fmb::smooth_series(location_moments(x, theta_hat), spec, bandwidth, -0.5);
    const double sigma2 = bandwidth * fmb::lr_scalar(sm, location_moments(x, theta_hat));
    return {theta_hat, std::sqrt(sigma2 / static_cast<double>(x.size()))};
}

fmb::GelProblem acd_problem(const std::vector<double>& data, const std::string& rho,
                            const std::string& kernel, double bandwidth) {
    fmb::GelProblem prob;
    prob.moment_fn = [&data](const std::vector<double>& b) {
        return fmb::acd_moments(data, fmb::ACDParams(1.0, b[0], b[1]));
    };
    prob.p = 2;
    prob.r = 3;
    prob.rho_kind = fmb::rho_kind_from_name(rho);
    prob.spec = fmb::KernelSpec(fmb::kernel_family_from_name(kernel));
    prob.bandwidth = bandwidth;
    prob.box_lo = {0.0, 0.0};
    prob.box_hi = {0.9, 0.9};
    return prob;
}

int run(int argc, char** argv) {
    CLI::App app{"Fast moving-average bootstrap for dependent data"};
    app.require_subcommand(1);
    Common c;
    if (const char* env = std::getenv("FMB_THREADS")) c.threads = std::atoi(env);
    app.add_option("--threads", c.threads, "worker count (results are thread-invariant)");

    // --- simulate ---------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "simulate an ACD(1,1) duration series");
    std::size_t sim_n = 250, sim_burn = 500;
    double sim_b1 = 0.25, sim_b2 = 0.25, sim_omega = 1.0;
    sim->add_option("--n", sim_n, "series length")->required();
    sim->add_option("--beta1", sim_b1);
    sim->add_option("--beta2", sim_b2);
    sim->add_option("--omega", sim_omega);
    sim->add_option("--burn-in", sim_burn);
    sim->add_option("--seed", c.seed);
    sim->add_option("--out", c.output, "output CSV ('-' for stdout)");

    // --- summary ----------------------------------------------------------
    auto* sum = app.add_subcommand("summary", "descriptive statistics of a series");
    sum->add_option("--input", c.input, "input CSV, single column")->required();
    sum->add_option("--out", c.output);

    // --- estimate ---------------------------------------------------------
    auto* est = app.add_subcommand("estimate", "GEL estimation of ACD(1,1) parameters");
    std::string est_rho = "et";
    std::vector<double> est_start = {0.2, 0.2};
    est->add_option("--input", c.input)->required();
    est->add_option("--rho", est_rho, "el|et|cue");
    est->add_option("--kernel", c.kernel, "truncated|bartlett|bessel_qs");
    est->add_option("--bandwidth", c.bandwidth)->required();
    est->add_option("--start", est_start)->expected(2);
    est->add_option("--seed", c.seed);
    est->add_option("--out", c.output);

    // --- ci -----------------------------------------------------------------
    auto* ci = app.add_subcommand("ci", "bootstrap CI for a location parameter");
    bool ci_one_sided = false;
    double ci_lo = 0.0, ci_hi = 0.0;
    bool ci_have_bracket = false;
    ci->add_option("--input", c.input)->required();
    ci->add_option("--kernel", c.kernel);
    ci->add_option("--bandwidth", c.bandwidth)->required();
    ci->add_option("--alpha", c.alpha);
    ci->add_option("--bootstrap-r", c.bootstrap_r);
    ci->add_option("--seed", c.seed);
    ci->add_flag("--one-sided", ci_one_sided, "one-sided upper interval");
    auto* opt_lo = ci->add_option("--lo", ci_lo, "inversion bracket lower end");
    ci->add_option("--hi", ci_hi, "inversion bracket upper end")->needs(opt_lo);
    ci->add_option("--out", c.output);
    ci->callback([&] { ci_have_bracket = opt_lo->count() > 0; });

    // --- region -------------------------------------------------------------
    auto* reg = app.add_subcommand("region", "bootstrap confidence region for (beta1, beta2)");
    std::string reg_rho = "et";
    std::vector<double> reg_b1 = {0.0, 0.6}, reg_b2 = {0.0, 0.6};
    std::size_t reg_steps = 31;
    reg->add_option("--input", c.input)->required();
    reg->add_option("--rho", reg_rho);
    reg->add_option("--kernel", c.kernel);
    reg->add_option("--bandwidth", c.bandwidth)->required();
    reg->add_option("--alpha", c.alpha);
    reg->add_option("--bootstrap-r", c.bootstrap_r);
    reg->add_option("--seed", c.seed);
    reg->add_option("--b1-range", reg_b1)->expected(2);
    reg->add_option("--b2-range", reg_b2)->expected(2);
    reg->add_option("--steps", reg_steps, "grid points per axis");
    reg->add_option("--out", c.output);

    // --- curve --------------------------------------------------------------
    auto* cur = app.add_subcommand("curve", "confidence curve for a location parameter");
    std::size_t cur_points = 401;
    std::vector<double> cur_range;
    cur->add_option("--input", c.input)->required();
    cur->add_option("--kernel", c.kernel);
    cur->add_option("--bandwidth", c.bandwidth)->required();
    cur->add_option("--bootstrap-r", c.bootstrap_r);
    cur->add_option("--seed", c.seed);
    cur->add_option("--points", cur_points);
    cur->add_option("--range", cur_range, "theta grid endpoints")->expected(2);
    cur->add_option("--out", c.output);

    // --- coverage -------------------------------------------------------------
    auto* cov = app.add_subcommand("coverage", "Monte Carlo coverage study");
    std::string cov_config, cov_rho = "et";
    fmb::CoverageConfig cc;
    bool has_n = false, has_bw = false, has_reps = false, has_r = false, has_seed = false;
    bool has_alphas = false, has_methods = false, has_lrc = false;
    std::vector<double> cov_alphas;
    std::vector<std::string> cov_methods;
    cov->add_option("--config", cov_config, "JSON config file");
    cov->add_option("--n", cc.n)->each([&](const std::string&) { has_n = true; });
    cov->add_option("--bandwidth", cc.bandwidth)->each([&](const std::string&) { has_bw = true; });
    cov->add_option("--mc-reps", cc.mc_reps)->each([&](const std::string&) { has_reps = true; });
    cov->add_option("--bootstrap-r", cc.bootstrap_r)->each([&](const std::string&) { has_r = true; });
    cov->add_option("--alpha", cov_alphas)->each([&](const std::string&) { has_alphas = true; });
    cov->add_option("--method", cov_methods)->each([&](const std::string&) { has_methods = true; });
    cov->add_option("--seed", cc.seed)->each([&](const std::string&) { has_seed = true; });
    cov->add_option("--kernel", c.kernel);
    cov->add_option("--rho", cov_rho);
    cov->add_option("--lr-constant", cc.lr_constant)->each([&](const std::string&) { has_lrc = true; });
    cov->add_option("--out", c.output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        throw fmb::Error("usage", e.what());
    }
    if (c.threads < 1) throw fmb::Error("domain", "--threads must be >= 1");

    std::ofstream file;

    if (sim->parsed()) {
        fmb::ACDParams params(sim_omega, sim_b1, sim_b2);
        fmb::Rng rng(c.seed, 0);
        auto x = fmb::simulate_acd(params, sim_n, sim_burn, rng);
        auto& out = open_output(c.output, file);
        out << "x\n";
        out.precision(17);
        for (double v : x) out << v << "\n";
        return 0;
    }

    if (sum->parsed()) {
        auto x = fmb::read_series_csv(c.input);
        auto st = fmb::summary_stats(x);
        auto& out = open_output(c.output, file);
        out.precision(10);
        out << "n,min,max,median,mean,iqr,sd,skewness,excess_kurtosis\n";
        out << st.n << ',' << st.min << ',' << st.max << ',' << st.median << ',' << st.mean << ','
            << st.iqr << ',' << st.sd << ',' << st.skewness << ',' << st.excess_kurtosis << "\n";
        return 0;
    }

    if (est->parsed()) {
        auto x = fmb::read_series_csv(c.input);
        warn_bandwidth(c.bandwidth, x.size());
        auto prob = acd_problem(x, est_rho, c.kernel, c.bandwidth);
        auto e = fmb::outer_beta(prob, est_start, 5, c.seed);
        json j = {{"beta_hat", e.beta_hat},
                  {"lambda_hat", e.lambda_hat},
                  {"criterion", e.criterion},
                  {"inner_converged", e.inner_converged},
                  {"outer_converged", e.outer_converged},
                  {"at_boundary", e.at_boundary}};
        open_output(c.output, file) << j.dump(2) << "\n";
        return 0;
    }

    if (ci->parsed()) {
        auto x = fmb::read_series_csv(c.input);
        warn_bandwidth(c.bandwidth, x.size());
        fmb::KernelSpec spec(fmb::kernel_family_from_name(c.kernel));
        auto fit = fit_location(x, spec, c.bandwidth);
        auto sm = fmb::smooth_series(location_moments(x, fit.theta_hat), spec, c.bandwidth, -0.5);
        auto draws = fmb::bootstrap_s(sm, c.bootstrap_r, c.seed);
        const double lo = ci_have_bracket ? ci_lo : fit.theta_hat - 8.0 * fit.se;
        const double hi = ci_have_bracket ? ci_hi : fit.theta_hat + 8.0 * fit.se;
        auto s_of = [&](double th) {
            return fmb::s_stat(location_moments(x, th), spec, c.bandwidth);
        };
        auto interval = ci_one_sided ? fmb::invert_one_sided(s_of, draws, c.alpha, lo, hi)
                                     : fmb::invert_two_sided(s_of, draws, c.alpha, lo, hi);
        json j = {{"lower", interval.lower},
                  {"upper", interval.upper},
                  {"level", interval.level},
                  {"kind", ci_one_sided ? "one_sided_upper" : "two_sided_equal_tail"},
                  {"theta_hat", fit.theta_hat}};
        open_output(c.output, file) << j.dump(2) << "\n";
        return 0;
    }

    if (reg->parsed()) {
        auto x = fmb::read_series_csv(c.input);
        warn_bandwidth(c.bandwidth, x.size());
        auto prob = acd_problem(x, reg_rho, c.kernel, c.bandwidth);
        auto e = fmb::outer_beta(prob, {0.2, 0.2}, 5, c.seed);
        auto sm_hat = fmb::smooth_series(prob.moment_fn(e.beta_hat), prob.spec, c.bandwidth, -1.0);
        auto draws = fmb::bootstrap_q(sm_hat, c.bootstrap_r, c.seed);
        const double thr = draws.quantile(1.0 - c.alpha);
        auto& out = open_output(c.output, file);
        out.precision(10);
        out << "beta1,beta2,q,inside,threshold\n";
        for (std::size_t i = 0; i < reg_steps; ++i)
            for (std::size_t j = 0; j < reg_steps; ++j) {
                const double b1 =
                    reg_b1[0] + (reg_b1[1] - reg_b1[0]) * static_cast<double>(i) /
                                    static_cast<double>(reg_steps - 1);
                const double b2 =
                    reg_b2[0] + (reg_b2[1] - reg_b2[0]) * static_cast<double>(j) /
                                    static_cast<double>(reg_steps - 1);
                double q = std::numeric_limits<double>::infinity();
                if (b1 + b2 < 1.0)
                    q = fmb::q_stat(prob.moment_fn({b1, b2}), prob.spec, c.bandwidth).value;
                out << b1 << ',' << b2 << ',' << q << ',' << (q <= thr ? 1 : 0) << ',' << thr
                    << "\n";
            }
        return 0;
    }

    if (cur->parsed()) {
        auto x = fmb::read_series_csv(c.input);
        warn_bandwidth(c.bandwidth, x.size());
        fmb::KernelSpec spec(fmb::kernel_family_from_name(c.kernel));
        auto fit = fit_location(x, spec, c.bandwidth);
        auto sm = fmb::smooth_series(location_moments(x, fit.theta_hat), spec, c.bandwidth, -0.5);
        auto draws = fmb::bootstrap_s(sm, c.bootstrap_r, c.seed);
        const double lo = cur_range.size() == 2 ? cur_range[0] : fit.theta_hat - 6.0 * fit.se;
        const double hi = cur_range.size() == 2 ? cur_range[1] : fit.theta_hat + 6.0 * fit.se;
        if (cur_points < 2) throw fmb::Error("domain", "--points must be >= 2");
        std::vector<double> grid(cur_points);
        for (std::size_t i = 0; i < cur_points; ++i)
            grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(cur_points - 1);
        auto s_of = [&](double th) {
            return fmb::s_stat(location_moments(x, th), spec, c.bandwidth);
        };
        auto cd = fmb::confidence_distribution(s_of, draws, grid);
        fmb::confidence_curve(cd);
        auto& out = open_output(c.output, file);
        out.precision(10);
        // Second curve: the first-order Gaussian reference on the same grid.
        out << "theta,hstar,cv_fmb,cv_gauss\n";
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double hg = fmb::normal_cdf(s_of(grid[i]));
            out << grid[i] << ',' << cd.hstar[i] << ',' << cd.cv[i] << ','
                << 2.0 * std::min(hg, 1.0 - hg) << "\n";
        }
        return 0;
    }

    // coverage
    if (!cov_config.empty()) {
        std::ifstream in(cov_config);
        if (!in) throw fmb::Error("io", "cannot open '" + cov_config + "'");
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw fmb::Error("parse", std::string("config: ") + e.what());
        }
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& k = it.key();
            if (k != "n" && k != "bandwidth" && k != "mc_reps" && k != "bootstrap_r" &&
                k != "alphas" && k != "methods" && k != "seed")
                throw fmb::Error("parse", "config: unknown key '" + k + "'");
        }
        try {
            if (j.contains("n") && !has_n) cc.n = j["n"].get<std::size_t>();
            if (j.contains("bandwidth") && !has_bw) cc.bandwidth = j["bandwidth"].get<double>();
            if (j.contains("mc_reps") && !has_reps) cc.mc_reps = j["mc_reps"].get<std::size_t>();
            if (j.contains("bootstrap_r") && !has_r)
                cc.bootstrap_r = j["bootstrap_r"].get<std::size_t>();
            if (j.contains("alphas") && !has_alphas)
                cc.alphas = j["alphas"].get<std::vector<double>>();
            if (j.contains("methods") && !has_methods)
                cc.methods = j["methods"].get<std::vector<std::string>>();
            if (j.contains("seed") && !has_seed) cc.seed = j["seed"].get<std::uint64_t>();
        } catch (const json::exception& e) {
            throw fmb::Error("parse", std::string("config: ") + e.what());
        }
    }
    if (has_alphas) cc.alphas = cov_alphas;
    if (has_methods) cc.methods = cov_methods;
    (void)has_lrc;
    cc.family = fmb::kernel_family_from_name(c.kernel);
    cc.rho_kind = fmb::rho_kind_from_name(cov_rho);
    auto report = fmb::run_coverage(cc);
    if (c.output.empty() || c.output == "-") {
        std::cout.precision(10);
        std::cout << "method,n,bandwidth,nominal,empirical,mc_se,mc_reps,seed\n";
        for (const auto& cell : report.cells)
            std::cout << cell.method << ',' << report.n << ',' << report.bandwidth << ','
                      << cell.nominal << ',' << cell.empirical << ',' << cell.mc_se << ','
                      << report.mc_reps << ',' << report.seed << "\n";
    } else {
        fmb::write_coverage_csv(report, c.output);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const fmb::Error& e) {
        emit_error(e.code(), e.what());
        return exit_code_for(e);
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return 1;
    }
}
