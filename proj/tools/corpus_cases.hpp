#pragma once

// The synthetic data corpus and its golden outputs, generated and replayed
// from the same definitions so the committed files are bit-reproducible.

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "fmb/acd.hpp"
#include "fmb/inference.hpp"
#include "fmb/bench.hpp"

namespace corpus {

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* d = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = d[v & 0xf];
        v >>= 4;
    }
    return out;
}

inline std::string series_csv(const std::vector<double>& x) {
    std::ostringstream ss;
    ss.precision(17);
    ss << "x\n";
    for (double v : x) ss << v << "\n";
    return ss.str();
}

// data/acd_n250_seed7.csv — ACD(1,1), omega=1, beta=(0.25,0.25), burn-in 500.
inline std::vector<double> acd_n250_seed7() {
    fmb::ACDParams p(1.0, 0.25, 0.25);
    fmb::Rng rng(7, 0);
    return fmb::simulate_acd(p, 250, 500, rng);
}

// data/exp_n500_seed3.csv — i.i.d. Exp(1) via the collapsed recursion.
inline std::vector<double> exp_n500_seed3() {
    fmb::ACDParams p(1.0, 0.0, 0.0);
    fmb::Rng rng(3, 0);
    return fmb::simulate_acd(p, 500, 0, rng);
}

inline std::string golden_summary_acd_n250() {
    auto st = fmb::summary_stats(acd_n250_seed7());
    std::ostringstream ss;
    ss.precision(10);
    ss << "n,min,max,median,mean,iqr,sd,skewness,excess_kurtosis\n";
    ss << st.n << ',' << st.min << ',' << st.max << ',' << st.median << ',' << st.mean << ','
       << st.iqr << ',' << st.sd << ',' << st.skewness << ',' << st.excess_kurtosis << "\n";
    return ss.str();
}

// Location-parameter confidence curve on the Exp(1) series: bandwidth 4,
// R = 200 draws, 41 grid points, seed 5.
inline std::string golden_curve_exp_n500() {
    auto x = exp_n500_seed3();
    fmb::KernelSpec spec(fmb::KernelFamily::Bartlett);
    const double B = 4.0;
    auto moments = [&x](double th) {
        fmb::MomentSeries m(x.size(), 1);
        for (std::size_t t = 0; t < x.size(); ++t) m.set(t, 0, x[t] - th);
        return m;
    };
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    const double theta_hat = fmb::secant_root(
        [&](double th) { return fmb::smooth_series(moments(th), spec, B, -0.5).mean()[0]; },
        mean - 2.0, mean + 2.0);
    auto sm = fmb::smooth_series(moments(theta_hat), spec, B, -0.5);
    auto draws = fmb::bootstrap_s(sm, 200, 5);
    const double se =
        std::sqrt(B * fmb::lr_scalar(sm, moments(theta_hat)) / static_cast<double>(x.size()));
    std::vector<double> grid(41);
    for (int i = 0; i < 41; ++i) grid[i] = theta_hat - 6.0 * se + 12.0 * se * i / 40.0;
    auto s_of = [&](double th) { return fmb::s_stat(moments(th), spec, B); };
    auto cd = fmb::confidence_distribution(s_of, draws, grid);
    fmb::confidence_curve(cd);
    std::ostringstream ss;
    ss.precision(10);
    ss << "theta,hstar,cv\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        ss << cd.grid[i] << ',' << cd.hstar[i] << ',' << cd.cv[i] << "\n";
    return ss.str();
}

// Induced-kernel identity table: truncated family against 1 - |a/2|.
inline std::string golden_kernel_induced() {
    fmb::KernelSpec tr(fmb::KernelFamily::Truncated);
    std::ostringstream ss;
    ss.precision(17);
    ss << "a,induced\n";
    for (int i = 0; i <= 48; ++i) {
        const double a = -3.0 + 0.125 * i;
        ss << a << ',' << fmb::eval_induced(tr, a) << "\n";
    }
    return ss.str();
}

// Desk-size deterministic coverage run.
inline std::string golden_coverage_small() {
    fmb::CoverageConfig cfg;
    cfg.n = 100;
    cfg.bandwidth = 3.0;
    cfg.mc_reps = 5;
    cfg.bootstrap_r = 50;
    cfg.alphas = {0.05, 0.25};
    cfg.methods = {"fmb", "s", "wald", "lr"};
    cfg.seed = 21;
    cfg.outer_starts = 2;
    auto report = fmb::run_coverage(cfg);
    std::ostringstream ss;
    ss.precision(10);
    ss << "method,n,bandwidth,nominal,empirical,mc_se,mc_reps,seed\n";
    for (const auto& c : report.cells)
        ss << c.method << ',' << report.n << ',' << report.bandwidth << ',' << c.nominal << ','
           << c.empirical << ',' << c.mc_se << ',' << report.mc_reps << ',' << report.seed
           << "\n";
    return ss.str();
}

struct CorpusFile {
    const char* path;  // relative to the repository root
    std::string (*content)();
};

inline std::string data_acd() { return series_csv(acd_n250_seed7()); }
inline std::string data_exp() { return series_csv(exp_n500_seed3()); }

inline std::vector<CorpusFile> all_files() {
    return {
        {"data/acd_n250_seed7.csv", &data_acd},
        {"data/exp_n500_seed3.csv", &data_exp},
        {"data/golden_summary_acd_n250.csv", &golden_summary_acd_n250},
        {"data/golden_curve_exp_n500.csv", &golden_curve_exp_n500},
        {"data/golden_kernel_induced.csv", &golden_kernel_induced},
        {"data/golden_coverage_small.csv", &golden_coverage_small},
    };
}

}  // namespace corpus
