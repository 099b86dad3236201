#include "fmb/acd.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fmb {

ACDParams::ACDParams(double w, double b1, double b2) : omega(w), beta1(b1), beta2(b2) {
    if (!(omega > 0.0)) throw Error("domain", "ACDParams: omega must be positive");
    if (beta1 < 0.0 || beta2 < 0.0) throw Error("domain", "ACDParams: betas must be nonnegative");
    if (!(beta1 + beta2 < 1.0))
        throw Error("domain", "ACDParams: beta1 + beta2 must be below 1 (stationarity)");
}

std::vector<double> simulate_acd(const ACDParams& params, std::size_t N, std::size_t burn_in,
                                 Rng& rng) {
    if (N < 2) throw Error("domain", "simulate_acd: N must be >= 2");
    std::vector<double> out(N);
    double m = params.unconditional_mean();
    double x = m;  // overwritten on the first draw below
    for (std::size_t l = 0; l < burn_in + N; ++l) {
        if (l > 0) m = params.omega + params.beta1 * x + params.beta2 * m;
        x = rng.exponential() * m;
        if (l >= burn_in) out[l - burn_in] = x;
    }
    return out;
}

AcdRecursion acd_recursion(const std::vector<double>& data, const ACDParams& params) {
    const std::size_t N = data.size();
    if (N == 0) throw Error("domain", "acd_recursion: empty data");
    AcdRecursion rec;
    rec.m.resize(N);
    rec.dm_db1.resize(N);
    rec.dm_db2.resize(N);
    rec.dm_domega.resize(N);

    const double denom = 1.0 - params.beta1 - params.beta2;
    const double mu = params.unconditional_mean();
    rec.m[0] = mu;
    // Stationary derivatives of the unconditional mean omega/(1-b1-b2).
    rec.dm_db1[0] = params.omega / (denom * denom);
    rec.dm_db2[0] = params.omega / (denom * denom);
    rec.dm_domega[0] = 1.0 / denom;
    for (std::size_t l = 1; l < N; ++l) {
        rec.m[l] = params.omega + params.beta1 * data[l - 1] + params.beta2 * rec.m[l - 1];
        rec.dm_db1[l] = data[l - 1] + params.beta2 * rec.dm_db1[l - 1];
        rec.dm_db2[l] = rec.m[l - 1] + params.beta2 * rec.dm_db2[l - 1];
        rec.dm_domega[l] = 1.0 + params.beta2 * rec.dm_domega[l - 1];
    }
    return rec;
}

MomentSeries acd_moments(const std::vector<double>& data, const ACDParams& params,
                         bool free_omega) {
    for (double x : data)
        if (!(x > 0.0)) throw Error("domain", "acd_moments: data must be positive");
    auto rec = acd_recursion(data, params);
    const std::size_t N = data.size();
    const double mean_level =
        free_omega ? params.unconditional_mean() : 1.0 / (1.0 - params.beta1 - params.beta2);
    MomentSeries g(N, 3);
    for (std::size_t l = 0; l < N; ++l) {
        const double m = rec.m[l];
        const double score = (data[l] - m) / (m * m);
        g.set(l, 0, score * rec.dm_db1[l]);
        g.set(l, 1, score * rec.dm_db2[l]);
        g.set(l, 2, data[l] - mean_level);
    }
    return g;
}

SummaryStats summary_stats(const std::vector<double>& series) {
    const std::size_t n = series.size();
    if (n < 2) throw Error("domain", "summary_stats: need at least 2 observations");
    std::vector<double> s(series);
    std::sort(s.begin(), s.end());

    // Type-7 interpolated quantile on the sorted copy.
    auto quantile7 = [&](double p) {
        const double h = p * static_cast<double>(n - 1);
        const std::size_t lo = static_cast<std::size_t>(std::floor(h));
        const std::size_t hi = std::min(lo + 1, n - 1);
        return s[lo] + (h - static_cast<double>(lo)) * (s[hi] - s[lo]);
    };

    SummaryStats st{};
    st.n = n;
    st.min = s.front();
    st.max = s.back();
    st.median = quantile7(0.5);
    st.iqr = quantile7(0.75) - quantile7(0.25);
    double mean = 0.0;
    for (double v : s) mean += v;
    mean /= static_cast<double>(n);
    st.mean = mean;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : s) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    st.sd = std::sqrt(m2 / static_cast<double>(n - 1));
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    if (m2 <= 0.0)
        throw Error("degenerate_variance", "summary_stats: zero variance (sd = 0), moment "
                                           "ratios undefined");
    st.skewness = m3 / std::pow(m2, 1.5);
    st.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    return st;
}

std::vector<double> read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("io", "cannot open '" + path + "'");
    std::vector<double> out;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        std::size_t pos = 0;
        double v = 0.0;
        bool ok = true;
        try {
            v = std::stod(line, &pos);
        } catch (const std::exception&) {
            ok = false;
        }
        if (ok && pos < line.size()) {
            for (std::size_t i = pos; i < line.size(); ++i)
                if (!std::isspace(static_cast<unsigned char>(line[i]))) ok = false;
        }
        if (!ok) {
            if (first) {
                first = false;  // header row
                continue;
            }
            throw Error("parse", "non-numeric row in '" + path + "': " + line);
        }
        first = false;
        out.push_back(v);
    }
    if (out.empty()) throw Error("parse", "no numeric rows in '" + path + "'");
    return out;
}

void write_series_csv(const std::string& path, const std::vector<double>& series,
                      const std::string& header) {
    std::ofstream out(path);
    if (!out) throw Error("io", "cannot write '" + path + "'");
    out << header << "\n";
    out.precision(17);
    for (double v : series) out << v << "\n";
}

}  // namespace fmb
