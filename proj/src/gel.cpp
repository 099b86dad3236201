#include "fmb/gel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fmb/numerics.hpp"

namespace fmb {

RhoKind rho_kind_from_name(const std::string& name) {
    if (name == "el") return RhoKind::EL;
    if (name == "et") return RhoKind::ET;
    if (name == "cue") return RhoKind::CUE;
    throw Error("domain", "unknown rho family '" + name + "' (el|et|cue)");
}

std::string rho_kind_name(RhoKind kind) {
    switch (kind) {
        case RhoKind::EL: return "el";
        case RhoKind::ET: return "et";
        default: return "cue";
    }
}

RhoDerivs rho(double v, RhoKind kind) {
    switch (kind) {
        case RhoKind::EL: {
            if (v >= 1.0)
                throw Error("domain_violation", "EL rho at v = " + std::to_string(v) + " >= 1");
            const double d = 1.0 - v;
            return {std::log(d), -1.0 / d, -1.0 / (d * d)};
        }
        case RhoKind::ET: {
            const double e = std::exp(v);
            return {-e, -e, -e};
        }
        default:
            return {-v - 0.5 * v * v, -1.0 - v, -1.0};
    }
}

namespace {

bool rho_feasible(double v, RhoKind kind) {
    if (!std::isfinite(v)) return false;
    return kind != RhoKind::EL || v < 1.0 - 1e-10;
}

double dot(const double* a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) s += a[i] * b[i];
    return s;
}

void check_problem(const GelProblem& prob) {
    if (!prob.moment_fn) throw Error("domain", "GelProblem: moment_fn not set");
    if (prob.r < prob.p || prob.p == 0) throw Error("domain", "GelProblem: need r >= p >= 1");
    if (!(prob.bandwidth > 0.0)) throw Error("domain", "GelProblem: bandwidth must be positive");
    if (prob.box_lo.size() != prob.p || prob.box_hi.size() != prob.p)
        throw Error("domain", "GelProblem: box dimensions do not match p");
    for (std::size_t j = 0; j < prob.p; ++j)
        if (!(prob.box_lo[j] < prob.box_hi[j])) throw Error("domain", "GelProblem: empty box");
}

SmoothedSeries smoothed_moments(const GelProblem& prob, const std::vector<double>& beta) {
    auto raw = prob.moment_fn(beta);
    if (raw.r() != prob.r) throw Error("domain", "moment_fn returned wrong moment dimension");
    return smooth_series(raw, prob.spec, prob.bandwidth, -1.0);
}

// Criterion, gradient, and Hessian of P-hat(beta, .) at lambda on a
// precomputed smoothed series. Any infeasible kappa*lambda'g makes the
// criterion -inf (used by the line search).
struct InnerEval {
    double value = -std::numeric_limits<double>::infinity();
    bool feasible = false;
    std::vector<double> grad;     // r
    std::vector<double> hessian;  // r x r, row-major
};

InnerEval inner_eval(const SmoothedSeries& sm, double kappa, const std::vector<double>& lambda,
                     RhoKind kind, bool with_derivatives) {
    const std::size_t T = sm.T, r = sm.r;
    const double rho0 = rho(0.0, kind).value;
    InnerEval ev;
    double sum = 0.0;
    if (with_derivatives) {
        ev.grad.assign(r, 0.0);
        ev.hessian.assign(r * r, 0.0);
    }
    for (std::size_t t = 0; t < T; ++t) {
        const double* g = &sm.values[t * r];
        const double v = kappa * dot(g, lambda);
        if (!rho_feasible(v, kind)) return ev;
        const auto rd = rho(v, kind);
        sum += rd.value - rho0;
        if (with_derivatives) {
            for (std::size_t i = 0; i < r; ++i) {
                ev.grad[i] += rd.d1 * kappa * g[i];
                for (std::size_t j = i; j < r; ++j)
                    ev.hessian[i * r + j] += rd.d2 * kappa * kappa * g[i] * g[j];
            }
        }
    }
    const double invT = 1.0 / static_cast<double>(T);
    ev.value = sum * invT;
    ev.feasible = true;
    if (with_derivatives) {
        for (double& x : ev.grad) x *= invT;
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < i; ++j) ev.hessian[i * r + j] = ev.hessian[j * r + i];
        for (double& x : ev.hessian) x *= invT;
    }
    return ev;
}

std::vector<double> inner_lambda_smoothed(const SmoothedSeries& sm, double kappa, RhoKind kind,
                                          bool* converged) {
    const std::size_t r = sm.r;
    constexpr double grad_tol = 1e-9;
    constexpr int max_iter = 500;
    std::vector<double> lambda(r, 0.0);
    auto cur = inner_eval(sm, kappa, lambda, kind, true);

    auto norm2 = [](const std::vector<double>& x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return std::sqrt(s);
    };

    // Levenberg shift added to -H when a plain Newton step stalls; reset
    // after every successful step.
    double mu = 0.0;
    bool ok = false;
    for (int it = 0; it < max_iter; ++it) {
        if (norm2(cur.grad) < grad_tol) {
            ok = true;
            break;
        }
        std::vector<double> neg(cur.hessian.size());
        for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -cur.hessian[i];
        const double hmax = 1e-30 + *std::max_element(neg.begin(), neg.end());
        if (mu > 0.0)
            for (std::size_t i = 0; i < r; ++i) neg[i * r + i] += mu;
        auto pinv = pseudo_inverse(SymMatrix::from_dense(neg, r, 1e-8), 1e-13);
        auto dir = pinv.rank > 0 ? pinv.inverse.multiply(cur.grad) : cur.grad;

        double step = 1.0;
        bool moved = false;
        for (int h = 0; h < 60; ++h, step *= 0.5) {
            std::vector<double> cand(r);
            for (std::size_t i = 0; i < r; ++i) cand[i] = lambda[i] + step * dir[i];
            auto ev = inner_eval(sm, kappa, cand, kind, true);
            if (ev.feasible && ev.value > cur.value) {
                lambda = std::move(cand);
                cur = std::move(ev);
                moved = true;
                break;
            }
        }
        if (moved) {
            mu = 0.0;
            continue;
        }
        // Stalled: escalate curvature damping (bends the direction toward
        // the raw gradient) and retry before declaring divergence.
        mu = (mu == 0.0) ? 1e-8 * hmax : mu * 100.0;
        if (mu > 1e12 * hmax) {
            // No representable improvement remains; the iterate is the
            // optimum to machine precision when the gradient sits at the
            // floating-point floor even if it misses the nominal tolerance.
            ok = norm2(cur.grad) < 1e-6;
            break;
        }
    }
    if (!ok) ok = norm2(cur.grad) < grad_tol;
    if (converged) {
        *converged = ok;
    } else if (!ok) {
        throw Error("inner_diverged", "inner Newton ascent did not reach gradient tolerance");
    }
    return lambda;
}

}  // namespace

double gel_criterion(const GelProblem& prob, const std::vector<double>& beta,
                     const std::vector<double>& lambda) {
    check_problem(prob);
    if (lambda.size() != prob.r) throw Error("domain", "lambda dimension mismatch");
    auto sm = smoothed_moments(prob, beta);
    const std::size_t T = sm.T, r = sm.r;
    const double kappa = prob.spec.kappa();
    const double rho0 = rho(0.0, prob.rho_kind).value;
    double sum = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        const double v = kappa * dot(&sm.values[t * r], lambda);
        if (!rho_feasible(v, prob.rho_kind))
            throw Error("domain_violation",
                        "kappa lambda' g outside the rho domain at t = " + std::to_string(t + 1));
        sum += rho(v, prob.rho_kind).value - rho0;
    }
    return sum / static_cast<double>(T);
}

std::vector<double> inner_lambda(const GelProblem& prob, const std::vector<double>& beta,
                                 bool* converged) {
    check_problem(prob);
    auto sm = smoothed_moments(prob, beta);
    return inner_lambda_smoothed(sm, prob.spec.kappa(), prob.rho_kind, converged);
}

namespace {

struct NmResult {
    std::vector<double> x;
    double f = std::numeric_limits<double>::infinity();
    bool converged = false;
};

NmResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                     std::vector<double> start, const std::vector<double>& lo,
                     const std::vector<double>& hi) {
    const std::size_t p = start.size();
    auto clamp = [&](std::vector<double>& x) {
        for (std::size_t j = 0; j < p; ++j) x[j] = std::min(hi[j], std::max(lo[j], x[j]));
    };
    clamp(start);

    std::vector<std::vector<double>> vx(p + 1, start);
    for (std::size_t j = 0; j < p; ++j) {
        double step = 0.05 * (hi[j] - lo[j]);
        if (start[j] + step > hi[j]) step = -step;
        vx[j + 1][j] += step;
    }
    std::vector<double> vf(p + 1);
    for (std::size_t i = 0; i <= p; ++i) vf[i] = f(vx[i]);

    NmResult out;
    const int max_iter = 500 * static_cast<int>(p);
    for (int it = 0; it < max_iter; ++it) {
        // order ascending by f
        std::vector<std::size_t> ord(p + 1);
        for (std::size_t i = 0; i <= p; ++i) ord[i] = i;
        std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return vf[a] < vf[b]; });
        const std::size_t best = ord[0], worst = ord[p], second = ord[p - 1];

        double size = 0.0;
        for (std::size_t i = 0; i <= p; ++i)
            for (std::size_t j = 0; j < p; ++j)
                size = std::max(size, std::abs(vx[i][j] - vx[best][j]) / (hi[j] - lo[j]));
        if (size < 1e-8 && std::abs(vf[worst] - vf[best]) < 1e-12) {
            out.converged = true;
            break;
        }

        std::vector<double> centroid(p, 0.0);
        for (std::size_t i = 0; i <= p; ++i)
            if (i != worst)
                for (std::size_t j = 0; j < p; ++j) centroid[j] += vx[i][j];
        for (double& c : centroid) c /= static_cast<double>(p);

        auto blend = [&](double coef) {
            std::vector<double> x(p);
            for (std::size_t j = 0; j < p; ++j)
                x[j] = centroid[j] + coef * (centroid[j] - vx[worst][j]);
            clamp(x);
            return x;
        };

        auto xr = blend(1.0);
        const double fr = f(xr);
        if (fr < vf[best]) {
            auto xe = blend(2.0);
            const double fe = f(xe);
            if (fe < fr) {
                vx[worst] = xe;
                vf[worst] = fe;
            } else {
                vx[worst] = xr;
                vf[worst] = fr;
            }
        } else if (fr < vf[second]) {
            vx[worst] = xr;
            vf[worst] = fr;
        } else {
            auto xc = blend(fr < vf[worst] ? 0.5 : -0.5);
            const double fc = f(xc);
            if (fc < std::min(fr, vf[worst])) {
                vx[worst] = xc;
                vf[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= p; ++i) {
                    if (i == best) continue;
                    for (std::size_t j = 0; j < p; ++j)
                        vx[i][j] = vx[best][j] + 0.5 * (vx[i][j] - vx[best][j]);
                    vf[i] = f(vx[i]);
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i <= p; ++i)
        if (vf[i] < vf[best]) best = i;
    out.x = vx[best];
    out.f = vf[best];
    return out;
}

}  // namespace

GelEstimate outer_beta(const GelProblem& prob, const std::vector<double>& start,
                       std::size_t starts, std::uint64_t jitter_seed) {
    check_problem(prob);
    if (start.size() != prob.p) throw Error("domain", "start dimension mismatch");

    auto profiled = [&](const std::vector<double>& beta) -> double {
        try {
            auto sm = smoothed_moments(prob, beta);
            bool ok = false;
            auto lam = inner_lambda_smoothed(sm, prob.spec.kappa(), prob.rho_kind, &ok);
            if (!ok) return std::numeric_limits<double>::infinity();
            return inner_eval(sm, prob.spec.kappa(), lam, prob.rho_kind, false).value;
        } catch (const Error&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    NmResult best;
    bool any = false;
    for (std::size_t s = 0; s < std::max<std::size_t>(starts, 1); ++s) {
        std::vector<double> x0 = start;
        if (s > 0) {
            Rng rng(jitter_seed, s);
            for (std::size_t j = 0; j < prob.p; ++j)
                x0[j] += (rng.uniform() - 0.5) * 0.5 * (prob.box_hi[j] - prob.box_lo[j]);
        }
        auto res = nelder_mead(profiled, x0, prob.box_lo, prob.box_hi);
        if (std::isfinite(res.f)) {
            any = true;
            if (res.f < best.f || (res.f == best.f && res.converged && !best.converged)) best = res;
        }
    }
    if (!any) throw Error("outer_diverged", "no multi-start produced a finite profiled criterion");

    GelEstimate est;
    est.beta_hat = best.x;
    est.outer_converged = best.converged;
    auto sm = smoothed_moments(prob, est.beta_hat);
    est.lambda_hat = inner_lambda_smoothed(sm, prob.spec.kappa(), prob.rho_kind,
                                           &est.inner_converged);
    est.criterion = inner_eval(sm, prob.spec.kappa(), est.lambda_hat, prob.rho_kind, false).value;
    for (std::size_t j = 0; j < prob.p; ++j) {
        const double edge = 1e-6 * (prob.box_hi[j] - prob.box_lo[j]);
        if (est.beta_hat[j] - prob.box_lo[j] < edge || prob.box_hi[j] - est.beta_hat[j] < edge)
            est.at_boundary = true;
    }
    return est;
}

GelFoc gel_foc(const GelProblem& prob, const std::vector<double>& beta,
               const std::vector<double>& lambda) {
    check_problem(prob);
    if (beta.size() != prob.p || lambda.size() != prob.r)
        throw Error("domain", "gel_foc: dimension mismatch");
    auto sm = smoothed_moments(prob, beta);
    const std::size_t T = sm.T, r = sm.r, p = prob.p;
    const double kappa = prob.spec.kappa();

    // Smoothed derivative blocks dg_Tt/dbeta_j: smoothing is linear, so
    // smoothing the raw derivative (or finite-difference) series commutes
    // with differentiation.
    std::vector<SmoothedSeries> dsm;
    dsm.reserve(p);
    if (prob.deriv_fn) {
        auto raw_d = prob.deriv_fn(beta);
        if (raw_d.size() != p) throw Error("domain", "deriv_fn returned wrong parameter count");
        for (auto& d : raw_d) dsm.push_back(smooth_series(d, prob.spec, prob.bandwidth, -1.0));
    } else {
        for (std::size_t j = 0; j < p; ++j) {
            const double h = std::max(1e-6, 1e-6 * std::abs(beta[j]));
            auto bp = beta, bm = beta;
            bp[j] += h;
            bm[j] -= h;
            auto gp = prob.moment_fn(bp), gm = prob.moment_fn(bm);
            MomentSeries fd(gp.T(), gp.r());
            for (std::size_t t = 0; t < gp.T(); ++t)
                for (std::size_t i = 0; i < gp.r(); ++i)
                    fd.set(t, i, (gp(t, i) - gm(t, i)) / (2.0 * h));
            dsm.push_back(smooth_series(fd, prob.spec, prob.bandwidth, -1.0));
        }
    }

    GelFoc out;
    out.psi1_bar.assign(r, 0.0);
    out.psi2_bar.assign(p, 0.0);
    out.psi_t.assign(T * (r + p), 0.0);
    for (std::size_t t = 0; t < T; ++t) {
        const double* g = &sm.values[t * r];
        const double v = kappa * dot(g, lambda);
        if (!rho_feasible(v, prob.rho_kind))
            throw Error("domain_violation",
                        "kappa lambda' g outside the rho domain at t = " + std::to_string(t + 1));
        const double r1 = rho(v, prob.rho_kind).d1;
        double* row = &out.psi_t[t * (r + p)];
        for (std::size_t i = 0; i < r; ++i) {
            row[i] = r1 * g[i];
            out.psi1_bar[i] += row[i];
        }
        for (std::size_t j = 0; j < p; ++j) {
            const double d = dot(&dsm[j].values[t * r], lambda);
            row[r + j] = r1 * d;
            out.psi2_bar[j] += row[r + j];
        }
    }
    for (double& x : out.psi1_bar) x /= static_cast<double>(T);
    for (double& x : out.psi2_bar) x /= static_cast<double>(T);
    return out;
}

}  // namespace fmb
