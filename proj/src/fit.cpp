#include "ddsim/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ddsim {

namespace {

constexpr double kSigmaFloor = 1e-9;   // avoids infinite weight on the exact t=0 point
constexpr double kStepTol = 1e-10;
constexpr int kMaxIter = 200;

struct FitData {
    std::vector<double> t, y, w;  // w = 1/sigma
    int cut = 0;
};

FitData prepare(const EchoSeries& series) {
    FitData d;
    const bool weighted =
        series.stderrs.size() == series.times.size() &&
        std::any_of(series.stderrs.begin(), series.stderrs.end(), [](double s) { return s > 0; });
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        const double se = weighted ? series.stderrs[i] : 0.0;
        if (weighted && se > 0 && series.amplitudes[i] < 3.0 * se) {
            ++d.cut;  // noise floor
            continue;
        }
        d.t.push_back(series.times[i]);
        d.y.push_back(series.amplitudes[i]);
        d.w.push_back(weighted ? 1.0 / std::max(se, kSigmaFloor) : 1.0);
    }
    return d;
}

double chi2(const FitData& d, const std::vector<double>& model) {
    double s = 0;
    for (std::size_t i = 0; i < d.y.size(); ++i) {
        const double r = (d.y[i] - model[i]) * d.w[i];
        s += r * r;
    }
    return s;
}

// Levenberg-style damped Gauss-Newton. Model callback fills values and the
// Jacobian (rows = points, cols = params). Returns final chi2; monotone in
// the accepted steps.
template <typename ModelFn>
double damped_gauss_newton(const FitData& d, std::vector<double>& p, ModelFn&& fn, bool& converged) {
    const std::size_t np = p.size();
    const std::size_t n = d.t.size();
    std::vector<double> model(n), jac(n * np);
    std::vector<double> trial_model(n), trial_jac(n * np);

    fn(p, model, jac);
    double c2 = chi2(d, model);
    double lambda = 1e-3;
    converged = false;

    for (int it = 0; it < kMaxIter; ++it) {
        // normal equations J^T W^2 J + lambda diag
        std::vector<double> a(np * np, 0.0), g(np, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double wi2 = d.w[i] * d.w[i];
            const double r = d.y[i] - model[i];
            for (std::size_t c = 0; c < np; ++c) {
                g[c] += wi2 * r * jac[i * np + c];
                for (std::size_t c2i = 0; c2i <= c; ++c2i)
                    a[c * np + c2i] += wi2 * jac[i * np + c] * jac[i * np + c2i];
            }
        }
        for (std::size_t c = 0; c < np; ++c)
            for (std::size_t r = c + 1; r < np; ++r) a[c * np + r] = a[r * np + c];

        bool stepped = false;
        for (int tries = 0; tries < 30 && !stepped; ++tries) {
            std::vector<double> m(a), rhs(g), dp(np, 0.0);
            for (std::size_t c = 0; c < np; ++c) m[c * np + c] += lambda * (a[c * np + c] > 0 ? a[c * np + c] : 1.0);
            // gaussian elimination with partial pivoting
            std::vector<std::size_t> idx(np);
            for (std::size_t i = 0; i < np; ++i) idx[i] = i;
            bool singular = false;
            for (std::size_t col = 0; col < np && !singular; ++col) {
                std::size_t piv = col;
                for (std::size_t r = col + 1; r < np; ++r)
                    if (std::abs(m[idx[r] * np + col]) > std::abs(m[idx[piv] * np + col])) piv = r;
                if (std::abs(m[idx[piv] * np + col]) < 1e-300) { singular = true; break; }
                std::swap(idx[col], idx[piv]);
                for (std::size_t r = col + 1; r < np; ++r) {
                    const double f = m[idx[r] * np + col] / m[idx[col] * np + col];
                    for (std::size_t c = col; c < np; ++c) m[idx[r] * np + c] -= f * m[idx[col] * np + c];
                    rhs[idx[r]] -= f * rhs[idx[col]];
                }
            }
            if (singular) { lambda *= 10; continue; }
            for (std::size_t col = np; col-- > 0;) {
                double s = rhs[idx[col]];
                for (std::size_t c = col + 1; c < np; ++c) s -= m[idx[col] * np + c] * dp[c];
                dp[col] = s / m[idx[col] * np + col];
            }

            std::vector<double> pt(np);
            for (std::size_t c = 0; c < np; ++c) pt[c] = p[c] + dp[c];
            fn(pt, trial_model, trial_jac);
            const double c2t = chi2(d, trial_model);
            if (std::isfinite(c2t) && c2t <= c2) {
                double rel = 0;
                for (std::size_t c = 0; c < np; ++c)
                    rel = std::max(rel, std::abs(dp[c]) / std::max(std::abs(p[c]), 1e-300));
                p = pt;
                model = trial_model;
                jac = trial_jac;
                c2 = c2t;
                lambda = std::max(lambda * 0.3, 1e-12);
                stepped = true;
                if (rel < kStepTol) {
                    converged = true;
                    return c2;
                }
            } else {
                lambda *= 10;
            }
        }
        if (!stepped) {
            converged = true;  // no descent direction left: local minimum
            return c2;
        }
    }
    return c2;
}

// log-linear regression ln(y) = ln(A) - k t over the given index range,
// positive amplitudes only; returns false if fewer than 2 usable points.
bool log_linear(const FitData& d, std::size_t lo, std::size_t hi, double& amp, double& rate) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = lo; i < hi; ++i) {
        if (!(d.y[i] > 0)) continue;
        const double x = d.t[i], ly = std::log(d.y[i]);
        sx += x; sy += ly; sxx += x * x; sxy += x * ly;
        ++n;
    }
    if (n < 2) return false;
    const double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-300) return false;
    const double slope = (n * sxy - sx * sy) / det;
    const double inter = (sy - slope * sx) / n;
    amp = std::exp(inter);
    rate = -slope;
    return true;
}

void single_model(const std::vector<double>& p, const FitData& d, std::vector<double>& model,
                  std::vector<double>& jac) {
    const double A = p[0], k = p[1];
    for (std::size_t i = 0; i < d.t.size(); ++i) {
        const double e = std::exp(-k * d.t[i]);
        model[i] = A * e;
        jac[i * 2 + 0] = e;
        jac[i * 2 + 1] = -A * d.t[i] * e;
    }
}

void double_model(const std::vector<double>& p, const FitData& d, std::vector<double>& model,
                  std::vector<double>& jac) {
    const double a = p[0], kf = p[1], b = p[2], ks = p[3];
    for (std::size_t i = 0; i < d.t.size(); ++i) {
        const double ef = std::exp(-kf * d.t[i]);
        const double es = std::exp(-ks * d.t[i]);
        model[i] = a * ef + b * es;
        jac[i * 4 + 0] = ef;
        jac[i * 4 + 1] = -a * d.t[i] * ef;
        jac[i * 4 + 2] = es;
        jac[i * 4 + 3] = -b * d.t[i] * es;
    }
}

DecayFit single_fit_impl(const FitData& d) {
    DecayFit out;
    out.points_used = static_cast<int>(d.t.size());
    out.points_cut = d.cut;
    if (d.t.size() < 3) {
        out.message = "need at least 3 points";
        return out;
    }
    const auto [ymin, ymax] = std::minmax_element(d.y.begin(), d.y.end());
    if (*ymax - *ymin < 1e-12 * std::max(1.0, std::abs(*ymax))) {
        out.message = "constant series, decay time unbounded";
        out.b = *ymax;
        out.t2_slow = std::numeric_limits<double>::infinity();
        return out;
    }

    double A = d.y.front(), k = 0;
    if (!log_linear(d, 0, d.t.size(), A, k) || !(k > 0)) {
        A = std::max(1e-12, d.y.front());
        const double span = d.t.back() - d.t.front();
        k = 1.0 / std::max(span, 1e-12);
    }
    std::vector<double> p{A, k};
    bool conv = false;
    const double c2 = damped_gauss_newton(d, p, [&d](const std::vector<double>& q, std::vector<double>& m,
                                                     std::vector<double>& j) { single_model(q, d, m, j); },
                                          conv);
    out.b = p[0];
    out.t2_slow = p[1] != 0 ? 1.0 / p[1] : std::numeric_limits<double>::infinity();
    out.residual = std::sqrt(c2);
    out.converged = conv && p[1] > 0;
    if (!out.converged && out.message.empty())
        out.message = conv ? "fitted rate not positive" : "iteration limit reached";
    return out;
}

DecayFit double_fit_impl(const FitData& d) {
    DecayFit out;
    out.is_double = true;
    out.points_used = static_cast<int>(d.t.size());
    out.points_cut = d.cut;
    if (d.t.size() < 6) {
        out.message = "need at least 6 points";
        return out;
    }

    // initialization from a two-segment log-linear split
    const std::size_t third = d.t.size() / 3;
    double b0 = d.y.front(), ks0 = 0;
    if (!log_linear(d, d.t.size() - third, d.t.size(), b0, ks0) || !(ks0 > 0)) {
        b0 = std::max(1e-12, std::abs(d.y.back()));
        ks0 = 1.0 / std::max(d.t.back(), 1e-12);
    }
    double a0 = 0, kf0 = 0;
    {
        FitData head;
        for (std::size_t i = 0; i < third; ++i) {
            const double r = d.y[i] - b0 * std::exp(-ks0 * d.t[i]);
            if (r > 0) {
                head.t.push_back(d.t[i]);
                head.y.push_back(r);
                head.w.push_back(1.0);
            }
        }
        if (head.t.size() < 2 || !log_linear(head, 0, head.t.size(), a0, kf0) || !(kf0 > ks0)) {
            a0 = std::max(1e-6, d.y.front() - b0);
            kf0 = 10.0 * std::max(ks0, 1.0 / std::max(d.t.back(), 1e-12));
        }
    }

    // a small set of starts; the split initialization is refined first and
    // the best converged minimum wins (the residual can only improve on the
    // initialization point)
    const double t1 = d.t.size() > 1 ? std::max(d.t[1], 1e-12) : 1e-12;
    const std::vector<std::vector<double>> starts = {
        {a0, kf0, b0, ks0},
        {0.5 * d.y.front(), 20.0 * ks0, 0.5 * d.y.front(), ks0},
        {std::max(1e-6, d.y.front() - b0), 2.0 / t1, b0, ks0},
    };

    double best_c2 = std::numeric_limits<double>::infinity();
    std::vector<double> best_p;
    bool best_conv = false;
    for (const auto& start : starts) {
        std::vector<double> p = start;
        bool conv = false;
        const double c2 = damped_gauss_newton(
            d, p, [&d](const std::vector<double>& q, std::vector<double>& m, std::vector<double>& j) {
                double_model(q, d, m, j);
            },
            conv);
        if (c2 < best_c2) {
            best_c2 = c2;
            best_p = p;
            best_conv = conv;
        }
    }

    double a = best_p[0], kf = best_p[1], b = best_p[2], ks = best_p[3];
    if (kf < ks) {  // swap-normalize: fast component first
        std::swap(a, b);
        std::swap(kf, ks);
    }
    out.a = a;
    out.t2_fast = kf != 0 ? 1.0 / kf : std::numeric_limits<double>::infinity();
    out.b = b;
    out.t2_slow = ks != 0 ? 1.0 / ks : std::numeric_limits<double>::infinity();
    out.residual = std::sqrt(best_c2);
    out.converged = best_conv && kf > 0 && ks > 0;
    if (!out.converged && out.message.empty())
        out.message = best_conv ? "fitted rates not positive" : "iteration limit reached";
    return out;
}

}  // namespace

DecayFit fit_single_exponential(const EchoSeries& series) {
    return single_fit_impl(prepare(series));
}

DecayFit fit_double_exponential(const EchoSeries& series) {
    const FitData d = prepare(series);
    DecayFit out = double_fit_impl(d);
    // ill-separated components: the time scales coincide or one amplitude is
    // negligible (the fast time is then unidentifiable). Report the single
    // model instead, flagged.
    const double amp_scale = std::abs(out.a) + std::abs(out.b);
    if (out.converged && (out.t2_fast / out.t2_slow > 0.8 ||
                          std::abs(out.a) < 1e-3 * amp_scale ||
                          std::abs(out.b) < 1e-3 * amp_scale)) {
        DecayFit single = single_fit_impl(d);
        single.fallback = true;
        return single;
    }
    return out;
}

std::vector<ScanRow> decay_vs_tau_scan(const ExperimentConfig& base, const std::vector<double>& taus,
                                       const std::vector<SequenceKind>& kinds, const std::string& model,
                                       int threads) {
    if (model != "single" && model != "double")
        throw std::invalid_argument("scan: model must be 'single' or 'double'");
    for (const double tau : taus)
        if (!(tau > 0)) throw std::invalid_argument("scan: tau values must be > 0");

    const auto fit_series = [&](const EchoSeries& s) {
        return model == "double" ? fit_double_exponential(s) : fit_single_exponential(s);
    };

    std::vector<ScanRow> rows;
    for (const auto kind : kinds) {
        for (const double tau : taus) {
            ExperimentConfig cfg = base;
            cfg.kind = kind;
            cfg.tau = tau;
            ScanRow row;
            row.sequence = sequence_label(kind);
            row.tau = tau;
            try {
                if (kind == SequenceKind::cp || kind == SequenceKind::cpmg) {
                    cfg.init = default_variant(kind);
                    row.fit = fit_series(run_ensemble(cfg, threads));
                } else {
                    // decay times averaged over the two prepared states
                    cfg.init = InitialVariant::perpendicular;
                    DecayFit fx = fit_series(run_ensemble(cfg, threads));
                    cfg.init = InitialVariant::parallel;
                    DecayFit fy = fit_series(run_ensemble(cfg, threads));
                    row.fit = fx;
                    row.fit.t2_slow = 0.5 * (fx.t2_slow + fy.t2_slow);
                    row.fit.t2_fast = 0.5 * (fx.t2_fast + fy.t2_fast);
                    row.fit.a = 0.5 * (fx.a + fy.a);
                    row.fit.b = 0.5 * (fx.b + fy.b);
                    row.fit.residual = std::sqrt(0.5 * (fx.residual * fx.residual + fy.residual * fy.residual));
                    row.fit.converged = fx.converged && fy.converged;
                    row.fit.fallback = fx.fallback || fy.fallback;
                    if (!fx.message.empty() || !fy.message.empty())
                        row.fit.message = !fx.message.empty() ? fx.message : fy.message;
                }
            } catch (const std::exception& e) {
                row.fit.converged = false;
                row.fit.message = e.what();
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace ddsim
