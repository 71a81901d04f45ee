#include "anomcast/arima.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include <nlohmann/json.hpp>

#include "anomcast/poly.hpp"
#include "anomcast/simplex.hpp"
#include "anomcast/util.hpp"

namespace anomcast::arima {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

struct CssResult {
    double sse = 0.0;
    int n_effective = 0;
};

// Innovation recursion with pre-sample innovations at zero, conditioning on
// the first p differenced observations. Fills eps (length w.size()).
CssResult css_innovations(const std::vector<double>& w, double intercept,
                          const std::vector<double>& ar, const std::vector<double>& ma,
                          std::vector<double>& eps) {
    const int n = int(w.size());
    const int p = int(ar.size());
    const int q = int(ma.size());
    eps.assign(std::size_t(n), 0.0);
    CssResult res;
    for (int t = p; t < n; ++t) {
        double pred = intercept;
        for (int i = 0; i < p; ++i) pred += ar[std::size_t(i)] * w[std::size_t(t - 1 - i)];
        for (int j = 0; j < q; ++j) {
            const int k = t - 1 - j;
            if (k >= 0) pred += ma[std::size_t(j)] * eps[std::size_t(k)];
        }
        const double e = w[std::size_t(t)] - pred;
        eps[std::size_t(t)] = e;
        res.sse += e * e;
        ++res.n_effective;
    }
    return res;
}

// Stationarity/invertibility violation from lag coefficients; the cheap
// coefficient bound skips the root solve for clearly-stable points.
double lag_violation(const std::vector<double>& lag_coeffs, bool ar_sign) {
    double tail = 0.0;
    double r_pow = 1.0;
    for (double c : lag_coeffs) {
        r_pow *= 1.1;
        tail += std::abs(c) * r_pow;
    }
    if (tail < 1.0) return 0.0;
    const auto p = ar_sign ? poly::ar_polynomial(lag_coeffs) : poly::ma_polynomial(lag_coeffs);
    return std::max(0.0, 1.001 - poly::min_root_magnitude(p));
}

struct FitSpace {
    // Parameter vector layout: [intercept_offset, ar..., ma...]. The stored
    // intercept is mean(w)*(1 - sum(ar)) + intercept_offset, which keeps the
    // zero start centred on the sample mean whatever the data scale.
    double w_mean = 0.0;
    int p = 0;
    int q = 0;

    void unpack(const std::vector<double>& x, double& intercept, std::vector<double>& ar,
                std::vector<double>& ma) const {
        ar.assign(x.begin() + 1, x.begin() + 1 + p);
        ma.assign(x.begin() + 1 + p, x.begin() + 1 + p + q);
        double ar_sum = 0.0;
        for (double a : ar) ar_sum += a;
        intercept = w_mean * (1.0 - ar_sum) + x[0];
    }
};

}  // namespace

std::string ArimaOrder::str() const {
    return "(" + std::to_string(p) + "," + std::to_string(d) + "," + std::to_string(q) + ")";
}

std::vector<double> difference(const std::vector<double>& series, int d) {
    if (d < 0) throw ValidationError("differencing degree must be non-negative");
    if (int(series.size()) <= d && d > 0) {
        throw InsufficientDataError("series too short to difference " + std::to_string(d) +
                                    " times");
    }
    std::vector<double> out = series;
    for (int k = 0; k < d; ++k) {
        for (std::size_t i = 0; i + 1 < out.size(); ++i) out[i] = out[i + 1] - out[i];
        out.pop_back();
    }
    return out;
}

ArimaModel fit_arima(const std::vector<double>& series, const ArimaOrder& order) {
    if (order.p < 0 || order.d < 0 || order.q < 0) {
        throw ValidationError("ARIMA orders must be non-negative");
    }
    if (int(series.size()) <= order.d) {
        throw InsufficientDataError("series length must exceed d");
    }
    const std::vector<double> w = difference(series, order.d);
    const int n = int(w.size());
    if (n < order.p + 3) {
        throw InsufficientDataError("need at least p+3 differenced observations, have " +
                                    std::to_string(n));
    }
    const double w_mean = mean(w);
    double w_var = 0.0;
    for (double x : w) w_var += (x - w_mean) * (x - w_mean);
    w_var /= double(n);
    const double scale = std::max(1.0, w_mean * w_mean);
    if (!(w_var > 0.0) || w_var < 1e-30 * scale) {
        throw DegenerateInputError("differenced series has zero variance");
    }

    const FitSpace space{w_mean, order.p, order.q};
    const int dim = 1 + order.p + order.q;
    std::vector<double> eps;
    std::vector<double> scratch_ar, scratch_ma, scratch_eps;
    const auto objective = [&](const std::vector<double>& x) {
        double intercept;
        space.unpack(x, intercept, scratch_ar, scratch_ma);
        const double violation = lag_violation(scratch_ar, true) + lag_violation(scratch_ma, false);
        const CssResult css = css_innovations(w, intercept, scratch_ar, scratch_ma, scratch_eps);
        return css.sse * (1.0 + 100.0 * violation) + violation;
    };

    std::vector<std::vector<double>> starts{std::vector<double>(std::size_t(dim), 0.0),
                                            std::vector<double>(std::size_t(dim), 0.1),
                                            std::vector<double>(std::size_t(dim), -0.1)};
    // Offset starts scale with the data so +-0.1 is meaningful for any unit.
    const double offset_scale = std::sqrt(w_var);
    starts[1][0] = 0.1 * offset_scale;
    starts[2][0] = -0.1 * offset_scale;

    const SimplexResult opt = multi_start_nelder_mead(objective, starts);

    ArimaModel model;
    model.order = order;
    space.unpack(opt.x, model.intercept, model.ar_coeffs, model.ma_coeffs);

    const CssResult css =
        css_innovations(w, model.intercept, model.ar_coeffs, model.ma_coeffs, eps);
    model.sigma2 = css.n_effective > 0 ? css.sse / double(css.n_effective) : 0.0;

    const double ar_root = poly::min_root_magnitude(poly::ar_polynomial(model.ar_coeffs));
    const double ma_root = poly::min_root_magnitude(poly::ma_polynomial(model.ma_coeffs));
    const bool stationary = ar_root > 1.0 && ma_root > 1.0;

    if (!(model.sigma2 > 0.0)) {
        throw DegenerateInputError("zero innovation variance at the CSS optimum");
    }
    const int n_eff = css.n_effective;
    model.loglik = -0.5 * double(n_eff) * (kLog2Pi + std::log(model.sigma2) + 1.0);
    model.aic = -2.0 * model.loglik + 2.0 * double(order.p + order.q + 1);

    if (!opt.converged || !stationary) {
        throw NonConvergenceError("ARIMA" + order.str() + " fit did not converge to a " +
                                      "stationary, invertible optimum",
                                  model);
    }
    return model;
}

OrderSelection select_order_detailed(const std::vector<double>& series, int max_sum) {
    if (int(series.size()) < 30) {
        throw InsufficientDataError("order selection needs at least 30 observations");
    }
    if (max_sum < 1) throw ValidationError("max_sum must be >= 1");

    OrderSelection sel;
    bool have_best = false;
    std::tuple<double, int, int, int, int> best_key;
    std::string failures;

    for (int p = 0; p <= max_sum; ++p) {
        for (int d = 0; d + p <= max_sum; ++d) {
            for (int q = 0; p + d + q <= max_sum; ++q) {
                if (p == 0 && d == 0 && q == 0) continue;
                const ArimaOrder order{p, d, q};
                OrderCandidate cand;
                cand.order = order;
                try {
                    ArimaModel model = fit_arima(series, order);
                    cand.aic = model.aic;
                    cand.converged = true;
                    const auto key = std::make_tuple(model.aic, p + d + q, d, p, q);
                    if (!have_best || key < best_key) {
                        best_key = key;
                        sel.order = order;
                        sel.model = std::move(model);
                        have_best = true;
                    }
                } catch (const Error& e) {
                    cand.error = e.what();
                    failures += "  " + order.str() + ": " + e.what() + "\n";
                }
                sel.candidates.push_back(std::move(cand));
            }
        }
    }
    if (!have_best) {
        throw Error("every candidate order failed:\n" + failures);
    }
    return sel;
}

ArimaOrder select_order(const std::vector<double>& series, int max_sum) {
    return select_order_detailed(series, max_sum).order;
}

std::vector<double> forecast(const ArimaModel& model, const std::vector<double>& history,
                             int h) {
    if (h < 1) throw ValidationError("forecast horizon must be positive");
    const auto& o = model.order;
    if (int(history.size()) < o.p + o.d + o.q) {
        throw InsufficientDataError("history shorter than p+d+q");
    }
    std::vector<double> w =
        o.d > 0 && int(history.size()) <= o.d ? std::vector<double>{}
                                              : difference(history, o.d);
    std::vector<double> eps;
    css_innovations(w, model.intercept, model.ar_coeffs, model.ma_coeffs, eps);

    // Last level of every differencing stage, for integrating back.
    std::vector<double> lasts(std::size_t(o.d), 0.0);
    {
        std::vector<double> stage = history;
        for (int s = 0; s < o.d; ++s) {
            lasts[std::size_t(s)] = stage.back();
            if (s + 1 < o.d) stage = difference(stage, 1);
        }
    }

    std::vector<double> out;
    out.reserve(std::size_t(h));
    const int n = int(w.size());
    for (int k = 0; k < h; ++k) {
        double pred = model.intercept;
        const int t = n + k;
        for (int i = 0; i < o.p; ++i) {
            const int idx = t - 1 - i;
            if (idx < 0) continue;  // pre-sample values follow the zero convention
            pred += model.ar_coeffs[std::size_t(i)] * w[std::size_t(idx)];
        }
        for (int j = 0; j < o.q; ++j) {
            const int idx = t - 1 - j;
            if (idx >= 0 && idx < n) {
                pred += model.ma_coeffs[std::size_t(j)] * eps[std::size_t(idx)];
            }
            // future innovations are zero
        }
        w.push_back(pred);

        double level = pred;
        for (int s = o.d - 1; s >= 0; --s) {
            level += lasts[std::size_t(s)];
            lasts[std::size_t(s)] = level;
        }
        out.push_back(level);
    }
    return out;
}

std::vector<double> one_step_residuals(const ArimaModel& model,
                                       const std::vector<double>& series) {
    const auto& o = model.order;
    if (int(series.size()) <= o.p + o.d + o.q) {
        throw InsufficientDataError("series shorter than p+d+q+1");
    }
    const std::vector<double> w = difference(series, o.d);
    std::vector<double> eps;
    css_innovations(w, model.intercept, model.ar_coeffs, model.ma_coeffs, eps);
    return std::vector<double>(eps.begin() + o.p, eps.end());
}

std::vector<double> studentize(const std::vector<double>& residuals) {
    if (residuals.size() < 3) {
        throw InsufficientDataError("studentize needs at least 3 residuals");
    }
    const double sd = sample_std(residuals);
    if (!(sd > 0.0)) {
        throw DegenerateInputError("residuals have zero standard deviation");
    }
    std::vector<double> out;
    out.reserve(residuals.size());
    for (double r : residuals) out.push_back(r / sd);
    return out;
}

nlohmann::json to_json(const ArimaModel& model) {
    return nlohmann::json{
        {"order", {{"p", model.order.p}, {"d", model.order.d}, {"q", model.order.q}}},
        {"ar", model.ar_coeffs},
        {"ma", model.ma_coeffs},
        {"intercept", model.intercept},
        {"sigma2", model.sigma2},
        {"loglik", model.loglik},
        {"aic", model.aic}};
}

ArimaModel arima_from_json(const nlohmann::json& j) {
    ArimaModel model;
    model.order.p = j.at("order").at("p").get<int>();
    model.order.d = j.at("order").at("d").get<int>();
    model.order.q = j.at("order").at("q").get<int>();
    model.ar_coeffs = j.at("ar").get<std::vector<double>>();
    model.ma_coeffs = j.at("ma").get<std::vector<double>>();
    model.intercept = j.at("intercept").get<double>();
    model.sigma2 = j.at("sigma2").get<double>();
    model.loglik = j.at("loglik").get<double>();
    model.aic = j.at("aic").get<double>();
    if (int(model.ar_coeffs.size()) != model.order.p ||
        int(model.ma_coeffs.size()) != model.order.q) {
        throw ValidationError("ARIMA JSON coefficient counts disagree with the order");
    }
    return model;
}

}  // namespace anomcast::arima
