#include "anomcast/sarimax.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include <nlohmann/json.hpp>

#include "anomcast/poly.hpp"
#include "anomcast/simplex.hpp"
#include "anomcast/util.hpp"

namespace anomcast::sarimax {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

struct Expanded {
    std::vector<double> combined_ar;  // A(B)*D(B); index 0 is 1
    std::vector<double> combined_ma;  // M(B); index 0 is 1
    int cond_start = 0;               // first in-window index with a computable innovation

    // Scratch space so repeated expansion in the optimizer loop stays
    // allocation-free once capacities settle.
    std::vector<double> scratch_a, scratch_b;
    std::vector<double> cached_diff;
    int cached_d = -1, cached_D = -1, cached_s = -1;
};

// out = a * b (coefficient convolution) without giving up capacity.
void multiply_into(const std::vector<double>& a, const std::vector<double>& b,
                   std::vector<double>& out) {
    out.assign(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
}

void expand_into(const SarimaxModel& m, Expanded& e) {
    const bool seasonal = m.order.P > 0 || m.order.Q > 0;
    if (!seasonal && m.order.d == 0 && m.order.D == 0) {
        // Fast path for the plain ARMA candidates the 7-day grids live on.
        e.combined_ar.assign(std::size_t(m.order.p) + 1, 0.0);
        e.combined_ar[0] = 1.0;
        for (int i = 0; i < m.order.p; ++i) {
            e.combined_ar[std::size_t(i) + 1] = -m.ar[std::size_t(i)];
        }
    } else {
        auto& a = e.scratch_a;
        auto& b = e.scratch_b;
        a.assign(std::size_t(m.order.p) + 1, 0.0);
        a[0] = 1.0;
        for (int i = 0; i < m.order.p; ++i) a[std::size_t(i) + 1] = -m.ar[std::size_t(i)];
        b.assign(std::size_t(m.order.P) * std::size_t(m.order.s) + 1, 0.0);
        b[0] = 1.0;
        for (int i = 0; i < m.order.P; ++i) {
            b[std::size_t(i + 1) * std::size_t(m.order.s)] = -m.seasonal_ar[std::size_t(i)];
        }
        multiply_into(a, b, e.combined_ar);
        if (m.order.d > 0 || m.order.D > 0) {
            if (e.cached_d != m.order.d || e.cached_D != m.order.D ||
                e.cached_s != m.order.s) {
                e.cached_diff = poly::difference_polynomial(m.order.d, m.order.D, m.order.s);
                e.cached_d = m.order.d;
                e.cached_D = m.order.D;
                e.cached_s = m.order.s;
            }
            a = e.combined_ar;
            multiply_into(a, e.cached_diff, e.combined_ar);
        }
    }

    if (m.order.Q == 0) {
        e.combined_ma.assign(std::size_t(m.order.q) + 1, 0.0);
        e.combined_ma[0] = 1.0;
        for (int i = 0; i < m.order.q; ++i) {
            e.combined_ma[std::size_t(i) + 1] = m.ma[std::size_t(i)];
        }
    } else {
        auto& a = e.scratch_a;
        auto& b = e.scratch_b;
        a.assign(std::size_t(m.order.q) + 1, 0.0);
        a[0] = 1.0;
        for (int i = 0; i < m.order.q; ++i) a[std::size_t(i) + 1] = m.ma[std::size_t(i)];
        b.assign(std::size_t(m.order.Q) * std::size_t(m.order.s) + 1, 0.0);
        b[0] = 1.0;
        for (int i = 0; i < m.order.Q; ++i) {
            b[std::size_t(i + 1) * std::size_t(m.order.s)] = m.seasonal_ma[std::size_t(i)];
        }
        multiply_into(a, b, e.combined_ma);
    }

    e.cond_start =
        m.order.d + m.order.s * m.order.D + m.order.p + m.order.s * m.order.P;
}

Expanded expand(const SarimaxModel& m) {
    Expanded e;
    expand_into(m, e);
    return e;
}

// Innovations of one window under the reset-at-boundary convention: eps is 0
// before cond_start and computed from there on. Returns (sse, count).
std::pair<double, int> window_innovations(const Expanded& e, const SarimaxModel& m,
                                          std::span<const double> y, std::span<const double> x,
                                          std::vector<double>& eps) {
    const int n = int(y.size());
    eps.assign(std::size_t(n), 0.0);
    double sse = 0.0;
    int count = 0;
    for (int t = e.cond_start; t < n; ++t) {
        double acc = 0.0;
        for (std::size_t k = 0; k < e.combined_ar.size(); ++k) {
            const int idx = t - int(k);
            if (idx < 0) break;  // lags are ordered, all further ones are older
            acc += e.combined_ar[k] * y[std::size_t(idx)];
        }
        double ma_acc = 0.0;
        for (std::size_t j = 1; j < e.combined_ma.size(); ++j) {
            const int idx = t - int(j);
            if (idx < 0) break;
            ma_acc += e.combined_ma[j] * eps[std::size_t(idx)];
        }
        const double resid = acc - m.intercept - m.beta * x[std::size_t(t)] - ma_acc;
        eps[std::size_t(t)] = resid;
        sse += resid * resid;
        ++count;
    }
    return {sse, count};
}

int parameter_count(const SarimaxOrder& o) { return o.p + o.q + o.P + o.Q + 2; }

// Everything estimated from the data: lag coefficients, intercept, beta and
// the innovation variance. The selection's data-sufficiency rule counts all
// of them.
int estimated_count(const SarimaxOrder& o) { return parameter_count(o) + 1; }

int effective_points(const SarimaxOrder& o, const std::vector<AnomalyWindow>& windows) {
    const int cond = o.d + o.s * o.D + o.p + o.s * o.P;
    int total = 0;
    for (const auto& w : windows) {
        total += std::max(0, int(w.returns.size()) - cond);
    }
    return total;
}

// True when every seasonal MA lag lands before any computed innovation in
// every window, which makes THETA a flat direction of the objective.
bool seasonal_ma_inert(const SarimaxOrder& o, const std::vector<AnomalyWindow>& windows) {
    if (o.Q == 0) return false;
    const int cond = o.d + o.s * o.D + o.p + o.s * o.P;
    for (const auto& w : windows) {
        const int last_t = int(w.returns.size()) - 1;
        if (last_t - o.s >= cond) return false;
    }
    return true;
}

struct ParamSpace {
    // Layout: [intercept_offset, beta, ar..., ma..., sar..., sma...].
    double z_mean = 0.0;
    SarimaxOrder order;

    int dim() const { return 2 + order.p + order.q + order.P + order.Q; }

    void unpack(const std::vector<double>& v, SarimaxModel& m) const {
        m.order = order;
        std::size_t at = 2;
        m.ar.assign(v.begin() + at, v.begin() + at + order.p);
        at += std::size_t(order.p);
        m.ma.assign(v.begin() + at, v.begin() + at + order.q);
        at += std::size_t(order.q);
        m.seasonal_ar.assign(v.begin() + at, v.begin() + at + order.P);
        at += std::size_t(order.P);
        m.seasonal_ma.assign(v.begin() + at, v.begin() + at + order.Q);
        m.beta = v[1];
        double ar_sum = 0.0, sar_sum = 0.0;
        for (double a : m.ar) ar_sum += a;
        for (double a : m.seasonal_ar) sar_sum += a;
        m.intercept = z_mean * (1.0 - ar_sum) * (1.0 - sar_sum) + v[0];
    }
};

// Root-based violation of the stationarity/invertibility region for a lag
// polynomial 1 -+ c_1 B - ... given by its lag coefficients. The coefficient
// bound avoids building the polynomial at all for clearly-stable points.
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

double penalty(const SarimaxModel& m) {
    return lag_violation(m.ar, true) + lag_violation(m.ma, false) +
           lag_violation(m.seasonal_ar, true) + lag_violation(m.seasonal_ma, false);
}

}  // namespace

std::string SarimaxOrder::str() const {
    return "(" + std::to_string(p) + "," + std::to_string(d) + "," + std::to_string(q) + ")(" +
           std::to_string(P) + "," + std::to_string(D) + "," + std::to_string(Q) + ")_" +
           std::to_string(s);
}

std::string to_string(ExogPolicy policy) {
    switch (policy) {
        case ExogPolicy::kZero: return "zero";
        case ExogPolicy::kHoldLast: return "hold-last";
        case ExogPolicy::kOracle: return "oracle";
    }
    return "hold-last";
}

ExogPolicy exog_policy_from_string(const std::string& name) {
    if (name == "zero") return ExogPolicy::kZero;
    if (name == "hold-last") return ExogPolicy::kHoldLast;
    if (name == "oracle") return ExogPolicy::kOracle;
    throw ValidationError("unknown exog policy: '" + name + "'");
}

double sarimax_one_step(const SarimaxModel& model, const std::vector<double>& history_y,
                        const std::vector<double>& history_eps, double x_t) {
    const Expanded e = expand(model);
    const int ar_lag = int(e.combined_ar.size()) - 1;
    const int ma_lag = int(e.combined_ma.size()) - 1;
    const int n = int(history_y.size());
    if (history_eps.size() != history_y.size()) {
        throw ValidationError("history_y and history_eps must be aligned");
    }
    if (n < ar_lag || n < ma_lag) {
        throw InsufficientDataError("history shorter than the maximum lag " +
                                    std::to_string(std::max(ar_lag, ma_lag)));
    }
    double pred = model.intercept + model.beta * x_t;
    for (std::size_t k = 1; k < e.combined_ar.size(); ++k) {
        pred -= e.combined_ar[k] * history_y[std::size_t(n - int(k))];
    }
    for (std::size_t j = 1; j < e.combined_ma.size(); ++j) {
        pred += e.combined_ma[j] * history_eps[std::size_t(n - int(j))];
    }
    return pred;
}

double training_sse(const SarimaxModel& model, const std::vector<AnomalyWindow>& windows) {
    const Expanded e = expand(model);
    double sse = 0.0;
    std::vector<double> eps;
    for (const auto& w : windows) {
        sse += window_innovations(e, model, w.returns, w.sentiments, eps).first;
    }
    return sse;
}

SarimaxModel fit_sarimax(const std::vector<AnomalyWindow>& windows, const SarimaxOrder& order) {
    if (order.p < 0 || order.d < 0 || order.q < 0 || order.P < 0 || order.D < 0 || order.Q < 0 ||
        order.s < 1) {
        throw ValidationError("invalid SARIMAX order " + order.str());
    }
    if (windows.size() < 5) {
        throw InsufficientDataError("SARIMAX fitting needs at least 5 windows");
    }

    // Differenced values feed the intercept centring; also the degeneracy check.
    const auto diff_poly = poly::difference_polynomial(order.d, order.D, order.s);
    const int dlag = int(diff_poly.size()) - 1;
    std::vector<double> z_values;
    double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;
    bool first_point = true;
    for (const auto& w : windows) {
        for (int t = 0; t < kWindowLength; ++t) {
            const double y = w.returns[std::size_t(t)];
            const double x = w.sentiments[std::size_t(t)];
            if (first_point) {
                y_min = y_max = y;
                x_min = x_max = x;
                first_point = false;
            } else {
                y_min = std::min(y_min, y);
                y_max = std::max(y_max, y);
                x_min = std::min(x_min, x);
                x_max = std::max(x_max, x);
            }
            if (t >= dlag) {
                double z = 0.0;
                for (int k = 0; k <= dlag; ++k) {
                    z += diff_poly[std::size_t(k)] * w.returns[std::size_t(t - k)];
                }
                z_values.push_back(z);
            }
        }
    }
    if (y_max - y_min < 1e-15 && x_max - x_min < 1e-15) {
        throw DegenerateInputError("returns and sentiments carry no variation");
    }

    const int n_eff = effective_points(order, windows);
    const int n_params = parameter_count(order);
    if (n_eff < n_params + 1) {
        throw InsufficientDataError("only " + std::to_string(n_eff) +
                                    " effective observations for " + std::to_string(n_params) +
                                    " parameters");
    }

    ParamSpace space;
    space.order = order;
    space.z_mean = z_values.empty() ? 0.0 : mean(z_values);
    double z_scale = 1e-4;
    if (z_values.size() >= 2) z_scale = std::max(z_scale, sample_std(z_values));

    SarimaxModel scratch;
    Expanded expanded;
    std::vector<double> eps;
    const auto objective = [&](const std::vector<double>& v) {
        space.unpack(v, scratch);
        expand_into(scratch, expanded);
        double sse = 0.0;
        for (const auto& w : windows) {
            sse += window_innovations(expanded, scratch, w.returns, w.sentiments, eps).first;
        }
        const double violation = penalty(scratch);
        return sse * (1.0 + 100.0 * violation) + violation;
    };

    const int dim = space.dim();
    std::vector<std::vector<double>> starts{std::vector<double>(std::size_t(dim), 0.0),
                                            std::vector<double>(std::size_t(dim), 0.1),
                                            std::vector<double>(std::size_t(dim), -0.1)};
    starts[1][0] = 0.1 * z_scale;
    starts[2][0] = -0.1 * z_scale;

    const SimplexResult opt = multi_start_nelder_mead(objective, starts);

    SarimaxModel model;
    space.unpack(opt.x, model);
    const Expanded e = expand(model);
    double sse = 0.0;
    int count = 0;
    for (const auto& w : windows) {
        const auto [wsse, wcount] = window_innovations(e, model, w.returns, w.sentiments, eps);
        sse += wsse;
        count += wcount;
    }
    model.sigma2 = count > 0 ? sse / double(count) : 0.0;
    if (!(model.sigma2 > 0.0)) {
        throw DegenerateInputError("zero innovation variance at the SARIMAX optimum");
    }
    model.loglik = -0.5 * double(count) * (kLog2Pi + std::log(model.sigma2) + 1.0);
    model.aic = -2.0 * model.loglik + 2.0 * double(n_params);

    const bool stable =
        poly::min_root_magnitude(poly::ar_polynomial(model.ar)) > 1.0 &&
        poly::min_root_magnitude(poly::ma_polynomial(model.ma)) > 1.0 &&
        poly::min_root_magnitude(poly::ar_polynomial(model.seasonal_ar)) > 1.0 &&
        poly::min_root_magnitude(poly::ma_polynomial(model.seasonal_ma)) > 1.0;
    if (!opt.converged || !stable) {
        throw NonConvergenceError("SARIMAX " + order.str() + " fit did not converge", model);
    }
    return model;
}

SarimaxSelection select_sarimax_order_detailed(const std::vector<AnomalyWindow>& windows,
                                               int max_nonseasonal_sum, int max_seasonal_sum) {
    if (max_nonseasonal_sum < 0 || max_seasonal_sum < 0) {
        throw ValidationError("selection bounds must be non-negative");
    }
    SarimaxSelection sel;
    bool have_best = false;
    std::tuple<double, int, int, int, int, int, int, int> best_key;
    std::string failures;

    for (int p = 0; p <= max_nonseasonal_sum; ++p) {
        for (int d = 0; d + p <= max_nonseasonal_sum; ++d) {
            for (int q = 0; p + d + q <= max_nonseasonal_sum; ++q) {
                for (int P = 0; P <= max_seasonal_sum; ++P) {
                    for (int D = 0; D + P <= max_seasonal_sum; ++D) {
                        for (int Q = 0; P + D + Q <= max_seasonal_sum; ++Q) {
                            const SarimaxOrder order{p, d, q, P, D, Q, 7};
                            SarimaxCandidate cand;
                            cand.order = order;
                            const int n_eff = effective_points(order, windows);
                            const int n_est = estimated_count(order);
                            const bool baseline =
                                p == 0 && d == 0 && q == 0 && P == 0 && D == 0 && Q == 0;
                            if (n_eff <= 0) {
                                cand.skip_reason = "no effective observations";
                            } else if (seasonal_ma_inert(order, windows)) {
                                cand.skip_reason = "seasonal MA lags never reach the sample";
                            } else if (!baseline && n_eff < 10 * n_est) {
                                cand.skip_reason =
                                    std::to_string(n_eff) + " effective observations < 10 x " +
                                    std::to_string(n_est) + " estimated parameters";
                            }
                            if (!cand.skip_reason.empty()) {
                                sel.candidates.push_back(std::move(cand));
                                continue;
                            }
                            try {
                                SarimaxModel model = fit_sarimax(windows, order);
                                cand.aic = model.aic;
                                cand.converged = true;
                                const auto key =
                                    std::make_tuple(model.aic, p + d + q + P + D + Q, d, D, p, P,
                                                    q, Q);
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
            }
        }
    }
    if (!have_best) {
        throw Error("every SARIMAX candidate failed:\n" + failures);
    }
    return sel;
}

SarimaxOrder select_sarimax_order(const std::vector<AnomalyWindow>& windows,
                                  int max_nonseasonal_sum, int max_seasonal_sum) {
    return select_sarimax_order_detailed(windows, max_nonseasonal_sum, max_seasonal_sum).order;
}

std::vector<double> forecast_window(const SarimaxModel& model,
                                    std::span<const double, 4> returns_first4,
                                    std::span<const double, 4> sentiments_first4,
                                    ExogPolicy policy,
                                    std::optional<std::span<const double, 3>> oracle_sentiments) {
    if (policy == ExogPolicy::kOracle && !oracle_sentiments) {
        throw ValidationError("oracle exog policy requires the actual future sentiments");
    }
    const Expanded e = expand(model);

    std::vector<double> y(returns_first4.begin(), returns_first4.end());
    std::vector<double> eps(y.size(), 0.0);

    // Innovations over the conditioning days, window-local state.
    for (int t = e.cond_start; t < int(returns_first4.size()); ++t) {
        double acc = 0.0;
        for (std::size_t k = 0; k < e.combined_ar.size(); ++k) {
            const int idx = t - int(k);
            if (idx < 0) break;
            acc += e.combined_ar[k] * y[std::size_t(idx)];
        }
        double ma_acc = 0.0;
        for (std::size_t j = 1; j < e.combined_ma.size(); ++j) {
            const int idx = t - int(j);
            if (idx < 0) break;
            ma_acc += e.combined_ma[j] * eps[std::size_t(idx)];
        }
        eps[std::size_t(t)] =
            acc - model.intercept - model.beta * sentiments_first4[std::size_t(t)] - ma_acc;
    }

    std::vector<double> out;
    out.reserve(3);
    for (int step = 0; step < 3; ++step) {
        double x = 0.0;
        switch (policy) {
            case ExogPolicy::kZero: x = 0.0; break;
            case ExogPolicy::kHoldLast: x = sentiments_first4[3]; break;
            case ExogPolicy::kOracle: x = (*oracle_sentiments)[std::size_t(step)]; break;
        }
        const int t = int(y.size());
        double pred = model.intercept + model.beta * x;
        for (std::size_t k = 1; k < e.combined_ar.size(); ++k) {
            const int idx = t - int(k);
            if (idx < 0) break;  // lags before the window use the zero convention
            pred -= e.combined_ar[k] * y[std::size_t(idx)];
        }
        for (std::size_t j = 1; j < e.combined_ma.size(); ++j) {
            const int idx = t - int(j);
            if (idx < 0) break;
            pred += e.combined_ma[j] * eps[std::size_t(idx)];
        }
        y.push_back(pred);
        eps.push_back(0.0);  // future innovations are zero
        out.push_back(pred);
    }
    return out;
}

std::vector<double> forecast_window(const SarimaxModel& model, const AnomalyWindow& window,
                                    ExogPolicy policy) {
    const std::span<const double, 4> r(window.returns.data(), 4);
    const std::span<const double, 4> s(window.sentiments.data(), 4);
    const std::span<const double, 3> future(window.sentiments.data() + 4, 3);
    return forecast_window(model, r, s, policy, future);
}

nlohmann::json to_json(const SarimaxModel& model) {
    return nlohmann::json{{"order",
                           {{"p", model.order.p},
                            {"d", model.order.d},
                            {"q", model.order.q},
                            {"P", model.order.P},
                            {"D", model.order.D},
                            {"Q", model.order.Q},
                            {"s", model.order.s}}},
                          {"ar", model.ar},
                          {"ma", model.ma},
                          {"sar", model.seasonal_ar},
                          {"sma", model.seasonal_ma},
                          {"beta", model.beta},
                          {"intercept", model.intercept},
                          {"sigma2", model.sigma2},
                          {"loglik", model.loglik},
                          {"aic", model.aic}};
}

SarimaxModel sarimax_from_json(const nlohmann::json& j) {
    SarimaxModel m;
    const auto& o = j.at("order");
    m.order = SarimaxOrder{o.at("p").get<int>(), o.at("d").get<int>(), o.at("q").get<int>(),
                           o.at("P").get<int>(), o.at("D").get<int>(), o.at("Q").get<int>(),
                           o.at("s").get<int>()};
    m.ar = j.at("ar").get<std::vector<double>>();
    m.ma = j.at("ma").get<std::vector<double>>();
    m.seasonal_ar = j.at("sar").get<std::vector<double>>();
    m.seasonal_ma = j.at("sma").get<std::vector<double>>();
    m.beta = j.at("beta").get<double>();
    m.intercept = j.at("intercept").get<double>();
    m.sigma2 = j.at("sigma2").get<double>();
    m.loglik = j.at("loglik").get<double>();
    m.aic = j.at("aic").get<double>();
    if (int(m.ar.size()) != m.order.p || int(m.ma.size()) != m.order.q ||
        int(m.seasonal_ar.size()) != m.order.P || int(m.seasonal_ma.size()) != m.order.Q) {
        throw ValidationError("SARIMAX JSON coefficient counts disagree with the order");
    }
    return m;
}

}  // namespace anomcast::sarimax
