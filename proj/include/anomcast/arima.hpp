#pragma once

#include <string>
#include <vector>

#include "anomcast/errors.hpp"

#include <nlohmann/json_fwd.hpp>

namespace anomcast::arima {

struct ArimaOrder {
    int p = 0;  // AR lags
    int d = 0;  // differencing degree
    int q = 0;  // MA lags

    int sum() const { return p + d + q; }
    auto operator<=>(const ArimaOrder&) const = default;
    std::string str() const;
};

/// Fitted ARIMA(p,d,q) with intercept, estimated by conditional sum of
/// squares: innovations are zeroed before the sample and the first p
/// differenced observations condition the recursion,
///   w_t = c + sum_i ar[i]*w_{t-1-i} + sum_j ma[j]*e_{t-1-j} + e_t
/// on the d-times differenced series w.
struct ArimaModel {
    ArimaOrder order;
    std::vector<double> ar_coeffs;
    std::vector<double> ma_coeffs;
    double intercept = 0.0;
    double sigma2 = 0.0;   // innovation variance, SSE / n_effective
    double loglik = 0.0;   // Gaussian CSS log-likelihood
    double aic = 0.0;      // -2*loglik + 2*(p+q+1)
};

/// Optimizer gave up or the solution violates stationarity/invertibility;
/// carries the best parameters found.
struct NonConvergenceError : Error {
    NonConvergenceError(const std::string& message, ArimaModel best)
        : Error(message), best_so_far(std::move(best)) {}
    ArimaModel best_so_far;
};

/// Applies the first-difference operator d times; output length shrinks by d.
std::vector<double> difference(const std::vector<double>& series, int d);

/// CSS fit via multi-start Nelder-Mead (starts: zeros, +0.1, -0.1 on every
/// coefficient). Throws DegenerateInputError when the differenced series has
/// zero variance, InsufficientDataError when too short, NonConvergenceError
/// when no start converges to a stationary, invertible optimum.
ArimaModel fit_arima(const std::vector<double>& series, const ArimaOrder& order);

struct OrderCandidate {
    ArimaOrder order;
    double aic = 0.0;
    bool converged = false;
    std::string error;
};

struct OrderSelection {
    ArimaOrder order;
    ArimaModel model;
    std::vector<OrderCandidate> candidates;
};

/// Exhaustive search over every (p,d,q) with p+d+q <= max_sum except
/// (0,0,0), minimum AIC among converged fits. Ties favor the smaller
/// p+d+q, then smaller d, then smaller p, then smaller q. Throws when every
/// candidate fails, listing the per-order failures.
OrderSelection select_order_detailed(const std::vector<double>& series, int max_sum = 3);
ArimaOrder select_order(const std::vector<double>& series, int max_sum = 3);

/// Recursive h-step forecast: difference the history d times, recurse the
/// ARMA equation with future innovations at zero, integrate back.
std::vector<double> forecast(const ArimaModel& model, const std::vector<double>& history, int h);

/// Rolling one-step innovations under fixed fitted coefficients (no refit).
/// Element k corresponds to original series index k + residual_offset(order):
/// the first d points are lost to differencing, the next p to conditioning.
std::vector<double> one_step_residuals(const ArimaModel& model,
                                       const std::vector<double>& series);

inline int residual_offset(const ArimaOrder& order) { return order.p + order.d; }

/// residual / sample_std(residuals) with the n-1 denominator. Needs >= 3
/// values and a non-zero standard deviation.
std::vector<double> studentize(const std::vector<double>& residuals);

nlohmann::json to_json(const ArimaModel& model);
ArimaModel arima_from_json(const nlohmann::json& j);

}  // namespace anomcast::arima
