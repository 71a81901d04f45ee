#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anomcast/errors.hpp"
#include "anomcast/series.hpp"

#include <nlohmann/json_fwd.hpp>

namespace anomcast::sarimax {

struct SarimaxOrder {
    int p = 0, d = 0, q = 0;  // non-seasonal
    int P = 0, D = 0, Q = 0;  // seasonal
    int s = 7;                // seasonal period, 7 throughout this project

    auto operator<=>(const SarimaxOrder&) const = default;
    std::string str() const;
};

/// Seasonal ARIMA with one exogenous regressor:
///   phi(B) PHI(B^s) delta^d delta_s^D y_t = c + beta*x_t + theta(B) THETA(B^s) eps_t
/// estimated by conditional sum of squares over disjoint 7-day windows with
/// the innovation state reset to zero at every window boundary.
struct SarimaxModel {
    SarimaxOrder order;
    std::vector<double> ar;           // phi
    std::vector<double> ma;           // theta
    std::vector<double> seasonal_ar;  // PHI
    std::vector<double> seasonal_ma;  // THETA
    double beta = 0.0;                // exogenous (sentiment) coefficient
    double intercept = 0.0;
    double sigma2 = 0.0;
    double loglik = 0.0;
    double aic = 0.0;
};

struct NonConvergenceError : Error {
    NonConvergenceError(const std::string& message, SarimaxModel best)
        : Error(message), best_so_far(std::move(best)) {}
    SarimaxModel best_so_far;
};

/// How future exogenous values are chosen at forecast steps.
enum class ExogPolicy {
    kZero,      // x = 0 beyond the conditioning days
    kHoldLast,  // x = last conditioning day's sentiment (default)
    kOracle,    // x = the actual future sentiments (sensitivity runs only)
};

std::string to_string(ExogPolicy policy);
ExogPolicy exog_policy_from_string(const std::string& name);

/// Conditional expectation of y_t from the model equation with eps_t = 0.
/// history_eps[u] is the innovation at time u (0 where undefined); both
/// histories are aligned and end at t-1.
double sarimax_one_step(const SarimaxModel& model, const std::vector<double>& history_y,
                        const std::vector<double>& history_eps, double x_t);

/// Total conditional SSE of the model's coefficients over training windows
/// (y = returns, x = sentiments, innovation state reset per window).
/// Exposed so tests can audit the optimizer and window exchangeability.
double training_sse(const SarimaxModel& model, const std::vector<AnomalyWindow>& windows);

/// CSS fit over >= 5 windows; multi-start Nelder-Mead as in the arima module.
SarimaxModel fit_sarimax(const std::vector<AnomalyWindow>& windows, const SarimaxOrder& order);

struct SarimaxCandidate {
    SarimaxOrder order;
    double aic = 0.0;
    bool converged = false;
    std::string skip_reason;  // non-empty when the candidate was never fit
    std::string error;
};

struct SarimaxSelection {
    SarimaxOrder order;
    SarimaxModel model;
    std::vector<SarimaxCandidate> candidates;
};

/// Grid search with p+d+q <= max_nonseasonal_sum, P+D+Q <= max_seasonal_sum,
/// s = 7, minimum AIC among converged fits. Candidates are skipped when the
/// windows leave them no effective observations (seasonal differencing needs
/// s+1 points per window), when seasonal MA lags can never touch a computed
/// innovation, or when effective observations fall below 10 x the number of
/// estimated quantities (coefficients, intercept, beta, innovation
/// variance); the intercept-and-beta baseline is always eligible. Richer
/// candidates therefore enter the grid only as the pooled data grows.
SarimaxSelection select_sarimax_order_detailed(const std::vector<AnomalyWindow>& windows,
                                               int max_nonseasonal_sum = 3,
                                               int max_seasonal_sum = 2);
SarimaxOrder select_sarimax_order(const std::vector<AnomalyWindow>& windows,
                                  int max_nonseasonal_sum = 3, int max_seasonal_sum = 2);

/// Recursive 3-step forecast conditioned on a window's first 4 returns and
/// sentiments. Future exogenous values follow the policy; oracle needs the
/// actual last-3 sentiments. Lags reaching before the window use zeros.
std::vector<double> forecast_window(const SarimaxModel& model,
                                    std::span<const double, 4> returns_first4,
                                    std::span<const double, 4> sentiments_first4,
                                    ExogPolicy policy = ExogPolicy::kHoldLast,
                                    std::optional<std::span<const double, 3>> oracle_sentiments =
                                        std::nullopt);

/// Convenience overload operating on an AnomalyWindow (oracle values come
/// from the window itself).
std::vector<double> forecast_window(const SarimaxModel& model, const AnomalyWindow& window,
                                    ExogPolicy policy = ExogPolicy::kHoldLast);

nlohmann::json to_json(const SarimaxModel& model);
SarimaxModel sarimax_from_json(const nlohmann::json& j);

}  // namespace anomcast::sarimax
