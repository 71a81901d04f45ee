#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "anomcast/errors.hpp"

namespace anomcast {

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    bool converged = false;
    int evaluations = 0;
};

struct SimplexOptions {
    double initial_step = 0.1;   // per-coordinate displacement of the start simplex
    double f_tol = 1e-10;        // relative spread of simplex values at convergence
    int max_evaluations = 0;     // 0 -> 500 * (dim + 1)
};

/// Derivative-free Nelder-Mead minimization with the standard
/// reflection/expansion/contraction/shrink moves. Non-finite objective
/// values are treated as +infinity. Templated on the callable so hot
/// objectives inline into the optimizer loop.
template <typename F>
SimplexResult nelder_mead(F&& objective, const std::vector<double>& start,
                          const SimplexOptions& options = {}) {
    const std::size_t n = start.size();
    SimplexResult result;
    if (n == 0) {
        throw ValidationError("nelder_mead needs at least one dimension");
    }
    const int max_evals =
        options.max_evaluations > 0 ? options.max_evaluations : int(500 * (n + 1));

    int evals = 0;
    const auto guarded = [&](const std::vector<double>& x) {
        ++evals;
        const double v = objective(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    std::vector<std::vector<double>> pts(n + 1, start);
    std::vector<double> vals(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i + 1][i] += options.initial_step != 0.0 ? options.initial_step : 0.1;
    }
    for (std::size_t i = 0; i <= n; ++i) vals[i] = guarded(pts[i]);

    // The moves only need the best, worst and second-worst vertices, found
    // by a linear scan; ties resolve to the lowest index for determinism.
    std::size_t best = 0, worst = 0, second_worst = 0;
    const auto scan_simplex = [&] {
        best = 0;
        worst = 0;
        for (std::size_t i = 1; i <= n; ++i) {
            if (vals[i] < vals[best]) best = i;
            if (vals[i] > vals[worst]) worst = i;
        }
        second_worst = worst == 0 ? 1 : 0;
        for (std::size_t i = 0; i <= n; ++i) {
            if (i != worst && vals[i] > vals[second_worst]) second_worst = i;
        }
    };

    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    bool converged = false;
    while (evals < max_evals) {
        scan_simplex();

        const double spread = std::abs(vals[worst] - vals[best]);
        const double scale = std::abs(vals[best]) + std::abs(vals[worst]) + 1e-300;
        if (std::isfinite(vals[worst]) && spread <= options.f_tol * scale) {
            converged = true;
            break;
        }

        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i <= n; ++i) {
                if (i != worst) acc += pts[i][j];
            }
            centroid[j] = acc / double(n);
        }

        for (std::size_t j = 0; j < n; ++j) xr[j] = centroid[j] + (centroid[j] - pts[worst][j]);
        const double fr = guarded(xr);

        if (fr < vals[best]) {
            for (std::size_t j = 0; j < n; ++j)
                xe[j] = centroid[j] + 2.0 * (centroid[j] - pts[worst][j]);
            const double fe = guarded(xe);
            if (fe < fr) {
                pts[worst] = xe;
                vals[worst] = fe;
            } else {
                pts[worst] = xr;
                vals[worst] = fr;
            }
        } else if (fr < vals[second_worst]) {
            pts[worst] = xr;
            vals[worst] = fr;
        } else {
            const bool outside = fr < vals[worst];
            if (outside) {
                for (std::size_t j = 0; j < n; ++j)
                    xc[j] = centroid[j] + 0.5 * (xr[j] - centroid[j]);
            } else {
                for (std::size_t j = 0; j < n; ++j)
                    xc[j] = centroid[j] + 0.5 * (pts[worst][j] - centroid[j]);
            }
            const double fc = guarded(xc);
            if (fc < std::min(fr, vals[worst])) {
                pts[worst] = xc;
                vals[worst] = fc;
            } else {
                // Shrink toward the best vertex.
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t j = 0; j < n; ++j) {
                        pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
                    }
                    vals[i] = guarded(pts[i]);
                }
            }
        }
    }

    scan_simplex();
    result.x = pts[best];
    result.value = vals[best];
    result.converged = converged;
    result.evaluations = evals;
    return result;
}

/// Runs nelder_mead from each start and keeps the best final value.
template <typename F>
SimplexResult multi_start_nelder_mead(F&& objective, const std::vector<std::vector<double>>& starts,
                                      const SimplexOptions& options = {}) {
    if (starts.empty()) {
        throw ValidationError("multi_start_nelder_mead needs at least one start");
    }
    SimplexResult best;
    bool first = true;
    for (const auto& s : starts) {
        SimplexResult r = nelder_mead(objective, s, options);
        if (first || r.value < best.value ||
            (r.value == best.value && r.converged && !best.converged)) {
            best = r;
            first = false;
        }
    }
    return best;
}

}  // namespace anomcast
