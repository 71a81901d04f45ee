#include "anomcast/poly.hpp"

#include <cmath>
#include <complex>
#include <limits>

namespace anomcast::poly {

std::vector<double> multiply(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

std::vector<double> ar_polynomial(const std::vector<double>& coeffs) {
    std::vector<double> out(coeffs.size() + 1, 0.0);
    out[0] = 1.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) out[i + 1] = -coeffs[i];
    return out;
}

std::vector<double> ma_polynomial(const std::vector<double>& coeffs) {
    std::vector<double> out(coeffs.size() + 1, 0.0);
    out[0] = 1.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) out[i + 1] = coeffs[i];
    return out;
}

std::vector<double> difference_polynomial(int d, int D, int s) {
    std::vector<double> out{1.0};
    const std::vector<double> first{1.0, -1.0};
    for (int i = 0; i < d; ++i) out = multiply(out, first);
    if (D > 0) {
        std::vector<double> seasonal(std::size_t(s) + 1, 0.0);
        seasonal[0] = 1.0;
        seasonal[std::size_t(s)] = -1.0;
        for (int i = 0; i < D; ++i) out = multiply(out, seasonal);
    }
    return out;
}

double min_root_magnitude(const std::vector<double>& coeffs) {
    // Trim negligible leading-power coefficients to the effective degree.
    std::size_t degree = coeffs.empty() ? 0 : coeffs.size() - 1;
    while (degree > 0 && std::abs(coeffs[degree]) < 1e-12) --degree;
    if (degree == 0) return std::numeric_limits<double>::infinity();

    // Sufficient bound: |p(z)| >= |c0| - sum |c_i| r^i on |z| <= r, so when
    // that stays positive at r = 1.1 every root lies outside 1.1 and the
    // iterative solve is unnecessary.
    if (std::abs(coeffs[0]) > 1e-12) {
        double tail = 0.0;
        double r_pow = 1.0;
        for (std::size_t i = 1; i <= degree; ++i) {
            r_pow *= 1.1;
            tail += std::abs(coeffs[i]) * r_pow;
        }
        if (tail < std::abs(coeffs[0])) return 1.1;
    }

    using cd = std::complex<double>;
    std::vector<cd> monic(degree + 1);
    for (std::size_t i = 0; i <= degree; ++i) monic[i] = coeffs[i] / coeffs[degree];

    // Durand-Kerner from non-symmetric seeds.
    std::vector<cd> roots(degree);
    const cd seed(0.4, 0.9);
    cd power(1.0, 0.0);
    for (std::size_t i = 0; i < degree; ++i) {
        power *= seed;
        roots[i] = power;
    }
    const auto eval = [&](cd z) {
        cd acc(0.0, 0.0);
        for (std::size_t i = degree + 1; i-- > 0;) acc = acc * z + monic[i];
        return acc;
    };
    for (int iter = 0; iter < 200; ++iter) {
        double shift = 0.0;
        for (std::size_t i = 0; i < degree; ++i) {
            cd denom(1.0, 0.0);
            for (std::size_t j = 0; j < degree; ++j) {
                if (j != i) denom *= roots[i] - roots[j];
            }
            if (std::abs(denom) < 1e-300) continue;
            const cd delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            shift = std::max(shift, std::abs(delta));
        }
        if (shift < 1e-13) break;
    }

    double min_mag = std::numeric_limits<double>::infinity();
    for (const auto& r : roots) min_mag = std::min(min_mag, std::abs(r));
    return min_mag;
}

}  // namespace anomcast::poly
