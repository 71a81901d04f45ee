#pragma once

#include <vector>

namespace anomcast::poly {

/// Coefficient convolution: (a*b)[k] = sum a[i]*b[k-i]. Coefficients are in
/// ascending powers of the lag operator B.
std::vector<double> multiply(const std::vector<double>& a, const std::vector<double>& b);

/// AR polynomial 1 - c[0]*B - c[1]*B^2 - ... from lag coefficients.
std::vector<double> ar_polynomial(const std::vector<double>& coeffs);

/// MA polynomial 1 + c[0]*B + c[1]*B^2 + ...
std::vector<double> ma_polynomial(const std::vector<double>& coeffs);

/// (1-B)^d * (1-B^s)^D expanded in ascending powers of B.
std::vector<double> difference_polynomial(int d, int D, int s);

/// Smallest root magnitude of p(z) = c[0] + c[1] z + ... (Durand-Kerner),
/// or a lower bound of 1.1 when a cheap coefficient bound already places
/// every root outside |z| = 1.1. Returns +infinity for polynomials of
/// effective degree zero. Stationarity and invertibility require a value
/// above 1.
double min_root_magnitude(const std::vector<double>& coeffs);

}  // namespace anomcast::poly
