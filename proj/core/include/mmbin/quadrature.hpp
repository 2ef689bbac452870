#pragma once

#include <functional>

namespace mmbin {

/// Adaptive Gauss–Legendre quadrature of f over [a, b]. A panel is accepted
/// when the 10-point rule on it agrees with the sum over its two halves to
/// within tol·max(1, |value|).
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

}  // namespace mmbin
