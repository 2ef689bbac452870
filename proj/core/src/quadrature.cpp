#include "mmbin/quadrature.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace mmbin {

namespace {

constexpr std::array<double, 5> kNodes = {
    0.1488743389816312108848260, 0.4333953941292471907992659, 0.6794095682990244062343274,
    0.8650633666889845107320967, 0.9739065285171717200779640};
constexpr std::array<double, 5> kWeights = {
    0.2955242247147528701738930, 0.2692667193099963550912269, 0.2190863625159820439955349,
    0.1494513491505805931457763, 0.0666713443086881375935688};

double gauss10(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < kNodes.size(); ++i) {
    const double dx = half * kNodes[i];
    s += kWeights[i] * (f(mid - dx) + f(mid + dx));
  }
  return s * half;
}

double adapt(const std::function<double(double)>& f, double a, double b, double whole, double tol,
             int depth) {
  const double mid = 0.5 * (a + b);
  const double left = gauss10(f, a, mid);
  const double right = gauss10(f, mid, b);
  const double split = left + right;
  if (std::abs(split - whole) <= tol * std::max(1.0, std::abs(split)) || depth >= 40) {
    return split;
  }
  return adapt(f, a, mid, left, 0.5 * tol, depth + 1) +
         adapt(f, mid, b, right, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("integrate: tol must be > 0");
  if (a == b) return 0.0;
  if (b < a) return -integrate(f, b, a, tol);
  return adapt(f, a, b, gauss10(f, a, b), tol, 0);
}

}  // namespace mmbin
