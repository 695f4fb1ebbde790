#include "ahvol/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "ahvol/error.hpp"

namespace ahvol::specfun {
namespace {

// Lanczos coefficients for g = 671/128 (Numerical Recipes, 3rd ed., gammln).
constexpr double kLanczosG = 5.24218750000000000;
constexpr double kLanczosC0 = 0.999999999999997092;
constexpr std::array<double, 14> kLanczos = {
    57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
    -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
    -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
    .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
    -.261908384015814087e-4, .368991826595316234e-5};
constexpr double kSqrtTwoPi = 2.5066282746310005;

double log_gamma_positive(double x) {
  double y = x;
  double tmp = x + kLanczosG;
  tmp = (x + 0.5) * std::log(tmp) - tmp;
  double ser = kLanczosC0;
  for (double c : kLanczos) ser += c / ++y;
  return tmp + std::log(kSqrtTwoPi * ser / x);
}

// sin(πx) with exact argument reduction.
double sin_pi(double x) {
  double r = x - 2.0 * std::round(0.5 * x);  // r in [-1, 1]
  if (r > 0.5) r = 1.0 - r;
  if (r < -0.5) r = -1.0 - r;
  return std::sin(std::numbers::pi * r);
}

void require_order(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw DomainError("gamma must lie in (0,1), got " + std::to_string(gamma));
}

}  // namespace

LogGamma log_gamma(double x) {
  if (x <= 0.0 && x == std::floor(x))
    throw PoleError("log_gamma: pole at nonpositive integer " + std::to_string(x));
  if (x >= 0.5) return {log_gamma_positive(x), 1};
  // Γ(x) Γ(1-x) = π / sin(πx), and Γ(1-x) > 0 here.
  const double s = sin_pi(x);
  return {std::log(std::numbers::pi / std::abs(s)) - log_gamma_positive(1.0 - x),
          s > 0.0 ? 1 : -1};
}

double gamma_ratio(double a, double b) {
  const LogGamma la = log_gamma(a);
  const LogGamma lb = log_gamma(b);
  return la.sign * lb.sign * std::exp(la.log_abs - lb.log_abs);
}

double d_gamma(int /*n*/, double gamma) {
  require_order(gamma);
  return std::exp2(2.0 * gamma) * gamma_ratio(gamma, -gamma);
}

double sphere_multiplier(int n, double gamma, int k) {
  const double base = k + 0.5 * n;
  return gamma_ratio(base + gamma, base - gamma);
}

double sphere_volume(int n) {
  const double h = 0.5 * (n + 1);
  return 2.0 * std::exp(h * std::log(std::numbers::pi) - log_gamma(h).log_abs);
}

SphereConstants sphere_constants(int n, double gamma) {
  if (n < 2) throw DomainError("sphere_constants: n must be >= 2");
  require_order(gamma);
  SphereConstants c{};
  c.n = n;
  c.gamma = gamma;
  c.d_gamma = d_gamma(n, gamma);
  c.sphere_volume = sphere_volume(n);
  const double mult = sphere_multiplier(n, gamma, 0);
  c.q_curv = 2.0 / (n - 2.0 * gamma) * mult;
  c.yamabe = mult * std::pow(c.sphere_volume, 2.0 * gamma / n);
  return c;
}

}  // namespace ahvol::specfun
