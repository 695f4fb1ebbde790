#pragma once

namespace ahvol::specfun {

/// ln|Γ(x)| together with the sign of Γ(x).
struct LogGamma {
  double log_abs;
  int sign;
};

/// Lanczos-type rational approximation (g = 671/128, 14 terms) for x >= 1/2,
/// reflection below. Absolute error in ln|Γ| is below 1e-13 * max(1, |ln|Γ||)
/// on [-30, 170]. Throws PoleError at x = 0, -1, -2, ...
LogGamma log_gamma(double x);

/// Γ(a)/Γ(b) evaluated in log space with sign tracking.
double gamma_ratio(double a, double b);

/// Normalising constant of the fractional GJMS operator,
/// d_γ = 2^{2γ} Γ(γ)/Γ(-γ). Negative on (0,1). The boundary dimension n is
/// accepted for interface symmetry and does not enter the value.
double d_gamma(int n, double gamma);

/// Eigenvalue of P_{2γ} on degree-k spherical harmonics of S^n:
/// Γ(k + n/2 + γ)/Γ(k + n/2 - γ).
double sphere_multiplier(int n, double gamma, int k);

/// |S^n| = 2 π^{(n+1)/2} / Γ((n+1)/2).
double sphere_volume(int n);

struct SphereConstants {
  int n;
  double gamma;
  double d_gamma;
  double sphere_volume;  // |S^n|
  double q_curv;         // Q_{2γ} of the round metric
  double yamabe;         // Y_{2γ}(S^n, [g_S])
};

SphereConstants sphere_constants(int n, double gamma);

}  // namespace ahvol::specfun
