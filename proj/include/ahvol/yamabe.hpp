#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ahvol/geometry.hpp"

namespace ahvol::yamabe {

/// Gauss rule for ∫_{-1}^{1} f(x) (1-x²)^{(n-2)/2} dx, x = cos θ, i.e. the
/// zonal part of the integral over S^n divided by |S^{n-1}|.
struct ZonalQuadrature {
  int n = 0;
  std::vector<double> x;
  std::vector<double> w;
};

/// Golub-Welsch on the Gegenbauer (λ = (n-1)/2) Jacobi matrix.
ZonalQuadrature gauss_gegenbauer(int n, int count);

/// L²(S^n)-orthonormal zonal harmonics Y_k(x), k = 0..kmax, at the points x.
/// Result is indexed [k][i].
std::vector<std::vector<double>> zonal_basis(int n, int kmax, const std::vector<double>& x);

/// max |G - I| for the Gram matrix of Y_0..Y_kmax under q.
double gram_defect(int n, int kmax, const ZonalQuadrature& q);

struct ZonalTrial {
  int n = 0;
  std::vector<double> coeffs;  // c_0..c_kmax
  ZonalQuadrature quadrature;

  int kmax() const { return static_cast<int>(coeffs.size()) - 1; }
};

/// Attaches a quadrature with max(node_count, 2 kmax + 16) nodes.
ZonalTrial make_trial(int n, std::vector<double> coeffs, int node_count = 0);

/// f at the quadrature nodes.
std::vector<double> trial_values(const ZonalTrial& trial);

bool admissible(const ZonalTrial& trial);

/// Trials c_0 = sqrt|S^n|, |c_k| <= scale / ((k+1) max|Y_k|) drawn uniformly;
/// admissible whenever scale * Σ 1/(k+1) < 1.
std::vector<ZonalTrial> random_admissible_trials(int n, int kmax, int count, std::uint64_t seed,
                                                 double scale = 0.3);

/// Σ c_k² P_k / (∫ f^{2n/(n-2γ)})^{(n-2γ)/n}; throws InadmissibleTrialError
/// when f is not positive at every node.
double rayleigh_quotient(int n, double gamma, const ZonalTrial& trial);

struct MinimizeOptions {
  int kmax = 16;
  int restarts = 8;
  std::uint64_t seed = 20240901;
  int max_iters = 400;
  double grad_tol = 1e-10;
  double init_scale = 0.3;  // spread of random log-coefficients
};

struct RestartOutcome {
  double value;
  int iters;
  bool converged;
};

struct MinimizeResult {
  double min;
  ZonalTrial argmin;
  int iters;  // of the best restart
  bool converged;
  int best_restart;
  std::vector<RestartOutcome> restarts;
};

/// Gradient descent with Armijo backtracking over f = exp(g), g in the span of
/// Y_0..Y_kmax, f projected to degree 2 kmax. Restart 0 is the constant.
MinimizeResult minimize_rayleigh(int n, double gamma, const MinimizeOptions& opts = {});

/// Same descent from explicit log-coefficient vectors (each of length kmax+1).
/// Ties are broken by position in the list.
MinimizeResult minimize_rayleigh(int n, double gamma, const MinimizeOptions& opts,
                                 const std::vector<std::vector<double>>& starts);

/// Random log-coefficient starts as used by the seeded overload.
std::vector<std::vector<double>> seeded_starts(int n, const MinimizeOptions& opts);

enum class Verdict { pass, fail, not_applicable };

std::string to_string(Verdict v);

struct ChainReport {
  int n;
  double gamma;
  std::string metric;
  double y_manifold;   // Y_{2γ} of the conformal infinity
  double y_sphere;
  double lower_bound;  // (y_manifold / y_sphere)^{n/2γ}
  geometry::VolumeCurve eta;
  bool bg_monotone;
  double ricci_defect;
  Verdict verdict;
};

/// Volume-ratio chain lower_bound <= V(Γ_t)/V(Γ_t^H) <= V(B_t)/V(B_t^H) <= 1
/// on the grid within 1e-8. Only the hyperbolic metric receives a verdict.
ChainReport theorem_chain_report(int n, double gamma, const geometry::WarpedMetric& metric,
                                 const std::vector<double>& grid);
ChainReport theorem_chain_report(int n, double gamma, const geometry::WarpedMetric& metric);

}  // namespace ahvol::yamabe
