#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "semigroup_lab/coefficients.hpp"
#include "semigroup_lab/grid.hpp"
#include "semigroup_lab/profiles.hpp"
#include "semigroup_lab/semigroup.hpp"

namespace semigroup_lab {

// One empirical check of an estimate: per-time data, fitted constants and a
// verdict. The "constant exists" claims are rendered falsifiable as
// refinement stability: the fitted constant may move by at most 2x under one
// grid refinement (n -> 2n-1) with halved time step.
struct VerificationRecord {
  std::string claim_id;
  std::string operator_fp;
  std::string grid_fp;
  std::string scheme_fp;

  struct Row {
    double t = 0.0, lhs = 0.0, rhs = 0.0, ratio = 0.0;
  };
  std::vector<Row> rows;

  double fitted_constant = 0.0;
  double fitted_rate = 0.0;
  double rate_half_width = 0.0;
  double tolerance = 0.0;
  std::string status = "fail";  // pass | fail | inconclusive
  std::string notes;

  bool passed() const { return status == "pass"; }
  nlohmann::json to_json() const;
  void write_rows_csv(const std::string& path) const;
};

struct VerifyConfig {
  double half_width = 6.0;
  int n_per_axis = 321;
  int margin_cells = 0;  // 0 -> 10% of n_per_axis
  EvolveConfig evolve;

  Grid grid(int d) const;
  int margin(int n) const { return margin_cells > 0 ? margin_cells : n / 10; }
  Grid refined_grid(int d) const;
  EvolveConfig refined_evolve() const;
};

// Nodal pointwise estimate |D^l T(t)f|^2 <= c e^{Ht} max{t^{-(l-k)},1}
// S_nu(t) sum_{j<=k} |D^j f|^2 on the inner box; the fitted c must be
// refinement-stable. `certified_level` caps the admissible (k,l).
VerificationRecord pointwise_check(const CoefficientField& coeffs, double nu,
                                   const ProfileFn& f, int k, int l,
                                   const std::vector<double>& t_list,
                                   const VerifyConfig& cfg, int certified_level);

struct RateFit {
  double rate = 0.0;
  double intercept = 0.0;
  double half_width = 0.0;
  int points_used = 0;
};

// Least-squares slope of log ||D^l T(t)f||_inf(inner) against log t over the
// samples where the norm exceeds 10x the supplied noise floor.
RateFit decay_rate_fit(const CoefficientField& coeffs, const ProfileFn& f, int comps,
                       int k, int l, const std::vector<double>& t_grid,
                       const VerifyConfig& cfg, double noise_floor);

// Pointwise domination |T(t)f|^2 <= e^{Ht} S_nu(t) |f|^2 + tol for seeded
// random smooth data.
VerificationRecord domination_check(const CoefficientField& coeffs, double nu,
                                    const std::vector<std::uint64_t>& seeds,
                                    const std::vector<double>& t_list,
                                    const VerifyConfig& cfg, double tol_abs,
                                    double tol_rel);

// Sup-norm growth bound ||T(t)f||_inf <= e^{H_nu t} ||f||_inf + tol.
VerificationRecord supnorm_check(const CoefficientField& coeffs, double nu,
                                 const ProfileFn& f, const std::vector<double>& t_list,
                                 const VerifyConfig& cfg, double tol);

// Elliptic Schauder surrogate: resolvent regularity ratio over a family of
// seeded random data plus the equation residual.
VerificationRecord schauder_elliptic_check(const CoefficientField& coeffs, double nu,
                                           std::uint64_t seed, int family_size,
                                           double lambda, double alpha, double window,
                                           const QuadratureConfig& qcfg,
                                           const VerifyConfig& cfg);

// Parabolic Schauder surrogate on the mild solution of the inhomogeneous
// problem.
VerificationRecord schauder_parabolic_check(const CoefficientField& coeffs,
                                            const ProfileFn& f,
                                            const std::function<double(double, const Point&, int)>& g,
                                            double alpha, double window, double t_final,
                                            const VerifyConfig& cfg);

// L^p flow: ||T(t)f||_p <= e^{(H_tilde_p + K/p) t} ||f||_p + tol, the
// W^{l,p} smoothing analog, and first-order strong continuity.
VerificationRecord lp_checks(const CoefficientField& coeffs, double nu, const ProfileFn& f,
                             double p, const std::vector<double>& t_list, int k, int l,
                             const VerifyConfig& cfg);

// Semigroup law deviation ||T(t+s)f - T(t)T(s)f||_inf(inner) against a
// caller-supplied single-run error estimate.
VerificationRecord semigroup_property_check(const CoefficientField& coeffs,
                                            const ProfileFn& f, int comps, double t,
                                            double s, const VerifyConfig& cfg,
                                            double single_run_error);

}  // namespace semigroup_lab
