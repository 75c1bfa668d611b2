#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "semigroup_lab/coefficients.hpp"
#include "semigroup_lab/grid.hpp"

namespace semigroup_lab {

// Thrown when a run cannot continue: CFL violation, non-finite state,
// stalled linear solve. Maps to the CLI's "numerical abort" exit code.
class NumericalAbort : public std::runtime_error {
 public:
  NumericalAbort(const std::string& what, long step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  long step() const { return step_; }

 private:
  long step_ = 0;
};

enum class Scheme { explicit_euler, imex };

struct EvolveConfig {
  Scheme scheme = Scheme::imex;
  double dt = 1e-4;
  double t_final = 0.1;
  std::vector<double> snapshot_times;  // t = 0 is always included
  double cfl_safety = 0.9;
  double solver_tol = 1e-10;
  double blowup_factor = 1e6;
  bool hypotheses_checked = false;  // caller attests a hypothesis report exists
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Field> snapshots;
  std::vector<double> step_max_abs;  // diagnostics: max |u| after every step
  std::string warning;
  double dt_used = 0.0;
  long steps = 0;

  const Field& at_time(double t, double tol = 1e-9) const;
};

// Cauchy-Dirichlet evolution of D_t u = A u on the field's box with zero
// boundary values. IMEX treats the axis-aligned diffusion implicitly
// (diagonal-preconditioned Krylov solve per component, tolerance
// cfg.solver_tol) and drift/coupling/reaction explicitly; for d = 2 the
// mixed q12 term joins the explicit part.
Trajectory evolve(const CoefficientField& coeffs, const Field& f, const EvolveConfig& cfg);

// Scalar comparison semigroup S_nu for Tr(Q D^2) + <b, grad> + nu*Lambda_C.
Trajectory evolve_scalar_comparison(const CoefficientField& coeffs, double nu,
                                    const Field& f, const EvolveConfig& cfg);

struct TruncationRow {
  double half_width = 0.0;
  double core_sup = 0.0;
  double deviation_from_prev = 0.0;   // sup difference on the common core
  double min_increment_from_prev = 0.0;  // min of (this - prev) on the core
};

// Evolves the same data on boxes of growing half-width (fixed spacing) and
// compares snapshots at time t on the common inner core.
std::vector<TruncationRow> truncation_study(
    const CoefficientField& coeffs, const std::function<double(const Point&, int)>& f,
    int comps, double t, const std::vector<double>& half_widths, double spacing,
    const EvolveConfig& cfg, int core_margin_cells);

struct QuadratureConfig {
  double s_max = 3.0;
  int panels = 16;
  int points_per_panel = 4;
  double tail_tol = 1e-4;
};

struct ResolventResult {
  Field u;
  double lambda = 0.0;
  double h_nu = 0.0;
  double tail_bound = 0.0;  // e^{-(lambda-H_nu) s_max} / (lambda-H_nu), relative to ||f||_inf
  bool tail_warning = false;
};

// Laplace quadrature u_lambda = int_0^infty e^{-lambda s} T(s) f ds over
// composite Gauss-Legendre panels graded toward s = 0 (panel endpoints
// s_max (j/J)^2). Requires lambda > H_nu.
ResolventResult resolvent(const CoefficientField& coeffs, const Field& f, double lambda,
                          const QuadratureConfig& qcfg, const EvolveConfig& cfg,
                          double nu = 0.0);

struct MildResult {
  Trajectory trajectory;            // direct inhomogeneous stepping
  double duhamel_rel_deviation = 0.0;  // vs. quadrature of T(s) g(t-s) at t_final
};

// Mild solution v(t) = T(t) f + int_0^t T(s) g(t-s) ds, computed by direct
// time stepping and cross-checked against Duhamel quadrature at t_final.
MildResult mild_solution(const CoefficientField& coeffs, const Field& f,
                         const std::function<double(double, const Point&, int)>& g,
                         double t_final, const EvolveConfig& cfg);

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace semigroup_lab
