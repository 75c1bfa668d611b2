#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace semigroup_lab {

// Spatial points and derivative multi-indices for d <= 2. The second slot is
// ignored in dimension 1.
using Point = std::array<double, 2>;
using MultiIndex = std::array<int, 2>;

inline int order_of(const MultiIndex& beta) { return beta[0] + beta[1]; }

// Enumerates all multi-indices of exact total order `ord` in dimension d.
std::vector<MultiIndex> multi_indices(int d, int ord);

struct PolynomialFamilyParams {
  int d = 1;
  int m = 2;
  double k = 0.0;
  double p = 1.0;
  double r = 0.0;
  double gamma = 1.0;
  Eigen::MatrixXd Q0;               // d x d, symmetric positive definite
  std::vector<Eigen::MatrixXd> B0;  // d matrices, m x m, zero diagonal
  Eigen::MatrixXd C0;               // m x m, positive definite (symmetric part)
};

PolynomialFamilyParams family_params_from_json(const nlohmann::json& j);
nlohmann::json family_params_to_json(const PolynomialFamilyParams& params);

// Coefficient data of the operator
//   (A w)(x) = sum_ij q_ij(x) D^2_ij w + sum_j B_j(x) D_j w + C(x) w,
// with B_j = b_j I + Bhat_j, in the closed radial form
//   Q(x) = (1+|x|^2)^k Q0,   b_i(x) = -x_i (1+|x|^2)^p  (optional),
//   Bhat_i(x) = (1+|x|^2)^r B0_i,   C(x) = -(1+|x|^2)^gamma C0.
// All evaluators (values and entry derivatives up to order 3) are exact and
// pure; the class is safe for concurrent use after construction.
class CoefficientField {
 public:
  CoefficientField() = default;

  // Unvalidated construction; used for comparison operators (heat,
  // Ornstein-Uhlenbeck, disabled-diffusion test modes).
  static CoefficientField raw(int d, int m, double k, double p, double r, double gamma,
                              Eigen::MatrixXd Q0, std::vector<Eigen::MatrixXd> B0,
                              Eigen::MatrixXd C0, bool drift_on);

  static CoefficientField heat(int d, int m = 1);                 // Q=I, b=0, C=0
  static CoefficientField ornstein_uhlenbeck(int d, int m = 1);   // Q=I, b=-x, C=0

  int dim() const { return d_; }
  int comps() const { return m_; }
  bool drift_enabled() const { return drift_on_; }
  double exp_k() const { return k_; }
  double exp_p() const { return p_; }
  double exp_r() const { return r_; }
  double exp_gamma() const { return gamma_; }
  const Eigen::MatrixXd& q0() const { return Q0_; }
  const std::vector<Eigen::MatrixXd>& b0() const { return B0_; }
  const Eigen::MatrixXd& c0() const { return C0_; }

  // Coefficient values.
  Eigen::MatrixXd diffusion(const Point& x) const;           // Q(x)
  Eigen::VectorXd drift(const Point& x) const;               // b(x)
  Eigen::MatrixXd coupling(int axis, const Point& x) const;  // Bhat_axis(x)
  Eigen::MatrixXd reaction(const Point& x) const;            // C(x)

  // Entry-wise partial derivatives, |beta| <= 3.
  Eigen::MatrixXd diffusion_deriv(const Point& x, const MultiIndex& beta) const;
  Eigen::VectorXd drift_deriv(const Point& x, const MultiIndex& beta) const;
  Eigen::MatrixXd coupling_deriv(int axis, const Point& x, const MultiIndex& beta) const;
  Eigen::MatrixXd reaction_deriv(const Point& x, const MultiIndex& beta) const;

  // Jacobian of the drift, D^1 b (rows: components, cols: derivative axis).
  Eigen::MatrixXd drift_jacobian(const Point& x) const;

  // Closed-form radial scalars used by the certified 1-D reductions.
  double lambda_min_q0() const { return lambda_min_q0_; }
  double lambda_max_q0() const { return lambda_max_q0_; }
  double lambda_min_c0_sym() const { return lambda_min_c0_sym_; }
  double beta0_frobenius() const { return beta0_frob_; }  // max_i |B0_i|_F

  nlohmann::json to_json() const;
  std::string fingerprint() const;

 private:
  int d_ = 1;
  int m_ = 1;
  double k_ = 0.0, p_ = 0.0, r_ = 0.0, gamma_ = 0.0;
  bool drift_on_ = false;
  Eigen::MatrixXd Q0_, C0_;
  std::vector<Eigen::MatrixXd> B0_;
  double lambda_min_q0_ = 0.0, lambda_max_q0_ = 0.0;
  double lambda_min_c0_sym_ = 0.0;
  double beta0_frob_ = 0.0;
};

// Validated construction of the polynomial family. Throws
// std::invalid_argument on non-symmetric Q0, non-positive-definite Q0/C0,
// a nonzero diagonal entry in some B0_i, or a negative exponent.
CoefficientField polynomial_family(const PolynomialFamilyParams& params);

// Pointwise spectral data: eigenvalue extremes of the symmetric parts and
// the derivative maxima xi_i, beta_l, betahat_i, gamma_i (Frobenius norm of
// the entry-derivative matrices, maximized over multi-indices of each exact
// order).
struct SpectralBounds {
  double lambda_q = 0.0;       // min eigenvalue of Q(x)
  double big_lambda_q = 0.0;   // max eigenvalue of Q(x)
  double big_lambda_c = 0.0;   // max eigenvalue of sym C(x)
  double big_lambda_d1b = 0.0; // max eigenvalue of sym D^1 b(x)
  double beta0_hat = 0.0;      // max_i |Bhat_i(x)|_F
  std::array<double, 4> xi{};        // xi[1..3]
  std::array<double, 4> beta{};      // beta[2..3]
  std::array<double, 4> beta_hat{};  // beta_hat[1..3]
  std::array<double, 4> gamma{};     // gamma[1..3]
  int order = 0;
};

SpectralBounds spectral_bounds(const CoefficientField& field, const Point& x, int order);

// --- radial suprema -------------------------------------------------------

struct RadialSearchConfig {
  double radius = 50.0;
  int prescan = 4096;
  double bracket_tol = 1e-10;
};

// Sign of the asymptotic limit of a sum of coef*(1+rho^2)^exponent terms.
struct RadialTerm {
  double coef = 0.0;
  double exponent = 0.0;
};

enum class TailBehavior { decaying, finite_limit, diverging };

TailBehavior radial_tail(const std::vector<RadialTerm>& terms);

struct RadialSupremum {
  double value = 0.0;
  double argmax = 0.0;
  TailBehavior tail = TailBehavior::finite_limit;
  bool finite() const { return tail != TailBehavior::diverging; }
};

// Supremum over [0, R] by dense pre-scan plus golden-section refinement,
// reconciled with the exact asymptotic limit of `asymptotic`.
RadialSupremum radial_supremum(const std::function<double(double)>& profile,
                               const std::vector<RadialTerm>& asymptotic,
                               const RadialSearchConfig& cfg);

// --- growth constants ------------------------------------------------------

struct GrowthConstants {
  double nu = 0.0;
  double p = 2.0;            // Lebesgue exponent used for h_tilde_p
  double theta_c = 0.0;      // sup Lambda_C
  double h = 0.0;            // sup of (2-nu) Lambda_C + d betahat0^2 / (2 lambda_Q)
  double h_nu = 0.0;         // h + theta_c * nu
  double h_tilde_p = 0.0;    // h/2 + (1/2 - 1/p) theta_c
  bool h_finite = true;
  bool theta_c_finite = true;
  double h_argmax = 0.0;
  double theta_c_argmax = 0.0;
};

// Computes the scalar constants by certified radial maximization. Throws
// std::invalid_argument when nu is outside [0,2) or the diffusion floor
// lambda_min(Q0) vanishes.
GrowthConstants growth_constants(const CoefficientField& field, double nu, double p,
                                 const RadialSearchConfig& cfg = {});

}  // namespace semigroup_lab
