#include "semigroup_lab/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace semigroup_lab {

namespace {

// Derivative of (1+|x|^2)^e with respect to the multi-index beta, |beta| <= 3.
// Closed forms obtained by differentiating phi = 1+|x|^2 (D phi = 2x,
// D^2 phi = 2I, higher derivatives vanish).
double radial_power_deriv(double e, const Point& x, int d, const MultiIndex& beta) {
  const double phi = 1.0 + x[0] * x[0] + (d > 1 ? x[1] * x[1] : 0.0);
  const int ord = order_of(beta);
  // Expand the multi-index into a list of derivative axes.
  std::array<int, 3> ax{};
  int q = 0;
  for (int axis = 0; axis < 2; ++axis)
    for (int c = 0; c < beta[axis]; ++c) ax[q++] = axis;
  auto xd = [&](int axis) { return x[axis]; };
  auto kron = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  switch (ord) {
    case 0:
      return std::pow(phi, e);
    case 1:
      return 2.0 * e * xd(ax[0]) * std::pow(phi, e - 1.0);
    case 2:
      return 4.0 * e * (e - 1.0) * xd(ax[0]) * xd(ax[1]) * std::pow(phi, e - 2.0) +
             2.0 * e * kron(ax[0], ax[1]) * std::pow(phi, e - 1.0);
    case 3:
      return 8.0 * e * (e - 1.0) * (e - 2.0) * xd(ax[0]) * xd(ax[1]) * xd(ax[2]) *
                 std::pow(phi, e - 3.0) +
             4.0 * e * (e - 1.0) * std::pow(phi, e - 2.0) *
                 (kron(ax[0], ax[1]) * xd(ax[2]) + kron(ax[0], ax[2]) * xd(ax[1]) +
                  kron(ax[1], ax[2]) * xd(ax[0]));
    default:
      throw std::invalid_argument("derivative order > 3 not supported");
  }
}

Eigen::MatrixXd symmetric_part(const Eigen::MatrixXd& M) {
  return 0.5 * (M + M.transpose());
}

double max_eig_sym(const Eigen::MatrixXd& M) {
  if (M.rows() == 1) return M(0, 0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetric_part(M));
  return es.eigenvalues().maxCoeff();
}

double min_eig_sym(const Eigen::MatrixXd& M) {
  if (M.rows() == 1) return M(0, 0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetric_part(M));
  return es.eigenvalues().minCoeff();
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.size();
  if (rows == 0) throw std::invalid_argument("empty matrix in coefficient JSON");
  const auto cols = j.at(0).size();
  Eigen::MatrixXd M(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (j.at(i).size() != cols) throw std::invalid_argument("ragged matrix in coefficient JSON");
    for (std::size_t l = 0; l < cols; ++l) M(i, l) = j.at(i).at(l).get<double>();
  }
  return M;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& M) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index l = 0; l < M.cols(); ++l) row.push_back(M(i, l));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::vector<MultiIndex> multi_indices(int d, int ord) {
  std::vector<MultiIndex> out;
  if (d == 1) {
    out.push_back({ord, 0});
    return out;
  }
  for (int c0 = ord; c0 >= 0; --c0) out.push_back({c0, ord - c0});
  return out;
}

PolynomialFamilyParams family_params_from_json(const nlohmann::json& j) {
  PolynomialFamilyParams params;
  params.d = j.at("d").get<int>();
  params.m = j.at("m").get<int>();
  params.k = j.at("k").get<double>();
  params.p = j.at("p").get<double>();
  params.r = j.at("r").get<double>();
  params.gamma = j.at("gamma").get<double>();
  params.Q0 = matrix_from_json(j.at("Q0"));
  params.C0 = matrix_from_json(j.at("C0"));
  for (const auto& b : j.at("B0")) params.B0.push_back(matrix_from_json(b));
  return params;
}

nlohmann::json family_params_to_json(const PolynomialFamilyParams& params) {
  nlohmann::json j;
  j["d"] = params.d;
  j["m"] = params.m;
  j["k"] = params.k;
  j["p"] = params.p;
  j["r"] = params.r;
  j["gamma"] = params.gamma;
  j["Q0"] = matrix_to_json(params.Q0);
  nlohmann::json b0 = nlohmann::json::array();
  for (const auto& b : params.B0) b0.push_back(matrix_to_json(b));
  j["B0"] = b0;
  j["C0"] = matrix_to_json(params.C0);
  return j;
}

CoefficientField CoefficientField::raw(int d, int m, double k, double p, double r,
                                       double gamma, Eigen::MatrixXd Q0,
                                       std::vector<Eigen::MatrixXd> B0, Eigen::MatrixXd C0,
                                       bool drift_on) {
  if (d != 1 && d != 2) throw std::invalid_argument("dimension must be 1 or 2");
  if (m < 1) throw std::invalid_argument("system size must be >= 1");
  CoefficientField f;
  f.d_ = d;
  f.m_ = m;
  f.k_ = k;
  f.p_ = p;
  f.r_ = r;
  f.gamma_ = gamma;
  f.drift_on_ = drift_on;
  f.Q0_ = std::move(Q0);
  f.C0_ = std::move(C0);
  f.B0_ = std::move(B0);
  if (f.Q0_.rows() != d || f.Q0_.cols() != d)
    throw std::invalid_argument("Q0 must be d x d");
  if (f.C0_.rows() != m || f.C0_.cols() != m)
    throw std::invalid_argument("C0 must be m x m");
  if (f.B0_.empty()) f.B0_.assign(d, Eigen::MatrixXd::Zero(m, m));
  if (static_cast<int>(f.B0_.size()) != d)
    throw std::invalid_argument("B0 must contain d matrices");
  for (const auto& b : f.B0_)
    if (b.rows() != m || b.cols() != m) throw std::invalid_argument("B0_i must be m x m");
  f.lambda_min_q0_ = min_eig_sym(f.Q0_);
  f.lambda_max_q0_ = max_eig_sym(f.Q0_);
  f.lambda_min_c0_sym_ = min_eig_sym(f.C0_);
  f.beta0_frob_ = 0.0;
  for (const auto& b : f.B0_) f.beta0_frob_ = std::max(f.beta0_frob_, b.norm());
  return f;
}

CoefficientField CoefficientField::heat(int d, int m) {
  return raw(d, m, 0, 0, 0, 0, Eigen::MatrixXd::Identity(d, d), {},
             Eigen::MatrixXd::Zero(m, m), false);
}

CoefficientField CoefficientField::ornstein_uhlenbeck(int d, int m) {
  return raw(d, m, 0, 0, 0, 0, Eigen::MatrixXd::Identity(d, d), {},
             Eigen::MatrixXd::Zero(m, m), true);
}

CoefficientField polynomial_family(const PolynomialFamilyParams& params) {
  if (params.d != 1 && params.d != 2)
    throw std::invalid_argument("family dimension must be 1 or 2");
  if (params.m < 2) throw std::invalid_argument("family system size must be >= 2");
  if (params.k < 0 || params.p < 0 || params.r < 0 || params.gamma < 0)
    throw std::invalid_argument("family exponents must be nonnegative");
  const double qasym = (params.Q0 - params.Q0.transpose()).cwiseAbs().maxCoeff();
  if (qasym > 1e-12 * (1.0 + params.Q0.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("Q0 must be symmetric");
  if (min_eig_sym(params.Q0) <= 0.0)
    throw std::invalid_argument("Q0 must be positive definite");
  if (min_eig_sym(params.C0) <= 0.0)
    throw std::invalid_argument("C0 must be positive definite");
  if (static_cast<int>(params.B0.size()) != params.d)
    throw std::invalid_argument("B0 must contain d matrices");
  for (const auto& b : params.B0) {
    if (b.rows() != params.m || b.cols() != params.m)
      throw std::invalid_argument("B0_i must be m x m");
    for (Eigen::Index i = 0; i < b.rows(); ++i)
      if (b(i, i) != 0.0)
        throw std::invalid_argument("B0_i must have a zero diagonal");
  }
  return CoefficientField::raw(params.d, params.m, params.k, params.p, params.r,
                               params.gamma, params.Q0, params.B0, params.C0, true);
}

Eigen::MatrixXd CoefficientField::diffusion(const Point& x) const {
  return radial_power_deriv(k_, x, d_, {0, 0}) * Q0_;
}

Eigen::VectorXd CoefficientField::drift(const Point& x) const {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(d_);
  if (!drift_on_) return b;
  const double w = radial_power_deriv(p_, x, d_, {0, 0});
  for (int i = 0; i < d_; ++i) b(i) = -x[i] * w;
  return b;
}

Eigen::MatrixXd CoefficientField::coupling(int axis, const Point& x) const {
  return radial_power_deriv(r_, x, d_, {0, 0}) * B0_[axis];
}

Eigen::MatrixXd CoefficientField::reaction(const Point& x) const {
  return -radial_power_deriv(gamma_, x, d_, {0, 0}) * C0_;
}

Eigen::MatrixXd CoefficientField::diffusion_deriv(const Point& x, const MultiIndex& beta) const {
  return radial_power_deriv(k_, x, d_, beta) * Q0_;
}

Eigen::VectorXd CoefficientField::drift_deriv(const Point& x, const MultiIndex& beta) const {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(d_);
  if (!drift_on_) return b;
  // d^beta (x_i w) = x_i d^beta w + beta_i d^(beta - e_i) w.
  const double w = radial_power_deriv(p_, x, d_, beta);
  for (int i = 0; i < d_; ++i) {
    double v = x[i] * w;
    if (beta[i] > 0) {
      MultiIndex reduced = beta;
      reduced[i] -= 1;
      v += beta[i] * radial_power_deriv(p_, x, d_, reduced);
    }
    b(i) = -v;
  }
  return b;
}

Eigen::MatrixXd CoefficientField::coupling_deriv(int axis, const Point& x,
                                                 const MultiIndex& beta) const {
  return radial_power_deriv(r_, x, d_, beta) * B0_[axis];
}

Eigen::MatrixXd CoefficientField::reaction_deriv(const Point& x, const MultiIndex& beta) const {
  return -radial_power_deriv(gamma_, x, d_, beta) * C0_;
}

Eigen::MatrixXd CoefficientField::drift_jacobian(const Point& x) const {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(d_, d_);
  if (!drift_on_) return J;
  for (int axis = 0; axis < d_; ++axis) {
    MultiIndex beta{0, 0};
    beta[axis] = 1;
    J.col(axis) = drift_deriv(x, beta);
  }
  return J;
}

nlohmann::json CoefficientField::to_json() const {
  nlohmann::json j;
  j["d"] = d_;
  j["m"] = m_;
  j["k"] = k_;
  j["p"] = p_;
  j["r"] = r_;
  j["gamma"] = gamma_;
  j["drift"] = drift_on_;
  j["Q0"] = matrix_to_json(Q0_);
  nlohmann::json b0 = nlohmann::json::array();
  for (const auto& b : B0_) b0.push_back(matrix_to_json(b));
  j["B0"] = b0;
  j["C0"] = matrix_to_json(C0_);
  return j;
}

std::string CoefficientField::fingerprint() const {
  // FNV-1a over the canonical JSON dump.
  const std::string s = to_json().dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

SpectralBounds spectral_bounds(const CoefficientField& field, const Point& x, int order) {
  if (order < 0 || order > 3)
    throw std::invalid_argument("spectral_bounds: order must be in 0..3");
  const int d = field.dim();
  SpectralBounds s;
  s.order = order;
  {
    const Eigen::MatrixXd Q = field.diffusion(x);
    if (d == 1) {
      s.lambda_q = s.big_lambda_q = Q(0, 0);
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetric_part(Q));
      s.lambda_q = es.eigenvalues().minCoeff();
      s.big_lambda_q = es.eigenvalues().maxCoeff();
    }
  }
  s.big_lambda_c = max_eig_sym(field.reaction(x));
  for (int axis = 0; axis < d; ++axis)
    s.beta0_hat = std::max(s.beta0_hat, field.coupling(axis, x).norm());
  if (order >= 1) s.big_lambda_d1b = max_eig_sym(field.drift_jacobian(x));
  for (int ord = 1; ord <= order; ++ord) {
    for (const MultiIndex& beta : multi_indices(d, ord)) {
      s.xi[ord] = std::max(s.xi[ord], field.diffusion_deriv(x, beta).norm());
      s.gamma[ord] = std::max(s.gamma[ord], field.reaction_deriv(x, beta).norm());
      const Eigen::VectorXd db = field.drift_deriv(x, beta);
      if (ord >= 2) s.beta[ord] = std::max(s.beta[ord], db.cwiseAbs().maxCoeff());
      for (int axis = 0; axis < d; ++axis)
        s.beta_hat[ord] = std::max(s.beta_hat[ord], field.coupling_deriv(axis, x, beta).norm());
    }
  }
  return s;
}

TailBehavior radial_tail(const std::vector<RadialTerm>& terms) {
  // Merge coefficients of (numerically) equal exponents, then the largest
  // exponent with a nonzero coefficient decides.
  std::vector<RadialTerm> merged;
  for (const auto& t : terms) {
    if (t.coef == 0.0) continue;
    bool found = false;
    for (auto& mt : merged) {
      if (std::abs(mt.exponent - t.exponent) < 1e-12) {
        mt.coef += t.coef;
        found = true;
        break;
      }
    }
    if (!found) merged.push_back(t);
  }
  std::sort(merged.begin(), merged.end(),
            [](const RadialTerm& a, const RadialTerm& b) { return a.exponent > b.exponent; });
  for (const auto& t : merged) {
    if (std::abs(t.coef) < 1e-300) continue;
    if (t.exponent > 1e-12) return t.coef > 0 ? TailBehavior::diverging : TailBehavior::decaying;
    return TailBehavior::finite_limit;  // exponent <= 0 terms stay bounded
  }
  return TailBehavior::finite_limit;
}

RadialSupremum radial_supremum(const std::function<double(double)>& profile,
                               const std::vector<RadialTerm>& asymptotic,
                               const RadialSearchConfig& cfg) {
  RadialSupremum out;
  out.tail = radial_tail(asymptotic);
  if (out.tail == TailBehavior::diverging) {
    out.value = std::numeric_limits<double>::infinity();
    out.argmax = std::numeric_limits<double>::infinity();
    return out;
  }
  const int n = std::max(cfg.prescan, 8);
  double best = -std::numeric_limits<double>::infinity();
  int best_i = 0;
  for (int i = 0; i < n; ++i) {
    const double rho = cfg.radius * static_cast<double>(i) / (n - 1);
    const double v = profile(rho);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  // Golden-section refinement around the pre-scan winner.
  double lo = cfg.radius * static_cast<double>(std::max(0, best_i - 1)) / (n - 1);
  double hi = cfg.radius * static_cast<double>(std::min(n - 1, best_i + 1)) / (n - 1);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - invphi * (hi - lo);
  double d = lo + invphi * (hi - lo);
  double fc = profile(c), fd = profile(d);
  while (hi - lo > cfg.bracket_tol) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = profile(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = profile(d);
    }
  }
  const double rho_star = 0.5 * (lo + hi);
  const double refined = profile(rho_star);
  if (refined > best) {
    best = refined;
    out.argmax = rho_star;
  } else {
    out.argmax = cfg.radius * static_cast<double>(best_i) / (n - 1);
  }
  // Reconcile with the exact limit at infinity.
  if (out.tail == TailBehavior::finite_limit) {
    double limit = 0.0;
    for (const auto& t : asymptotic)
      if (std::abs(t.exponent) < 1e-12) limit += t.coef;
    if (limit > best) {
      best = limit;
      out.argmax = std::numeric_limits<double>::infinity();
    }
  }
  out.value = best;
  return out;
}

GrowthConstants growth_constants(const CoefficientField& field, double nu, double p,
                                 const RadialSearchConfig& cfg) {
  if (nu < 0.0 || nu >= 2.0) throw std::invalid_argument("nu must lie in [0,2)");
  if (p < 1.0) throw std::invalid_argument("Lebesgue exponent must be >= 1");
  if (field.lambda_min_q0() <= 0.0)
    throw std::invalid_argument("growth constants need a positive diffusion floor");
  const int d = field.dim();
  const double lam_c0 = field.lambda_min_c0_sym();
  const double b0 = field.beta0_frobenius();
  const double lam_q0 = field.lambda_min_q0();
  const double g = field.exp_gamma();
  const double coupling_exp = 2.0 * field.exp_r() - field.exp_k();

  auto lambda_c_at = [&](double rho) {
    const Point x{rho, 0.0};
    return max_eig_sym(field.reaction(x));
  };
  auto h_at = [&](double rho) {
    const Point x{rho, 0.0};
    const double lc = max_eig_sym(field.reaction(x));
    double bh = 0.0;
    for (int axis = 0; axis < d; ++axis) bh = std::max(bh, field.coupling(axis, x).norm());
    const double lq = d == 1 ? field.diffusion(x)(0, 0) : min_eig_sym(field.diffusion(x));
    return (2.0 - nu) * lc + d * bh * bh / (2.0 * lq);
  };

  GrowthConstants out;
  out.nu = nu;
  out.p = p;

  const RadialSupremum theta =
      radial_supremum(lambda_c_at, {{-lam_c0, g}}, cfg);
  out.theta_c = theta.value;
  out.theta_c_finite = theta.finite();
  out.theta_c_argmax = theta.argmax;

  const RadialSupremum h = radial_supremum(
      h_at,
      {{-(2.0 - nu) * lam_c0, g}, {d * b0 * b0 / (2.0 * lam_q0), coupling_exp}}, cfg);
  out.h = h.value;
  out.h_finite = h.finite();
  out.h_argmax = h.argmax;

  out.h_nu = out.h + out.theta_c * nu;
  out.h_tilde_p = 0.5 * out.h + (0.5 - 1.0 / p) * out.theta_c;
  return out;
}

}  // namespace semigroup_lab
