#include "semigroup_lab/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace semigroup_lab {

std::string to_string(HypLevel level) {
  switch (level) {
    case HypLevel::base: return "base";
    case HypLevel::deriv1: return "deriv1";
    case HypLevel::deriv2: return "deriv2";
    case HypLevel::deriv3: return "deriv3";
    case HypLevel::l1: return "L1";
  }
  return "?";
}

std::string to_string(HypStatus status) {
  switch (status) {
    case HypStatus::pass: return "pass";
    case HypStatus::fail: return "fail";
    case HypStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

nlohmann::json HypothesisReport::to_json() const {
  nlohmann::json j;
  j["level"] = to_string(level);
  j["status"] = to_string(status);
  j["constants"] = constants;
  if (witness.empty())
    j["witness"] = nullptr;
  else
    j["witness"] = witness;
  j["R"] = radius;
  j["shells"] = shells;
  return j;
}

namespace {

HypLevel level_tag(int level) {
  switch (level) {
    case 1: return HypLevel::deriv1;
    case 2: return HypLevel::deriv2;
    case 3: return HypLevel::deriv3;
    default: throw std::invalid_argument("hypothesis level must be 1, 2 or 3");
  }
}

// Endpoints of the feasible interval for mu1 in [0,2] under
// mu1*(2r-1) <= 2k. The interval is never empty (mu1 = 0 always works).
std::pair<double, double> mu1_interval(double k, double r) {
  const double B = 2.0 * r - 1.0;
  if (B > 0.0) return {0.0, std::min(2.0, 2.0 * k / B)};
  return {0.0, 2.0};
}

double level_rhs(double k, double r, double mu1, int level) {
  double rhs = std::max(2.0 * k - 1.0, (2.0 * r - 1.0) * (2.0 - mu1));
  if (level >= 2) rhs = std::max(rhs, 2.0 * r - 2.0);
  return 0.5 * rhs;
}

}  // namespace

HypothesisReport check_family_closed_form(const PolynomialFamilyParams& params, int level) {
  HypothesisReport rep;
  rep.level = level_tag(level);
  const double k = params.k, p = params.p, r = params.r, g = params.gamma;

  std::ostringstream w;
  if (!(k < p + 1.0)) {
    w << "base: k<p+1 violated (k=" << k << ", p=" << p << ")";
    rep.status = HypStatus::fail;
    rep.witness = w.str();
    return rep;
  }
  if (!(g > std::max(0.0, 2.0 * r - k))) {
    w << "base: gamma>max{0,2r-k} violated (gamma=" << g << ", 2r-k=" << 2.0 * r - k << ")";
    rep.status = HypStatus::fail;
    rep.witness = w.str();
    return rep;
  }

  const auto [lo, hi] = mu1_interval(k, r);
  const double lhs = std::max(p, g);
  // level_rhs is monotone in mu1, so the minimum over the interval sits at
  // an endpoint.
  const double at_lo = level_rhs(k, r, lo, level);
  const double at_hi = level_rhs(k, r, hi, level);
  const double mu1 = at_lo <= at_hi ? lo : hi;
  const double rhs = std::min(at_lo, at_hi);
  if (!(lhs > rhs)) {
    w << "level " << level << ": max{p,gamma}=" << lhs << " not > " << rhs
      << " for any mu1 in [" << lo << "," << hi << "]";
    rep.status = HypStatus::fail;
    rep.witness = w.str();
    return rep;
  }
  rep.status = HypStatus::pass;
  rep.constants["mu1"] = mu1;
  rep.constants["alpha1"] = 1.0;
  rep.constants["tau1"] = 1.0;
  if (level >= 2) {
    rep.constants["alpha2"] = 1.0;
    rep.constants["rho2"] = 1.0;
    rep.constants["mu2"] = 1.0;
    rep.constants["tau2"] = 1.0;
  }
  if (level >= 3) {
    rep.constants["alpha3"] = 1.0;
    rep.constants["rho3"] = 1.0;
    rep.constants["mu3"] = 1.0;
    rep.constants["tau3"] = 1.0;
  }
  return rep;
}

namespace {

enum class Tail { nonincreasing, diverging, inconclusive };

// Classifies the last quartile of a sampled radial profile. Pass requires a
// nonincreasing tail; a positive power-growth tail (log-log slope >= 0.05)
// counts as divergence; everything else is inconclusive.
Tail classify_tail(const std::vector<double>& rho, const std::vector<double>& val) {
  const std::size_t n = val.size();
  const std::size_t q0 = (3 * (n - 1)) / 4;
  double scale = 0.0;
  for (double v : val) scale = std::max(scale, std::abs(v));
  const double slack = 1e-9 * (1.0 + scale);

  bool noninc = true, nondec = true;
  for (std::size_t i = q0; i + 1 < n; ++i) {
    if (val[i + 1] > val[i] + slack) noninc = false;
    if (val[i + 1] < val[i] - slack) nondec = false;
  }
  if (noninc) return Tail::nonincreasing;
  if (nondec) {
    bool positive = true;
    for (std::size_t i = q0; i < n; ++i)
      if (val[i] <= 0.0) positive = false;
    if (positive) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      std::size_t cnt = 0;
      for (std::size_t i = q0; i < n; ++i) {
        if (rho[i] <= 0.0) continue;
        const double x = std::log(rho[i]), y = std::log(val[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
      }
      if (cnt >= 2) {
        const double denom = cnt * sxx - sx * sx;
        if (denom > 0) {
          const double slope = (cnt * sxy - sx * sy) / denom;
          if (slope >= 0.05) return Tail::diverging;
        }
      }
    }
    return Tail::inconclusive;
  }
  return Tail::inconclusive;
}

struct ShellData {
  std::vector<double> rho;                        // shell radii
  std::vector<std::vector<SpectralBounds>> rows;  // per shell, per direction
  std::vector<std::vector<Point>> pts;
};

ShellData sample_shells(const CoefficientField& field, int order, const ShellSampling& cfg) {
  if (cfg.radius <= 0.0) throw std::invalid_argument("sampling radius must be positive");
  if (cfg.shells < 8) throw std::invalid_argument("need at least 8 shells");
  ShellData data;
  std::mt19937_64 rng(cfg.seed);
  const double jitter = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  std::vector<Point> dirs;
  if (field.dim() == 1) {
    dirs = {{1.0, 0.0}, {-1.0, 0.0}};
  } else {
    const int J = std::max(4, cfg.directions);
    for (int j = 0; j < J; ++j) {
      const double th = 2.0 * M_PI * (j + jitter) / J;
      dirs.push_back({std::cos(th), std::sin(th)});
    }
  }
  for (int i = 0; i < cfg.shells; ++i) {
    const double rho = cfg.radius * static_cast<double>(i) / (cfg.shells - 1);
    data.rho.push_back(rho);
    std::vector<SpectralBounds> row;
    std::vector<Point> prow;
    for (const Point& e : dirs) {
      const Point x{rho * e[0], rho * e[1]};
      row.push_back(spectral_bounds(field, x, order));
      prow.push_back(x);
    }
    data.rows.push_back(std::move(row));
    data.pts.push_back(std::move(prow));
  }
  return data;
}

// Directional max of a pointwise function over each shell.
template <typename Fn>
std::vector<double> shell_profile(const ShellData& data, Fn&& f) {
  std::vector<double> out;
  out.reserve(data.rho.size());
  for (std::size_t i = 0; i < data.rho.size(); ++i) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < data.rows[i].size(); ++j)
      m = std::max(m, f(data.rows[i][j], data.pts[i][j]));
    out.push_back(m);
  }
  return out;
}

double sq(double v) { return v * v; }

struct BlockDef {
  std::string name;
  std::function<double(const SpectralBounds&)> base;
  std::function<double(const SpectralBounds&)> extra;  // multiplied by N
};

struct CertAttempt {
  bool ok = false;
  bool divergent = false;
  std::string witness;
  std::map<std::string, double> constants;
};

// Derives a bound constant A from sup of num^expnt / lambda_Q; requires a
// classified nonincreasing tail.
struct RatioBound {
  bool ok = false;
  bool divergent = false;
  double value = 0.0;
};

RatioBound ratio_bound(const ShellData& data,
                       const std::function<double(const SpectralBounds&)>& num) {
  auto prof = shell_profile(data, [&](const SpectralBounds& sb, const Point&) {
    return num(sb) / sb.lambda_q;
  });
  RatioBound rb;
  const Tail t = classify_tail(data.rho, prof);
  rb.divergent = t == Tail::diverging;
  rb.ok = t == Tail::nonincreasing;
  rb.value = std::max(1e-12, *std::max_element(prof.begin(), prof.end()));
  return rb;
}

}  // namespace

HypothesisReport check_numeric(const CoefficientField& field, double nu, int level,
                               const ShellSampling& cfg) {
  if (nu < 0.0 || nu >= 2.0) throw std::invalid_argument("nu must lie in [0,2)");
  HypothesisReport rep;
  rep.level = level_tag(level);
  rep.radius = cfg.radius;
  rep.shells = cfg.shells;
  const int d = field.dim();

  const ShellData data = sample_shells(field, level, cfg);

  // Standing assumptions. Ellipticity floor:
  double min_lambda_q = std::numeric_limits<double>::infinity();
  for (const auto& row : data.rows)
    for (const auto& sb : row) min_lambda_q = std::min(min_lambda_q, sb.lambda_q);
  if (!(min_lambda_q > 0.0)) {
    rep.status = HypStatus::fail;
    rep.witness = "base: lambda_Q is not bounded away from zero on samples";
    return rep;
  }

  // H = sup (2-nu) Lambda_C + d betahat0^2 / (2 lambda_Q).
  {
    auto prof = shell_profile(data, [&](const SpectralBounds& sb, const Point&) {
      return (2.0 - nu) * sb.big_lambda_c + d * sq(sb.beta0_hat) / (2.0 * sb.lambda_q);
    });
    const Tail t = classify_tail(data.rho, prof);
    if (t == Tail::diverging) {
      rep.status = HypStatus::fail;
      rep.witness = "base: H profile diverges along sampled shells";
      return rep;
    }
    if (t == Tail::inconclusive) {
      rep.status = HypStatus::inconclusive;
      rep.witness = "base: H profile tail could not be classified";
      return rep;
    }
    rep.constants["H"] = *std::max_element(prof.begin(), prof.end());
  }

  // Drift confinement: Tr Q - <Qx,x>/|x|^2 + <b,x> <= 0 outside a ball.
  {
    std::vector<double> rho_t, prof_t;
    for (std::size_t i = 1; i < data.rho.size(); ++i) {
      double m = -std::numeric_limits<double>::infinity();
      for (const Point& x : data.pts[i]) {
        const Eigen::MatrixXd Q = field.diffusion(x);
        const Eigen::VectorXd b = field.drift(x);
        const double r2 = x[0] * x[0] + x[1] * x[1];
        Eigen::VectorXd xv(d);
        xv(0) = x[0];
        if (d > 1) xv(1) = x[1];
        const double val = Q.trace() - xv.dot(Q * xv) / r2 + b.dot(xv);
        m = std::max(m, val);
      }
      rho_t.push_back(data.rho[i]);
      prof_t.push_back(m);
    }
    const std::size_t q0 = (3 * (prof_t.size() - 1)) / 4;
    bool tail_nonpositive = true;
    for (std::size_t i = q0; i < prof_t.size(); ++i)
      if (prof_t[i] > 1e-9) tail_nonpositive = false;
    if (!tail_nonpositive) {
      const Tail t = classify_tail(rho_t, prof_t);
      rep.status = t == Tail::diverging ? HypStatus::fail : HypStatus::inconclusive;
      rep.witness = "base: drift confinement profile positive in the sampled tail";
      return rep;
    }
  }

  // Lyapunov witness phi = 1+|x|^2: sup (A_nu phi)/phi < infinity.
  {
    auto prof = shell_profile(data, [&](const SpectralBounds& sb, const Point& x) {
      const Eigen::MatrixXd Q = field.diffusion(x);
      const Eigen::VectorXd b = field.drift(x);
      Eigen::VectorXd xv(d);
      xv(0) = x[0];
      if (d > 1) xv(1) = x[1];
      const double phi = 1.0 + xv.squaredNorm();
      return (2.0 * Q.trace() + 2.0 * b.dot(xv)) / phi + nu * sb.big_lambda_c;
    });
    const Tail t = classify_tail(data.rho, prof);
    if (t == Tail::diverging) {
      rep.status = HypStatus::fail;
      rep.witness = "base: Lyapunov profile for phi=1+|x|^2 diverges";
      return rep;
    }
    if (t == Tail::inconclusive) {
      rep.status = HypStatus::inconclusive;
      rep.witness = "base: Lyapunov profile tail could not be classified";
      return rep;
    }
    rep.constants["mu"] = *std::max_element(prof.begin(), prof.end());
  }

  // mu1 candidates: closed-form endpoints and midpoint first, then the grid.
  std::vector<double> mu1_candidates;
  {
    const auto [lo, hi] = mu1_interval(field.exp_k(), field.exp_r());
    mu1_candidates = {0.5 * (lo + hi), lo, hi};
    for (int i = 0; i <= 8; ++i) mu1_candidates.push_back(0.25 * i);
    std::vector<double> dedup;
    for (double v : mu1_candidates) {
      bool seen = false;
      for (double u : dedup)
        if (std::abs(u - v) < 1e-12) seen = true;
      if (!seen) dedup.push_back(v);
    }
    mu1_candidates = std::move(dedup);
  }

  const double M0 = 0.75 * d, M1 = 0.5 * d, M2 = 0.375 * d;
  const std::vector<double> n_grid{1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};

  std::string divergent_witness, inconclusive_witness;

  for (double mu1 : mu1_candidates) {
    // Condition (i) constants.
    const RatioBound a1 =
        ratio_bound(data, [](const SpectralBounds& sb) { return sb.xi[1]; });
    const RatioBound a2 = ratio_bound(
        data, [mu1](const SpectralBounds& sb) { return std::pow(sb.beta_hat[1], mu1); });
    RatioBound a3;
    a3.ok = true;
    a3.value = 1e-12;
    if (level >= 2)
      a3 = ratio_bound(data, [](const SpectralBounds& sb) { return std::pow(sb.xi[2], 1.0); });

    auto ratio_issue = [&](const RatioBound& rb, const char* name) {
      std::ostringstream os;
      os << "condition (i): " << name << " / lambda_Q tail "
         << (rb.divergent ? "diverges" : "not classified") << " (mu1=" << mu1 << ")";
      if (rb.divergent && divergent_witness.empty()) divergent_witness = os.str();
      if (!rb.divergent && inconclusive_witness.empty()) inconclusive_witness = os.str();
    };
    if (!a1.ok) {
      ratio_issue(a1, "xi1^alpha1");
      continue;
    }
    if (!a2.ok) {
      ratio_issue(a2, "betahat1^mu1");
      continue;
    }
    if (!a3.ok) {
      ratio_issue(a3, "xi2^alpha2");
      continue;
    }
    const double A1 = a1.value, A2 = a2.value, A3 = a3.value;

    // Level blocks: value = base + N * extra, canonical exponents = 1.
    std::vector<BlockDef> blocks;
    const double dd = d;
    if (level == 1) {
      blocks.push_back({"S1",
                        [=](const SpectralBounds& s) {
                          return (2.0 - nu) * s.big_lambda_c + M0 * sq(s.beta0_hat) / s.lambda_q;
                        },
                        [=](const SpectralBounds& s) { return s.gamma[1]; }});
      blocks.push_back({"S2",
                        [=](const SpectralBounds& s) {
                          return s.big_lambda_d1b + 0.5 * (2.0 - nu) * s.big_lambda_c +
                                 0.5 * dd *
                                     sq(s.beta0_hat / std::sqrt(s.lambda_q) +
                                        std::sqrt(A1) * std::sqrt(s.xi[1]));
                        },
                        [=](const SpectralBounds& s) {
                          return std::pow(s.beta_hat[1], 2.0 - mu1) + s.gamma[1];
                        }});
    } else if (level == 2) {
      blocks.push_back({"S1",
                        [=](const SpectralBounds& s) {
                          return (2.0 - nu) * s.big_lambda_c + M0 * sq(s.beta0_hat) / s.lambda_q;
                        },
                        [=](const SpectralBounds& s) { return s.gamma[1] + s.gamma[2]; }});
      blocks.push_back({"S2",
                        [=](const SpectralBounds& s) {
                          return s.big_lambda_d1b + 0.5 * (2.0 - nu) * s.big_lambda_c +
                                 M1 * sq(s.beta0_hat / std::sqrt(s.lambda_q) +
                                         std::sqrt(A1) * std::sqrt(s.xi[1]));
                        },
                        [=](const SpectralBounds& s) {
                          return s.beta[2] + std::pow(s.beta_hat[1], 2.0 - mu1) +
                                 s.beta_hat[2] + s.gamma[1];
                        }});
      blocks.push_back({"S3",
                        [=](const SpectralBounds& s) {
                          return s.big_lambda_d1b + 0.25 * (2.0 - nu) * s.big_lambda_c +
                                 0.25 * dd *
                                     sq(s.beta0_hat / std::sqrt(s.lambda_q) +
                                        2.0 * std::sqrt(A1) * std::sqrt(s.xi[1]));
                        },
                        [=](const SpectralBounds& s) {
                          return s.xi[2] + s.beta[2] + std::pow(s.beta_hat[1], 2.0 - mu1) +
                                 s.beta_hat[2] + s.gamma[1] + s.gamma[2];
                        }});
    } else {
      blocks.push_back({"S1",
                        [=](const SpectralBounds& s) {
                          return (2.0 - nu) * s.big_lambda_c + M0 * sq(s.beta0_hat) / s.lambda_q;
                        },
                        [=](const SpectralBounds& s) {
                          return s.gamma[1] + s.gamma[2] + s.gamma[3];
                        }});
      blocks.push_back({"S2",
                        [=](const SpectralBounds& s) {
                          return s.big_lambda_d1b + 0.5 * (2.0 - nu) * s.big_lambda_c +
                                 M1 * sq(s.beta0_hat / std::sqrt(s.lambda_q) +
                                         std::sqrt(A1) * std::sqrt(s.xi[1]));
                        },
                        [=](const SpectralBounds& s) {
                          return s.beta[2] + s.beta[3] + std::pow(s.beta_hat[1], 2.0 - mu1) +
                                 s.beta_hat[2] + s.beta_hat[3] + s.gamma[1] + s.gamma[2];
                        }});
      blocks.push_back({"S3",
                        [=](const SpectralBounds& s) {
                          return s.big_lambda_d1b + 0.25 * (2.0 - nu) * s.big_lambda_c +
                                 M2 * sq(s.beta0_hat / std::sqrt(s.lambda_q) +
                                         2.0 * std::sqrt(A1) * std::sqrt(s.xi[1]));
                        },
                        [=](const SpectralBounds& s) {
                          return s.xi[2] + s.xi[3] + s.beta[2] +
                                 std::pow(s.beta_hat[1], 2.0 - mu1) + s.beta_hat[2] +
                                 s.gamma[1] + s.gamma[2];
                        }});
      blocks.push_back({"S4",
                        [=](const SpectralBounds& s) {
                          return s.big_lambda_d1b + (2.0 - nu) / 6.0 * s.big_lambda_c +
                                 dd / 6.0 *
                                     sq(s.beta0_hat / std::sqrt(s.lambda_q) +
                                        3.0 * std::sqrt(A1) * std::sqrt(s.xi[1]));
                        },
                        [=](const SpectralBounds& s) {
                          return s.xi[2] + s.xi[3] + s.beta[2] + s.beta[3] +
                                 std::pow(s.beta_hat[1], 2.0 - mu1) + s.beta_hat[2] +
                                 s.beta_hat[3] + s.gamma[1] + s.gamma[2] + s.gamma[3];
                        }});
    }

    bool all_ok = true;
    std::map<std::string, double> consts;
    consts["nu"] = nu;
    consts["mu1"] = mu1;
    consts["alpha1"] = 1.0;
    consts["tau1"] = 1.0;
    consts["A1"] = A1;
    consts["A2"] = A2;
    consts["M0"] = M0;
    if (level >= 2) {
      consts["alpha2"] = 1.0;
      consts["rho2"] = 1.0;
      consts["mu2"] = 1.0;
      consts["tau2"] = 1.0;
      consts["A3"] = A3;
      consts["M1"] = M1;
    }
    if (level >= 3) {
      consts["alpha3"] = 1.0;
      consts["rho3"] = 1.0;
      consts["mu3"] = 1.0;
      consts["tau3"] = 1.0;
      consts["M2"] = M2;
    }

    for (std::size_t bi = 0; bi < blocks.size() && all_ok; ++bi) {
      const BlockDef& blk = blocks[bi];
      bool found = false;
      bool saw_divergent = false;
      for (double N : n_grid) {
        auto prof = shell_profile(data, [&](const SpectralBounds& sb, const Point&) {
          return blk.base(sb) + N * blk.extra(sb);
        });
        const Tail t = classify_tail(data.rho, prof);
        if (t == Tail::nonincreasing) {
          consts["N" + std::to_string(bi + 1)] = N;
          consts[blk.name + "_sup"] = *std::max_element(prof.begin(), prof.end());
          found = true;
          break;
        }
        if (t == Tail::diverging) saw_divergent = true;
      }
      if (!found) {
        all_ok = false;
        std::ostringstream os;
        os << "block " << blk.name << " (mu1=" << mu1 << ") "
           << (saw_divergent ? "diverges along sampled shells" : "tail not classified");
        if (saw_divergent && divergent_witness.empty()) divergent_witness = os.str();
        if (!saw_divergent && inconclusive_witness.empty()) inconclusive_witness = os.str();
      }
    }
    if (all_ok) {
      rep.status = HypStatus::pass;
      for (const auto& [key, val] : consts) rep.constants[key] = val;
      return rep;
    }
  }

  if (!divergent_witness.empty()) {
    rep.status = HypStatus::fail;
    rep.witness = divergent_witness;
  } else {
    rep.status = HypStatus::inconclusive;
    rep.witness = inconclusive_witness.empty() ? "no feasible constants found"
                                               : inconclusive_witness;
  }
  return rep;
}

HypothesisReport check_L1_condition(const CoefficientField& field, double nu,
                                    const RadialSearchConfig& search) {
  if (nu < 0.0 || nu >= 2.0) throw std::invalid_argument("nu must lie in [0,2)");
  HypothesisReport rep;
  rep.level = HypLevel::l1;
  rep.radius = search.radius;
  const int d = field.dim();
  const double k = field.exp_k(), p = field.exp_p(), g = field.exp_gamma();
  const double lam_c0 = field.lambda_min_c0_sym();

  // Directions: for d = 2 the direction-dependent part is the quadratic form
  // <Q0 e, e>, so the supremum over the sphere is attained at an eigenvector
  // of Q0; evaluating along both extreme eigenvectors is exact.
  std::vector<Eigen::VectorXd> dirs;
  if (d == 1) {
    dirs.push_back(Eigen::VectorXd::Ones(1));
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        0.5 * (field.q0() + field.q0().transpose()));
    dirs.push_back(es.eigenvectors().col(0));
    dirs.push_back(es.eigenvectors().col(d - 1));
  }

  double best = -std::numeric_limits<double>::infinity();
  double best_arg = 0.0;
  bool diverging = false;
  for (const auto& e : dirs) {
    auto profile = [&](double rho) {
      Point x{rho * e(0), d > 1 ? rho * e(1) : 0.0};
      double val = nu * spectral_bounds(field, x, 0).big_lambda_c;
      // -div b
      for (int a = 0; a < d; ++a) {
        MultiIndex beta{0, 0};
        beta[a] = 1;
        val -= field.drift_deriv(x, beta)(a);
      }
      // sum_ij D_ij q_ij
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          MultiIndex beta{0, 0};
          beta[i] += 1;
          beta[j] += 1;
          val += field.diffusion_deriv(x, beta)(i, j);
        }
      return val;
    };
    std::vector<RadialTerm> tail;
    tail.push_back({-nu * lam_c0, g});
    if (field.drift_enabled()) {
      tail.push_back({static_cast<double>(d) + 2.0 * p, p});
      tail.push_back({-2.0 * p, p - 1.0});
    }
    if (k != 0.0) {
      const double qe = e.dot(field.q0() * e);
      tail.push_back({4.0 * k * (k - 1.0) * qe + 2.0 * k * field.q0().trace(), k - 1.0});
      tail.push_back({-4.0 * k * (k - 1.0) * qe, k - 2.0});
    }
    const RadialSupremum sup = radial_supremum(profile, tail, search);
    if (!sup.finite()) diverging = true;
    if (sup.value > best) {
      best = sup.value;
      best_arg = sup.argmax;
    }
  }

  if (diverging) {
    rep.status = HypStatus::fail;
    std::ostringstream os;
    os << "L1 profile nu*Lambda_C - div b + sum D_ij q_ij diverges";
    rep.witness = os.str();
    return rep;
  }
  rep.status = HypStatus::pass;
  rep.constants["K"] = best;
  rep.constants["M"] = 1.0;
  rep.constants["omega"] = best;
  rep.constants["argmax"] = best_arg;
  rep.constants["nu"] = nu;
  return rep;
}

}  // namespace semigroup_lab
