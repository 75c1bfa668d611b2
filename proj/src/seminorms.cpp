#include "semigroup_lab/seminorms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "semigroup_lab/parallel.hpp"

namespace semigroup_lab {

nlohmann::json SeminormEstimate::to_json() const {
  nlohmann::json j;
  j["kind"] = kind;
  j["value"] = value;
  j["window"] = window;
  j["samples"] = samples;
  j["margin"] = margin;
  return j;
}

namespace {

struct InnerBox {
  int lo = 0, hi = 0;  // inclusive index range per axis
  bool contains(const std::array<int, 2>& idx, int d) const {
    for (int a = 0; a < d; ++a)
      if (idx[a] < lo || idx[a] > hi) return false;
    return true;
  }
};

InnerBox inner_box(const Grid& g, int margin) {
  if (margin < 0 || 2 * margin >= g.n_per_axis - 2)
    throw std::invalid_argument("margin too large for grid");
  return {margin, g.n_per_axis - 1 - margin};
}

// Pointwise |D^j u| fields for j = 0..k: Euclidean norm over components and
// over all multi-index entries of order j (mixed entries weighted by the
// multinomial count, matching the full Hessian/tensor Frobenius norm).
std::vector<std::vector<double>> derivative_moduli(const Field& u, int k) {
  const Grid& g = u.grid();
  const std::size_t n = g.node_count();
  std::vector<std::vector<double>> mods(k + 1, std::vector<double>(n, 0.0));
  for (std::size_t node = 0; node < n; ++node) {
    double s = 0.0;
    for (int c = 0; c < u.comps(); ++c) s += u.at(c, node) * u.at(c, node);
    mods[0][node] = std::sqrt(s);
  }
  for (int ord = 1; ord <= k; ++ord) {
    std::vector<double> acc(n, 0.0);
    for (const MultiIndex& beta : multi_indices(g.d, ord)) {
      // Number of equal entries of the symmetric derivative tensor.
      double mult = 1.0;
      if (ord == 2 && beta[0] == 1) mult = 2.0;
      if (ord == 3 && (beta[0] == 2 || beta[0] == 1)) mult = 3.0;
      const Field df = derivative(u, beta);
      for (std::size_t node = 0; node < n; ++node)
        for (int c = 0; c < u.comps(); ++c)
          acc[node] += mult * df.at(c, node) * df.at(c, node);
    }
    for (std::size_t node = 0; node < n; ++node) mods[ord][node] = std::sqrt(acc[node]);
  }
  return mods;
}

double trapezoid_weight(const Grid& g, const std::array<int, 2>& idx, const InnerBox& box) {
  double w = 1.0;
  for (int a = 0; a < g.d; ++a)
    if (idx[a] == box.lo || idx[a] == box.hi) w *= 0.5;
  return w;
}

}  // namespace

Field derivative_modulus(const Field& u, int order) {
  const auto mods = derivative_moduli(u, order);
  Field out(u.grid(), 1);
  for (std::size_t node = 0; node < u.nodes(); ++node) out.at(0, node) = mods[order][node];
  return out;
}

Field derivative_stack(const Field& u, int order) {
  const auto betas = multi_indices(u.grid().d, order);
  Field out(u.grid(), u.comps() * static_cast<int>(betas.size()));
  int plane = 0;
  for (const MultiIndex& beta : betas) {
    const Field df = derivative(u, beta);
    for (int c = 0; c < u.comps(); ++c, ++plane)
      for (std::size_t node = 0; node < u.nodes(); ++node)
        out.at(plane, node) = df.at(c, node);
  }
  return out;
}

SeminormEstimate ck_norm(const Field& u, int k, int margin) {
  if (k < 0 || k > 3) throw std::invalid_argument("ck_norm: k must be in 0..3");
  const Grid& g = u.grid();
  const InnerBox box = inner_box(g, margin);
  const auto mods = derivative_moduli(u, k);
  SeminormEstimate est;
  est.kind = "ck";
  est.margin = margin;
  double total = 0.0;
  long long cnt = 0;
  for (int ord = 0; ord <= k; ++ord) {
    double m = 0.0;
    for (std::size_t node = 0; node < g.node_count(); ++node) {
      if (!box.contains(g.multi(node), g.d)) continue;
      m = std::max(m, mods[ord][node]);
      ++cnt;
    }
    total += m;
  }
  est.value = total;
  est.samples = cnt;
  return est;
}

SeminormEstimate holder_seminorm(const Field& u, double alpha, double window,
                                 long long pair_samples, int margin, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("holder_seminorm: alpha must lie in (0,1)");
  const Grid& g = u.grid();
  const InnerBox box = inner_box(g, margin);
  const double h = g.spacing();
  SeminormEstimate est;
  est.kind = "holder";
  est.margin = margin;
  est.window = window;

  auto quotient = [&](std::size_t a, std::size_t b) {
    const Point xa = g.coords(a), xb = g.coords(b);
    const double dx0 = xa[0] - xb[0], dx1 = xa[1] - xb[1];
    const double dist = std::sqrt(dx0 * dx0 + dx1 * dx1);
    if (dist <= 0.0 || dist > window + 1e-12) return -1.0;
    double diff = 0.0;
    for (int c = 0; c < u.comps(); ++c) {
      const double dv = u.at(c, a) - u.at(c, b);
      diff += dv * dv;
    }
    return std::sqrt(diff) / std::pow(dist, alpha);
  };

  double best = 0.0;
  long long cnt = 0;
  if (g.d == 1) {
    const int span = std::min(g.n_per_axis - 1, static_cast<int>(window / h + 1e-9));
    for (int i = box.lo; i <= box.hi; ++i)
      for (int j = i + 1; j <= std::min(box.hi, i + span); ++j) {
        best = std::max(best, quotient(i, j));
        ++cnt;
      }
  } else {
    // All nearest-neighbour pairs.
    for (int i0 = box.lo; i0 <= box.hi; ++i0)
      for (int i1 = box.lo; i1 <= box.hi; ++i1) {
        const std::size_t a = g.index({i0, i1});
        if (i0 + 1 <= box.hi) {
          best = std::max(best, quotient(a, g.index({i0 + 1, i1})));
          ++cnt;
        }
        if (i1 + 1 <= box.hi) {
          best = std::max(best, quotient(a, g.index({i0, i1 + 1})));
          ++cnt;
        }
      }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(box.lo, box.hi);
    const long long draws = std::max<long long>(pair_samples, 100000);
    for (long long s = 0; s < draws; ++s) {
      const std::size_t a = g.index({pick(rng), pick(rng)});
      const std::size_t b = g.index({pick(rng), pick(rng)});
      if (a == b) continue;
      best = std::max(best, quotient(a, b));
      ++cnt;
    }
  }
  est.value = best;
  est.samples = cnt;
  return est;
}

SeminormEstimate zygmund_seminorm(const Field& u, double h_window, int margin) {
  const Grid& g = u.grid();
  const InnerBox box = inner_box(g, margin);
  const double h = g.spacing();
  if (h_window < 2.0 * h)
    throw std::invalid_argument("zygmund_seminorm: window smaller than two grid cells");
  SeminormEstimate est;
  est.kind = "zygmund";
  est.margin = margin;
  est.window = h_window;

  std::vector<std::array<int, 2>> dirs{{1, 0}};
  if (g.d == 2) dirs = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};

  double best = 0.0;
  long long cnt = 0;
  for (const auto& e : dirs) {
    const double elen = std::sqrt(static_cast<double>(e[0] * e[0] + e[1] * e[1]));
    const int max_mult = static_cast<int>(h_window / (h * elen) + 1e-9);
    for (int mult = 1; mult <= max_mult; ++mult) {
      for (int sign : {1, -1}) {
        const int s0 = sign * mult * e[0], s1 = sign * mult * e[1];
        const double hlen = mult * elen * h;
        for (std::size_t node = 0; node < g.node_count(); ++node) {
          const auto idx = g.multi(node);
          const std::array<int, 2> idx1{idx[0] + s0, idx[1] + s1};
          const std::array<int, 2> idx2{idx[0] + 2 * s0, idx[1] + 2 * s1};
          if (!box.contains(idx, g.d) || !box.contains(idx1, g.d) ||
              !box.contains(idx2, g.d))
            continue;
          const std::size_t n1 = g.index(idx1), n2 = g.index(idx2);
          double diff = 0.0;
          for (int c = 0; c < u.comps(); ++c) {
            const double dv = u.at(c, n2) - 2.0 * u.at(c, n1) + u.at(c, node);
            diff += dv * dv;
          }
          best = std::max(best, std::sqrt(diff) / hlen);
          ++cnt;
        }
      }
    }
  }
  est.value = best;
  est.samples = cnt;
  return est;
}

SeminormEstimate lp_norm(const Field& u, double p, int margin) {
  if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
  const Grid& g = u.grid();
  const InnerBox box = inner_box(g, margin);
  const double h = g.spacing();
  const double cell = g.d == 1 ? h : h * h;
  double acc = 0.0;
  long long cnt = 0;
  for (std::size_t node = 0; node < g.node_count(); ++node) {
    const auto idx = g.multi(node);
    if (!box.contains(idx, g.d)) continue;
    acc += trapezoid_weight(g, idx, box) * std::pow(u.modulus(node), p) * cell;
    ++cnt;
  }
  SeminormEstimate est;
  est.kind = "lp";
  est.margin = margin;
  est.value = std::pow(acc, 1.0 / p);
  est.samples = cnt;
  return est;
}

SeminormEstimate sobolev_norm(const Field& u, int k, double p, int margin) {
  if (k < 0 || k > 3) throw std::invalid_argument("sobolev_norm: k must be in 0..3");
  if (p < 1.0) throw std::invalid_argument("sobolev_norm: p must be >= 1");
  const Grid& g = u.grid();
  const InnerBox box = inner_box(g, margin);
  const double h = g.spacing();
  const double cell = g.d == 1 ? h : h * h;
  const auto mods = derivative_moduli(u, k);
  double acc = 0.0;
  long long cnt = 0;
  for (std::size_t node = 0; node < g.node_count(); ++node) {
    const auto idx = g.multi(node);
    if (!box.contains(idx, g.d)) continue;
    const double w = trapezoid_weight(g, idx, box) * cell;
    for (int ord = 0; ord <= k; ++ord) acc += w * std::pow(mods[ord][node], p);
    ++cnt;
  }
  SeminormEstimate est;
  est.kind = "sobolev";
  est.margin = margin;
  est.value = std::pow(acc, 1.0 / p);
  est.samples = cnt;
  return est;
}

SeminormEstimate besov_seminorm(const Field& u, double s, double p, int h_samples,
                                double window, int margin) {
  if (p < 1.0) throw std::invalid_argument("besov_seminorm: p must be >= 1");
  if (!(s > 0.0 && s < 1.0))
    throw std::invalid_argument("besov_seminorm: s must lie in (0,1)");
  const Grid& g = u.grid();
  const InnerBox box = inner_box(g, margin);
  const double h = g.spacing();
  if (window < h) throw std::invalid_argument("besov_seminorm: window below grid spacing");
  const double cell = g.d == 1 ? h : h * h;

  // Directions and their angular quadrature weights.
  struct Dir {
    double e0, e1, weight;
  };
  std::vector<Dir> dirs;
  if (g.d == 1) {
    dirs = {{1.0, 0.0, 1.0}, {-1.0, 0.0, 1.0}};
  } else {
    const int J = 16;
    for (int j = 0; j < J; ++j) {
      const double th = 2.0 * M_PI * j / J;
      dirs.push_back({std::cos(th), std::sin(th), 2.0 * M_PI / J});
    }
  }

  // Log-spaced |h| nodes rounded to grid-aligned offsets per direction.
  const int S = std::max(h_samples, 4);
  std::vector<double> t_nodes(S);
  for (int i = 0; i < S; ++i)
    t_nodes[i] = h * std::pow(window / h, static_cast<double>(i) / (S - 1));

  double total = 0.0;
  long long cnt = 0;
  for (const auto& dir : dirs) {
    // Round each |h| node to an integer offset, then dedupe.
    std::vector<std::array<int, 2>> offs;
    std::vector<double> ts;
    for (double t : t_nodes) {
      std::array<int, 2> o{static_cast<int>(std::lround(t * dir.e0 / h)),
                           static_cast<int>(std::lround(t * dir.e1 / h))};
      if (o[0] == 0 && (g.d == 1 || o[1] == 0)) {
        o[0] = dir.e0 >= 0 ? 1 : -1;
        if (g.d == 2 && std::abs(dir.e1) > std::abs(dir.e0)) {
          o[0] = 0;
          o[1] = dir.e1 >= 0 ? 1 : -1;
        }
      }
      const double t_actual =
          h * std::sqrt(static_cast<double>(o[0]) * o[0] + static_cast<double>(o[1]) * o[1]);
      if (!ts.empty() && std::abs(t_actual - ts.back()) < 1e-12 && o == offs.back()) continue;
      offs.push_back(o);
      ts.push_back(t_actual);
    }
    // Inner L^p integral of the difference for each offset.
    std::vector<double> inner(ts.size(), 0.0);
    for (std::size_t oi = 0; oi < ts.size(); ++oi) {
      const auto& o = offs[oi];
      double acc = 0.0;
      for (std::size_t node = 0; node < g.node_count(); ++node) {
        const auto idx = g.multi(node);
        if (!box.contains(idx, g.d)) continue;
        const std::array<int, 2> shifted{idx[0] + o[0], idx[1] + o[1]};
        if (shifted[0] < 0 || shifted[0] >= g.n_per_axis) continue;
        if (g.d == 2 && (shifted[1] < 0 || shifted[1] >= g.n_per_axis)) continue;
        const std::size_t tgt = g.index(shifted);
        double diff = 0.0;
        for (int c = 0; c < u.comps(); ++c) {
          const double dv = u.at(c, tgt) - u.at(c, node);
          diff += dv * dv;
        }
        acc += trapezoid_weight(g, idx, box) * std::pow(std::sqrt(diff), p) * cell;
        ++cnt;
      }
      inner[oi] = acc;
    }
    // Radial quadrature with kernel t^{-1-sp}: trapezoid over the actual
    // (rounded) node positions.
    for (std::size_t oi = 0; oi + 1 < ts.size(); ++oi) {
      const double t0 = ts[oi], t1 = ts[oi + 1];
      if (t1 <= t0) continue;
      const double f0 = inner[oi] * std::pow(t0, -1.0 - s * p);
      const double f1 = inner[oi + 1] * std::pow(t1, -1.0 - s * p);
      total += dir.weight * 0.5 * (f0 + f1) * (t1 - t0);
    }
  }

  SeminormEstimate est;
  est.kind = "besov";
  est.margin = margin;
  est.window = window;
  est.value = std::pow(total, 1.0 / p);
  est.samples = cnt;
  return est;
}

}  // namespace semigroup_lab
