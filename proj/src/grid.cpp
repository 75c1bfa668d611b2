#include "semigroup_lab/grid.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "semigroup_lab/parallel.hpp"

namespace semigroup_lab {

Grid make_grid(int d, double half_width, int n_per_axis) {
  if (d != 1 && d != 2) throw std::invalid_argument("grid dimension must be 1 or 2");
  if (half_width <= 0.0) throw std::invalid_argument("grid half-width must be positive");
  if (n_per_axis < 9) throw std::invalid_argument("n_per_axis must be >= 9");
  if (n_per_axis % 2 == 0) throw std::invalid_argument("n_per_axis must be odd");
  return Grid{d, half_width, n_per_axis};
}

double Field::modulus(std::size_t node) const {
  double s = 0.0;
  for (int c = 0; c < m_; ++c) {
    const double v = at(c, node);
    s += v * v;
  }
  return std::sqrt(s);
}

double Field::max_abs() const {
  return parallel_max(values_.size(), 0.0,
                      [&](std::size_t i) { return std::abs(values_[i]); });
}

bool Field::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

Field sample(const Grid& grid, int comps,
             const std::function<double(const Point&, int)>& f) {
  Field out(grid, comps);
  const std::size_t n = grid.node_count();
  for (std::size_t node = 0; node < n; ++node) {
    const Point x = grid.coords(node);
    for (int c = 0; c < comps; ++c) {
      const double v = f(x, c);
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "sample: non-finite value at node " << node;
        throw std::invalid_argument(os.str());
      }
      out.at(c, node) = v;
    }
  }
  return out;
}

namespace {

// Applies a first- or second-derivative pass along `axis` to one component
// plane. Centered in the interior, one-sided at the two end nodes.
void axis_derivative(const Grid& g, std::span<const double> in, std::span<double> out,
                     int axis, int order) {
  const int n = g.n_per_axis;
  const double h = g.spacing();
  const double scale = order == 1 ? 1.0 / (2.0 * h) : 1.0 / (h * h);
  const std::size_t stride = (g.d == 2 && axis == 0) ? static_cast<std::size_t>(n) : 1;
  const std::size_t lines = g.d == 1 ? 1 : static_cast<std::size_t>(n);
  const std::size_t line_stride = (g.d == 2 && axis == 0) ? 1 : static_cast<std::size_t>(n);

  for (std::size_t line = 0; line < lines; ++line) {
    const std::size_t base = g.d == 1 ? 0 : line * line_stride;
    auto v = [&](int i) { return in[base + i * stride]; };
    auto& o = out;
    for (int i = 1; i < n - 1; ++i)
      o[base + i * stride] =
          order == 1 ? (v(i + 1) - v(i - 1)) * scale
                     : (v(i + 1) - 2.0 * v(i) + v(i - 1)) * scale;
    if (order == 1) {
      o[base + 0] = (-3.0 * v(0) + 4.0 * v(1) - v(2)) * scale;
      o[base + (n - 1) * stride] = (3.0 * v(n - 1) - 4.0 * v(n - 2) + v(n - 3)) * scale;
    } else {
      o[base + 0] = (2.0 * v(0) - 5.0 * v(1) + 4.0 * v(2) - v(3)) * scale;
      o[base + (n - 1) * stride] =
          (2.0 * v(n - 1) - 5.0 * v(n - 2) + 4.0 * v(n - 3) - v(n - 4)) * scale;
    }
  }
}

}  // namespace

Field derivative(const Field& u, const MultiIndex& beta) {
  const int ord = order_of(beta);
  if (ord > 3) throw std::invalid_argument("derivative order must be <= 3");
  if (beta[0] < 0 || beta[1] < 0) throw std::invalid_argument("negative multi-index");
  const Grid& g = u.grid();
  if (g.d == 1 && beta[1] > 0) throw std::invalid_argument("axis 1 derivative on a 1-D grid");
  Field out = u;
  Field tmp(g, u.comps());
  for (int axis = 0; axis < 2; ++axis) {
    int remaining = beta[axis];
    while (remaining > 0) {
      const int step = remaining >= 2 ? 2 : 1;  // third derivative = d(second)
      for (int c = 0; c < u.comps(); ++c)
        axis_derivative(g, out.plane(c), tmp.plane(c), axis, step);
      std::swap(out.raw(), tmp.raw());
      remaining -= step;
    }
  }
  return out;
}

OperatorTable OperatorTable::build(const CoefficientField& coeffs, const Grid& grid) {
  OperatorTable t;
  t.d = grid.d;
  t.m = coeffs.comps();
  t.grid = grid;
  const std::size_t n = grid.node_count();
  const int qn = grid.d == 1 ? 1 : 3;
  const int m = t.m;
  t.q.resize(n * qn);
  t.b.resize(n * grid.d);
  t.lambda_c.resize(n);
  for (int axis = 0; axis < grid.d; ++axis)
    if (coeffs.b0()[axis].cwiseAbs().maxCoeff() > 0.0) t.has_coupling = true;
  if (coeffs.c0().cwiseAbs().maxCoeff() > 0.0) t.has_reaction = true;
  if (t.has_coupling) t.bhat.resize(n * grid.d * m * m);
  if (t.has_reaction) t.c.resize(n * m * m);

  for (std::size_t node = 0; node < n; ++node) {
    const Point x = grid.coords(node);
    const Eigen::MatrixXd Q = coeffs.diffusion(x);
    if (grid.d == 1) {
      t.q[node] = Q(0, 0);
      t.max_big_lambda_q = std::max(t.max_big_lambda_q, Q(0, 0));
    } else {
      t.q[node * 3 + 0] = Q(0, 0);
      t.q[node * 3 + 1] = Q(1, 1);
      t.q[node * 3 + 2] = Q(0, 1);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(Q);
      t.max_big_lambda_q = std::max(t.max_big_lambda_q, es.eigenvalues().maxCoeff());
    }
    const Eigen::VectorXd b = coeffs.drift(x);
    for (int a = 0; a < grid.d; ++a) {
      t.b[node * grid.d + a] = b(a);
      t.max_abs_drift = std::max(t.max_abs_drift, std::abs(b(a)));
    }
    if (t.has_coupling) {
      for (int a = 0; a < grid.d; ++a) {
        const Eigen::MatrixXd bh = coeffs.coupling(a, x);
        for (int i = 0; i < m; ++i)
          for (int l = 0; l < m; ++l)
            t.bhat[((node * grid.d) + a) * m * m + i * m + l] = bh(i, l);
      }
    }
    const Eigen::MatrixXd C = coeffs.reaction(x);
    if (t.has_reaction)
      for (int i = 0; i < m; ++i)
        for (int l = 0; l < m; ++l) t.c[node * m * m + i * m + l] = C(i, l);
    if (m == 1) {
      t.lambda_c[node] = C(0, 0);
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (C + C.transpose()));
      t.lambda_c[node] = es.eigenvalues().maxCoeff();
    }
  }
  return t;
}

namespace {

// Second-order nodal operator application on interior nodes; callers zero
// the Dirichlet ring.
void apply_interior(const OperatorTable& t, const Field& u, Field& out) {
  const Grid& g = t.grid;
  const int n = g.n_per_axis;
  const int m = u.comps();
  const double h = g.spacing();
  const double ih2 = 1.0 / (h * h);
  const double ih1 = 1.0 / (2.0 * h);

  if (g.d == 1) {
    parallel_for_chunks(static_cast<std::size_t>(n - 2), [&](std::size_t lo, std::size_t hi, int) {
      std::vector<double> d1(m);
      for (std::size_t ii = lo; ii < hi; ++ii) {
        const std::size_t i = ii + 1;
        for (int c = 0; c < m; ++c) {
          const auto uc = u.plane(c);
          const double uxx = (uc[i + 1] - 2.0 * uc[i] + uc[i - 1]) * ih2;
          d1[c] = (uc[i + 1] - uc[i - 1]) * ih1;
          out.at(c, i) = t.q[i] * uxx + t.b[i] * d1[c];
        }
        if (t.has_coupling) {
          const double* bh = &t.bhat[i * m * m];
          for (int c = 0; c < m; ++c) {
            double acc = 0.0;
            for (int j = 0; j < m; ++j) acc += bh[c * m + j] * d1[j];
            out.at(c, i) += acc;
          }
        }
        if (t.has_reaction) {
          const double* cm = &t.c[i * m * m];
          for (int c = 0; c < m; ++c) {
            double acc = 0.0;
            for (int j = 0; j < m; ++j) acc += cm[c * m + j] * u.at(j, i);
            out.at(c, i) += acc;
          }
        }
      }
    });
    return;
  }

  const std::size_t interior = static_cast<std::size_t>(n - 2) * (n - 2);
  parallel_for_chunks(interior, [&](std::size_t lo, std::size_t hi, int) {
    std::vector<double> d1(static_cast<std::size_t>(2) * m);
    for (std::size_t w = lo; w < hi; ++w) {
      const int i0 = static_cast<int>(w / (n - 2)) + 1;
      const int i1 = static_cast<int>(w % (n - 2)) + 1;
      const std::size_t node = static_cast<std::size_t>(i0) * n + i1;
      const double q11 = t.q[node * 3 + 0];
      const double q22 = t.q[node * 3 + 1];
      const double q12 = t.q[node * 3 + 2];
      for (int c = 0; c < m; ++c) {
        const auto uc = u.plane(c);
        const double u00 = uc[node];
        const double uxp = uc[node + n], uxm = uc[node - n];
        const double uyp = uc[node + 1], uym = uc[node - 1];
        const double uxx = (uxp - 2.0 * u00 + uxm) * ih2;
        const double uyy = (uyp - 2.0 * u00 + uym) * ih2;
        const double uxy = (uc[node + n + 1] - uc[node + n - 1] - uc[node - n + 1] +
                            uc[node - n - 1]) *
                           ih1 * ih1;
        d1[0 * m + c] = (uxp - uxm) * ih1;
        d1[1 * m + c] = (uyp - uym) * ih1;
        out.at(c, node) = q11 * uxx + q22 * uyy + 2.0 * q12 * uxy +
                          t.b[node * 2 + 0] * d1[0 * m + c] +
                          t.b[node * 2 + 1] * d1[1 * m + c];
      }
      if (t.has_coupling) {
        for (int a = 0; a < 2; ++a) {
          const double* bh = &t.bhat[((node * 2) + a) * m * m];
          for (int c = 0; c < m; ++c) {
            double acc = 0.0;
            for (int j = 0; j < m; ++j) acc += bh[c * m + j] * d1[a * m + j];
            out.at(c, node) += acc;
          }
        }
      }
      if (t.has_reaction) {
        const double* cm = &t.c[node * m * m];
        for (int c = 0; c < m; ++c) {
          double acc = 0.0;
          for (int j = 0; j < m; ++j) acc += cm[c * m + j] * u.at(j, node);
          out.at(c, node) += acc;
        }
      }
    }
  });
}

}  // namespace

Field apply_operator(const OperatorTable& table, const Field& u) {
  if (u.comps() != table.m) throw std::invalid_argument("component count mismatch");
  if (!(u.grid() == table.grid)) throw std::invalid_argument("grid mismatch");
  Field out(u.grid(), u.comps());
  apply_interior(table, u, out);
  return out;  // ring entries stay zero
}

Field apply_operator(const CoefficientField& coeffs, const Field& u) {
  if (coeffs.dim() != u.grid().d) throw std::invalid_argument("dimension mismatch");
  if (coeffs.comps() != u.comps()) throw std::invalid_argument("component count mismatch");
  return apply_operator(OperatorTable::build(coeffs, u.grid()), u);
}

Field inner_restriction(const Field& u, int margin_cells) {
  if (margin_cells < 0) throw std::invalid_argument("margin must be nonnegative");
  if (margin_cells == 0) return u;
  const Grid& g = u.grid();
  const int n_new = g.n_per_axis - 2 * margin_cells;
  if (n_new < 3) throw std::invalid_argument("margin too large");
  const double h = g.spacing();
  Grid inner{g.d, g.half_width - margin_cells * h, n_new};
  Field out(inner, u.comps());
  const std::size_t nn = inner.node_count();
  for (std::size_t node = 0; node < nn; ++node) {
    auto idx = inner.multi(node);
    idx[0] += margin_cells;
    if (g.d > 1) idx[1] += margin_cells;
    const std::size_t src = g.index(idx);
    for (int c = 0; c < u.comps(); ++c) out.at(c, node) = u.at(c, src);
  }
  return out;
}

void write_field_csv(const Field& u, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp);
    if (!os) throw std::runtime_error("cannot open " + tmp);
    os << "d,m,L,n_per_axis\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", u.grid().half_width);
    os << u.grid().d << "," << u.comps() << "," << buf << "," << u.grid().n_per_axis << "\n";
    const std::size_t n = u.nodes();
    for (std::size_t node = 0; node < n; ++node) {
      for (int c = 0; c < u.comps(); ++c) {
        std::snprintf(buf, sizeof buf, "%.17g", u.at(c, node));
        os << (c ? "," : "") << buf;
      }
      os << "\n";
    }
  }
  std::filesystem::rename(tmp, path);
}

Field read_field_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(is, line) || line.rfind("d,m,L,n_per_axis", 0) != 0)
    throw std::runtime_error("bad field CSV header in " + path);
  if (!std::getline(is, line)) throw std::runtime_error("truncated field CSV " + path);
  int d = 0, m = 0, n = 0;
  double L = 0.0;
  {
    std::istringstream ls(line);
    char comma;
    ls >> d >> comma >> m >> comma >> L >> comma >> n;
    if (!ls) throw std::runtime_error("bad field CSV size row in " + path);
  }
  Field out(make_grid(d, L, n), m);
  for (std::size_t node = 0; node < out.nodes(); ++node) {
    if (!std::getline(is, line)) throw std::runtime_error("truncated field CSV " + path);
    std::istringstream ls(line);
    for (int c = 0; c < m; ++c) {
      double v;
      char comma;
      if (c) ls >> comma;
      ls >> v;
      if (!ls) throw std::runtime_error("bad field CSV row in " + path);
      out.at(c, node) = v;
    }
  }
  return out;
}

}  // namespace semigroup_lab
