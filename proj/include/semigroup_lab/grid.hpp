#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "semigroup_lab/coefficients.hpp"

namespace semigroup_lab {

// Uniform Cartesian discretization of the centered box [-L, L]^d with an odd
// number of points per axis, so the origin is a node. Nodes are flattened
// axis-0 major: node = i0 * n + i1 for d = 2.
struct Grid {
  int d = 1;
  double half_width = 1.0;
  int n_per_axis = 9;

  double spacing() const { return 2.0 * half_width / (n_per_axis - 1); }
  std::size_t node_count() const {
    return d == 1 ? static_cast<std::size_t>(n_per_axis)
                  : static_cast<std::size_t>(n_per_axis) * n_per_axis;
  }
  std::array<int, 2> multi(std::size_t node) const {
    if (d == 1) return {static_cast<int>(node), 0};
    return {static_cast<int>(node / n_per_axis), static_cast<int>(node % n_per_axis)};
  }
  std::size_t index(const std::array<int, 2>& idx) const {
    return d == 1 ? static_cast<std::size_t>(idx[0])
                  : static_cast<std::size_t>(idx[0]) * n_per_axis + idx[1];
  }
  Point coords(std::size_t node) const {
    const auto idx = multi(node);
    const double h = spacing();
    return {-half_width + idx[0] * h, d > 1 ? -half_width + idx[1] * h : 0.0};
  }
  bool on_boundary(std::size_t node) const {
    const auto idx = multi(node);
    for (int a = 0; a < d; ++a)
      if (idx[a] == 0 || idx[a] == n_per_axis - 1) return true;
    return false;
  }
  bool operator==(const Grid&) const = default;
};

Grid make_grid(int d, double half_width, int n_per_axis);

// An m-component grid function. Values are stored as m contiguous planes of
// node_count() scalars each; immutable use from multiple threads is safe.
class Field {
 public:
  Field() = default;
  Field(const Grid& grid, int comps)
      : grid_(grid), m_(comps), values_(grid.node_count() * comps, 0.0) {}

  const Grid& grid() const { return grid_; }
  int comps() const { return m_; }
  std::size_t nodes() const { return grid_.node_count(); }

  double& at(int comp, std::size_t node) { return values_[comp * nodes() + node]; }
  double at(int comp, std::size_t node) const { return values_[comp * nodes() + node]; }
  std::span<double> plane(int comp) { return {values_.data() + comp * nodes(), nodes()}; }
  std::span<const double> plane(int comp) const {
    return {values_.data() + comp * nodes(), nodes()};
  }
  std::vector<double>& raw() { return values_; }
  const std::vector<double>& raw() const { return values_; }

  // Euclidean norm over components at one node.
  double modulus(std::size_t node) const;
  double max_abs() const;
  bool all_finite() const;

 private:
  Grid grid_;
  int m_ = 0;
  std::vector<double> values_;
};

// Exact nodal sampling; rejects non-finite samples with the node index.
Field sample(const Grid& grid, int comps,
             const std::function<double(const Point&, int comp)>& f);

// Second-order finite-difference coefficients. Centered rows for the
// interior, one-sided rows for the first nodes at each end of a line.
// Offsets are in nodes, weights scale with 1/h^order.
struct StencilSet {
  struct Rule {
    std::vector<int> offsets;
    std::vector<double> weights;
  };
  Rule centered1{{-1, 1}, {-0.5, 0.5}};
  Rule centered2{{-1, 0, 1}, {1.0, -2.0, 1.0}};
  Rule centered3{{-2, -1, 1, 2}, {-0.5, 1.0, -1.0, 0.5}};
  Rule onesided1{{0, 1, 2}, {-1.5, 2.0, -0.5}};
  Rule onesided2{{0, 1, 2, 3}, {2.0, -5.0, 4.0, -1.0}};
  Rule onesided3{{0, 1, 2, 3, 4}, {-2.5, 9.0, -12.0, 7.0, -1.5}};
};

// Discrete partial derivative d^beta, |beta| <= 3, second-order accurate in
// the interior. Third derivatives are formed by differentiating the
// second-derivative field once; a band of width |beta| near the boundary
// uses one-sided rules and is less accurate (norms should restrict it away).
Field derivative(const Field& u, const MultiIndex& beta);

// Per-node coefficient samples, so repeated operator application and time
// stepping avoid re-evaluating the closed forms.
struct OperatorTable {
  int d = 1;
  int m = 1;
  Grid grid;
  std::vector<double> q;         // nodes x (1 for d=1, 3 for d=2: q11,q22,q12)
  std::vector<double> b;         // nodes x d
  std::vector<double> bhat;      // nodes x d x m*m, empty when no coupling
  std::vector<double> c;         // nodes x m*m, empty when reaction vanishes
  std::vector<double> lambda_c;  // nodes; max eigenvalue of sym C
  double max_big_lambda_q = 0.0;
  double max_abs_drift = 0.0;
  bool has_coupling = false;
  bool has_reaction = false;

  static OperatorTable build(const CoefficientField& coeffs, const Grid& grid);
};

// Nodal action of the full operator with second-order stencils; the
// outermost (Dirichlet) ring of the output is forced to zero.
Field apply_operator(const CoefficientField& coeffs, const Field& u);
Field apply_operator(const OperatorTable& table, const Field& u);

// Sub-box with the same spacing, dropping margin_cells nodes on every side.
Field inner_restriction(const Field& u, int margin_cells);

// CSV serialization: header "d,m,L,n_per_axis" then one node-major row of m
// values per node.
void write_field_csv(const Field& u, const std::string& path);
Field read_field_csv(const std::string& path);

}  // namespace semigroup_lab
