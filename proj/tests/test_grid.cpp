#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "semigroup_lab/grid.hpp"

using namespace semigroup_lab;

TEST_CASE("grid construction and node layout") {
  const Grid g = make_grid(1, 1.0, 9);
  CHECK(g.spacing() == doctest::Approx(0.25));
  CHECK(g.coords(4)[0] == doctest::Approx(0.0));
  CHECK(g.node_count() == 9);

  const Grid g2 = make_grid(2, 10.0, 201);
  CHECK(g2.node_count() == 40401);
  CHECK(g2.spacing() == doctest::Approx(0.1));

  CHECK_THROWS_AS(make_grid(1, 1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, 1.0, 7), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(3, 1.0, 9), std::invalid_argument);
}

TEST_CASE("index round-trip on random nodes") {
  const Grid g = make_grid(2, 3.0, 41);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, g.node_count() - 1);
  for (int i = 0; i < 100; ++i) {
    const std::size_t node = pick(rng);
    CHECK(g.index(g.multi(node)) == node);
  }
}

TEST_CASE("sampling") {
  const Grid g = make_grid(1, 2.0, 33);
  const Field zero = sample(g, 2, [](const Point&, int) { return 0.0; });
  CHECK(zero.max_abs() == 0.0);

  const Field gauss =
      sample(g, 1, [](const Point& x, int) { return std::exp(-x[0] * x[0]); });
  std::size_t argmax = 0;
  for (std::size_t n = 0; n < g.node_count(); ++n)
    if (gauss.at(0, n) > gauss.at(0, argmax)) argmax = n;
  CHECK(g.coords(argmax)[0] == doctest::Approx(0.0));

  const Field coord = sample(g, 1, [](const Point& x, int) { return x[0]; });
  for (std::size_t n = 0; n < g.node_count(); ++n)
    CHECK(coord.at(0, n) == doctest::Approx(g.coords(n)[0]));

  CHECK_THROWS_AS(sample(g, 1, [](const Point& x, int) { return 1.0 / x[0]; }),
                  std::invalid_argument);
}

TEST_CASE("stencils reproduce monomials exactly through order+1") {
  const StencilSet s;
  auto check_rule = [](const StencilSet::Rule& rule, int order) {
    for (int q = 0; q <= order + 1; ++q) {
      double acc = 0.0;
      for (std::size_t i = 0; i < rule.offsets.size(); ++i)
        acc += rule.weights[i] * std::pow(rule.offsets[i], q);
      double expect = 0.0;
      if (q == order) {
        expect = 1.0;
        for (int f = 2; f <= order; ++f) expect *= f;
      }
      CHECK(acc == doctest::Approx(expect).epsilon(1e-12));
    }
  };
  check_rule(s.centered1, 1);
  check_rule(s.centered2, 2);
  check_rule(s.centered3, 3);
  check_rule(s.onesided1, 1);
  check_rule(s.onesided2, 2);
  check_rule(s.onesided3, 3);
}

TEST_CASE("derivative is exact on quadratics and 2nd-order on sin") {
  const Grid g = make_grid(1, 1.0, 65);
  const Field sq = sample(g, 1, [](const Point& x, int) { return x[0] * x[0]; });
  const Field d2 = derivative(sq, {2, 0});
  for (std::size_t n = 1; n + 1 < g.node_count(); ++n)
    CHECK(d2.at(0, n) == doctest::Approx(2.0).epsilon(1e-9));

  const Field constant = sample(g, 1, [](const Point&, int) { return 3.5; });
  for (const MultiIndex beta : {MultiIndex{1, 0}, MultiIndex{2, 0}, MultiIndex{3, 0}})
    CHECK(derivative(constant, beta).max_abs() == doctest::Approx(0.0));

  auto interior_error = [](int n, const MultiIndex& beta, int exclude) {
    const Grid gg = make_grid(1, 1.0, n);
    const Field f = sample(gg, 1, [](const Point& x, int) { return std::sin(x[0]); });
    const Field df = derivative(f, beta);
    const int ord = order_of(beta);
    double err = 0.0;
    for (int i = exclude; i < n - exclude; ++i) {
      const double x = gg.coords(i)[0];
      const double exact = ord == 1 ? std::cos(x) : ord == 2 ? -std::sin(x) : -std::cos(x);
      err = std::max(err, std::abs(df.at(0, i) - exact));
    }
    return err;
  };
  for (const MultiIndex beta : {MultiIndex{1, 0}, MultiIndex{2, 0}, MultiIndex{3, 0}}) {
    const double e1 = interior_error(129, beta, 6);
    const double e2 = interior_error(257, beta, 12);
    CHECK(e1 / e2 >= 3.8);
  }

  CHECK_THROWS_AS(derivative(sq, MultiIndex{4, 0}), std::invalid_argument);
}

TEST_CASE("mixed derivative on a 2-D product function") {
  const Grid g = make_grid(2, 1.0, 65);
  const Field f = sample(
      g, 1, [](const Point& x, int) { return std::sin(x[0]) * std::cos(x[1]); });
  const Field dxy = derivative(f, {1, 1});
  double err = 0.0;
  for (std::size_t node = 0; node < g.node_count(); ++node) {
    const auto idx = g.multi(node);
    if (idx[0] < 4 || idx[0] > 60 || idx[1] < 4 || idx[1] > 60) continue;
    const Point x = g.coords(node);
    err = std::max(err,
                   std::abs(dxy.at(0, node) + std::cos(x[0]) * std::sin(x[1])));
  }
  CHECK(err < 5e-4);
}

namespace {

CoefficientField heat_like() { return CoefficientField::heat(1, 1); }

}  // namespace

TEST_CASE("operator action: pure diffusion on a quadratic") {
  const Grid g = make_grid(1, 2.0, 41);
  const Field u = sample(g, 1, [](const Point& x, int) { return x[0] * x[0]; });
  const Field au = apply_operator(heat_like(), u);
  for (std::size_t n = 1; n + 1 < g.node_count(); ++n)
    CHECK(au.at(0, n) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(au.at(0, 0) == 0.0);  // Dirichlet ring
  CHECK(au.at(0, g.node_count() - 1) == 0.0);
}

TEST_CASE("operator action: reaction only (disabled diffusion test mode)") {
  const CoefficientField f = CoefficientField::raw(
      1, 2, 0.0, 0.0, 0.0, 0.0, Eigen::MatrixXd::Zero(1, 1), {},
      Eigen::MatrixXd::Identity(2, 2), false);
  const Grid g = make_grid(1, 1.0, 17);
  const Field u = sample(g, 2, [](const Point& x, int c) {
    return c == 0 ? std::sin(x[0]) : std::cos(2.0 * x[0]);
  });
  const Field au = apply_operator(f, u);
  for (std::size_t n = 1; n + 1 < g.node_count(); ++n)
    for (int c = 0; c < 2; ++c)
      CHECK(au.at(c, n) == doctest::Approx(-u.at(c, n)).epsilon(1e-12));
}

TEST_CASE("operator action: first-order coupling picks up the rotated gradient") {
  Eigen::MatrixXd b(2, 2);
  b << 0, 1, -1, 0;
  const CoefficientField f = CoefficientField::raw(
      1, 2, 0.0, 0.0, 0.0, 0.0, Eigen::MatrixXd::Identity(1, 1), {b},
      Eigen::MatrixXd::Zero(2, 2), true);
  const Grid g = make_grid(1, 2.0, 41);
  const Field u = sample(g, 2, [](const Point& x, int c) { return c == 0 ? x[0] : 0.0; });
  const Field au = apply_operator(f, u);
  for (std::size_t n : {std::size_t(10), std::size_t(20), std::size_t(30)}) {
    const double x = g.coords(n)[0];
    // component 1: drift -x * 1 + coupling 0; component 2: coupling -1.
    CHECK(au.at(0, n) == doctest::Approx(-x).epsilon(1e-9));
    CHECK(au.at(1, n) == doctest::Approx(-1.0).epsilon(1e-9));
  }
}

TEST_CASE("discrete operator is linear") {
  Eigen::MatrixXd b(2, 2);
  b << 0, 1, -1, 0;
  const CoefficientField f = CoefficientField::raw(
      1, 2, 0.0, 1.0, 0.0, 1.0, Eigen::MatrixXd::Identity(1, 1), {b},
      Eigen::MatrixXd::Identity(2, 2), true);
  const Grid g = make_grid(1, 2.0, 41);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  Field u(g, 2), v(g, 2);
  for (std::size_t n = 0; n < g.node_count(); ++n)
    for (int c = 0; c < 2; ++c) {
      u.at(c, n) = val(rng);
      v.at(c, n) = val(rng);
    }
  const double a = 0.7, bb = -1.3;
  Field combo(g, 2);
  for (std::size_t n = 0; n < g.node_count(); ++n)
    for (int c = 0; c < 2; ++c) combo.at(c, n) = a * u.at(c, n) + bb * v.at(c, n);
  const Field lhs = apply_operator(f, combo);
  const Field au = apply_operator(f, u);
  const Field av = apply_operator(f, v);
  double err = 0.0;
  for (std::size_t n = 0; n < g.node_count(); ++n)
    for (int c = 0; c < 2; ++c)
      err = std::max(err, std::abs(lhs.at(c, n) - a * au.at(c, n) - bb * av.at(c, n)));
  CHECK(err < 1e-12 * 100);
}

TEST_CASE("decoupled system application equals per-component scalar application") {
  const CoefficientField sys = CoefficientField::raw(
      1, 2, 0.0, 1.0, 0.0, 1.0, Eigen::MatrixXd::Identity(1, 1),
      {Eigen::MatrixXd::Zero(2, 2)}, Eigen::MatrixXd::Identity(2, 2), true);
  const CoefficientField scal = CoefficientField::raw(
      1, 1, 0.0, 1.0, 0.0, 1.0, Eigen::MatrixXd::Identity(1, 1),
      {Eigen::MatrixXd::Zero(1, 1)}, Eigen::MatrixXd::Identity(1, 1), true);
  const Grid g = make_grid(1, 2.0, 33);
  const Field u = sample(g, 2, [](const Point& x, int c) {
    return c == 0 ? std::sin(x[0]) : std::exp(-x[0] * x[0]);
  });
  const Field au = apply_operator(sys, u);
  for (int c = 0; c < 2; ++c) {
    Field uc(g, 1);
    for (std::size_t n = 0; n < g.node_count(); ++n) uc.at(0, n) = u.at(c, n);
    const Field auc = apply_operator(scal, uc);
    for (std::size_t n = 0; n < g.node_count(); ++n)
      CHECK(au.at(c, n) == doctest::Approx(auc.at(0, n)).epsilon(1e-14));
  }
}

TEST_CASE("inner restriction") {
  const Grid g = make_grid(1, 2.0, 41);
  const Field u = sample(g, 1, [](const Point& x, int) { return std::cos(x[0]); });
  const Field same = inner_restriction(u, 0);
  CHECK(same.grid().n_per_axis == 41);

  const Field cut = inner_restriction(u, 5);
  CHECK(cut.grid().n_per_axis == 31);
  CHECK(cut.grid().spacing() == doctest::Approx(g.spacing()));
  CHECK(cut.max_abs() <= u.max_abs() + 1e-15);
  for (std::size_t n = 0; n < cut.nodes(); ++n)
    CHECK(cut.at(0, n) == doctest::Approx(std::cos(cut.grid().coords(n)[0])));

  CHECK_THROWS_AS(inner_restriction(u, 20), std::invalid_argument);
}

TEST_CASE("field CSV round-trip") {
  const Grid g = make_grid(1, 1.5, 17);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  Field u(g, 2);
  for (std::size_t n = 0; n < g.node_count(); ++n)
    for (int c = 0; c < 2; ++c) u.at(c, n) = val(rng);
  const std::string path =
      (std::filesystem::temp_directory_path() / "sl_field_roundtrip.csv").string();
  write_field_csv(u, path);
  const Field back = read_field_csv(path);
  CHECK(back.comps() == 2);
  CHECK(back.grid().n_per_axis == 17);
  for (std::size_t n = 0; n < g.node_count(); ++n)
    for (int c = 0; c < 2; ++c) CHECK(back.at(c, n) == u.at(c, n));
  std::filesystem::remove(path);
}
