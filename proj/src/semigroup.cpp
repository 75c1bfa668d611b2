#include "semigroup_lab/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "semigroup_lab/parallel.hpp"

namespace semigroup_lab {

const Field& Trajectory::at_time(double t, double tol) const {
  for (std::size_t i = 0; i < times.size(); ++i)
    if (std::abs(times[i] - t) <= tol) return snapshots[i];
  std::ostringstream os;
  os << "no snapshot at t=" << t;
  throw std::invalid_argument(os.str());
}

namespace {

struct Problem {
  const OperatorTable* table = nullptr;
  int m = 1;
  bool scalar_potential = false;  // reaction term nu*Lambda_C instead of C
  double nu = 0.0;
  const std::function<double(double, const Point&, int)>* source = nullptr;
};

// Explicit part of the step: drift + coupling + reaction (or potential),
// plus the mixed-derivative diffusion term for d = 2; for the fully
// explicit scheme the axis diffusion is included as well.
void explicit_part(const Problem& pr, bool include_axis_diffusion, const Field& u,
                   Field& out) {
  const OperatorTable& t = *pr.table;
  const Grid& g = t.grid;
  const int n = g.n_per_axis;
  const int m = pr.m;
  const double h = g.spacing();
  const double ih2 = 1.0 / (h * h);
  const double ih1 = 1.0 / (2.0 * h);
  const bool coupling = !pr.scalar_potential && t.has_coupling;
  const bool reaction = !pr.scalar_potential && t.has_reaction;

  if (g.d == 1) {
    parallel_for_chunks(static_cast<std::size_t>(n - 2), [&](std::size_t lo, std::size_t hi, int) {
      std::vector<double> d1(m);
      for (std::size_t ii = lo; ii < hi; ++ii) {
        const std::size_t i = ii + 1;
        for (int c = 0; c < m; ++c) {
          const auto uc = u.plane(c);
          d1[c] = (uc[i + 1] - uc[i - 1]) * ih1;
          double val = t.b[i] * d1[c];
          if (include_axis_diffusion)
            val += t.q[i] * (uc[i + 1] - 2.0 * uc[i] + uc[i - 1]) * ih2;
          out.at(c, i) = val;
        }
        if (coupling) {
          const double* bh = &t.bhat[i * m * m];
          for (int c = 0; c < m; ++c) {
            double acc = 0.0;
            for (int j = 0; j < m; ++j) acc += bh[c * m + j] * d1[j];
            out.at(c, i) += acc;
          }
        }
        if (reaction) {
          const double* cm = &t.c[i * m * m];
          for (int c = 0; c < m; ++c) {
            double acc = 0.0;
            for (int j = 0; j < m; ++j) acc += cm[c * m + j] * u.at(j, i);
            out.at(c, i) += acc;
          }
        }
        if (pr.scalar_potential) {
          const double pot = pr.nu * t.lambda_c[i];
          for (int c = 0; c < m; ++c) out.at(c, i) += pot * u.at(c, i);
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
      const double q12 = t.q[node * 3 + 2];
      for (int c = 0; c < m; ++c) {
        const auto uc = u.plane(c);
        const double uxp = uc[node + n], uxm = uc[node - n];
        const double uyp = uc[node + 1], uym = uc[node - 1];
        d1[0 * m + c] = (uxp - uxm) * ih1;
        d1[1 * m + c] = (uyp - uym) * ih1;
        const double uxy =
            (uc[node + n + 1] - uc[node + n - 1] - uc[node - n + 1] + uc[node - n - 1]) *
            ih1 * ih1;
        double val = 2.0 * q12 * uxy + t.b[node * 2 + 0] * d1[0 * m + c] +
                     t.b[node * 2 + 1] * d1[1 * m + c];
        if (include_axis_diffusion) {
          const double u00 = uc[node];
          val += t.q[node * 3 + 0] * (uxp - 2.0 * u00 + uxm) * ih2 +
                 t.q[node * 3 + 1] * (uyp - 2.0 * u00 + uym) * ih2;
        }
        out.at(c, node) = val;
      }
      if (coupling) {
        for (int a = 0; a < 2; ++a) {
          const double* bh = &t.bhat[((node * 2) + a) * m * m];
          for (int c = 0; c < m; ++c) {
            double acc = 0.0;
            for (int j = 0; j < m; ++j) acc += bh[c * m + j] * d1[a * m + j];
            out.at(c, node) += acc;
          }
        }
      }
      if (reaction) {
        const double* cm = &t.c[node * m * m];
        for (int c = 0; c < m; ++c) {
          double acc = 0.0;
          for (int j = 0; j < m; ++j) acc += cm[c * m + j] * u.at(j, node);
          out.at(c, node) += acc;
        }
      }
      if (pr.scalar_potential) {
        const double pot = pr.nu * t.lambda_c[node];
        for (int c = 0; c < m; ++c) out.at(c, node) += pot * u.at(c, node);
      }
    }
  });
}

// y = (I - dt * axis diffusion) x on the interior; identity on the ring.
void implicit_apply(const OperatorTable& t, double dt, std::span<const double> x,
                    std::span<double> y) {
  const Grid& g = t.grid;
  const int n = g.n_per_axis;
  const double ih2 = 1.0 / (g.spacing() * g.spacing());
  if (g.d == 1) {
    y[0] = x[0];
    y[n - 1] = x[n - 1];
    for (int i = 1; i < n - 1; ++i)
      y[i] = x[i] - dt * t.q[i] * (x[i + 1] - 2.0 * x[i] + x[i - 1]) * ih2;
    return;
  }
  const std::size_t nodes = g.node_count();
  parallel_for_chunks(nodes, [&](std::size_t lo, std::size_t hi, int) {
    for (std::size_t node = lo; node < hi; ++node) {
      const int i0 = static_cast<int>(node / n);
      const int i1 = static_cast<int>(node % n);
      if (i0 == 0 || i0 == n - 1 || i1 == 0 || i1 == n - 1) {
        y[node] = x[node];
        continue;
      }
      const double lap = t.q[node * 3 + 0] * (x[node + n] - 2.0 * x[node] + x[node - n]) +
                         t.q[node * 3 + 1] * (x[node + 1] - 2.0 * x[node] + x[node - 1]);
      y[node] = x[node] - dt * lap * ih2;
    }
  });
}

// Jacobi-preconditioned BiCGSTAB for the per-component implicit system.
// The diffusion block is positive definite per component up to the diagonal
// row scaling by q(x); BiCGSTAB handles that scaling robustly.
long bicgstab(const OperatorTable& t, double dt, std::span<const double> rhs,
              std::span<double> x, double tol, long max_iter) {
  const std::size_t n = rhs.size();
  const Grid& g = t.grid;
  const double ih2 = 1.0 / (g.spacing() * g.spacing());
  std::vector<double> diag(n, 1.0);
  for (std::size_t node = 0; node < n; ++node) {
    if (g.on_boundary(node)) continue;
    const double qsum =
        g.d == 1 ? t.q[node] : t.q[node * 3 + 0] + t.q[node * 3 + 1];
    diag[node] = 1.0 + 2.0 * dt * qsum * ih2;
  }
  std::vector<double> r(n), r0(n), pv(n), v(n), s(n), tv(n), phat(n), shat(n);
  auto dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
  };
  implicit_apply(t, dt, x, r);
  double rhs_norm2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = rhs[i] - r[i];
    rhs_norm2 += rhs[i] * rhs[i];
  }
  const double stop2 = tol * tol * (rhs_norm2 + 1e-300);
  if (dot(r, r) <= stop2) return 0;
  r0 = r;
  double rho_old = 1.0, alpha = 1.0, omega = 1.0;
  std::fill(pv.begin(), pv.end(), 0.0);
  std::fill(v.begin(), v.end(), 0.0);
  for (long it = 1; it <= max_iter; ++it) {
    const double rho = dot(r0, r);
    if (rho == 0.0) break;
    const double beta = (rho / rho_old) * (alpha / omega);
    for (std::size_t i = 0; i < n; ++i) pv[i] = r[i] + beta * (pv[i] - omega * v[i]);
    for (std::size_t i = 0; i < n; ++i) phat[i] = pv[i] / diag[i];
    implicit_apply(t, dt, phat, v);
    alpha = rho / dot(r0, v);
    for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    if (dot(s, s) <= stop2) {
      for (std::size_t i = 0; i < n; ++i) x[i] += alpha * phat[i];
      return it;
    }
    for (std::size_t i = 0; i < n; ++i) shat[i] = s[i] / diag[i];
    implicit_apply(t, dt, shat, tv);
    omega = dot(tv, s) / (dot(tv, tv) + 1e-300);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * phat[i] + omega * shat[i];
      r[i] = s[i] - omega * tv[i];
    }
    if (dot(r, r) <= stop2) return it;
    rho_old = rho;
  }
  return -1;
}

Trajectory run_evolution(const Field& f, const EvolveConfig& cfg, const Problem& pr) {
  const OperatorTable& tab = *pr.table;
  const Grid& g = tab.grid;
  if (cfg.dt <= 0.0) throw std::invalid_argument("dt must be positive");
  const double h = g.spacing();

  // Stability constraints on the explicit part.
  if (cfg.scheme == Scheme::explicit_euler) {
    const double limit =
        cfg.cfl_safety * h * h / (2.0 * g.d * std::max(tab.max_big_lambda_q, 1e-300));
    if (cfg.dt > limit) {
      std::ostringstream os;
      os << "explicit scheme CFL violated: dt=" << cfg.dt << " > " << limit;
      throw NumericalAbort(os.str(), 0);
    }
  } else if (tab.max_abs_drift > 0.0) {
    const double limit = cfg.cfl_safety * h / tab.max_abs_drift;
    if (cfg.dt > limit) {
      std::ostringstream os;
      os << "advective CFL violated: dt=" << cfg.dt << " > " << limit;
      throw NumericalAbort(os.str(), 0);
    }
  }

  Trajectory out;
  out.dt_used = cfg.dt;
  if (!cfg.hypotheses_checked)
    out.warning = "no hypothesis report attached to this coefficient field";

  std::vector<double> snaps = cfg.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  snaps.erase(std::unique(snaps.begin(), snaps.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              snaps.end());

  out.times.push_back(0.0);
  out.snapshots.push_back(f);

  const long nsteps = static_cast<long>(std::ceil(cfg.t_final / cfg.dt - 1e-9));
  const double f_scale = f.max_abs() + 1e-300;
  const double blowup = cfg.blowup_factor * f_scale;

  Field u = f;
  // Dirichlet ring is zero for t > 0.
  for (std::size_t node = 0; node < g.node_count(); ++node)
    if (g.on_boundary(node))
      for (int c = 0; c < pr.m; ++c) u.at(c, node) = 0.0;
  Field u_prev = u;
  Field expl(g, pr.m);
  std::vector<double> rhs(g.node_count());
  std::size_t next_snap = 0;
  while (next_snap < snaps.size() && snaps[next_snap] <= 1e-12) ++next_snap;

  out.step_max_abs.reserve(nsteps);
  for (long step = 0; step < nsteps; ++step) {
    const double t0 = step * cfg.dt;
    const double t1 = t0 + cfg.dt;
    u_prev.raw() = u.raw();

    explicit_part(pr, cfg.scheme == Scheme::explicit_euler, u, expl);
    if (cfg.scheme == Scheme::explicit_euler) {
      for (int c = 0; c < pr.m; ++c) {
        auto uc = u.plane(c);
        const auto ec = expl.plane(c);
        for (std::size_t i = 0; i < uc.size(); ++i) uc[i] += cfg.dt * ec[i];
      }
    } else {
      for (int c = 0; c < pr.m; ++c) {
        auto uc = u.plane(c);
        const auto ec = expl.plane(c);
        for (std::size_t i = 0; i < uc.size(); ++i) rhs[i] = uc[i] + cfg.dt * ec[i];
        if (pr.source) {
          for (std::size_t i = 0; i < uc.size(); ++i) {
            if (g.on_boundary(i)) continue;
            rhs[i] += cfg.dt * (*pr.source)(t0, g.coords(i), c);
          }
        }
        for (std::size_t i = 0; i < uc.size(); ++i)
          if (g.on_boundary(i)) rhs[i] = 0.0;
        const long iters = bicgstab(tab, cfg.dt, rhs, uc, cfg.solver_tol, 10000);
        if (iters < 0) throw NumericalAbort("diffusion solve stalled", step);
      }
    }
    if (cfg.scheme == Scheme::explicit_euler) {
      if (pr.source) {
        for (int c = 0; c < pr.m; ++c) {
          auto uc = u.plane(c);
          for (std::size_t i = 0; i < uc.size(); ++i) {
            if (g.on_boundary(i)) continue;
            uc[i] += cfg.dt * (*pr.source)(t0, g.coords(i), c);
          }
        }
      }
      for (std::size_t node = 0; node < g.node_count(); ++node)
        if (g.on_boundary(node))
          for (int c = 0; c < pr.m; ++c) u.at(c, node) = 0.0;
    }

    const double umax = u.max_abs();
    out.step_max_abs.push_back(umax);
    if (!std::isfinite(umax) || umax > blowup)
      throw NumericalAbort("state blow-up", step);

    while (next_snap < snaps.size() && snaps[next_snap] <= t1 + 1e-12) {
      const double ts = snaps[next_snap];
      const double w = std::clamp((ts - t0) / cfg.dt, 0.0, 1.0);
      Field snap(g, pr.m);
      for (int c = 0; c < pr.m; ++c) {
        auto sc = snap.plane(c);
        const auto a = u_prev.plane(c);
        const auto b = u.plane(c);
        for (std::size_t i = 0; i < sc.size(); ++i) sc[i] = (1.0 - w) * a[i] + w * b[i];
      }
      out.times.push_back(ts);
      out.snapshots.push_back(std::move(snap));
      ++next_snap;
    }
  }
  out.steps = nsteps;
  return out;
}

}  // namespace

Trajectory evolve(const CoefficientField& coeffs, const Field& f, const EvolveConfig& cfg) {
  if (coeffs.dim() != f.grid().d) throw std::invalid_argument("dimension mismatch");
  if (coeffs.comps() != f.comps()) throw std::invalid_argument("component count mismatch");
  const OperatorTable tab = OperatorTable::build(coeffs, f.grid());
  Problem pr;
  pr.table = &tab;
  pr.m = f.comps();
  return run_evolution(f, cfg, pr);
}

Trajectory evolve_scalar_comparison(const CoefficientField& coeffs, double nu,
                                    const Field& f, const EvolveConfig& cfg) {
  if (nu < 0.0 || nu >= 2.0) throw std::invalid_argument("nu must lie in [0,2)");
  if (coeffs.dim() != f.grid().d) throw std::invalid_argument("dimension mismatch");
  if (f.comps() != 1) throw std::invalid_argument("comparison data must be scalar");
  const OperatorTable tab = OperatorTable::build(coeffs, f.grid());
  Problem pr;
  pr.table = &tab;
  pr.m = 1;
  pr.scalar_potential = true;
  pr.nu = nu;
  return run_evolution(f, cfg, pr);
}

std::vector<TruncationRow> truncation_study(
    const CoefficientField& coeffs, const std::function<double(const Point&, int)>& f,
    int comps, double t, const std::vector<double>& half_widths, double spacing,
    const EvolveConfig& cfg, int core_margin_cells) {
  if (half_widths.size() < 2) throw std::invalid_argument("need at least two radii");
  for (std::size_t i = 1; i < half_widths.size(); ++i)
    if (half_widths[i] <= half_widths[i - 1])
      throw std::invalid_argument("radii must increase");

  std::vector<Field> cores;
  std::vector<TruncationRow> rows;
  for (double L : half_widths) {
    int n = static_cast<int>(std::lround(2.0 * L / spacing)) + 1;
    if (n % 2 == 0) ++n;
    const Grid g = make_grid(coeffs.dim(), L, n);
    Field f0 = sample(g, comps, f);
    EvolveConfig c = cfg;
    c.t_final = t;
    c.snapshot_times = {t};
    const Trajectory traj = comps == 1 && coeffs.comps() != 1
                                ? evolve_scalar_comparison(coeffs, 0.0, f0, c)
                                : evolve(coeffs, f0, c);
    // Common core: the smallest box minus the requested margin.
    const double core_L = half_widths.front() - core_margin_cells * spacing;
    const int margin = static_cast<int>(std::lround((L - core_L) / spacing));
    cores.push_back(inner_restriction(traj.at_time(t), margin));
  }

  for (std::size_t i = 0; i < cores.size(); ++i) {
    TruncationRow row;
    row.half_width = half_widths[i];
    row.core_sup = cores[i].max_abs();
    if (i > 0) {
      double dev = 0.0;
      double min_inc = std::numeric_limits<double>::infinity();
      for (int c = 0; c < comps; ++c) {
        const auto a = cores[i].plane(c);
        const auto b = cores[i - 1].plane(c);
        for (std::size_t j = 0; j < a.size(); ++j) {
          dev = std::max(dev, std::abs(a[j] - b[j]));
          min_inc = std::min(min_inc, a[j] - b[j]);
        }
      }
      row.deviation_from_prev = dev;
      row.min_increment_from_prev = min_inc;
    }
    rows.push_back(row);
  }
  return rows;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int l = 2; l <= n; ++l) {
        const double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        break;
      }
    }
  }
}

ResolventResult resolvent(const CoefficientField& coeffs, const Field& f, double lambda,
                          const QuadratureConfig& qcfg, const EvolveConfig& cfg, double nu) {
  const GrowthConstants gc = growth_constants(coeffs, nu, 2.0);
  if (!gc.h_finite) throw std::invalid_argument("H is not finite for this field");
  if (lambda <= gc.h_nu)
    throw std::invalid_argument("resolvent requires lambda > H_nu");
  if (qcfg.s_max <= 0.0) throw std::invalid_argument("s_max must be positive");

  std::vector<double> gl_x, gl_w;
  gauss_legendre(std::max(2, qcfg.points_per_panel), gl_x, gl_w);

  std::vector<double> s_nodes, s_weights;
  const int J = std::max(1, qcfg.panels);
  for (int j = 1; j <= J; ++j) {
    const double a = qcfg.s_max * std::pow((j - 1.0) / J, 2.0);
    const double b = qcfg.s_max * std::pow(static_cast<double>(j) / J, 2.0);
    for (std::size_t q = 0; q < gl_x.size(); ++q) {
      s_nodes.push_back(0.5 * (a + b) + 0.5 * (b - a) * gl_x[q]);
      s_weights.push_back(0.5 * (b - a) * gl_w[q]);
    }
  }

  EvolveConfig ec = cfg;
  ec.t_final = qcfg.s_max;
  ec.snapshot_times = s_nodes;
  const Trajectory traj = evolve(coeffs, f, ec);

  ResolventResult res;
  res.u = Field(f.grid(), f.comps());
  res.lambda = lambda;
  res.h_nu = gc.h_nu;
  for (std::size_t q = 0; q < s_nodes.size(); ++q) {
    const Field& snap = traj.at_time(s_nodes[q], 1e-9 + 1e-12 * s_nodes[q]);
    const double w = s_weights[q] * std::exp(-lambda * s_nodes[q]);
    for (int c = 0; c < f.comps(); ++c) {
      auto uc = res.u.plane(c);
      const auto sc = snap.plane(c);
      for (std::size_t i = 0; i < uc.size(); ++i) uc[i] += w * sc[i];
    }
  }
  res.tail_bound = std::exp(-(lambda - gc.h_nu) * qcfg.s_max) / (lambda - gc.h_nu);
  res.tail_warning = res.tail_bound > qcfg.tail_tol;
  return res;
}

MildResult mild_solution(const CoefficientField& coeffs, const Field& f,
                         const std::function<double(double, const Point&, int)>& g,
                         double t_final, const EvolveConfig& cfg) {
  if (coeffs.dim() != f.grid().d) throw std::invalid_argument("dimension mismatch");
  if (coeffs.comps() != f.comps()) throw std::invalid_argument("component count mismatch");
  const OperatorTable tab = OperatorTable::build(coeffs, f.grid());

  MildResult out;
  {
    Problem pr;
    pr.table = &tab;
    pr.m = f.comps();
    pr.source = &g;
    EvolveConfig c = cfg;
    c.t_final = t_final;
    c.snapshot_times = cfg.snapshot_times;
    if (std::find_if(c.snapshot_times.begin(), c.snapshot_times.end(), [&](double t) {
          return std::abs(t - t_final) < 1e-12;
        }) == c.snapshot_times.end())
      c.snapshot_times.push_back(t_final);
    out.trajectory = run_evolution(f, c, pr);
  }

  // Duhamel cross-check: v(t) = T(t) f + sum_q w_q T(s_q) g(t - s_q).
  Field duhamel(f.grid(), f.comps());
  {
    EvolveConfig c = cfg;
    c.t_final = t_final;
    c.snapshot_times = {t_final};
    const Trajectory base = evolve(coeffs, f, c);
    duhamel = base.at_time(t_final);

    std::vector<double> gl_x, gl_w;
    gauss_legendre(3, gl_x, gl_w);
    const int panels = 4;
    for (int j = 0; j < panels; ++j) {
      const double a = t_final * j / panels;
      const double b = t_final * (j + 1) / panels;
      for (std::size_t q = 0; q < gl_x.size(); ++q) {
        const double s = 0.5 * (a + b) + 0.5 * (b - a) * gl_x[q];
        const double w = 0.5 * (b - a) * gl_w[q];
        const Field gs = sample(f.grid(), f.comps(),
                                [&](const Point& x, int comp) { return g(t_final - s, x, comp); });
        EvolveConfig cs = cfg;
        cs.t_final = s;
        cs.snapshot_times = {s};
        const Trajectory leg = evolve(coeffs, gs, cs);
        const Field& Ts = leg.at_time(s);
        for (int comp = 0; comp < f.comps(); ++comp) {
          auto dc = duhamel.plane(comp);
          const auto sc = Ts.plane(comp);
          for (std::size_t i = 0; i < dc.size(); ++i) dc[i] += w * sc[i];
        }
      }
    }
  }

  const Field& direct = out.trajectory.at_time(t_final);
  const int margin = std::max(1, f.grid().n_per_axis / 10);
  const Field a = inner_restriction(direct, margin);
  const Field b = inner_restriction(duhamel, margin);
  double dev = 0.0;
  for (std::size_t i = 0; i < a.raw().size(); ++i)
    dev = std::max(dev, std::abs(a.raw()[i] - b.raw()[i]));
  out.duhamel_rel_deviation = dev / (a.max_abs() + 1e-300);
  return out;
}

}  // namespace semigroup_lab
