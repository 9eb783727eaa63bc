#include "pb4/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace pb4 {

void validate(const OptProblem& p) {
  require(p.q >= 1 && std::isfinite(p.q), ErrorCode::InvalidArgument, "q must be finite and >= 1");
  require(p.mu > 0 && std::isfinite(p.mu), ErrorCode::InvalidArgument, "mu must be positive");
  require(p.max_iter >= 0, ErrorCode::InvalidArgument, "iteration budget must be nonnegative");
  for (const Mask* m : {&p.X0, &p.X1, &p.Y0, &p.Y1, &p.zero})
    require_same_grid(p.grid, m->grid, "optimizer mask");
  for (std::size_t k = 0; k < p.grid.size(); ++k) {
    require(!(p.X0.on[k] && p.X1.on[k]), ErrorCode::InvalidArgument, "X0 and X1 overlap");
    require(!(p.Y0.on[k] && p.Y1.on[k]), ErrorCode::InvalidArgument, "Y0 and Y1 overlap");
    require(!(p.zero.on[k] && (p.X1.on[k] || p.Y1.on[k])), ErrorCode::InvalidArgument,
            "zero ring meets X1 or Y1");
  }
  p.density.on(p.grid);
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

// Cell (i, j) spans nodes i..i+1 and j..j+1, wrapping on periodic axes. Its
// lower triangle is (i,j),(i+1,j),(i+1,j+1), its upper one (i,j),(i+1,j+1),(i,j+1).
struct Triangle {
  std::size_t a, b, c, d;  // d/dx = (v[b] - v[a]) / hx, d/dy = (v[d] - v[c]) / hy
  double cx, cy;           // centroid
};

std::vector<Triangle> triangles(const Grid2D& g) {
  const int ncx = g.periodic_x ? g.nx : g.nx - 1;
  const int ncy = g.periodic_y ? g.ny : g.ny - 1;
  const double hx = g.hx(), hy = g.hy();
  std::vector<Triangle> t;
  t.reserve(2 * static_cast<std::size_t>(ncx) * ncy);
  for (int j = 0; j < ncy; ++j) {
    const int j1 = (j + 1) % g.ny;
    for (int i = 0; i < ncx; ++i) {
      const int i1 = (i + 1) % g.nx;
      const double x0 = g.x(i), y0 = g.y(j);
      t.push_back({g.index(i, j), g.index(i1, j), g.index(i1, j), g.index(i1, j1), x0 + 2 * hx / 3, y0 + hy / 3});
      t.push_back({g.index(i, j1), g.index(i1, j1), g.index(i, j), g.index(i, j1), x0 + hx / 3, y0 + 2 * hy / 3});
    }
  }
  return t;
}

double triangle_bracket(const Triangle& t, const ScalarField& F, const ScalarField& G, double hx, double hy,
                        double w) {
  const double Fx = (F[t.b] - F[t.a]) / hx, Fy = (F[t.d] - F[t.c]) / hy;
  const double Gx = (G[t.b] - G[t.a]) / hx, Gy = (G[t.d] - G[t.c]) / hy;
  return -(Fx * Gy - Fy * Gx) / w;
}

}  // namespace

double triangle_bracket_norm(const ScalarField& F, const ScalarField& G, ExtendedExponent q,
                             const SymplecticDensity& w) {
  require_same_grid(F.grid(), G.grid(), "bracket pair");
  const Grid2D& g = F.grid();
  const double hx = g.hx(), hy = g.hy(), area = 0.5 * g.cell_area();
  double s = 0;
  for (const Triangle& t : triangles(g)) {
    const double wt = w(t.cx, t.cy);
    const double b = std::abs(triangle_bracket(t, F, G, hx, hy, wt));
    if (q.is_inf()) s = std::max(s, b);
    else s += std::pow(b, q.value) * wt * area;
  }
  return q.is_inf() ? s : std::pow(s, 1 / q.value);
}

ObjectiveValue objective(const ScalarField& F, const ScalarField& G, double q, const SymplecticDensity& w,
                         double mu, bool with_gradient) {
  require_same_grid(F.grid(), G.grid(), "objective pair");
  require(q >= 1 && std::isfinite(q) && mu > 0, ErrorCode::InvalidArgument, "need finite q >= 1 and mu > 0");
  const Grid2D& g = F.grid();
  const double hx = g.hx(), hy = g.hy(), area = 0.5 * g.cell_area();
  ObjectiveValue r{0.0, ScalarField(g), ScalarField(g)};
  std::vector<double>& dF = r.dF.values();
  std::vector<double>& dG = r.dG.values();
  for (const Triangle& t : triangles(g)) {
    const double wt = w(t.cx, t.cy);
    const double b = triangle_bracket(t, F, G, hx, hy, wt);
    const double base = b * b + mu;
    r.value += std::pow(base, 0.5 * q) * wt * area;
    if (!with_gradient) continue;
    const double lam = q * b * std::pow(base, 0.5 * q - 1) * area;  // w cancels the 1/w
    const double Fx = (F[t.b] - F[t.a]) / hx, Fy = (F[t.d] - F[t.c]) / hy;
    const double Gx = (G[t.b] - G[t.a]) / hx, Gy = (G[t.d] - G[t.c]) / hy;
    const double gFx = -lam * Gy / hx, gFy = lam * Gx / hy;
    const double gGx = lam * Fy / hx, gGy = -lam * Fx / hy;
    dF[t.b] += gFx;
    dF[t.a] -= gFx;
    dF[t.d] += gFy;
    dF[t.c] -= gFy;
    dG[t.b] += gGx;
    dG[t.a] -= gGx;
    dG[t.d] += gGy;
    dG[t.c] -= gGy;
  }
  return r;
}

void project(const OptProblem& p, ScalarField& F, ScalarField& G) {
  for (std::size_t k = 0; k < p.grid.size(); ++k) {
    F[k] = std::clamp(F[k], 0.0, 1.0);
    G[k] = std::clamp(G[k], 0.0, 1.0);
    if (p.X0.on[k]) F[k] = 0.0;
    if (p.X1.on[k]) F[k] = 1.0;
    if (p.Y0.on[k]) G[k] = 0.0;
    if (p.Y1.on[k]) G[k] = 1.0;
    if (p.zero.on[k]) F[k] = G[k] = 0.0;
  }
}

const char* certificate_status_name(CertificateStatus s) {
  return s == CertificateStatus::LOWER_RESPECTED ? "LOWER_RESPECTED" : "GAP";
}

OptResult minimize(const OptProblem& p, ScalarField F, ScalarField G) {
  validate(p);
  require(F.grid() == p.grid && G.grid() == p.grid, ErrorCode::GridMismatch,
          "initial pair must live on the problem grid");
  project(p, F, G);
  const std::size_t N = p.grid.size();
  OptResult r;
  ObjectiveValue cur = objective(F, G, p.q, p.density, p.mu);
  r.history.push_back({0, cur.value, 0.0});

  // Free coordinates only; pinned nodes never move.
  auto pinned = [&](std::size_t k, bool forF) {
    if (p.zero.on[k]) return true;
    return forF ? (p.X0.on[k] || p.X1.on[k]) : (p.Y0.on[k] || p.Y1.on[k]);
  };
  double step = p.initial_step;
  if (step <= 0) {
    double gmax = 0;
    for (std::size_t k = 0; k < N; ++k)
      gmax = std::max({gmax, std::abs(cur.dF[k]), std::abs(cur.dG[k])});
    step = gmax > 0 ? 0.1 / gmax : 1.0;
  }
  std::vector<double> prev_x, prev_g;
  r.stop_reason = "iteration budget";
  for (int it = 1; it <= p.max_iter; ++it) {
    if (!prev_x.empty()) {
      // Barzilai-Borwein step from the last accepted move.
      std::vector<double> sx(2 * N), sg(2 * N);
      for (std::size_t k = 0; k < N; ++k) {
        sx[k] = F[k] - prev_x[k];
        sx[N + k] = G[k] - prev_x[N + k];
        sg[k] = cur.dF[k] - prev_g[k];
        sg[N + k] = cur.dG[k] - prev_g[N + k];
      }
      const double ss = dot(sx, sx), sy = dot(sx, sg);
      if (sy > 0 && ss > 0) step = ss / sy;
    }
    ScalarField Fn(p.grid), Gn(p.grid);
    double t = step;
    bool accepted = false;
    ObjectiveValue next{0.0, {}, {}};
    for (int halving = 0; halving <= 50; ++halving, t *= 0.5) {
      for (std::size_t k = 0; k < N; ++k) {
        Fn[k] = pinned(k, true) ? F[k] : F[k] - t * cur.dF[k];
        Gn[k] = pinned(k, false) ? G[k] : G[k] - t * cur.dG[k];
      }
      project(p, Fn, Gn);
      next = objective(Fn, Gn, p.q, p.density, p.mu, false);
      if (next.value < cur.value) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      r.stop_reason = "line search failed";
      break;
    }
    prev_x.resize(2 * N);
    prev_g.resize(2 * N);
    for (std::size_t k = 0; k < N; ++k) {
      prev_x[k] = F[k];
      prev_x[N + k] = G[k];
      prev_g[k] = cur.dF[k];
      prev_g[N + k] = cur.dG[k];
    }
    const double before = cur.value;
    F = std::move(Fn);
    G = std::move(Gn);
    cur = objective(F, G, p.q, p.density, p.mu);
    step = t;
    r.history.push_back({it, cur.value, t});
    if (before - cur.value <= 1e-12 * before) {
      r.stop_reason = "stalled";
      break;
    }
  }
  r.final_objective = cur.value;
  r.floor = objective(ScalarField(p.grid), ScalarField(p.grid), p.q, p.density, p.mu, false).value;
  r.final_norm = triangle_bracket_norm(F, G, p.q, p.density);
  r.F = std::move(F);
  r.G = std::move(G);
  return r;
}

OptResult minimize_random(const OptProblem& p, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  ScalarField F(p.grid), G(p.grid);
  for (std::size_t k = 0; k < p.grid.size(); ++k) {
    F[k] = U(rng);
    G[k] = U(rng);
  }
  return minimize(p, std::move(F), std::move(G));
}

ScalarField prolong(const ScalarField& coarse, const Grid2D& fine) {
  const Grid2D& g = coarse.grid();
  require(!g.periodic_x && !g.periodic_y, ErrorCode::InvalidArgument, "prolong needs an open grid");
  ScalarField out(fine);
  for (int j = 0; j < fine.ny; ++j) {
    const double sy = std::clamp((fine.y(j) - g.y(0)) / g.hy(), 0.0, g.ny - 1.0);
    const int j0 = std::min(static_cast<int>(sy), g.ny - 2);
    const double ty = sy - j0;
    for (int i = 0; i < fine.nx; ++i) {
      const double sx = std::clamp((fine.x(i) - g.x(0)) / g.hx(), 0.0, g.nx - 1.0);
      const int i0 = std::min(static_cast<int>(sx), g.nx - 2);
      const double tx = sx - i0;
      // same diagonal as the triangles
      const double v00 = coarse(i0, j0), v10 = coarse(i0 + 1, j0);
      const double v01 = coarse(i0, j0 + 1), v11 = coarse(i0 + 1, j0 + 1);
      out(i, j) = tx >= ty ? v00 + tx * (v10 - v00) + ty * (v11 - v10)
                           : v00 + ty * (v01 - v00) + tx * (v11 - v01);
    }
  }
  return out;
}

OptResult minimize_multilevel(double A, double B, double q, int n, int max_iter, int levels, double mu) {
  require(levels >= 1 && max_iter >= 0, ErrorCode::InvalidArgument, "need levels >= 1");
  require((n >> (levels - 1)) >= 32, ErrorCode::InvalidArgument, "coarsest level below 32 nodes");
  OptResult r;
  for (int l = levels - 1; l >= 0; --l) {
    RectangleSetup s = rectangle_setup(A, B, q, n >> l);
    s.problem.max_iter = max_iter << l;
    s.problem.mu = mu;
    if (l == levels - 1) {
      r = minimize(s.problem, std::move(s.F0), std::move(s.G0));
    } else {
      ScalarField F = prolong(r.F, s.problem.grid), G = prolong(r.G, s.problem.grid);
      r = minimize(s.problem, std::move(F), std::move(G));
    }
  }
  return r;
}

CertificateReport certificate(const OptResult& r, double formula, double tol) {
  require(formula >= 0 && std::isfinite(formula), ErrorCode::InvalidArgument, "formula must be finite");
  CertificateReport c;
  c.final_value = r.final_norm;
  c.formula = formula;
  if (formula == 0) {
    c.ratio = std::abs(r.final_norm);
    c.status = CertificateStatus::LOWER_RESPECTED;
    return c;
  }
  c.ratio = r.final_norm / formula;
  c.status = r.final_norm >= (1 - tol) * formula ? CertificateStatus::LOWER_RESPECTED : CertificateStatus::GAP;
  return c;
}

RectangleSetup rectangle_setup(double A, double B, double q, int n) {
  require(A > 0 && std::isfinite(A), ErrorCode::InvalidArgument, "A must be positive");
  require(std::isfinite(B), ErrorCode::Unsupported, "the optimizer needs a finite ambient area");
  require(n >= 32, ErrorCode::InvalidArgument, "grid resolution must be at least 32");
  const double pad = 0.15, H = 1 + 2 * pad, left = 0.1;
  const double W = B / H;
  require(W > A + 4 * left, ErrorCode::InvalidArgument, "B too small to surround Pi");
  const Grid2D g = make_grid({-left, W - left, -pad, 1 + pad}, n, n);
  RectangleSetup s;
  OptProblem& p = s.problem;
  p.grid = g;
  p.q = q;
  const double hx = g.hx(), hy = g.hy();
  auto in01 = [](double t) { return t >= 0 && t <= 1; };
  p.X0 = Mask::where(g, [&](double x, double y) { return std::abs(x) < hx && in01(y); });
  p.X1 = Mask::where(g, [&](double x, double y) { return std::abs(x - A) < hx && in01(y); });
  p.Y0 = Mask::where(g, [&](double x, double y) { return std::abs(y) < hy && x >= 0 && x <= A; });
  p.Y1 = Mask::where(g, [&](double x, double y) { return std::abs(y - 1) < hy && x >= 0 && x <= A; });
  p.zero = Mask::none(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (i == 0 || j == 0 || i == g.nx - 1 || j == g.ny - 1) p.zero.on[g.index(i, j)] = 1;
  validate(p);

  QuadProblem qp;
  qp.A = A;
  qp.B = B;
  qp.q = q;
  qp.C = g.x_max - 0.05 - 3 * hx;
  qp.eps = std::min(0.05, 0.1 * std::min(A, qp.C - A));
  const QuadConstruction c = quad_construction(qp);
  s.F0 = sample(g, [&](double x, double y) { return c.F(x, y); });
  s.G0 = sample(g, [&](double x, double y) { return c.G(x, y); });
  project(p, s.F0, s.G0);
  return s;
}

}  // namespace pb4
