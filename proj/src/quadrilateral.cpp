#include "pb4/quadrilateral.hpp"

#include <algorithm>
#include <cmath>

namespace pb4 {

const char* exactness_name(Exactness e) {
  return e == Exactness::EXACT ? "EXACT" : "LOWER_BOUND_ONLY";
}

FormulaValue pb4_formula(double A, double B, ExtendedExponent q) {
  require(A > 0 && std::isfinite(A), ErrorCode::InvalidArgument, "A must be positive and finite");
  require(B > A, ErrorCode::InvalidArgument, "need A < B");
  const bool inf_area = (B == INF);
  if (q.is_inf()) {
    double v = inf_area ? 1.0 / A : std::max(1.0 / A, 1.0 / (B - A));
    return {v, Exactness::LOWER_BOUND_ONLY};
  }
  const double qq = q.value;
  if (qq == 1.0) return {2.0, Exactness::EXACT};
  double s = 1.0 / std::pow(A, qq - 1);
  if (!inf_area) s += 1.0 / std::pow(B - A, qq - 1);
  return {std::pow(s, 1.0 / qq), Exactness::EXACT};
}

void validate(const QuadProblem& p) {
  require(p.A > 0 && std::isfinite(p.A), ErrorCode::InvalidArgument, "A must be positive");
  require(p.B > p.A, ErrorCode::InvalidArgument, "need A < B");
  require(p.C > p.A && std::isfinite(p.C), ErrorCode::InvalidArgument, "need A < C < inf");
  require(p.B == INF || p.C < p.B, ErrorCode::InvalidArgument, "need C < B");
  validate(RampSpec{p.A, p.C, p.eps});
}

bool check_admissible(const ScalarField& F, const ScalarField& G, const Mask& X0, const Mask& X1,
                      const Mask& Y0, const Mask& Y1, double tol) {
  require_same_grid(F.grid(), G.grid(), "pair");
  for (const Mask* m : {&X0, &X1, &Y0, &Y1}) {
    require_same_grid(F.grid(), m->grid, "side mask");
    if (m->count() == 0) return false;
  }
  for (std::size_t k = 0; k < F.values().size(); ++k) {
    if (F[k] < -tol || F[k] > 1 + tol) return false;
    if (X0.on[k] && F[k] > tol) return false;
    if (X1.on[k] && F[k] < 1 - tol) return false;
    if (Y0.on[k] && G[k] > tol) return false;
    if (Y1.on[k] && G[k] < 1 - tol) return false;
  }
  return true;
}

AdmissiblePair make_pair(ScalarField F, ScalarField G, Mask X0, Mask X1, Mask Y0, Mask Y1,
                         Mask region, double tol) {
  AdmissiblePair p;
  p.admissible = check_admissible(F, G, X0, X1, Y0, Y1, tol);
  p.bracket = poisson_bracket(F, G);
  p.F = std::move(F);
  p.G = std::move(G);
  p.X0 = std::move(X0);
  p.X1 = std::move(X1);
  p.Y0 = std::move(Y0);
  p.Y1 = std::move(Y1);
  p.region = std::move(region);
  p.mode = BracketMode::Stencil;
  return p;
}

double QuadConstruction::bracket(double x, double y) const {
  const double Fx = u1.derivative(x) * v1(y), Fy = u1(x) * v1.derivative(y);
  const double Gx = u2.derivative(x) * v2(y), Gy = u2(x) * v2.derivative(y);
  return -(Fx * Gy - Fy * Gx);
}

Profile1D plateau_profile(double a0, double a1, double b0, double b1, double width) {
  require(a0 < a1 && a1 <= b0 && b0 < b1, ErrorCode::InvalidArgument,
          "plateau needs a0 < a1 <= b0 < b1");
  require(width > 0 && width < 0.5 * std::min(a1 - a0, b1 - b0), ErrorCode::InvalidArgument,
          "plateau width too large");
  const double L = std::max(a1 - a0, b1 - b0);
  std::vector<std::pair<double, double>> pts{{a0 - L, 0.0}, {a0 + 0.5 * width, 0.0},
                                             {a1 - 0.5 * width, 1.0}};
  pts.push_back({b0 + 0.5 * width, 1.0});
  pts.push_back({b1 - 0.5 * width, 0.0});
  pts.push_back({b1 + L, 0.0});
  Profile1D p = mollify(polyline(pts), 0.5 * width);
  p.parameters = {{"a0", a0}, {"a1", a1}, {"b0", b0}, {"b1", b1}, {"width", width}};
  return p;
}

QuadConstruction quad_construction(const QuadProblem& p) {
  validate(p);
  const double e = p.eps;
  QuadConstruction c;
  c.u1 = ramp_u1({p.A, p.C, e});
  c.v1 = plateau_profile(-e, 0.0, 1.0, 1.0 + e, 0.4 * e);
  c.u2 = plateau_profile(-e, 0.0, p.C, p.C + e, 0.4 * e);
  c.v2 = Profile1D::from_segments(
      {{-3 * e, -2 * e, 0.0, 0.0, 0.0, 0.0, SegmentKind::Constant},
       {-2 * e, -e, 0.0, -e, 0.0, 1.0, SegmentKind::Transition},
       {-e, 1 + e, -e, 1 + e, 1.0, 1.0, SegmentKind::Linear},
       {1 + e, 1 + 2 * e, 1 + e, 0.0, 1.0, 0.0, SegmentKind::Transition},
       {1 + 2 * e, 1 + 3 * e, 0.0, 0.0, 0.0, 0.0, SegmentKind::Constant}},
      e);
  return c;
}

Grid2D default_quad_grid(const QuadProblem& p, int n) {
  validate(p);
  require(n >= 16, ErrorCode::InvalidArgument, "grid resolution must be at least 16");
  const double e = p.eps;
  int ky = 3;
  while (2 * ky < n && static_cast<double>(ky) / (n - 2 * ky) < 3 * e) ++ky;
  require(n - 2 * ky > n / 4, ErrorCode::TooCoarse, "grid too small for the construction margin");
  const double py = static_cast<double>(ky) / (n - 2 * ky);
  int kx = 3;
  while (2 * kx < n && kx * p.C / (n - 2 * kx) < 2 * e) ++kx;
  require(n - 2 * kx > n / 4, ErrorCode::TooCoarse, "grid too small for the construction margin");
  const double px = kx * p.C / (n - 2 * kx);
  return make_grid({-px, p.C + px, -py, 1 + py}, n, n);
}

double cells_per_eps(const QuadProblem& p, const Grid2D& g) {
  return p.eps / std::max(g.hx(), g.hy());
}

AdmissiblePair build_pair(const QuadProblem& p, const Grid2D& g, BracketMode mode) {
  QuadConstruction c = quad_construction(p);
  const double e = p.eps;
  require(g.x_min < -e && g.x_max > p.C + e && g.y_min < -2 * e && g.y_max > 1 + 2 * e,
          ErrorCode::TooCoarse, "grid does not contain the construction support");
  const double cpe = cells_per_eps(p, g);
  if (mode == BracketMode::Auto) mode = cpe >= 8 ? BracketMode::Stencil : BracketMode::Exact;
  require(mode != BracketMode::Stencil || cpe >= 8, ErrorCode::TooCoarse,
          "stencil brackets need at least 8 cells per eps");

  const double A = p.A;
  // Strips of half-width 3eps/8 around the sides; when eps is below the grid
  // spacing they degrade to the layer of nodes just inside Pi.
  const double hx = g.hx(), hy = g.hy();
  const bool wide_x = 0.375 * e >= 0.5 * hx, wide_y = 0.375 * e >= 0.5 * hy;
  auto near = [](double t, double side, double strip, double h, bool wide, int inward) {
    if (wide) return std::abs(t - side) <= strip;
    const double d = (t - side) * inward;
    return d >= 0 && d < h;
  };
  const double sx = wide_x ? 0.375 * e : hx, sy = wide_y ? 0.375 * e : hy;
  auto in01 = [](double t) { return t >= 0 && t <= 1; };
  AdmissiblePair pair;
  pair.F = sample(g, [&](double x, double y) { return c.F(x, y); });
  pair.G = sample(g, [&](double x, double y) { return c.G(x, y); });
  pair.X0 = Mask::where(g, [&](double x, double y) { return near(x, 0, sx, hx, wide_x, 1) && in01(y); });
  pair.X1 = Mask::where(g, [&](double x, double y) { return near(x, A, sx, hx, wide_x, -1) && in01(y); });
  pair.Y0 = Mask::where(g, [&](double x, double y) { return near(y, 0, sy, hy, wide_y, 1) && x >= 0 && x <= A; });
  pair.Y1 = Mask::where(g, [&](double x, double y) { return near(y, 1, sy, hy, wide_y, -1) && x >= 0 && x <= A; });
  pair.region = Mask::where(g, [&](double x, double y) { return x >= 0 && x <= A && in01(y); });
  const double lip = std::max(1.0, std::max(ramp_slope_up({A, p.C, e}), ramp_slope_down({A, p.C, e})));
  pair.admissible =
      check_admissible(pair.F, pair.G, pair.X0, pair.X1, pair.Y0, pair.Y1, lip * std::max(sx, sy) + 1e-12);
  pair.mode = mode;
  pair.bracket = mode == BracketMode::Stencil
                     ? poisson_bracket(pair.F, pair.G)
                     : sample(g, [&](double x, double y) { return c.bracket(x, y); });
  return pair;
}

std::vector<ConvergenceRow> verify_upper(double A, double B, double q,
                                         const std::vector<double>& eps_schedule,
                                         const std::vector<double>& C_schedule, GridPolicy policy) {
  require(std::isfinite(q) && q >= 1, ErrorCode::InvalidArgument, "verify_upper needs finite q >= 1");
  require(!eps_schedule.empty(), ErrorCode::InvalidArgument, "eps schedule is empty");
  require(C_schedule.empty() || C_schedule.size() == eps_schedule.size(),
          ErrorCode::InvalidArgument, "C schedule length must match eps schedule");
  for (std::size_t k = 1; k < eps_schedule.size(); ++k)
    require(eps_schedule[k] < eps_schedule[k - 1], ErrorCode::InvalidArgument,
            "eps schedule must decrease");
  const double formula = pb4_formula(A, B, q).value;
  std::vector<ConvergenceRow> rows;
  for (std::size_t k = 0; k < eps_schedule.size(); ++k) {
    const double e = eps_schedule[k];
    double C = !C_schedule.empty() ? C_schedule[k]
               : B == INF        ? A * (1 + 1 / std::sqrt(e))
                                 : B - e;
    QuadProblem p{A, B, q, e, C};
    Grid2D g = default_quad_grid(p, policy.n);
    AdmissiblePair pair = build_pair(p, g, policy.mode);
    double norm = lq_norm(pair.bracket, q);
    rows.push_back({e, C, norm, formula, norm / formula});
  }
  return rows;
}

StokesRecord stokes_defect(const AdmissiblePair& pair, const Mask& region, const SymplecticDensity& w) {
  require_same_grid(pair.bracket.grid(), region.grid, "stokes region");
  StokesRecord r;
  r.signed_integral = integrate(pair.bracket, region, w);
  r.abs_integral = lq_power(pair.bracket, 1.0, region, w);
  return r;
}

LowerCertificate verify_lower(const AdmissiblePair& pair, double q, double A, double B, double tol) {
  require(std::isfinite(q) && q >= 1, ErrorCode::InvalidArgument, "verify_lower needs finite q >= 1");
  LowerCertificate c{};
  c.q = q;
  const Mask& in = pair.region;
  const Mask out = in.complement();
  c.int_region = lq_power(pair.bracket, q, in);
  c.int_complement = lq_power(pair.bracket, q, out);
  c.bound_region = 1.0 / std::pow(A, q - 1);
  c.bound_complement = B == INF ? (q == 1 ? 1.0 : 0.0) : 1.0 / std::pow(B - A, q - 1);
  std::size_t supp = 0;
  for (std::size_t k = 0; k < out.on.size(); ++k)
    if (out.on[k] && pair.bracket[k] != 0.0) ++supp;
  const double supp_area = supp * pair.bracket.grid().cell_area();
  c.holder_complement = supp_area > 0 ? 1.0 / std::pow(supp_area, q - 1) : INF;
  c.total_norm = std::pow(c.int_region + c.int_complement, 1.0 / q);
  c.formula = pb4_formula(A, B, q).value;
  c.region_ok = c.int_region >= (1 - tol) * c.bound_region;
  c.complement_ok = c.int_complement >= (1 - tol) * c.bound_complement;
  c.total_ok = c.total_norm >= (1 - tol) * c.formula;
  return c;
}

AreaMap identity_map() {
  auto id = [](double x, double y) { return std::make_pair(x, y); };
  return {"identity", id, id};
}

AreaMap shear_map(double s) {
  return {"shear", [s](double x, double y) { return std::make_pair(x + s * y, y); },
          [s](double X, double Y) { return std::make_pair(X - s * Y, Y); }};
}

namespace {

double wrap(double v, double lo, double hi) {
  const double L = hi - lo;
  double r = std::fmod(v - lo, L);
  if (r < 0) r += L;
  return lo + r;
}

void check_area_preserving(const AreaMap& m, const Grid2D& g) {
  const double hx = 1e-5 * (g.x_max - g.x_min), hy = 1e-5 * (g.y_max - g.y_min);
  for (int a = 1; a < 8; ++a) {
    for (int b = 1; b < 8; ++b) {
      const double x = g.x_min + (g.x_max - g.x_min) * a / 8.0;
      const double y = g.y_min + (g.y_max - g.y_min) * b / 8.0;
      auto [xp1, yp1] = m.forward(x + hx, y);
      auto [xm1, ym1] = m.forward(x - hx, y);
      auto [xp2, yp2] = m.forward(x, y + hy);
      auto [xm2, ym2] = m.forward(x, y - hy);
      const double Xx = (xp1 - xm1) / (2 * hx), Yx = (yp1 - ym1) / (2 * hx);
      const double Xy = (xp2 - xm2) / (2 * hy), Yy = (yp2 - ym2) / (2 * hy);
      const double det = Xx * Yy - Xy * Yx;
      require(std::abs(det - 1.0) <= 1e-4, ErrorCode::NotAreaPreserving,
              m.name + ": Jacobian determinant " + std::to_string(det));
    }
  }
}

}  // namespace

SmoothPair planar_test_pair(int n) {
  auto bump = [](double x, double y, double cx, double cy, double rad) {
    const double s2 = ((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (rad * rad);
    return s2 >= 1 ? 0.0 : std::exp(1.0 - 1.0 / (1.0 - s2));
  };
  SmoothPair p;
  p.grid = make_grid({-1, 1, -1, 1}, n, n);
  p.F = [bump](double x, double y) { return bump(x, y, -0.15, 0.0, 0.6); };
  p.G = [bump](double x, double y) { return bump(x, y, 0.15, 0.1, 0.6); };
  return p;
}

InvarianceResult symp_invariance_check(const SmoothPair& pair, const AreaMap& map, ExtendedExponent q,
                                       double tol) {
  const Grid2D& src = pair.grid;
  check_area_preserving(map, src);
  ScalarField F = sample(src, pair.F), G = sample(src, pair.G);
  InvarianceResult r{};
  r.norm_before = lq_norm(poisson_bracket(F, G), q);

  Grid2D dst = src;
  if (map.name != "identity") {
    double X0 = INF, X1 = -INF, Y0 = INF, Y1 = -INF;
    const int m = 400;
    for (int k = 0; k <= m; ++k) {
      const double s = static_cast<double>(k) / m;
      const double xs[4] = {src.x_min + s * (src.x_max - src.x_min), src.x_max,
                            src.x_min + s * (src.x_max - src.x_min), src.x_min};
      const double ys[4] = {src.y_min, src.y_min + s * (src.y_max - src.y_min), src.y_max,
                            src.y_min + s * (src.y_max - src.y_min)};
      for (int e = 0; e < 4; ++e) {
        auto [X, Y] = map.forward(xs[e], ys[e]);
        X0 = std::min(X0, X); X1 = std::max(X1, X);
        Y0 = std::min(Y0, Y); Y1 = std::max(Y1, Y);
      }
    }
    const double padx = 0.02 * (X1 - X0), pady = 0.02 * (Y1 - Y0);
    X0 -= padx; X1 += padx; Y0 -= pady; Y1 += pady;
    const double h = std::min(src.hx(), src.hy());
    const int nx = std::clamp(static_cast<int>(std::ceil((X1 - X0) / h)), 16, 2048);
    const int ny = std::clamp(static_cast<int>(std::ceil((Y1 - Y0) / h)), 16, 2048);
    dst = make_grid({X0, X1, Y0, Y1}, nx, ny);
  }
  auto pull = [&](const std::function<double(double, double)>& f) {
    return sample(dst, [&](double X, double Y) {
      auto [x, y] = map.inverse(X, Y);
      if (src.periodic_x) x = wrap(x, src.x_min, src.x_max);
      else if (x < src.x_min || x > src.x_max) return 0.0;
      if (src.periodic_y) y = wrap(y, src.y_min, src.y_max);
      else if (y < src.y_min || y > src.y_max) return 0.0;
      return f(x, y);
    });
  };
  ScalarField Ft = pull(pair.F), Gt = pull(pair.G);
  r.norm_after = lq_norm(poisson_bracket(Ft, Gt), q);
  r.rel_diff = std::abs(r.norm_after - r.norm_before) / std::max(r.norm_before, 1e-300);
  r.pass = r.rel_diff <= tol;
  return r;
}

}  // namespace pb4
