#include "pb4/curves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pb4/profiles.hpp"

namespace pb4 {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

double mod_2pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0) r += kTwoPi;
  return r >= kTwoPi ? 0.0 : r;
}

// True when theta lies on the arc [start, start + len] widened by pad.
bool on_arc(double theta, double start, double len, double pad) {
  return mod_2pi(theta - start + pad) <= len + 2 * pad;
}

double shoelace(const std::vector<std::pair<double, double>>& pts) {
  double s = 0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto& a = pts[k];
    const auto& b = pts[(k + 1) % pts.size()];
    s += a.first * b.second - b.first * a.second;
  }
  return 0.5 * std::abs(s);
}

}  // namespace

double CylinderModel::t_max() const { return (A + B) / kTwoPi; }
double CylinderModel::t_star() const { return A / kTwoPi; }

void validate(const CylinderModel& m) {
  require(m.A > 0 && m.B > 0 && std::isfinite(m.A) && std::isfinite(m.B), ErrorCode::InvalidArgument,
          "cylinder areas must be positive and finite");
}

std::pair<double, double> component_areas(const CylinderModel& m, int n) {
  validate(m);
  // Cell boundaries fall on t*, so the split is exact up to rounding.
  const int n1 = std::max(1, static_cast<int>(std::lround(n * m.A / (m.A + m.B))));
  const int n2 = std::max(1, n - n1);
  Grid2D g1 = make_grid({0, m.t_star(), 0, kTwoPi}, std::max(4, n1), n, false, true);
  Grid2D g2 = make_grid({m.t_star(), m.t_max(), 0, kTwoPi}, std::max(4, n2), n, false, true);
  ScalarField one1(g1, 1.0), one2(g2, 1.0);
  return {integrate(one1, Mask::all(g1)), integrate(one2, Mask::all(g2))};
}

double CurvePartition::arc_length(int k) const {
  const double d = mod_2pi(angles[(k + 1) % 4] - angles[k]);
  return d;
}

double CurvePartition::margin() const {
  double m = INF;
  for (int k = 0; k < 4; ++k) m = std::min(m, arc_length(k));
  return m / 8;
}

void validate(const CurvePartition& p) {
  double total = 0;
  for (int k = 0; k < 4; ++k) {
    require(std::isfinite(p.angles[k]), ErrorCode::InvalidArgument, "partition angles must be finite");
    const double L = p.arc_length(k);
    require(L > 0, ErrorCode::InvalidArgument, "partition arcs must be nonempty");
    total += L;
  }
  require(std::abs(total - kTwoPi) < 1e-9, ErrorCode::InvalidArgument,
          "partition angles must be cyclically ordered");
}

CurvePartition rotated(const CurvePartition& p, double shift) {
  CurvePartition r = p;
  for (double& a : r.angles) a = mod_2pi(a + shift);
  return r;
}

double pb4_curve_formula(double A, double B, ExtendedExponent q) {
  require(A > 0 && B > 0 && !std::isnan(A) && !std::isnan(B), ErrorCode::InvalidArgument,
          "areas must be positive");
  require(std::isfinite(A) || std::isfinite(B), ErrorCode::Unsupported,
          "no value is known when both components have infinite area");
  if (A > B) std::swap(A, B);
  if (q.value == 1.0) return 2.0;
  if (q.is_inf()) return std::isfinite(B) ? std::max(1 / A, 1 / B) : 1 / A;
  const double e = q.value - 1;
  double s = 1 / std::pow(A, e);
  if (std::isfinite(B)) s += 1 / std::pow(B, e);
  return std::pow(s, 1 / q.value);
}

AnnulusMap cylinder_to_annulus(const CylinderModel& m, double eps) {
  validate(m);
  require(eps > 0 && std::isfinite(eps), ErrorCode::InvalidArgument, "eps must be positive");
  const double e2 = eps * eps;
  AnnulusMap a;
  a.map.name = "cylinder-to-annulus";
  a.map.forward = [e2](double t, double th) {
    const double r = std::sqrt(2 * t + e2);
    return std::make_pair(r * std::cos(th), r * std::sin(th));
  };
  a.map.inverse = [e2](double X, double Y) {
    return std::make_pair(0.5 * (X * X + Y * Y - e2), mod_2pi(std::atan2(Y, X)));
  };
  a.inner_radius = eps;
  a.curve_radius = std::sqrt(m.A / std::numbers::pi + e2);
  a.outer_radius = std::sqrt((m.A + m.B) / std::numbers::pi + e2);

  const int n = 4096;
  auto image_of_circle = [&](double t) {
    std::vector<std::pair<double, double>> pts(n);
    for (int k = 0; k < n; ++k) pts[k] = a.map.forward(t, kTwoPi * k / n);
    return pts;
  };
  const auto inner = image_of_circle(0.0), curve = image_of_circle(m.t_star()),
             outer = image_of_circle(m.t_max());
  a.area_inner = shoelace(curve) - shoelace(inner);
  a.area_outer = shoelace(outer) - shoelace(curve);
  a.curve_radius_error = 0;
  for (const auto& [X, Y] : curve)
    a.curve_radius_error = std::max(a.curve_radius_error, std::abs(std::hypot(X, Y) - a.curve_radius));
  a.ok = std::abs(a.area_inner - m.A) <= 0.005 * m.A && std::abs(a.area_outer - m.B) <= 0.005 * m.B &&
         a.curve_radius_error <= 1e-12 * a.outer_radius;
  return a;
}

SmoothPair cylinder_test_pair(const CylinderModel& m, int n) {
  validate(m);
  const double T = m.t_max();
  auto bump = [T](double t, double c) {
    const double s = (t - c * T) / (0.35 * T);
    return std::abs(s) >= 1 ? 0.0 : std::exp(1.0 - 1.0 / (1.0 - s * s));
  };
  SmoothPair p;
  p.grid = make_grid({0, T, 0, kTwoPi}, n, n, false, true);
  p.F = [bump](double t, double th) { return bump(t, 0.45) * (1 + 0.5 * std::cos(th)); };
  p.G = [bump](double t, double th) { return bump(t, 0.55) * (1 + 0.5 * std::sin(2 * th)); };
  return p;
}

CurvePairResult separating_pair(const SeparatingSpec& s) {
  const CylinderModel& m = s.model;
  validate(m);
  validate(s.partition);
  require(s.C_A > 0 && s.C_A < m.A && s.C_B > 0 && s.C_B < m.B, ErrorCode::InvalidArgument,
          "need 0 < C_A < A and 0 < C_B < B");
  require(s.nt >= 16 && s.ntheta >= 16, ErrorCode::InvalidArgument, "grid resolution must be at least 16");
  const double Ap = s.C_A / kTwoPi, Cp = (s.C_A + s.C_B) / kTwoPi;
  const RampSpec rs{Ap, Cp, s.eps};
  validate(rs);
  const Grid2D g = make_grid({0, m.t_max(), 0, kTwoPi}, s.nt, s.ntheta, false, true);

  const CurvePartition& P = s.partition;
  double L[4];
  for (int k = 0; k < 4; ++k) L[k] = P.arc_length(k);
  const double mg = P.margin();
  for (int k = 0; k < 4; ++k)
    require(L[k] - 2 * mg >= 4 * g.hy(), ErrorCode::TooCoarse, "arcs too short to host transitions");

  const double shift = m.t_star() - Ap;
  const Profile1D u = ramp_u1(rs);
  // g: 0 on arc 2, rises inside arc 3, 1 on arc 4, falls inside arc 1.
  const Profile1D gp = plateau_profile(L[1] + mg, L[1] + L[2] - mg, L[1] + L[2] + L[3] + mg, kTwoPi - mg,
                                       0.4 * std::min(L[2], L[0]) - 0.8 * mg);
  // w: 0 on arc 1, rises inside arc 2, 1 on arc 3, falls inside arc 4.
  const Profile1D wp = plateau_profile(L[0] + mg, L[0] + L[1] - mg, L[0] + L[1] + L[2] + mg, kTwoPi - mg,
                                       0.4 * std::min(L[1], L[3]) - 0.8 * mg);
  auto uf = [&](double t) { return u(t - shift); };
  auto gf = [&](double th) { return gp(mod_2pi(th - P.angles[1])); };
  auto wf = [&](double th) { return wp(mod_2pi(th - P.angles[0])); };

  const double cpe = s.eps / g.hx();
  BracketMode mode = s.mode;
  if (mode == BracketMode::Auto) mode = cpe >= 8 ? BracketMode::Stencil : BracketMode::Exact;
  require(mode != BracketMode::Stencil || cpe >= 8, ErrorCode::TooCoarse,
          "stencil brackets need at least 8 cells per eps");

  const double ts = m.t_star();
  const double band = 0.375 * s.eps;
  auto near_arc = [&](int k) {
    return Mask::where(g, [&, k](double t, double th) {
      return std::abs(t - ts) <= band && on_arc(th, P.angles[k], L[k], 0.5 * mg);
    });
  };
  CurvePairResult r;
  AdmissiblePair& pair = r.pair;
  pair.F = sample(g, [&](double t, double th) { return uf(t) * wf(th); });
  pair.G = sample(g, [&](double, double th) { return gf(th); });
  pair.X0 = near_arc(0);
  pair.Y0 = near_arc(1);
  pair.X1 = near_arc(2);
  pair.Y1 = near_arc(3);
  pair.region = Mask::where(g, [&](double t, double) { return t < ts; });
  pair.admissible = check_admissible(pair.F, pair.G, pair.X0, pair.X1, pair.Y0, pair.Y1, 1e-12);
  pair.mode = mode;
  pair.bracket = mode == BracketMode::Stencil
                     ? poisson_bracket(pair.F, pair.G)
                     : sample(g, [&](double t, double th) {
                         return -u.derivative(t - shift) * wf(th) * gp.derivative(mod_2pi(th - P.angles[1]));
                       });
  r.norm = lq_norm(pair.bracket, s.q);
  r.formula = pb4_curve_formula(s.C_A, s.C_B, s.q);
  return r;
}

NonseparatingSpec default_torus_spec(int n) {
  NonseparatingSpec s;
  s.torus = make_grid({0, 1, 0, 1}, n, n, true, true);
  return s;
}

CurvePairResult nonseparating_pair(const NonseparatingSpec& s, ExtendedExponent q) {
  const Grid2D& g = s.torus;
  require(g.periodic_x && g.periodic_y, ErrorCode::InvalidArgument, "torus grid must be periodic in both axes");
  const auto& a = s.points;
  require(s.strip_lo >= g.y_min && s.strip_hi <= g.y_max && s.q0 >= g.x_min && s.q0 <= g.x_max,
          ErrorCode::InvalidArgument, "strip and meridian must lie in the torus");
  const double gaps[5] = {a[0] - s.strip_lo, a[1] - a[0], a[2] - a[1], a[3] - a[2], s.strip_hi - a[3]};
  double mg = INF;
  for (double d : gaps) {
    require(d > 0, ErrorCode::SupportViolation, "partition points must increase strictly inside the strip");
    mg = std::min(mg, d / 8);
  }
  require(mg >= g.hy(), ErrorCode::SupportViolation, "partition margins finer than the grid");

  // f: 0 on arc 1, rises on arc 2, 1 on arc 3, falls on arc 4 and vanishes off the strip.
  const Profile1D f = plateau_profile(a[1] + mg, a[2] - mg, a[3] + mg, s.strip_hi - mg,
                                      0.4 * std::min(a[2] - a[1], s.strip_hi - a[3]) - 0.8 * mg);
  // chi = 1 - g: rises on arc 1, 1 on arc 2, falls on arc 3.
  const Profile1D chi = plateau_profile(a[0] + mg, a[1] - mg, a[2] + mg, a[3] - mg,
                                        0.4 * std::min(a[1] - a[0], a[3] - a[2]) - 0.8 * mg);
  const double band = std::max(2 * g.hx(), 0.01 * (g.x_max - g.x_min));
  auto on_p_arc = [&](double p, double lo, double hi) {
    const double pad = 0.5 * mg;
    if (lo <= hi) return p >= lo - pad && p <= hi + pad;
    return p >= lo - pad || p <= hi + pad;
  };
  auto near = [&](double lo, double hi) {
    return Mask::where(g, [&, lo, hi](double x, double p) {
      return std::abs(x - s.q0) <= band && on_p_arc(p, lo, hi);
    });
  };
  CurvePairResult r;
  AdmissiblePair& pair = r.pair;
  pair.F = sample(g, [&](double, double p) { return f(p); });
  pair.G = sample(g, [&](double, double p) { return 1.0 - chi(p); });
  pair.X0 = near(a[0], a[1]);
  pair.Y0 = near(a[1], a[2]);
  pair.X1 = near(a[2], a[3]);
  pair.Y1 = near(a[3], a[0]);
  pair.region = Mask::none(g);
  pair.admissible = check_admissible(pair.F, pair.G, pair.X0, pair.X1, pair.Y0, pair.Y1, 0.0);
  pair.mode = BracketMode::Stencil;
  pair.bracket = poisson_bracket(pair.F, pair.G);
  r.norm = lq_norm(pair.bracket, q);
  r.formula = 0.0;
  return r;
}

}  // namespace pb4
