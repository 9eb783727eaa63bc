#include "pb4/profiles.hpp"

#include <algorithm>
#include <cmath>

#include "pb4/field.hpp"

namespace pb4 {

const char* segment_kind_name(SegmentKind k) {
  switch (k) {
    case SegmentKind::Constant: return "constant";
    case SegmentKind::Linear: return "linear";
    case SegmentKind::Transition: return "transition";
  }
  return "?";
}

namespace {

double hermite_value(const Segment& s, double t) {
  if (s.kind != SegmentKind::Transition) return s.v0 + s.s0 * (t - s.t0);
  const double L = s.t1 - s.t0;
  const double u = (t - s.t0) / L;
  const double u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * s.v0 + (u3 - 2 * u2 + u) * L * s.s0 + (-2 * u3 + 3 * u2) * s.v1 +
         (u3 - u2) * L * s.s1;
}

double hermite_slope(const Segment& s, double t) {
  if (s.kind != SegmentKind::Transition) return s.s0;
  const double L = s.t1 - s.t0;
  const double u = (t - s.t0) / L;
  const double u2 = u * u;
  return ((6 * u2 - 6 * u) * s.v0 + (-6 * u2 + 6 * u) * s.v1) / L + (3 * u2 - 4 * u + 1) * s.s0 +
         (3 * u2 - 2 * u) * s.s1;
}

SegmentKind kind_for(double v0, double v1) {
  return v0 == v1 ? SegmentKind::Constant : SegmentKind::Linear;
}

}  // namespace

Profile1D Profile1D::from_segments(std::vector<Segment> segs, double mollification_width) {
  require(!segs.empty(), ErrorCode::InvalidArgument, "profile needs at least one segment");
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const Segment& s = segs[k];
    require(s.t0 < s.t1, ErrorCode::InvalidArgument, "segment must have t0 < t1");
    if (k > 0) {
      require(std::abs(segs[k - 1].t1 - s.t0) <= 1e-12 * (1 + std::abs(s.t0)),
              ErrorCode::InvalidArgument, "segments must be contiguous");
      require(std::abs(segs[k - 1].v1 - s.v0) <= 1e-12 * (1 + std::abs(s.v0)),
              ErrorCode::InvalidArgument, "profile must be continuous");
    }
  }
  Profile1D p;
  p.segs_ = std::move(segs);
  p.width_ = mollification_width;
  return p;
}

Profile1D Profile1D::radial(double alpha, const Profile1D& base) {
  Profile1D p;
  p.alpha_ = alpha;
  p.base_ = std::make_shared<const Profile1D>(base);
  p.width_ = base.width_;
  p.parameters = base.parameters;
  p.parameters["alpha"] = alpha;
  return p;
}

const Segment& Profile1D::locate(double t) const {
  auto it = std::upper_bound(segs_.begin(), segs_.end(), t,
                             [](double v, const Segment& s) { return v < s.t1; });
  if (it == segs_.end()) return segs_.back();
  return *it;
}

double Profile1D::operator()(double t) const {
  if (base_) return (*base_)(t <= 0 ? 0.0 : std::pow(t, alpha_));
  if (t < segs_.front().t0) return segs_.front().v0 + segs_.front().s0 * (t - segs_.front().t0);
  if (t >= segs_.back().t1) return segs_.back().v1 + segs_.back().s1 * (t - segs_.back().t1);
  return hermite_value(locate(t), t);
}

double Profile1D::derivative(double t) const {
  if (base_) {
    if (t <= 0) return 0.0;
    const double s = std::pow(t, alpha_);
    const double d = base_->derivative(s);
    if (d == 0.0) return 0.0;
    return d * alpha_ * std::pow(t, alpha_ - 1.0);
  }
  if (t < segs_.front().t0) return segs_.front().s0;
  if (t >= segs_.back().t1) return segs_.back().s1;
  return hermite_slope(locate(t), t);
}

std::vector<double> Profile1D::breakpoints() const {
  if (base_) {
    std::vector<double> out{0.0};
    for (double b : base_->breakpoints())
      if (b > 0) out.push_back(std::pow(b, 1.0 / alpha_));
    return out;
  }
  std::vector<double> out;
  out.reserve(segs_.size() + 1);
  out.push_back(segs_.front().t0);
  for (const auto& s : segs_) out.push_back(s.t1);
  return out;
}

double Profile1D::support_end() const {
  if (base_) {
    double e = base_->support_end();
    return e == INF ? INF : (e <= 0 ? 0.0 : std::pow(e, 1.0 / alpha_));
  }
  const Segment& last = segs_.back();
  if (last.v1 != 0.0 || last.s1 != 0.0) return INF;
  double end = last.t1;
  for (auto it = segs_.rbegin(); it != segs_.rend(); ++it) {
    if (it->kind == SegmentKind::Constant && it->v0 == 0.0) end = it->t0;
    else break;
  }
  return end;
}

double Profile1D::support_begin() const {
  if (base_) return 0.0;
  const Segment& first = segs_.front();
  if (first.v0 != 0.0 || first.s0 != 0.0) return -INF;
  double begin = first.t0;
  for (const auto& s : segs_) {
    if (s.kind == SegmentKind::Constant && s.v0 == 0.0) begin = s.t1;
    else break;
  }
  return begin;
}

double Profile1D::max_abs_derivative() const {
  std::vector<double> bp = breakpoints();
  double mx = 0;
  for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
    const double a = bp[k], b = bp[k + 1];
    const int n = 2000;
    for (int i = 0; i <= n; ++i) mx = std::max(mx, std::abs(derivative(a + (b - a) * i / n)));
  }
  return mx;
}

Profile1D constant_profile(double value, double t0, double t1) {
  return Profile1D::from_segments({{t0, t1, value, value, 0, 0, SegmentKind::Constant}});
}

Profile1D linear_profile(double t0, double t1, double v0, double v1) {
  const double s = (v1 - v0) / (t1 - t0);
  return Profile1D::from_segments({{t0, t1, v0, v1, s, s, kind_for(v0, v1)}});
}

Profile1D polyline(const std::vector<std::pair<double, double>>& pts) {
  require(pts.size() >= 2, ErrorCode::InvalidArgument, "polyline needs two points");
  std::vector<Segment> segs;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    auto [t0, v0] = pts[k];
    auto [t1, v1] = pts[k + 1];
    require(t0 < t1, ErrorCode::InvalidArgument, "polyline abscissae must increase");
    const double s = (v1 - v0) / (t1 - t0);
    segs.push_back({t0, t1, v0, v1, s, s, kind_for(v0, v1)});
  }
  return Profile1D::from_segments(std::move(segs));
}

Profile1D mollify(const Profile1D& p, double width) {
  require(!p.is_radial(), ErrorCode::InvalidArgument, "mollify takes a piecewise linear profile");
  require(width > 0 && std::isfinite(width), ErrorCode::InvalidArgument, "width must be positive");
  const auto& in = p.segments();
  double shortest = INF;
  for (const auto& s : in) {
    require(s.kind != SegmentKind::Transition, ErrorCode::InvalidArgument,
            "mollify takes a piecewise linear profile");
    shortest = std::min(shortest, s.t1 - s.t0);
  }
  require(width < 0.5 * shortest, ErrorCode::InvalidArgument,
          "width must be smaller than half the shortest segment");

  std::vector<Segment> out;
  Segment cur = in.front();
  for (std::size_t k = 1; k < in.size(); ++k) {
    Segment next = in[k];
    const double a = cur.s1, c = next.s0;
    if (a == c) {
      out.push_back(cur);
      cur = next;
      continue;
    }
    const double b = cur.t1;
    const double vl = cur.v1 - a * width, vr = next.v0 + c * width;
    cur.t1 = b - width;
    cur.v1 = vl;
    out.push_back(cur);
    out.push_back({b - width, b + width, vl, vr, a, c, SegmentKind::Transition});
    next.t0 = b + width;
    next.v0 = vr;
    cur = next;
  }
  out.push_back(cur);
  Profile1D r = Profile1D::from_segments(std::move(out), width);
  r.parameters = p.parameters;
  return r;
}

Profile1D smooth_step(double t0, double t1, double width) {
  require(t0 < t1, ErrorCode::InvalidArgument, "smooth_step needs t0 < t1");
  require(width > 0, ErrorCode::InvalidArgument, "smooth_step width must be positive");
  require(width < 0.5 * (t1 - t0), ErrorCode::InvalidArgument,
          "smooth_step width must be below (t1 - t0)/2");
  const double L = t1 - t0;
  const double a = t0 + 0.5 * width, b = t1 - 0.5 * width;
  Profile1D p = mollify(polyline({{a - L, 0.0}, {a, 0.0}, {b, 1.0}, {b + L, 1.0}}), 0.5 * width);
  p.parameters = {{"t0", t0}, {"t1", t1}, {"width", width}};
  return p;
}

void validate(const RampSpec& s) {
  require(s.A > 0 && s.C > s.A && std::isfinite(s.C), ErrorCode::InvalidArgument,
          "ramp needs 0 < A < C < inf");
  require(s.eps > 0 && 8 * s.eps < std::min(s.A, s.C - s.A), ErrorCode::InvalidArgument,
          "ramp needs 0 < 8 eps < min(A, C - A)");
}

double ramp_slope_up(const RampSpec& s) { return (1 - 2 * s.eps) / (s.A - 4 * s.eps); }
double ramp_slope_down(const RampSpec& s) { return (1 - 2 * s.eps) / ((s.C - s.A) - 4 * s.eps); }

Profile1D ramp_u1(const RampSpec& s) {
  validate(s);
  const double A = s.A, C = s.C, e = s.eps;
  const double m1 = ramp_slope_up(s), m2 = ramp_slope_down(s);
  const double w = std::min(e / 8, e / (2 * std::max(m1, m2)));
  Profile1D p = mollify(polyline({{-e, 0.0},
                                  {0.5 * e, 0.0},
                                  {2 * e - w, e - m1 * w},
                                  {A - 2 * e + w, 1 - e + m1 * w},
                                  {A - 0.5 * e, 1.0},
                                  {A + 0.5 * e, 1.0},
                                  {A + 2 * e - w, 1 - e + m2 * w},
                                  {C - 2 * e + w, e - m2 * w},
                                  {C - 0.5 * e, 0.0},
                                  {C + e, 0.0}}),
                        w);
  p.parameters = {{"A", A}, {"C", C}, {"eps", e}, {"slope_up", m1}, {"slope_down", m2}};
  return p;
}

Profile1D default_base_profile(double plateau_end, double support_end) {
  require(0 < plateau_end && plateau_end < support_end && support_end <= 0.5,
          ErrorCode::InvalidArgument, "base profile needs 0 < plateau_end < support_end <= 1/2");
  Profile1D p = Profile1D::from_segments(
      {{-1.0, plateau_end, 1.0, 1.0, 0.0, 0.0, SegmentKind::Constant},
       {plateau_end, support_end, 1.0, 0.0, 0.0, 0.0, SegmentKind::Transition},
       {support_end, 1.0, 0.0, 0.0, 0.0, 0.0, SegmentKind::Constant}},
      support_end - plateau_end);
  p.parameters = {{"plateau_end", plateau_end}, {"support_end", support_end}};
  return p;
}

Profile1D radial_decay(double alpha, const Profile1D& base) {
  require(alpha > 0 && alpha <= 1, ErrorCode::InvalidArgument, "alpha must lie in (0, 1]");
  require(!base.is_radial(), ErrorCode::InvalidArgument, "base must be a plain profile");
  require(base(0.0) == 1.0 && base.derivative(0.0) == 0.0 && base.segments().front().t0 < 0 &&
              base.segments().front().kind == SegmentKind::Constant,
          ErrorCode::InvalidArgument, "base must equal 1 near 0");
  require(base.support_end() <= 0.5, ErrorCode::InvalidArgument,
          "base must be supported in [0, 1/2]");
  std::vector<double> bp = base.breakpoints();
  for (std::size_t k = 0; k + 1 < bp.size(); ++k)
    for (int i = 0; i <= 64; ++i) {
      double v = base(bp[k] + (bp[k + 1] - bp[k]) * i / 64.0);
      require(v >= -1e-12 && v <= 1 + 1e-12, ErrorCode::InvalidArgument,
              "base values must stay in [0, 1]");
    }
  if (alpha == 1.0) return base;
  return Profile1D::radial(alpha, base);
}

namespace {

double midpoint(const std::function<double(double)>& f, double a, double b, long n) {
  const double h = (b - a) / n;
  double s = 0;
  for (long i = 0; i < n; ++i) s += f(a + (i + 0.5) * h);
  return s * h;
}

double refine(const std::function<double(double)>& f, double a, double b, long n0) {
  long n = std::max<long>(16, n0);
  double prev = midpoint(f, a, b, n);
  constexpr long cap = 1L << 22;
  while (n < cap) {
    n *= 2;
    double cur = midpoint(f, a, b, n);
    double diff = std::abs(cur - prev);
    prev = cur;
    if (diff <= 1e-8 * std::abs(cur) || diff <= 1e-300) break;
  }
  return prev;
}

}  // namespace

double profile_quadrature(const Profile1D& p, double a, double b,
                          const std::function<double(double)>& integrand) {
  require(a <= b, ErrorCode::InvalidArgument, "quadrature interval must be ordered");
  if (a == b) return 0.0;
  std::vector<double> cuts{a};
  for (double t : p.breakpoints())
    if (t > a && t < b) cuts.push_back(t);
  cuts.push_back(b);
  // Pieces spanning several octaves away from 0 are split geometrically.
  std::vector<double> pieces{cuts.front()};
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    double lo = pieces.back(), hi = cuts[k];
    if (lo > 0) {
      while (hi / lo > 2.0) {
        lo *= 2.0;
        pieces.push_back(lo);
      }
    }
    pieces.push_back(hi);
  }
  const double width = p.mollification_width();
  double total = 0;
  for (std::size_t k = 0; k + 1 < pieces.size(); ++k) {
    const double lo = pieces[k], hi = pieces[k + 1];
    long n0 = width > 0 ? static_cast<long>(std::ceil(10.0 * (hi - lo) / width)) : 16;
    total += refine(integrand, lo, hi, std::min<long>(n0, 1L << 20));
  }
  return total;
}

double profile_lq_of_derivative(const Profile1D& p, double q, double a, double b) {
  require(q >= 1 && std::isfinite(q), ErrorCode::InvalidArgument, "q must be finite and >= 1");
  return profile_quadrature(p, a, b, [&](double t) { return std::pow(std::abs(p.derivative(t)), q); });
}

double radial_integral(const Profile1D& p, double k, double weight_power, bool use_derivative) {
  require(k >= 1 && std::isfinite(k), ErrorCode::InvalidArgument, "moment order must be >= 1");
  const double end = p.support_end();
  require(std::isfinite(end), ErrorCode::SupportViolation, "profile must be compactly supported");
  return profile_quadrature(p, 0.0, end, [&](double r) {
    double v = use_derivative ? p.derivative(r) : p(r);
    double w = weight_power == 0 ? 1.0 : std::pow(r, weight_power);
    return std::pow(std::abs(v), k) * w;
  });
}

double radial_moment(const Profile1D& p, double k, int m, bool use_derivative) {
  require(m >= 1, ErrorCode::InvalidArgument, "dimension m must be positive");
  return radial_integral(p, k, use_derivative ? m - 1.0 : 0.0, use_derivative);
}

}  // namespace pb4
