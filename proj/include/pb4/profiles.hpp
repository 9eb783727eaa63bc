#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace pb4 {

enum class SegmentKind { Constant, Linear, Transition };
const char* segment_kind_name(SegmentKind k);

/// Cubic Hermite piece on [t0, t1] with end values and end slopes.
struct Segment {
  double t0, t1, v0, v1, s0, s1;
  SegmentKind kind;
};

/// One-dimensional profile: contiguous Hermite segments extended linearly
/// past both ends, or the radial reparametrization r -> base(r^alpha).
class Profile1D {
 public:
  Profile1D() = default;
  static Profile1D from_segments(std::vector<Segment> segs, double mollification_width = 0.0);
  static Profile1D radial(double alpha, const Profile1D& base);

  double operator()(double t) const;
  double derivative(double t) const;

  /// Segment boundaries (mapped through s -> s^(1/alpha) for radial profiles).
  std::vector<double> breakpoints() const;
  const std::vector<Segment>& segments() const { return segs_; }
  double mollification_width() const { return width_; }
  bool is_radial() const { return static_cast<bool>(base_); }
  double alpha() const { return alpha_; }
  const Profile1D& base() const { return *base_; }

  /// Left end of the zero tail on the right, INF when there is none.
  double support_end() const;
  /// Right end of the zero tail on the left, -INF when there is none.
  double support_begin() const;
  /// Sup of |p'| sampled densely over the breakpoint span.
  double max_abs_derivative() const;

  std::map<std::string, double> parameters;

 private:
  const Segment& locate(double t) const;
  std::vector<Segment> segs_;
  double width_ = 0.0;
  double alpha_ = 1.0;
  std::shared_ptr<const Profile1D> base_;
};

Profile1D constant_profile(double value, double t0, double t1);
Profile1D linear_profile(double t0, double t1, double v0, double v1);
/// Continuous piecewise linear profile through the given points (kinks allowed).
Profile1D polyline(const std::vector<std::pair<double, double>>& pts);

/// Replaces every kink b of a piecewise linear profile by the quadratic on
/// [b - width, b + width] matching value and slope at both ends.
Profile1D mollify(const Profile1D& p, double width);

/// 0 for t <= t0, 1 for t >= t1, monotone and C^1. Requires width < (t1 - t0)/2.
Profile1D smooth_step(double t0, double t1, double width);

struct RampSpec {
  double A, C, eps;
};
void validate(const RampSpec& s);
/// The slope-controlled ramp: 0 near 0, linear from eps to 1-eps on
/// [2eps, A-2eps], 1 near A, linear back down on [A+2eps, C-2eps], 0 near C.
Profile1D ramp_u1(const RampSpec& s);
double ramp_slope_up(const RampSpec& s);
/// Magnitude of the slope on the falling piece.
double ramp_slope_down(const RampSpec& s);

/// Default radial base: 1 on [0, plateau_end], smoothstep down to 0 at support_end.
Profile1D default_base_profile(double plateau_end = 0.25, double support_end = 0.5);
/// r -> base(r^alpha), supported in [0, 2^(-1/alpha)] for the default base.
Profile1D radial_decay(double alpha, const Profile1D& base);

/// Composite midpoint quadrature of integrand over [a, b], split at the
/// profile's breakpoints and refined by doubling to 1e-8 relative agreement.
double profile_quadrature(const Profile1D& p, double a, double b,
                          const std::function<double(double)>& integrand);

double profile_lq_of_derivative(const Profile1D& p, double q, double a, double b);
/// int |p|^k dr, or int |p'(r)|^k r^(m-1) dr with use_derivative, over [0, support_end].
double radial_moment(const Profile1D& p, double k, int m, bool use_derivative);
/// int |p or p'|^k r^weight_power dr over [0, support_end].
double radial_integral(const Profile1D& p, double k, double weight_power, bool use_derivative);

}  // namespace pb4
