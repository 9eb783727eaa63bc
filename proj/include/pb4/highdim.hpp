#pragma once

#include <vector>

#include "pb4/profiles.hpp"

namespace pb4 {

/// Single-chart model: the box [0,b]^d times a normal ball in R^m, m = 2n - d.
struct HighDimSpec {
  int n = 2, d = 2;
  double q = 2;
  double b = 1;
  double alpha = 1;
  double delta_prime = 1;

  int codim() const { return 2 * n - d; }
};
void validate(const HighDimSpec& s);

/// F(z) = g(|z_normal| / delta'), g = base(r^alpha).
struct VanishingProfile {
  HighDimSpec spec;
  Profile1D g;
  double tube_radius;  // delta' 2^(-1/alpha) for the default base

  /// normal_radius is the distance to the tangential plane.
  double F(double normal_radius) const { return g(normal_radius / spec.delta_prime); }
  double grad_norm(double normal_radius) const;
};

VanishingProfile vanishing_profile(const HighDimSpec& s, const Profile1D& base = default_base_profile());

/// Volume of the unit sphere S^(m-1).
double unit_sphere_volume(int m);

/// int |grad F|^q dVol over the chart: b^d C_m delta'^(m-q) int |g'(s)|^q s^(m-1) ds.
double grad_lq_estimate(const VanishingProfile& v, double q);
/// int |F|^q dVol over the chart.
double field_lq_estimate(const VanishingProfile& v, double q);
/// The same gradient integral by midpoint quadrature on an m-dimensional
/// grid with `per_axis` nodes per axis (m <= 3).
double grad_lq_dense(const VanishingProfile& v, double q, int per_axis);

struct DecayRow {
  double alpha, grad_lq_q, field_lq_q;
};
using DecayTable = std::vector<DecayRow>;

/// One row per alpha (alpha_list strictly decreasing); spec.alpha is ignored.
DecayTable decay_curve(const HighDimSpec& s, const std::vector<double>& alpha_list,
                       const Profile1D& base = default_base_profile());

/// max|sgrad G| times ||grad F||_q, the Cauchy-Schwarz control of ||{F,G}||_q.
double bracket_bound(const VanishingProfile& v, double G_lipschitz, double q);

/// 2 vol_N / n.
double product_lower_bound(int n, double vol_N);

}  // namespace pb4
