#include "pb4/highdim.hpp"

#include <cmath>
#include <numbers>

#include "pb4/error.hpp"
#include "pb4/field.hpp"

namespace pb4 {

void validate(const HighDimSpec& s) {
  require(s.n >= 2, ErrorCode::InvalidArgument, "n must be at least 2");
  require(s.d >= 0 && s.d <= 2 * s.n - 2, ErrorCode::InvalidArgument, "d must lie in [0, 2n-2]");
  require(s.q >= 1 && s.q <= s.codim(), ErrorCode::InvalidArgument, "q must lie in [1, 2n-d]");
  require(s.b > 0 && std::isfinite(s.b), ErrorCode::InvalidArgument, "b must be positive");
  require(s.alpha > 0 && s.alpha <= 1, ErrorCode::InvalidArgument, "alpha must lie in (0, 1]");
  require(s.delta_prime > 0 && std::isfinite(s.delta_prime), ErrorCode::InvalidArgument,
          "delta' must be positive");
}

double VanishingProfile::grad_norm(double normal_radius) const {
  return std::abs(g.derivative(normal_radius / spec.delta_prime)) / spec.delta_prime;
}

VanishingProfile vanishing_profile(const HighDimSpec& s, const Profile1D& base) {
  validate(s);
  VanishingProfile v{s, radial_decay(s.alpha, base), 0.0};
  v.tube_radius = s.delta_prime * v.g.support_end();
  return v;
}

double unit_sphere_volume(int m) {
  require(m >= 1, ErrorCode::InvalidArgument, "dimension must be positive");
  return 2.0 * std::pow(std::numbers::pi, m / 2.0) / std::tgamma(m / 2.0);
}

double grad_lq_estimate(const VanishingProfile& v, double q) {
  const HighDimSpec& s = v.spec;
  require(q >= 1 && std::isfinite(q), ErrorCode::InvalidArgument, "q must be finite and >= 1");
  const int m = s.codim();
  return std::pow(s.b, s.d) * unit_sphere_volume(m) * std::pow(s.delta_prime, m - q) *
         radial_moment(v.g, q, m, true);
}

double field_lq_estimate(const VanishingProfile& v, double q) {
  const HighDimSpec& s = v.spec;
  require(q >= 1 && std::isfinite(q), ErrorCode::InvalidArgument, "q must be finite and >= 1");
  const int m = s.codim();
  return std::pow(s.b, s.d) * unit_sphere_volume(m) * std::pow(s.delta_prime, m) *
         radial_integral(v.g, q, m - 1.0, false);
}

double grad_lq_dense(const VanishingProfile& v, double q, int per_axis) {
  const int m = v.spec.codim();
  require(m == 2 || m == 3, ErrorCode::Unsupported, "dense quadrature only for m = 2 or 3");
  require(per_axis >= 8, ErrorCode::InvalidArgument, "need at least 8 nodes per axis");
  const double R = v.tube_radius;
  const double h = 2 * R / per_axis;
  auto c = [&](int i) { return -R + (i + 0.5) * h; };
  std::vector<double> rows(per_axis, 0.0);
  parallel_rows(per_axis, [&](int i) {
    double s = 0;
    for (int j = 0; j < per_axis; ++j) {
      if (m == 2) {
        s += std::pow(v.grad_norm(std::hypot(c(i), c(j))), q);
      } else {
        for (int k = 0; k < per_axis; ++k)
          s += std::pow(v.grad_norm(std::sqrt(c(i) * c(i) + c(j) * c(j) + c(k) * c(k))), q);
      }
    }
    rows[i] = s;
  });
  double total = 0;
  for (double r : rows) total += r;
  return std::pow(v.spec.b, v.spec.d) * total * std::pow(h, m);
}

DecayTable decay_curve(const HighDimSpec& s, const std::vector<double>& alpha_list,
                       const Profile1D& base) {
  validate(s);
  require(!alpha_list.empty(), ErrorCode::InvalidArgument, "alpha list is empty");
  for (std::size_t k = 1; k < alpha_list.size(); ++k)
    require(alpha_list[k] < alpha_list[k - 1], ErrorCode::InvalidArgument,
            "alpha list must be strictly decreasing");
  DecayTable t;
  for (double a : alpha_list) {
    HighDimSpec sa = s;
    sa.alpha = a;
    VanishingProfile v = vanishing_profile(sa, base);
    t.push_back({a, grad_lq_estimate(v, s.q), field_lq_estimate(v, s.q)});
  }
  return t;
}

double bracket_bound(const VanishingProfile& v, double G_lipschitz, double q) {
  require(G_lipschitz >= 0 && std::isfinite(G_lipschitz), ErrorCode::InvalidArgument,
          "G Lipschitz constant must be finite and nonnegative");
  return G_lipschitz * std::pow(grad_lq_estimate(v, q), 1.0 / q);
}

double product_lower_bound(int n, double vol_N) {
  require(n >= 2, ErrorCode::InvalidArgument, "n must be at least 2");
  require(vol_N > 0 && std::isfinite(vol_N), ErrorCode::InvalidArgument, "fiber volume must be positive");
  return 2.0 * vol_N / n;
}

}  // namespace pb4
