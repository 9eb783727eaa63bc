#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pb4/field.hpp"
#include "pb4/profiles.hpp"

using namespace pb4;

namespace {

// Largest jump of the derivative across the breakpoints.
double derivative_jump(const Profile1D& p) {
  double worst = 0;
  for (double b : p.breakpoints()) {
    const double tau = 1e-12 * std::max(1.0, std::abs(b));
    worst = std::max(worst, std::abs(p.derivative(b + tau) - p.derivative(b - tau)));
  }
  return worst;
}

}  // namespace

TEST_CASE("smooth_step end values and symmetry") {
  const Profile1D s = smooth_step(0.2, 0.8, 0.1);
  CHECK(s(0.2) == 0.0);
  CHECK(s(0.8) == 1.0);
  CHECK(s(-5) == 0.0);
  CHECK(s(5) == 1.0);
  CHECK(s(0.5) == doctest::Approx(0.5).epsilon(1e-9));
  double prev = 0;
  for (int k = 0; k <= 600; ++k) {
    const double v = s(0.1 + k * 0.001);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(derivative_jump(s) < 1e-6);
  CHECK_THROWS_AS(smooth_step(0.2, 0.8, 0.3), Error);
  CHECK_THROWS_AS(smooth_step(0.8, 0.2, 0.1), Error);
}

TEST_CASE("ramp slopes and pinned values") {
  const RampSpec r{1.0, 2.0, 0.01};
  const Profile1D u = ramp_u1(r);
  CHECK(ramp_slope_up(r) == doctest::Approx((1 - 0.02) / (1 - 0.04)));
  CHECK(ramp_slope_down(r) == doctest::Approx((1 - 0.02) / (1 - 0.04)));
  CHECK(u.derivative(0.5) == doctest::Approx(ramp_slope_up(r)));
  CHECK(u.derivative(1.5) == doctest::Approx(-ramp_slope_down(r)));
  CHECK(u(1.0) == 1.0);
  CHECK(u(0.0) == 0.0);
  CHECK(u(2.0) == 0.0);
  CHECK(u(0.02) == doctest::Approx(0.01));
  CHECK(u(0.98) == doctest::Approx(0.99));
}

TEST_CASE("ramp energy bound") {
  const RampSpec r{1.0, 2.0, 0.01};
  const double e = profile_lq_of_derivative(ramp_u1(r), 2, 0, 2);
  const double bound = 8 * 0.01 + std::pow(1 - 0.02, 2) * (1 / (1 - 0.04) + 1 / (1 - 0.04));
  CHECK(bound == doctest::Approx(2.08).epsilon(0.005));
  CHECK(e <= bound);
  CHECK(e > 1.9);
}

TEST_CASE("ramp total variation") {
  const double eps = 0.001;
  const double tv = profile_lq_of_derivative(ramp_u1({1.0, 2.0, eps}), 1, 0, 2);
  CHECK(tv >= 2 * (1 - 2 * eps));
  CHECK(tv <= 2.01);
}

TEST_CASE("ramp shape invariants") {
  for (double eps : {0.001, 0.01, 0.05}) {
    for (double C : {1.5, 2.0, 4.0}) {
      const RampSpec r{1.0, C, eps};
      const Profile1D u = ramp_u1(r);
      CHECK(u(1.0) == 1.0);
      CHECK(u.support_begin() >= 0.0);
      CHECK(u.support_end() <= C);
      for (int k = 0; k <= 4000; ++k) {
        const double t = -0.1 + k * (C + 0.2) / 4000;
        CHECK(u(t) >= 0.0);
        CHECK(u(t) <= 1.0);
        CHECK(u.derivative(t) <= 1.0 + 1e-12 + ramp_slope_up(r));
      }
      const double near = 0.1 * eps;
      for (double c : {0.0, 1.0, C}) {
        CHECK(u.derivative(c - near) == 0.0);
        CHECK(u.derivative(c + near) == 0.0);
      }
      CHECK(derivative_jump(u) < 1e-6);
    }
  }
}

TEST_CASE("invalid ramps are rejected") {
  CHECK_THROWS_AS(ramp_u1({1.0, 2.0, 0.2}), Error);
  CHECK_THROWS_AS(ramp_u1({1.0, 0.5, 0.01}), Error);
  CHECK_THROWS_AS(ramp_u1({1.0, 1.05, 0.01}), Error);
}

TEST_CASE("lq of derivative of simple profiles") {
  CHECK(profile_lq_of_derivative(linear_profile(0, 2, 0, 3), 3, 0, 2) == doctest::Approx(std::pow(1.5, 3) * 2));
  CHECK(profile_lq_of_derivative(constant_profile(0.7, 0, 1), 2, 0, 1) == 0.0);
}

TEST_CASE("radial decay support and centre value") {
  const Profile1D h = default_base_profile();
  for (double a : {1.0, 0.5, 0.25, 0.1}) {
    const Profile1D r = radial_decay(a, h);
    CHECK(r.support_end() == doctest::Approx(std::pow(2.0, -1 / a)));
    CHECK(r(0.0) == 1.0);
  }
  CHECK(radial_decay(0.5, h).support_end() == doctest::Approx(0.25));
  const Profile1D id = radial_decay(1.0, h);
  for (double t : {0.0, 0.1, 0.3, 0.4, 0.6}) CHECK(id(t) == doctest::Approx(h(t)));
  CHECK_THROWS_AS(radial_decay(1.5, h), Error);
  CHECK_THROWS_AS(radial_decay(0.0, h), Error);
}

TEST_CASE("radial moments obey the analytic bounds") {
  const Profile1D h = default_base_profile();
  const double hp = h.max_abs_derivative();
  CHECK(radial_moment(radial_decay(0.1, h), 1, 1, false) <= std::pow(2.0, -10));
  for (double a : {1.0, 0.5, 0.25, 0.1}) {
    const Profile1D r = radial_decay(a, h);
    for (int m : {2, 3, 4}) {
      for (double k = 1; k <= m; k += 1) {
        const double bound = std::pow(a, k - 1) * std::pow(hp, k) / std::pow(2.0, (m - k) / a + k - 1);
        CHECK(radial_moment(r, k, m, true) <= bound * (1 + 1e-6));
      }
    }
  }
  for (double k : {2.0, 3.0}) {
    double prev = INF;
    for (double a : {1.0, 0.5, 0.25, 0.1, 0.01}) {
      const double b = std::pow(a, k - 1) * std::pow(hp, k) / std::pow(2.0, k - 1);
      CHECK(b < prev);
      prev = b;
    }
  }
}

TEST_CASE("moments decrease along the alpha schedule") {
  const Profile1D h = default_base_profile();
  for (int m : {2, 3}) {
    for (double k = 1; k <= m; k += 1) {
      double pd = INF, pf = INF;
      for (double a : {1.0, 0.5, 0.25, 0.1}) {
        const Profile1D r = radial_decay(a, h);
        const double d = radial_moment(r, k, m, true), f = radial_moment(r, k, m, false);
        CHECK(d < pd);
        CHECK(f < pf);
        pd = d;
        pf = f;
      }
    }
  }
}

TEST_CASE("moment of a mollified plateau") {
  const Profile1D p = mollify(polyline({{0, 1}, {0.49, 1}, {0.51, 0}, {1, 0}}), 0.005);
  CHECK(radial_moment(p, 1, 1, false) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("mollify") {
  const Profile1D lin = linear_profile(0, 1, 0, 2);
  const Profile1D m = mollify(lin, 0.1);
  for (double t : {-0.5, 0.0, 0.3, 0.9, 1.4}) CHECK(m(t) == lin(t));

  const Profile1D kink = polyline({{0, 0}, {1, 1}, {2, 1}});
  const double w = 0.05;
  const Profile1D s = mollify(kink, w);
  double dist = 0, sup_s = 0;
  for (int k = 0; k <= 20000; ++k) {
    const double t = -0.5 + k * 3.0 / 20000;
    dist = std::max(dist, std::abs(s(t) - kink(t)));
    sup_s = std::max(sup_s, std::abs(s(t)));
    if (std::abs(t - 1) > w) CHECK(s(t) == doctest::Approx(kink(t)).epsilon(1e-12));
  }
  CHECK(dist <= 1.0 * w);
  CHECK(sup_s <= 1.0 + 1e-12);
  CHECK(derivative_jump(s) < 1e-6);
  CHECK_THROWS_AS(mollify(kink, 0.6), Error);

  const Profile1D bump = polyline({{0, 0}, {0.2, 0}, {0.5, 1}, {0.8, 0}, {1, 0}});
  const Profile1D mb = mollify(bump, 0.05);
  CHECK(mb.support_begin() >= 0.2 - 0.05 - 1e-12);
  CHECK(mb.support_end() <= 0.8 + 0.05 + 1e-12);
}

TEST_CASE("quadrature is exact for polynomials across breakpoints") {
  const Profile1D s = smooth_step(0, 1, 0.2);
  const double v = profile_quadrature(s, -1, 2, [](double t) { return t * t; });
  CHECK(v == doctest::Approx(3.0).epsilon(1e-8));
}
