#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "pb4/quadrilateral.hpp"

using namespace pb4;

namespace {

QuadProblem problem(double A, double B, double q, double eps, double C) {
  QuadProblem p;
  p.A = A;
  p.B = B;
  p.q = q;
  p.eps = eps;
  p.C = C;
  return p;
}

}  // namespace

TEST_CASE("closed-form values") {
  CHECK(pb4_formula(1, 2, 1).value == 2.0);
  CHECK(pb4_formula(1, INF, 2).value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(pb4_formula(1, 3, 2).value - std::sqrt(1.5)) < 1e-12);
  CHECK(pb4_formula(1, 3, 2).flag == Exactness::EXACT);
  const FormulaValue inf = pb4_formula(1, 3, ExtendedExponent::infinity());
  CHECK(inf.flag == Exactness::LOWER_BOUND_ONLY);
  CHECK(inf.value == 1.0);
  CHECK(pb4_formula(1, 1.25, ExtendedExponent::infinity()).value == doctest::Approx(4.0));
  CHECK_THROWS_AS(pb4_formula(2, 2, 2), Error);
  CHECK_THROWS_AS(pb4_formula(3, 2, 2), Error);
}

TEST_CASE("q = 1 gives 2 for every area pair") {
  for (double A : {0.1, 1.0, 7.0})
    for (double B : {A * 1.01, A * 2, A * 50, INF}) CHECK(pb4_formula(A, B, 1).value == doctest::Approx(2.0));
}

TEST_CASE("large q tends to max(1/A, 1/(B-A))") {
  double prev = INF;
  for (double q : {10.0, 100.0, 1000.0}) {
    const double v = pb4_formula(1, 3, q).value;
    CHECK(std::abs(v - 1.0) <= std::abs(prev - 1.0));
    prev = v;
  }
  CHECK(std::abs(prev - 1.0) < 1e-3);
}

TEST_CASE("B to infinity limit") {
  for (double q : {1.5, 2.0, 4.0}) {
    const double lim = pb4_formula(1, INF, q).value;
    double prev = INF;
    for (double B : {10.0, 100.0, 1e4, 1e8}) {
      const double d = std::abs(pb4_formula(1, B, q).value - lim);
      CHECK(d < prev);
      prev = d;
    }
    CHECK(prev < 1e-3);
  }
}

TEST_CASE("scaling identity") {
  for (double q : {1.0, 1.5, 2.0, 3.0, 8.0})
    for (auto [A, B] : {std::pair{1.0, 3.0}, {0.5, 0.7}, {2.0, 9.0}})
      CHECK(pb4_formula(2 * A, 2 * B, q).value ==
            doctest::Approx(std::pow(2.0, -(q - 1) / q) * pb4_formula(A, B, q).value).epsilon(1e-13));
}

TEST_CASE("built pair meets the side conditions") {
  const QuadProblem p = problem(1, 3, 2, 0.05, 2.5);
  const Grid2D g = default_quad_grid(p, 512);
  const AdmissiblePair pair = build_pair(p, g);
  CHECK(pair.admissible);
  CHECK(pair.mode == BracketMode::Stencil);
  const QuadConstruction c = quad_construction(p);
  for (int k = 0; k <= 50; ++k) {
    const double y = k / 50.0;
    CHECK(c.F(p.A, y) == 1.0);
    CHECK(c.F(0, y) == 0.0);
    CHECK(c.G(y * p.A, 0) == 0.0);
    CHECK(c.G(y * p.A, 1) == 1.0);
  }
  // G follows y on [-eps, 1 + eps] and overshoots slightly before its cutoff
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(pair.F[k] >= 0.0);
    CHECK(pair.F[k] <= 1.0);
    CHECK(pair.G[k] >= -2 * p.eps);
    CHECK(pair.G[k] <= 1.0 + 2 * p.eps);
  }
  // rows away from [-eps, 1 + eps] carry no bracket
  double outside = 0;
  for (int j = 0; j < g.ny; ++j) {
    const double y = g.y(j);
    if (y > -p.eps - 2 * g.hy() && y < 1 + p.eps + 2 * g.hy()) continue;
    for (int i = 0; i < g.nx; ++i) outside = std::max(outside, std::abs(pair.bracket(i, j)));
  }
  CHECK(outside == 0.0);
  // the pair vanishes on the outermost ring of the grid
  for (int i = 0; i < g.nx; ++i) {
    CHECK(pair.F(i, 0) == 0.0);
    CHECK(pair.G(i, g.ny - 1) == 0.0);
  }
}

TEST_CASE("exact bracket below the stencil resolution") {
  const QuadProblem p = problem(1, 3, 2, 0.001, 2.999);
  const Grid2D g = default_quad_grid(p, 256);
  CHECK_THROWS_AS(build_pair(p, g, BracketMode::Stencil), Error);
  const AdmissiblePair pair = build_pair(p, g);
  CHECK(pair.mode == BracketMode::Exact);
  CHECK(pair.admissible);
}

TEST_CASE("grid must contain the construction") {
  const QuadProblem p = problem(1, 3, 2, 0.05, 2.5);
  CHECK_THROWS_AS(build_pair(p, make_grid({0, 2.5, 0, 1}, 512, 512)), Error);
}

TEST_CASE("upper bound convergence") {
  const auto rows = verify_upper(1, 3, 2, {1e-3}, {2.999});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].ratio <= 1.05);
  CHECK(rows[0].ratio >= 0.97);
  const auto q1 = verify_upper(1, 2, 1, {1e-3}, {});
  CHECK(q1[0].C == doctest::Approx(2 - 1e-3));
  CHECK(q1[0].norm <= 2 * 1.02);
  const auto sched = verify_upper(1, 3, 4, {1e-1, 1e-2, 1e-3}, {});
  for (std::size_t k = 1; k < sched.size(); ++k) CHECK(sched[k].ratio < sched[k - 1].ratio);
  CHECK_THROWS_AS(verify_upper(1, 3, 2, {1e-2, 1e-1}, {}), Error);
}

TEST_CASE("grid refinement at fixed eps") {
  const QuadProblem p = problem(1, 3, 2, 0.05, 2.9);
  auto norm = [&](int n, BracketMode m) { return lq_norm(build_pair(p, default_quad_grid(p, n), m).bracket, 2.0); };
  const double a = norm(512, BracketMode::Stencil), b = norm(1024, BracketMode::Stencil);
  CHECK(std::abs(a - b) < 0.005 * b);
  const double ref = norm(2048, BracketMode::Exact);
  CHECK(std::abs(b - ref) < 0.5 * std::abs(a - ref));
}

TEST_CASE("Stokes certificate") {
  const QuadProblem p = problem(1, 3, 2, 0.05, 2.9);
  const AdmissiblePair pair = build_pair(p, default_quad_grid(p, 512));
  const StokesRecord in = stokes_defect(pair, pair.region);
  const StokesRecord out = stokes_defect(pair, pair.region.complement());
  CHECK(std::abs(in.signed_integral) >= 0.97);
  CHECK(std::abs(in.signed_integral) <= 1.03);
  CHECK(std::abs(out.signed_integral) >= 0.97);
  CHECK(std::abs(out.signed_integral) <= 1.03);
  CHECK(in.abs_integral >= std::abs(in.signed_integral));
  CHECK(out.abs_integral >= std::abs(out.signed_integral));

  const ScalarField F(pair.F.grid(), 0.5);
  const AdmissiblePair flat = make_pair(F, pair.G, pair.X0, pair.X1, pair.Y0, pair.Y1, pair.region, 1e-12);
  CHECK_FALSE(flat.admissible);
  CHECK(stokes_defect(flat, flat.region).signed_integral == 0.0);
  CHECK_THROWS_AS(stokes_defect(pair, Mask::all(make_grid({0, 1, 0, 1}, 8, 8))), Error);
}

TEST_CASE("lower certificates") {
  const QuadProblem p = problem(1, 3, 2, 0.01, 2.9);
  const AdmissiblePair pair = build_pair(p, default_quad_grid(p, 512));
  const LowerCertificate c2 = verify_lower(pair, 2, 1, 3);
  CHECK(c2.holds());
  CHECK(c2.total_norm >= 0.97 * std::sqrt(1.5));
  const LowerCertificate c1 = verify_lower(pair, 1, 1, 3);
  CHECK(c1.holds());
  CHECK(c1.int_region >= 0.97);
  CHECK(c1.int_complement >= 0.97);
  CHECK(c2.int_complement * std::pow(1 / c2.holder_complement, 1.0) >= 0.97);
}

TEST_CASE("lower certificate survives admissible perturbations") {
  const QuadProblem p = problem(1, 3, 2, 0.05, 2.9);
  const AdmissiblePair pair = build_pair(p, default_quad_grid(p, 512));
  const Grid2D& g = pair.F.grid();
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int trial = 0; trial < 5; ++trial) {
    const double a = 0.2 * U(rng), b = 0.2 * U(rng), kx = 2 + 3 * std::abs(U(rng)), ky = 2 + 3 * std::abs(U(rng));
    // smooth bump that vanishes on a 2 eps neighbourhood of the sides of Pi
    auto bump = [&](double x, double y) {
      const double s = std::sin(M_PI * x * kx / 2.9) * std::sin(M_PI * y * ky);
      const double dist = std::min({std::abs(x), std::abs(x - 1), std::abs(y), std::abs(y - 1)});
      const double cut = dist < 2 * p.eps ? 0.0 : std::min(1.0, (dist - 2 * p.eps) / p.eps);
      return x > 0 && x < 2.9 && y > 0 && y < 1 ? s * cut * cut : 0.0;
    };
    ScalarField F = pair.F, G = pair.G;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double v = bump(g.x(i), g.y(j));
        F(i, j) = std::clamp(F(i, j) + a * v, 0.0, 1.0);
        G(i, j) = std::clamp(G(i, j) + b * v, 0.0, 1.0);
      }
    const AdmissiblePair q = make_pair(F, G, pair.X0, pair.X1, pair.Y0, pair.Y1, pair.region, 0.4 * p.eps);
    CHECK(q.admissible);
    CHECK(verify_lower(q, 2, 1, 3).holds());
    CHECK(verify_lower(q, 1, 1, 3).holds());
  }
}

TEST_CASE("invariance under area-preserving maps") {
  const SmoothPair pair = planar_test_pair(512);
  const InvarianceResult id = symp_invariance_check(pair, identity_map(), 2.0);
  CHECK(id.rel_diff == 0.0);
  CHECK(id.pass);
  const InvarianceResult sh = symp_invariance_check(pair, shear_map(1.0), 2.0);
  CHECK(sh.rel_diff < 0.01);
  CHECK(sh.pass);
  const InvarianceResult sup = symp_invariance_check(planar_test_pair(256), shear_map(0.5), ExtendedExponent::infinity());
  CHECK(sup.rel_diff < 0.01);
  AreaMap stretch{"stretch", [](double x, double y) { return std::make_pair(2 * x, y); },
                  [](double X, double Y) { return std::make_pair(X / 2, Y); }};
  CHECK_THROWS_AS(symp_invariance_check(pair, stretch, 2.0), Error);
}
