#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pb4/flexibility.hpp"
#include "pb4/quadrilateral.hpp"

using namespace pb4;

namespace {

// Tent of height 1 and slope 1/r around (cx, cy), sup-norm distance.
ScalarField tent(const Grid2D& g, double cx, double cy, double r) {
  return sample(g, [=](double x, double y) {
    return std::max(0.0, 1.0 - std::max(std::abs(x - cx), std::abs(y - cy)) / r);
  });
}

}  // namespace

TEST_CASE("decompose the unit square") {
  const CellDecomposition c = decompose({0, 1, 0, 1}, 0.25, 0.1);
  CHECK(c.cells_x * c.cells_y == 16);
  CHECK(c.dx == 0.25);
  CHECK(c.margin1 < c.margin2);
  CHECK(c.margin2 < c.margin3);
  // band area computed directly from the inner square Q3
  const double inner = (c.dx - 2 * c.margin3) * (c.dy - 2 * c.margin3);
  CHECK(c.band_fraction() == doctest::Approx(1 - inner / (c.dx * c.dy)));
  CHECK(c.band_fraction() <= 0.1);
  CHECK(c.delta() * std::sqrt(2.0) < 0.25 * std::sqrt(2.0) + 1e-15);
  CHECK_THROWS_AS(decompose({0, 1, 0, 1}, 2.0, 0.1), Error);
  CHECK_THROWS_AS(decompose({0, 1, 0, 1}, 0.25, 0.5), Error);
}

TEST_CASE("decompose snaps delta down") {
  const CellDecomposition c = decompose({0, 1, 0, 0.7}, 0.3, 0.2);
  CHECK(c.cells_x == 4);
  CHECK(c.cells_y == 3);
  CHECK(c.dx <= 0.3);
  CHECK(c.dy <= 0.3);
  for (double e : {0.01, 0.1, 0.3, 0.49}) CHECK(decompose({0, 1, 0, 0.7}, 0.3, e).band_fraction() <= e);
}

TEST_CASE("flatten_F") {
  const Grid2D g = make_grid({0, 1, 0, 1}, 400, 400);
  const CellDecomposition c = decompose({0, 1, 0, 1}, 0.1, 0.4);
  const ScalarField k(g, 0.7);
  CHECK(sup_abs(combine(1.0, flatten_F(k, c), -1.0, k)) == 0.0);

  const ScalarField x = sample(g, [](double x, double) { return x; });
  const ScalarField xt = flatten_F(x, c);
  CHECK(sup_abs(combine(1.0, xt, -1.0, x)) <= 0.1 * std::sqrt(2.0));
  // F~ = F on the band next to each cell boundary, so the patches glue
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double px = std::fmod(g.x(i), c.dx), py = std::fmod(g.y(j), c.dy);
      const double d = std::min({px, c.dx - px, py, c.dy - py});
      if (d < c.margin1) CHECK(xt(i, j) == x(i, j));
    }
}

TEST_CASE("localize_G") {
  const Grid2D g = make_grid({0, 1, 0, 1}, 400, 400);
  const CellDecomposition c = decompose({0, 1, 0, 1}, 0.1, 0.4);
  const ScalarField zero(g);
  CHECK(sup_abs(localize_G(zero, c)) == 0.0);
  const ScalarField G = sample(g, [](double x, double y) { return std::sin(5 * x) + y * y - 0.3; });
  const ScalarField Gt = localize_G(G, c);
  double gsup = sup_abs(G);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(std::abs(Gt[k]) <= std::abs(G[k]));
  for (double q : {1.0, 2.0, 4.0}) {
    const double d = lq_norm(combine(1.0, Gt, -1.0, G), q);
    CHECK(std::pow(d, q) <= std::pow(gsup, q) * c.volume() * c.eps_cell);
  }
}

TEST_CASE("overlapping bumps commute after one step") {
  const auto [F, G] = overlapping_bumps();
  const FlexReport r = flex_report(F, G, 0.05, 0.1, 2.0);
  CHECK(r.bracket_input >= 0.1);
  CHECK(r.max_bracket == 0.0);
  CHECK(r.locally_constant);
  CHECK(r.sup_dist_F <= r.modulus_F);
  CHECK(r.lq_dist_G <= r.lq_bound_G);
  for (double q : {1.0, 4.0}) {
    const FlexReport s = flex_report(F, G, 0.05, 0.1, q);
    CHECK(s.lq_dist_G <= s.lq_bound_G);
  }
}

TEST_CASE("halving delta halves the F error for a Lipschitz F") {
  const Grid2D g = make_grid({0, 1, 0, 1}, 1600, 1600);
  const ScalarField F = tent(g, 0.5, 0.5, 0.3);
  const ScalarField G = tent(g, 0.45, 0.55, 0.25);
  const FlexReport a = flex_report(F, G, 0.2, 0.4, 2.0);
  const FlexReport b = flex_report(F, G, 0.1, 0.4, 2.0);
  CHECK(a.max_bracket == 0.0);
  CHECK(b.max_bracket == 0.0);
  CHECK(b.sup_dist_F / a.sup_dist_F == doctest::Approx(0.5).epsilon(0.15));
}

TEST_CASE("G error is linear in eps_cell at q = 1") {
  const Grid2D g = make_grid({0, 1, 0, 1}, 1600, 1600);
  const ScalarField F = tent(g, 0.5, 0.5, 0.3);
  const ScalarField G = sample(g, [](double x, double y) {
    return std::max(0.0, 0.04 - (x - 0.5) * (x - 0.5) - (y - 0.5) * (y - 0.5)) > 0 ? 1.0 : 0.0;
  });
  const FlexReport a = flex_report(F, G, 0.2, 0.4, 1.0);
  const FlexReport b = flex_report(F, G, 0.2, 0.2, 1.0);
  CHECK(b.lq_dist_G / a.lq_dist_G < 0.65);
  CHECK(b.lq_dist_G / a.lq_dist_G > 0.35);
}

TEST_CASE("resolution and support preconditions") {
  const auto [F, G] = overlapping_bumps(200);
  CHECK_THROWS_AS(flex_report(F, G, 0.05, 0.1, 2.0), Error);
  const Grid2D g = make_grid({0, 1, 0, 1}, 800, 800);
  const ScalarField wide = sample(g, [](double x, double) { return x; });
  try {
    flex_report(wide, wide, 0.2, 0.4, 2.0);
    FAIL("expected a support violation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SupportViolation);
  }
}

TEST_CASE("flexibility breaks the side conditions of a built pair") {
  QuadProblem p;
  p.A = 1;
  p.B = 3;
  p.eps = 0.05;
  p.C = 2.6;
  // cell boundaries of width 0.2 fall on the sides of Pi
  const Grid2D g = make_grid({-0.6, 3.2, -0.6, 1.6}, 1520, 880);
  const AdmissiblePair pair = build_pair(p, g);
  REQUIRE(pair.admissible);
  const FlexReport r = flex_report(pair.F, pair.G, 0.2, 0.4, 2.0);
  CHECK(r.max_bracket == 0.0);
  const CellDecomposition c = decompose({g.x_min, g.x_max, g.y_min, g.y_max}, 0.2, 0.4);
  const ScalarField Ft = flatten_F(pair.F, c), Gt = localize_G(pair.G, c);
  CHECK_FALSE(check_admissible(Ft, Gt, pair.X0, pair.X1, pair.Y0, pair.Y1, 0.4 * p.eps));
}

TEST_CASE("modulus of continuity") {
  const Grid2D g = make_grid({0, 1, 0, 1}, 200, 200);
  const ScalarField x = sample(g, [](double x, double) { return 3 * x; });
  const double w = modulus_of_continuity(x, 0.1);
  CHECK(w <= 0.3 + 1e-12);
  CHECK(w >= 0.3 - 3 * g.hx());
  CHECK(modulus_of_continuity(ScalarField(g, 2.0), 0.5) == 0.0);
}
