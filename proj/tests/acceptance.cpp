// Acceptance runner: `acceptance [criterion ...]`, all of them by default.
// Prints one PASS/FAIL line per criterion and exits 1 if any failed.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pb4/curves.hpp"
#include "pb4/flexibility.hpp"
#include "pb4/highdim.hpp"
#include "pb4/optimizer.hpp"
#include "pb4/quadrilateral.hpp"
#include "property_suite.hpp"

using namespace pb4;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Verdict formulas() {
  const double a = pb4_formula(1, 2, 1).value, b = pb4_formula(1, 3, 2).value;
  return {a == 2 && std::abs(b - std::sqrt(1.5)) <= 1e-12, fmt("pb4(1,2,1)=%.17g pb4(1,3,2)=%.17g", a, b)};
}

Verdict squeeze() {
  bool ok = true;
  std::string d;
  for (const double q : {1.0, 2.0, 4.0}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = verify_upper(1, 3, q, {1e-1, 1e-2, 1e-3}, {}, GridPolicy{512});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool mono = true;
    for (std::size_t k = 1; k < rows.size(); ++k) mono = mono && rows[k].ratio < rows[k - 1].ratio;
    const double last = rows.back().ratio;
    ok = ok && mono && last >= 0.97 && last <= 1.05 && secs < 30;
    d += fmt("q=%g ratios %.4f %.4f %.4f (%.1fs); ", q, rows[0].ratio, rows[1].ratio, rows[2].ratio, secs);
  }
  return {ok, d};
}

Verdict stokes() {
  bool ok = true;
  double lo = INF, hi = 0;
  int pairs = 0;
  for (const auto [A, B] : {std::pair{1.0, 3.0}, {1.0, 2.0}, {2.0, 5.0}})
    for (const double eps : {1e-1, 1e-2, 1e-3}) {
      if (8 * eps >= std::min(A, B - eps - A)) continue;
      QuadProblem p;
      p.A = A;
      p.B = B;
      p.eps = eps;
      p.C = B - eps;
      const AdmissiblePair pair = build_pair(p, default_quad_grid(p, 512));
      for (const Mask& m : {pair.region, pair.region.complement()}) {
        const double s = std::abs(stokes_defect(pair, m).signed_integral);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
        ok = ok && pair.admissible && s >= 0.97 && s <= 1.03;
      }
      ++pairs;
    }
  return {ok, fmt("%d pairs, |signed integral| in [%.5f, %.5f]", pairs, lo, hi)};
}

Verdict flexibility() {
  const auto [F, G] = overlapping_bumps();
  const FlexReport r = flex_report(F, G, 0.05, 0.1, 2.0);
  const bool ok = r.bracket_input >= 0.1 && r.max_bracket == 0 && r.locally_constant &&
                  r.sup_dist_F <= r.modulus_F && r.lq_dist_G <= r.lq_bound_G;
  return {ok, fmt("input %.3f, bracket %g, sup|F~-F| %.4f <= %.4f, ||G~-G||_2 %.5f <= %.5f", r.bracket_input,
                  r.max_bracket, r.sup_dist_F, r.modulus_F, r.lq_dist_G, r.lq_bound_G)};
}

Verdict highdim() {
  HighDimSpec s;
  s.n = 2;
  s.d = 2;
  s.q = 2;
  const DecayTable t = decay_curve(s, {1, 0.5, 0.25, 0.1});
  bool strict = true;
  for (std::size_t k = 1; k < t.size(); ++k) strict = strict && t[k].grad_lq_q < t[k - 1].grad_lq_q;
  const double ratio = t.back().grad_lq_q / t.front().grad_lq_q;
  double worst = 0;
  for (const double a : {1.0, 0.5, 0.25}) {
    s.alpha = a;
    const VanishingProfile v = vanishing_profile(s);
    const double sep = grad_lq_estimate(v, 2);
    worst = std::max(worst, std::abs(grad_lq_dense(v, 2, 1024) - sep) / sep);
  }
  return {strict && ratio <= 0.05 && worst <= 0.02,
          fmt("strict %s, alpha=0.1 / alpha=1 = %.4f (needs <= 0.05), dense vs separable %.4f", strict ? "yes" : "no",
              ratio, worst)};
}

Verdict product_bound() {
  const double v = product_lower_bound(2, 1);
  return {v == 1, fmt("product_lower_bound(2,1)=%.17g", v)};
}

Verdict curves() {
  const double a = pb4_curve_formula(1, 1, 1), b = pb4_curve_formula(1, 4, INF), c = pb4_curve_formula(2, INF, 2);
  const CurvePairResult torus = nonseparating_pair(default_torus_spec(256));
  const bool ok = a == 2 && std::abs(b - 1) <= 1e-12 && std::abs(c - std::sqrt(0.5)) <= 1e-12 &&
                  sup_abs(torus.pair.bracket) == 0 && torus.norm == 0;
  return {ok, fmt("(1,1,1)=%.17g (1,4,inf)=%.17g (2,inf,2)=%.17g torus sup|{F,G}|=%g", a, b, c,
                  sup_abs(torus.pair.bracket))};
}

Verdict optimizer() {
  const OptResult r = minimize_multilevel(1, 3, 2, 256, 600, 4);
  const double value = std::sqrt(std::max(0.0, r.final_objective - r.floor)), target = std::sqrt(1.5);
  const double ratio = value / target;

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(-0.5, 0.5);
  const SymplecticDensity w = SymplecticDensity::uniform();
  const ObjectiveValue v = objective(r.F, r.G, 2, w, 1e-8);
  double worst = 0;
  for (int probe = 0; probe < 10; ++probe) {
    ScalarField dF(r.F.grid()), dG(r.G.grid());
    for (std::size_t k = 0; k < dF.values().size(); ++k) {
      dF[k] = U(rng);
      dG[k] = U(rng);
    }
    double analytic = 0;
    for (std::size_t k = 0; k < dF.values().size(); ++k) analytic += v.dF[k] * dF[k] + v.dG[k] * dG[k];
    const double h = 1e-6;
    const double up = objective(combine(1, r.F, h, dF), combine(1, r.G, h, dG), 2, w, 1e-8, false).value;
    const double dn = objective(combine(1, r.F, -h, dF), combine(1, r.G, -h, dG), 2, w, 1e-8, false).value;
    worst = std::max(worst, std::abs((up - dn) / (2 * h) - analytic) / std::abs(analytic));
  }
  return {ratio >= 0.95 && ratio <= 1.10 && worst <= 1e-5,
          fmt("final^(1/2) = %.5f, ratio %.4f to sqrt(1.5), gradient rel err %.2e", value, ratio, worst)};
}

Verdict invariance() {
  const InvarianceResult sh = symp_invariance_check(planar_test_pair(256), shear_map(0.5), 2.0);
  const CylinderModel m{1, 1};
  const AnnulusMap am = cylinder_to_annulus(m, 0.1);
  const InvarianceResult an = symp_invariance_check(cylinder_test_pair(m, 256), am.map, 2.0);
  return {sh.rel_diff <= 0.01 && an.rel_diff <= 0.01 && am.ok,
          fmt("shear %.5f, annulus %.5f (areas %.4f %.4f)", sh.rel_diff, an.rel_diff, am.area_inner, am.area_outer)};
}

Verdict properties() {
  using namespace pb4::props;
  constexpr int cases = 50;
  constexpr std::uint64_t seed = 20240611;
  Generator gen(seed);
  std::mt19937_64 rng(seed + 3);
  std::uniform_real_distribution<double> coef(-3, 3), slope(-1, 1), expo(1, 4);
  int failed = 0;
  double worst_order = INF, worst_leibniz = 0;
  for (int k = 0; k < cases; ++k) {
    const Case c = gen.next();
    const Grid2D g = c.grid();
    const ScalarField F = sample(g, c.F), G = sample(g, c.G);
    const bool anti = bitwise_negated(poisson_bracket(F, G, c.density()), poisson_bracket(G, F, c.density()));
    const bool bilinear = bilinearity_defect(c, coef(rng), coef(rng)) < 1e-12;
    const double leibniz = leibniz_defect(c, 4) / leibniz_defect(c, 2);
    const bool holder = holder_violation(c) <= 1e-12 && submask_violation(c, seed + k) <= 1e-12;
    const double order = quadrature_order(c, slope(rng), slope(rng), expo(rng));
    worst_order = std::min(worst_order, order);
    worst_leibniz = std::max(worst_leibniz, leibniz);
    if (!(anti && bilinear && leibniz <= 0.3 && holder && order >= 1.9)) ++failed;
  }
  return {failed == 0,
          fmt("%d/%d fields failed, worst Leibniz ratio %.3f, worst quadrature order %.3f", failed, cases,
              worst_leibniz, worst_order)};
}

struct Criterion {
  std::function<Verdict()> run;
  double budget;  // seconds
};

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, Criterion> all = {
      {1, {formulas, 1}},    {2, {squeeze, 90}},  {3, {stokes, 5}},     {4, {flexibility, 10}},
      {5, {highdim, 20}},    {6, {product_bound, 1}}, {7, {curves, 10}}, {8, {optimizer, 60}},
      {9, {invariance, 20}}, {10, {properties, 30}},
  };
  std::vector<int> chosen;
  for (int k = 1; k < argc; ++k) {
    const std::string a = argv[k];
    if (a == "all") continue;
    const int c = std::atoi(a.c_str());
    if (!all.count(c)) {
      std::fprintf(stderr, "unknown criterion '%s'\n", a.c_str());
      return 2;
    }
    chosen.push_back(c);
  }
  if (chosen.empty())
    for (const auto& [c, _] : all) chosen.push_back(c);

  int failures = 0;
  for (const int c : chosen) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = all.at(c).run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = v.pass && secs <= all.at(c).budget;
    failures += !pass;
    std::printf("criterion %d: %s  %s [%.2fs]\n", c, pass ? "PASS" : "FAIL", v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures ? 1 : 0;
}
