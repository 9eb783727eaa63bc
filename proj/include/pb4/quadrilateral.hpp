#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pb4/field.hpp"
#include "pb4/profiles.hpp"

namespace pb4 {

enum class Exactness { EXACT, LOWER_BOUND_ONLY };
const char* exactness_name(Exactness e);

struct FormulaValue {
  double value;
  Exactness flag;
};

/// Closed-form pb4^q of the rectangle Pi (area A) inside M (area B, possibly INF).
FormulaValue pb4_formula(double A, double B, ExtendedExponent q);

/// Rectangle model: Pi = [0,A]x[0,1] inside an open rectangle of area B,
/// construction parameters eps and C (A < C < B).
struct QuadProblem {
  double A = 1, B = 2;
  ExtendedExponent q = 2.0;
  double eps = 0.01;
  double C = 1.5;
};
void validate(const QuadProblem& p);

enum class BracketMode { Stencil, Exact, Auto };

/// A pair (F, G) with the four side masks, the region Pi, and its bracket.
struct AdmissiblePair {
  ScalarField F, G;
  Mask X0, X1, Y0, Y1;
  Mask region;  // Pi
  ScalarField bracket;
  bool admissible = false;
  BracketMode mode = BracketMode::Stencil;
};

/// Side-value check: F <= tol on X0, F >= 1 - tol on X1, G <= tol on Y0,
/// G >= 1 - tol on Y1, 0 <= F <= 1, every mask non-empty.
bool check_admissible(const ScalarField& F, const ScalarField& G, const Mask& X0, const Mask& X1,
                      const Mask& Y0, const Mask& Y1, double tol);

/// Wraps arbitrary fields as a pair with the stencil bracket.
AdmissiblePair make_pair(ScalarField F, ScalarField G, Mask X0, Mask X1, Mask Y0, Mask Y1,
                         Mask region, double tol);

/// Tensor-product construction F = u1(x) v1(y), G = u2(x) v2(y).
struct QuadConstruction {
  Profile1D u1, v1, u2, v2;
  double F(double x, double y) const { return u1(x) * v1(y); }
  double G(double x, double y) const { return u2(x) * v2(y); }
  /// Closed-form bracket from the profile derivatives.
  double bracket(double x, double y) const;
};

/// 0 below a0, smooth rise to 1 at a1, 1 on [a1, b0], smooth fall to 0 at b1.
Profile1D plateau_profile(double a0, double a1, double b0, double b1, double width);

QuadConstruction quad_construction(const QuadProblem& p);
/// Grid covering K = [-eps, C+eps]x[-2eps, 1+2eps] with margin; y = 0, y = 1 and
/// x = 0 fall on cell boundaries.
Grid2D default_quad_grid(const QuadProblem& p, int n);
/// Nodes per eps on the coarser axis.
double cells_per_eps(const QuadProblem& p, const Grid2D& g);

AdmissiblePair build_pair(const QuadProblem& p, const Grid2D& g,
                          BracketMode mode = BracketMode::Auto);

struct ConvergenceRow {
  double eps, C, norm, formula, ratio;
};
struct GridPolicy {
  int n = 512;
  BracketMode mode = BracketMode::Auto;
};
/// One row per (eps, C); C_schedule empty means C = B - eps (B finite)
/// or C = A (1 + 1/sqrt(eps)) (B infinite).
std::vector<ConvergenceRow> verify_upper(double A, double B, double q,
                                         const std::vector<double>& eps_schedule,
                                         const std::vector<double>& C_schedule,
                                         GridPolicy policy = {});

struct StokesRecord {
  double signed_integral, abs_integral;
};
StokesRecord stokes_defect(const AdmissiblePair& pair, const Mask& region,
                           const SymplecticDensity& w = SymplecticDensity::uniform());

struct LowerCertificate {
  double q;
  double int_region, int_complement;      // int |{F,G}|^q over Pi and over the rest
  double bound_region, bound_complement;  // 1/A^(q-1), 1/(B-A)^(q-1)
  double holder_complement;               // 1/|supp in complement|^(q-1)
  double total_norm, formula;
  bool region_ok, complement_ok, total_ok;
  bool holds() const { return region_ok && complement_ok && total_ok; }
};
LowerCertificate verify_lower(const AdmissiblePair& pair, double q, double A, double B,
                              double tol = 0.03);

/// Closed-form area-preserving change of coordinates.
struct AreaMap {
  std::string name;
  std::function<std::pair<double, double>(double, double)> forward, inverse;
};
AreaMap identity_map();
AreaMap shear_map(double s);

/// A pair given by formulas on a source grid (compactly supported along open axes).
struct SmoothPair {
  std::function<double(double, double)> F, G;
  Grid2D grid;
};

/// Two overlapping C-infinity bumps on [-1, 1]^2.
SmoothPair planar_test_pair(int n = 256);

struct InvarianceResult {
  double norm_before, norm_after, rel_diff;
  bool pass;
};
/// Compares ||{F,G}||_q on the source grid with ||{F o inv, G o inv}||_q on a
/// grid over the image with matching spacing. Throws if det D(forward) != 1.
InvarianceResult symp_invariance_check(const SmoothPair& pair, const AreaMap& map, ExtendedExponent q,
                                       double tol = 0.01);

}  // namespace pb4
