#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pb4/quadrilateral.hpp"

namespace pb4 {

/// Box-constrained discretization of the pb4 infimum. Pinned nodes: F = 0 on
/// X0, F = 1 on X1, G = 0 on Y0, G = 1 on Y1, F = G = 0 on `zero`.
struct OptProblem {
  Grid2D grid;
  Mask X0, X1, Y0, Y1;
  Mask zero;
  double q = 2;
  SymplecticDensity density = SymplecticDensity::uniform();
  double mu = 1e-8;
  int max_iter = 400;
  double initial_step = 0;  // 0 picks one from the first gradient
};
/// Throws on overlapping side masks or conflicting pins.
void validate(const OptProblem& p);

struct ObjectiveValue {
  double value;
  ScalarField dF, dG;
};
/// ||{F,G}||_q of the piecewise linear interpolants, two triangles per cell.
double triangle_bracket_norm(const ScalarField& F, const ScalarField& G, ExtendedExponent q,
                             const SymplecticDensity& w = SymplecticDensity::uniform());

/// Sum of (b^2 + mu)^(q/2) w |T| over the triangles, b the exact bracket of
/// the piecewise linear interpolants, with its gradient in the node values.
ObjectiveValue objective(const ScalarField& F, const ScalarField& G, double q,
                         const SymplecticDensity& w, double mu, bool with_gradient = true);

/// Clamp to [0, 1] and apply the pins.
void project(const OptProblem& p, ScalarField& F, ScalarField& G);

struct HistoryRow {
  int iter;
  double objective, step;
};

struct OptResult {
  ScalarField F, G;
  std::vector<HistoryRow> history;
  double final_objective;  // surrogate value
  double floor;            // mu^(q/2) times the triangulated area
  double final_norm;       // triangle_bracket_norm of the final pair
  std::string stop_reason;
};

/// Projected gradient descent with Barzilai-Borwein steps, halved until the
/// objective strictly decreases.
OptResult minimize(const OptProblem& p, ScalarField F0, ScalarField G0);
/// Uniformly random values in [0, 1], then projected.
OptResult minimize_random(const OptProblem& p, unsigned seed);

enum class CertificateStatus { LOWER_RESPECTED, GAP };
const char* certificate_status_name(CertificateStatus s);

struct CertificateReport {
  CertificateStatus status;
  double final_value, formula, ratio;
};
/// ratio = final / formula, or final itself when formula is 0.
CertificateReport certificate(const OptResult& r, double formula, double tol = 0.05);

/// Rectangle model on a domain of area B around Pi = [0,A]x[0,1]: problem with
/// two-node side layers and a pinned outer ring, plus the warm start built
/// from the construction with eps = 0.05 (less when B - A is small).
struct RectangleSetup {
  OptProblem problem;
  ScalarField F0, G0;
};
RectangleSetup rectangle_setup(double A, double B, double q, int n = 256);

/// Piecewise linear interpolant of `coarse` sampled on `fine`, constant beyond
/// the outermost nodes.
ScalarField prolong(const ScalarField& coarse, const Grid2D& fine);

/// Coarse to fine: the warm start is minimized on n / 2^(levels-1) nodes, each
/// result is prolonged to the next grid and minimized again. Level l below the
/// finest gets max_iter * 2^l iterations.
OptResult minimize_multilevel(double A, double B, double q, int n = 256, int max_iter = 400, int levels = 4,
                              double mu = 1e-8);

}  // namespace pb4
