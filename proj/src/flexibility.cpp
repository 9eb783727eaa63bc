#include "pb4/flexibility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pb4/profiles.hpp"
#include "pb4/quadrilateral.hpp"

namespace pb4 {

CellDecomposition decompose(Bounds support, double delta, double eps_cell) {
  const double Lx = support.x_max - support.x_min, Ly = support.y_max - support.y_min;
  require(Lx > 0 && Ly > 0, ErrorCode::InvalidArgument, "support rectangle is degenerate");
  require(delta > 0 && delta <= std::min(Lx, Ly), ErrorCode::InvalidArgument,
          "cell size larger than the support edge");
  require(eps_cell > 0 && eps_cell < 0.5, ErrorCode::InvalidArgument, "eps_cell must lie in (0, 1/2)");
  CellDecomposition c;
  c.support = support;
  c.cells_x = static_cast<int>(std::ceil(Lx / delta - 1e-9));
  c.cells_y = static_cast<int>(std::ceil(Ly / delta - 1e-9));
  c.dx = Lx / c.cells_x;
  c.dy = Ly / c.cells_y;
  c.eps_cell = eps_cell;
  const double side = std::min(c.dx, c.dy);
  c.margin3 = 0.95 * 0.5 * side * (1.0 - std::sqrt(1.0 - eps_cell));
  c.margin2 = 0.375 * c.margin3;
  c.margin1 = 0.125 * c.margin3;
  return c;
}

namespace {

struct CellCoord {
  int cx, cy;
  double a, b, c, d;  // cell is [a, b] x [c, d]
  bool inside;
};

CellCoord cell_of(const CellDecomposition& cells, double x, double y) {
  const Bounds& s = cells.support;
  CellCoord r{};
  r.inside = x >= s.x_min && x <= s.x_max && y >= s.y_min && y <= s.y_max;
  if (!r.inside) return r;
  r.cx = std::clamp(static_cast<int>((x - s.x_min) / cells.dx), 0, cells.cells_x - 1);
  r.cy = std::clamp(static_cast<int>((y - s.y_min) / cells.dy), 0, cells.cells_y - 1);
  r.a = s.x_min + r.cx * cells.dx;
  r.b = r.a + cells.dx;
  r.c = s.y_min + r.cy * cells.dy;
  r.d = r.c + cells.dy;
  return r;
}

// Profiles of the distance-to-boundary kind, built once on the reference
// interval [0, L] and evaluated at the offset inside the cell.
Profile1D inner_plateau(double L, double lo, double hi) {
  const double w = 0.45 * (hi - lo);
  return plateau_profile(lo, hi, L - hi, L - lo, w);
}

void require_inside(const Grid2D& g, const CellDecomposition& cells) {
  const Bounds& s = cells.support;
  const double tx = 1e-9 * (g.x_max - g.x_min), ty = 1e-9 * (g.y_max - g.y_min);
  require(s.x_min >= g.x_min - tx && s.x_max <= g.x_max + tx && s.y_min >= g.y_min - ty &&
              s.y_max <= g.y_max + ty,
          ErrorCode::SupportViolation, "decomposition extends past the field's grid");
}

}  // namespace

ScalarField flatten_F(const ScalarField& F, const CellDecomposition& cells) {
  const Grid2D& g = F.grid();
  require_inside(g, cells);
  const Profile1D chi_x = inner_plateau(cells.dx, cells.margin1, cells.margin2);
  const Profile1D chi_y = inner_plateau(cells.dy, cells.margin1, cells.margin2);
  std::vector<double> centre(static_cast<std::size_t>(cells.cells_x) * cells.cells_y);
  for (int cy = 0; cy < cells.cells_y; ++cy) {
    for (int cx = 0; cx < cells.cells_x; ++cx) {
      const double xc = cells.support.x_min + (cx + 0.5) * cells.dx;
      const double yc = cells.support.y_min + (cy + 0.5) * cells.dy;
      int i = std::clamp(static_cast<int>(std::lround((xc - g.x_min) / g.hx() - 0.5)), 0, g.nx - 1);
      int j = std::clamp(static_cast<int>(std::lround((yc - g.y_min) / g.hy() - 0.5)), 0, g.ny - 1);
      centre[static_cast<std::size_t>(cy) * cells.cells_x + cx] = F(i, j);
    }
  }
  std::vector<double> out(F.values());
  parallel_rows(g.ny, [&](int j) {
    for (int i = 0; i < g.nx; ++i) {
      CellCoord c = cell_of(cells, g.x(i), g.y(j));
      if (!c.inside) continue;
      const double chi = chi_x(g.x(i) - c.a) * chi_y(g.y(j) - c.c);
      const double phi = 1.0 - chi;
      const double f0 = centre[static_cast<std::size_t>(c.cy) * cells.cells_x + c.cx];
      const std::size_t k = g.index(i, j);
      out[k] = phi == 0.0 ? f0 : phi * F[k] + (1.0 - phi) * f0;
    }
  });
  return ScalarField(g, std::move(out));
}

ScalarField localize_G(const ScalarField& G, const CellDecomposition& cells) {
  const Grid2D& g = G.grid();
  require_inside(g, cells);
  const double gap = 2.5 * std::max(g.hx(), g.hy());
  require(cells.margin2 + gap < cells.margin3, ErrorCode::TooCoarse,
          "grid does not resolve the cell margins");
  const Profile1D psi_x = inner_plateau(cells.dx, cells.margin2 + gap, cells.margin3);
  const Profile1D psi_y = inner_plateau(cells.dy, cells.margin2 + gap, cells.margin3);
  std::vector<double> out(g.size(), 0.0);
  parallel_rows(g.ny, [&](int j) {
    for (int i = 0; i < g.nx; ++i) {
      CellCoord c = cell_of(cells, g.x(i), g.y(j));
      if (!c.inside) continue;
      const double psi = psi_x(g.x(i) - c.a) * psi_y(g.y(j) - c.c);
      const std::size_t k = g.index(i, j);
      out[k] = psi * G[k];
    }
  });
  return ScalarField(g, std::move(out));
}

bool locally_constant_where_supported(const ScalarField& Ft, const ScalarField& Gt) {
  require_same_grid(Ft.grid(), Gt.grid(), "flattened pair");
  const Grid2D& g = Ft.grid();
  auto at = [&](int i, int j) {
    if (g.periodic_x) i = (i + g.nx) % g.nx;
    if (g.periodic_y) j = (j + g.ny) % g.ny;
    i = std::clamp(i, 0, g.nx - 1);
    j = std::clamp(j, 0, g.ny - 1);
    return Ft(i, j);
  };
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (Gt(i, j) == 0.0) continue;
      const double v = Ft(i, j);
      if (at(i - 1, j) != v || at(i + 1, j) != v || at(i, j - 1) != v || at(i, j + 1) != v) return false;
    }
  }
  return true;
}

double modulus_of_continuity(const ScalarField& F, double r, int stride) {
  const Grid2D& g = F.grid();
  stride = std::max(1, stride);
  std::vector<std::pair<int, int>> offsets;
  for (int d = 0; d < 16; ++d) {
    const double th = std::numbers::pi * d / 16.0;
    for (int k = 1; k <= 4; ++k) {
      const double len = r * k / 4.0;
      int di = static_cast<int>(std::trunc(len * std::cos(th) / g.hx()));
      int dj = static_cast<int>(std::trunc(len * std::sin(th) / g.hy()));
      if (di != 0 || dj != 0) offsets.push_back({di, dj});
    }
  }
  double best = 0;
  for (int j = 0; j < g.ny; j += stride) {
    for (int i = 0; i < g.nx; i += stride) {
      const double v = F(i, j);
      for (auto [di, dj] : offsets) {
        int i2 = i + di, j2 = j + dj;
        if (i2 < 0 || i2 >= g.nx || j2 < 0 || j2 >= g.ny) continue;
        best = std::max(best, std::abs(F(i2, j2) - v));
      }
    }
  }
  return best;
}

FlexReport flex_report(const ScalarField& F, const ScalarField& G, double delta, double eps_cell,
                       ExtendedExponent q) {
  require_same_grid(F.grid(), G.grid(), "flex pair");
  const Grid2D& g = F.grid();
  CellDecomposition cells = decompose({g.x_min, g.x_max, g.y_min, g.y_max}, delta, eps_cell);
  const double h = std::max(g.hx(), g.hy());
  require(std::min(cells.dx, cells.dy) >= 8 * h, ErrorCode::TooCoarse, "need 8 nodes per cell");
  require(cells.margin3 >= 8 * h, ErrorCode::TooCoarse, "need 8 nodes across the cell margin");

  const double gs = sup_abs(G), fs = sup_abs(F);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double x = g.x(i), y = g.y(j);
      const bool ring = x < g.x_min + cells.dx || x > g.x_max - cells.dx || y < g.y_min + cells.dy ||
                        y > g.y_max - cells.dy;
      if (!ring) continue;
      require(std::abs(F(i, j)) <= 1e-12 * fs, ErrorCode::SupportViolation,
              "F must vanish on the boundary ring of cells");
      require(std::abs(G(i, j)) <= 1e-12 * gs, ErrorCode::SupportViolation,
              "G must vanish on the boundary ring of cells");
    }

  ScalarField Ft = flatten_F(F, cells);
  ScalarField Gt = localize_G(G, cells);
  FlexReport r;
  r.delta = cells.delta();
  r.eps_cell = eps_cell;
  r.q = q.value;
  r.volume = cells.volume();
  r.sup_dist_F = sup_abs(combine(1.0, Ft, -1.0, F));
  r.lq_dist_G = lq_norm(combine(1.0, Gt, -1.0, G), q);
  r.max_bracket = sup_abs(poisson_bracket(Ft, Gt));
  r.bracket_input = sup_abs(poisson_bracket(F, G));
  r.modulus_F = modulus_of_continuity(F, cells.delta() * std::numbers::sqrt2);
  r.lq_bound_G = q.is_inf() ? gs : gs * std::pow(r.volume * eps_cell, 1.0 / q.value);
  r.locally_constant = locally_constant_where_supported(Ft, Gt);
  return r;
}

std::pair<ScalarField, ScalarField> overlapping_bumps(int n) {
  const Grid2D g = make_grid({0, 0.2, 0, 0.2}, n, n);
  const Profile1D cut = plateau_profile(0.05, 0.08, 0.12, 0.15, 0.01);
  const double s2 = 2 * 0.03 * 0.03;
  auto bump = [&](double cx) {
    return sample(g, [&, cx](double x, double y) {
      const double r2 = (x - cx) * (x - cx) + (y - 0.1) * (y - 0.1);
      return std::exp(-r2 / s2) * cut(x) * cut(y);
    });
  };
  return {bump(0.085), bump(0.115)};
}

}  // namespace pb4
