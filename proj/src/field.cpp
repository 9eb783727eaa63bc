#include "pb4/field.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

namespace pb4 {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::GridMismatch: return "grid mismatch";
    case ErrorCode::NonFinite: return "non-finite value";
    case ErrorCode::TooCoarse: return "grid too coarse";
    case ErrorCode::SupportViolation: return "support violation";
    case ErrorCode::NotAreaPreserving: return "map not area preserving";
    case ErrorCode::Unsupported: return "unsupported";
  }
  return "error";
}

Grid2D make_grid(Bounds b, int nx, int ny, bool periodic_x, bool periodic_y) {
  require(std::isfinite(b.x_min) && std::isfinite(b.x_max) && std::isfinite(b.y_min) &&
              std::isfinite(b.y_max),
          ErrorCode::InvalidArgument, "grid bounds must be finite");
  require(b.x_min < b.x_max && b.y_min < b.y_max, ErrorCode::InvalidArgument,
          "grid bounds must satisfy min < max on both axes");
  require(nx >= 4 && ny >= 4, ErrorCode::InvalidArgument, "grid needs at least 4 nodes per axis");
  Grid2D g{b.x_min, b.x_max, b.y_min, b.y_max, nx, ny, periodic_x, periodic_y};
  require(g.hx() > 0 && g.hy() > 0, ErrorCode::InvalidArgument, "degenerate grid spacing");
  return g;
}

ScalarField::ScalarField(const Grid2D& g, double fill) : grid_(g), values_(g.size(), fill) {
  require(std::isfinite(fill), ErrorCode::NonFinite, "fill value");
}

ScalarField::ScalarField(const Grid2D& g, std::vector<double> values)
    : grid_(g), values_(std::move(values)) {
  require(values_.size() == g.size(), ErrorCode::InvalidArgument,
          "value count must equal nx*ny");
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      std::ostringstream os;
      os << "node (" << k % g.nx << ", " << k / g.nx << ")";
      throw Error(ErrorCode::NonFinite, os.str());
    }
  }
}

Mask Mask::where(const Grid2D& g, const std::function<bool(double, double)>& pred) {
  Mask m = none(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) m.on[g.index(i, j)] = pred(g.x(i), g.y(j)) ? 1 : 0;
  return m;
}

std::size_t Mask::count() const { return static_cast<std::size_t>(std::count(on.begin(), on.end(), 1)); }

Mask Mask::complement() const {
  Mask m = *this;
  for (auto& v : m.on) v = v ? 0 : 1;
  return m;
}

std::vector<double> SymplecticDensity::on(const Grid2D& g) const {
  std::vector<double> w(g.size(), constant);
  if (weight) {
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) w[g.index(i, j)] = weight(g.x(i), g.y(j));
  }
  for (double v : w)
    require(v > 0 && std::isfinite(v), ErrorCode::InvalidArgument, "density weight must be positive");
  return w;
}

ExtendedExponent::ExtendedExponent(double v) : value(v) {
  require(v == INF || (std::isfinite(v) && v >= 1.0), ErrorCode::InvalidArgument,
          "exponent q must satisfy q >= 1 or be inf");
}

ScalarField sample(const Grid2D& g, const std::function<double(double, double)>& f) {
  std::vector<double> v(g.size());
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      double val = f(g.x(i), g.y(j));
      if (!std::isfinite(val)) {
        std::ostringstream os;
        os << "sample at node (" << i << ", " << j << ") = (" << g.x(i) << ", " << g.y(j) << ")";
        throw Error(ErrorCode::NonFinite, os.str());
      }
      v[g.index(i, j)] = val;
    }
  }
  return ScalarField(g, std::move(v));
}

Stencil derivative_stencil(int i, int count, double h, bool periodic) {
  Stencil s;
  const double inv = 1.0 / (2.0 * h);
  if (periodic) {
    s.n = 2;
    s.idx[0] = (i - 1 + count) % count;
    s.c[0] = -inv;
    s.idx[1] = (i + 1) % count;
    s.c[1] = inv;
  } else if (i == 0) {
    s.n = 3;
    s.idx[0] = 0; s.c[0] = -3 * inv;
    s.idx[1] = 1; s.c[1] = 4 * inv;
    s.idx[2] = 2; s.c[2] = -inv;
  } else if (i == count - 1) {
    s.n = 3;
    s.idx[0] = count - 1; s.c[0] = 3 * inv;
    s.idx[1] = count - 2; s.c[1] = -4 * inv;
    s.idx[2] = count - 3; s.c[2] = inv;
  } else {
    s.n = 2;
    s.idx[0] = i - 1; s.c[0] = -inv;
    s.idx[1] = i + 1; s.c[1] = inv;
  }
  return s;
}

ScalarField d_dx(const ScalarField& f) {
  const Grid2D& g = f.grid();
  std::vector<double> out(g.size());
  const auto& v = f.values();
  parallel_rows(g.ny, [&](int j) {
    for (int i = 0; i < g.nx; ++i) {
      Stencil s = derivative_stencil(i, g.nx, g.hx(), g.periodic_x);
      double acc = 0;
      for (int k = 0; k < s.n; ++k) acc += s.c[k] * v[g.index(s.idx[k], j)];
      out[g.index(i, j)] = acc;
    }
  });
  return ScalarField(g, std::move(out));
}

ScalarField d_dy(const ScalarField& f) {
  const Grid2D& g = f.grid();
  std::vector<double> out(g.size());
  const auto& v = f.values();
  parallel_rows(g.ny, [&](int j) {
    Stencil s = derivative_stencil(j, g.ny, g.hy(), g.periodic_y);
    for (int i = 0; i < g.nx; ++i) {
      double acc = 0;
      for (int k = 0; k < s.n; ++k) acc += s.c[k] * v[g.index(i, s.idx[k])];
      out[g.index(i, j)] = acc;
    }
  });
  return ScalarField(g, std::move(out));
}

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what) {
  require(a == b, ErrorCode::GridMismatch, what);
}

ScalarField poisson_bracket(const ScalarField& F, const ScalarField& G, const SymplecticDensity& w) {
  require_same_grid(F.grid(), G.grid(), "poisson_bracket operands");
  const Grid2D& g = F.grid();
  ScalarField Fx = d_dx(F), Fy = d_dy(F), Gx = d_dx(G), Gy = d_dy(G);
  std::vector<double> wv = w.on(g);
  std::vector<double> out(g.size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = -(Fx[k] * Gy[k] - Fy[k] * Gx[k]) / wv[k];
  return ScalarField(g, std::move(out));
}

namespace {

template <class Term>
double masked_row_sum(const Grid2D& g, const Mask* m, Term term) {
  std::vector<double> rows(g.ny, 0.0);
  parallel_rows(g.ny, [&](int j) {
    double acc = 0;
    for (int i = 0; i < g.nx; ++i) {
      std::size_t k = g.index(i, j);
      if (m && !m->on[k]) continue;
      acc += term(k);
    }
    rows[j] = acc;
  });
  double total = 0;
  for (double r : rows) total += r;
  return total;
}

}  // namespace

double lq_power(const ScalarField& f, double q, const Mask& m, const SymplecticDensity& w) {
  require_same_grid(f.grid(), m.grid, "mask");
  require(std::isfinite(q) && q >= 1, ErrorCode::InvalidArgument, "lq_power needs finite q >= 1");
  const Grid2D& g = f.grid();
  std::vector<double> wv = w.on(g);
  const auto& v = f.values();
  double s = masked_row_sum(g, &m, [&](std::size_t k) {
    double a = std::abs(v[k]);
    return (q == 1 ? a : q == 2 ? a * a : std::pow(a, q)) * wv[k];
  });
  return s * g.cell_area();
}

double lq_norm(const ScalarField& f, ExtendedExponent q, const Mask& m, const SymplecticDensity& w) {
  require_same_grid(f.grid(), m.grid, "mask");
  if (q.is_inf()) {
    double mx = 0;
    for (std::size_t k = 0; k < f.values().size(); ++k)
      if (m.on[k]) mx = std::max(mx, std::abs(f[k]));
    return mx;
  }
  return std::pow(lq_power(f, q.value, m, w), 1.0 / q.value);
}

double lq_norm(const ScalarField& f, ExtendedExponent q, const SymplecticDensity& w) {
  return lq_norm(f, q, Mask::all(f.grid()), w);
}

double integrate(const ScalarField& f, const Mask& m, const SymplecticDensity& w) {
  require_same_grid(f.grid(), m.grid, "mask");
  const Grid2D& g = f.grid();
  std::vector<double> wv = w.on(g);
  const auto& v = f.values();
  return masked_row_sum(g, &m, [&](std::size_t k) { return v[k] * wv[k]; }) * g.cell_area();
}

double sup_abs(const ScalarField& f) {
  double mx = 0;
  for (double v : f.values()) mx = std::max(mx, std::abs(v));
  return mx;
}

ScalarField combine(double a, const ScalarField& f, double b, const ScalarField& g) {
  require_same_grid(f.grid(), g.grid(), "combine operands");
  std::vector<double> out(f.values().size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a * f[k] + b * g[k];
  return ScalarField(f.grid(), std::move(out));
}

ScalarField multiply(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid(), g.grid(), "multiply operands");
  std::vector<double> out(f.values().size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = f[k] * g[k];
  return ScalarField(f.grid(), std::move(out));
}

namespace {
std::atomic<int> g_thread_limit{0};

int env_threads() {
  if (const char* s = std::getenv("PB4_THREADS")) {
    int n = std::atoi(s);
    if (n > 0) return n;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}
}  // namespace

void set_thread_limit(int n) { g_thread_limit = std::max(1, n); }

int thread_limit() {
  int n = g_thread_limit.load();
  if (n == 0) {
    n = env_threads();
    g_thread_limit = n;
  }
  return n;
}

void parallel_rows(int rows, const std::function<void(int)>& body) {
  int t = std::min(thread_limit(), rows / 32);
  if (t <= 1) {
    for (int j = 0; j < rows; ++j) body(j);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (int k = 0; k < t; ++k) {
    int lo = rows * k / t, hi = rows * (k + 1) / t;
    pool.emplace_back([lo, hi, &body] {
      for (int j = lo; j < hi; ++j) body(j);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace pb4
