#include "pb4/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace pb4 {

std::string format_number(double v) {
  if (v == INF) return "inf";
  if (v == -INF) return "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_number(const std::string& s, const char* what) {
  std::string t = s;
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.erase(t.begin());
  if (t == "inf") return INF;
  if (t == "-inf") return -INF;
  double v = 0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  require(res.ec == std::errc() && res.ptr == t.data() + t.size(), ErrorCode::InvalidArgument,
          std::string("bad number in ") + what + ": '" + s + "'");
  return v;
}

nlohmann::json num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

void write_field_csv(std::ostream& os, const ScalarField& f) {
  const Grid2D& g = f.grid();
  os << "nx,ny,x_min,x_max,y_min,y_max,periodic_x,periodic_y\n";
  os << g.nx << ',' << g.ny << ',' << format_number(g.x_min) << ',' << format_number(g.x_max) << ','
     << format_number(g.y_min) << ',' << format_number(g.y_max) << ',' << (g.periodic_x ? 1 : 0) << ','
     << (g.periodic_y ? 1 : 0) << '\n';
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (i) os << ',';
      os << format_number(f(i, j));
    }
    os << '\n';
  }
}

ScalarField read_field_csv(std::istream& is) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), ErrorCode::InvalidArgument, "field csv is empty");
  require(line.rfind("nx,ny,", 0) == 0, ErrorCode::InvalidArgument, "field csv header missing");
  require(static_cast<bool>(std::getline(is, line)), ErrorCode::InvalidArgument, "field csv metadata missing");
  auto meta = split(line);
  require(meta.size() == 8, ErrorCode::InvalidArgument, "field csv metadata needs 8 entries");
  const int nx = static_cast<int>(parse_number(meta[0], "nx"));
  const int ny = static_cast<int>(parse_number(meta[1], "ny"));
  Grid2D g = make_grid({parse_number(meta[2], "x_min"), parse_number(meta[3], "x_max"),
                        parse_number(meta[4], "y_min"), parse_number(meta[5], "y_max")},
                       nx, ny, parse_number(meta[6], "periodic_x") != 0, parse_number(meta[7], "periodic_y") != 0);
  std::vector<double> v;
  v.reserve(g.size());
  for (int j = 0; j < ny; ++j) {
    require(static_cast<bool>(std::getline(is, line)), ErrorCode::GridMismatch, "field csv has too few rows");
    auto cells = split(line);
    require(static_cast<int>(cells.size()) == nx, ErrorCode::GridMismatch,
            "field csv row " + std::to_string(j) + " has the wrong length");
    for (const auto& c : cells) v.push_back(parse_number(c, "field value"));
  }
  return ScalarField(g, std::move(v));
}

nlohmann::json to_json(const Profile1D& p) {
  nlohmann::json j;
  j["breakpoints"] = p.breakpoints();
  if (p.is_radial()) {
    j["radial_alpha"] = p.alpha();
    j["base"] = to_json(p.base());
  } else {
    std::vector<std::string> kinds;
    for (const auto& s : p.segments()) kinds.push_back(segment_kind_name(s.kind));
    j["segment_kinds"] = kinds;
  }
  j["parameters"] = p.parameters;
  j["mollification_width"] = p.mollification_width();
  return j;
}

nlohmann::json to_json(const FlexReport& r) {
  return {{"sup_dist_F", r.sup_dist_F},   {"lq_dist_G", r.lq_dist_G},
          {"max_bracket", r.max_bracket}, {"delta", r.delta},
          {"eps_cell", r.eps_cell},       {"q", num(r.q)},
          {"modulus_F", r.modulus_F},     {"lq_bound_G", r.lq_bound_G},
          {"bracket_input", r.bracket_input}, {"volume", r.volume},
          {"locally_constant", r.locally_constant}};
}

nlohmann::json to_json(const LowerCertificate& c) {
  return {{"q", num(c.q)},
          {"int_region", c.int_region},
          {"int_complement", c.int_complement},
          {"bound_region", c.bound_region},
          {"bound_complement", c.bound_complement},
          {"holder_complement", c.holder_complement},
          {"total_norm", c.total_norm},
          {"formula", c.formula},
          {"region_ok", c.region_ok},
          {"complement_ok", c.complement_ok},
          {"total_ok", c.total_ok},
          {"holds", c.holds()}};
}

nlohmann::json to_json(const CertificateReport& c) {
  return {{"status", certificate_status_name(c.status)},
          {"final", c.final_value},
          {"formula", c.formula},
          {"ratio", c.ratio}};
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  os << "epsilon,C,norm,formula,ratio\n";
  for (const auto& r : rows)
    os << format_number(r.eps) << ',' << format_number(r.C) << ',' << format_number(r.norm) << ','
       << format_number(r.formula) << ',' << format_number(r.ratio) << '\n';
}

void write_decay_csv(std::ostream& os, const DecayTable& t) {
  os << "alpha,grad_lq_q,field_lq_q\n";
  for (const auto& r : t)
    os << format_number(r.alpha) << ',' << format_number(r.grad_lq_q) << ',' << format_number(r.field_lq_q)
       << '\n';
}

void write_history_csv(std::ostream& os, const std::vector<HistoryRow>& h) {
  os << "iter,objective,step\n";
  for (const auto& r : h) os << r.iter << ',' << format_number(r.objective) << ',' << format_number(r.step) << '\n';
}

}  // namespace pb4
