#include "pb4/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "pb4/curves.hpp"
#include "pb4/flexibility.hpp"
#include "pb4/highdim.hpp"
#include "pb4/io.hpp"
#include "pb4/optimizer.hpp"
#include "pb4/quadrilateral.hpp"

namespace pb4 {

namespace {

using nlohmann::json;

enum class Kind { Positive, PositiveOrInf, Exponent, FiniteExponent, Number, NumberList, Int, Text };

struct Key {
  const char* name;
  Kind kind;
  const char* def;  // nullptr: required; "": optional, left null
};

const std::map<std::string, std::vector<Key>>& key_table() {
  static const std::map<std::string, std::vector<Key>> t = {
      {"formula", {{"A", Kind::Positive, nullptr}, {"B", Kind::PositiveOrInf, nullptr}, {"q", Kind::Exponent, nullptr}}},
      {"verify-upper",
       {{"A", Kind::Positive, nullptr},
        {"B", Kind::PositiveOrInf, nullptr},
        {"q", Kind::FiniteExponent, nullptr},
        {"eps", Kind::NumberList, "0.1,0.01,0.001"},
        {"C", Kind::NumberList, ""},
        {"n", Kind::Int, "512"},
        {"mode", Kind::Text, "auto"}}},
      {"verify-lower",
       {{"A", Kind::Positive, nullptr},
        {"B", Kind::PositiveOrInf, nullptr},
        {"q", Kind::FiniteExponent, nullptr},
        {"eps", Kind::Positive, "0.01"},
        {"C", Kind::Positive, ""},
        {"n", Kind::Int, "512"},
        {"tol", Kind::Positive, "0.03"}}},
      {"stokes",
       {{"A", Kind::Positive, nullptr},
        {"B", Kind::PositiveOrInf, nullptr},
        {"eps", Kind::Positive, "0.01"},
        {"C", Kind::Positive, ""},
        {"n", Kind::Int, "512"}}},
      {"flex",
       {{"F", Kind::Text, ""},
        {"G", Kind::Text, ""},
        {"delta", Kind::Positive, "0.05"},
        {"eps_cell", Kind::Positive, "0.1"},
        {"q", Kind::Exponent, "2"},
        {"n", Kind::Int, "1320"},
        {"dump_F", Kind::Text, ""},
        {"dump_G", Kind::Text, ""}}},
      {"highdim-decay",
       {{"n", Kind::Int, "2"},
        {"d", Kind::Int, "2"},
        {"q", Kind::FiniteExponent, "2"},
        {"b", Kind::Positive, "1"},
        {"delta_prime", Kind::Positive, "1"},
        {"alpha", Kind::NumberList, "1,0.5,0.25,0.1"}}},
      {"curve",
       {{"A", Kind::Positive, nullptr},
        {"B", Kind::PositiveOrInf, nullptr},
        {"q", Kind::Exponent, nullptr},
        {"kind", Kind::Text, "separating"},
        {"C_A", Kind::Positive, ""},
        {"C_B", Kind::Positive, ""},
        {"eps", Kind::Positive, "0.001"},
        {"n", Kind::Int, "1024"}}},
      {"optimize",
       {{"A", Kind::Positive, "1"},
        {"B", Kind::Positive, "3"},
        {"q", Kind::FiniteExponent, "2"},
        {"n", Kind::Int, "256"},
        {"iters", Kind::Int, "400"},
        {"mu", Kind::Positive, "1e-8"},
        {"init", Kind::Text, "warm"},
        {"levels", Kind::Int, "4"},
        {"history", Kind::Text, ""},
        {"tol", Kind::Positive, "0.05"}}},
      {"invariance",
       {{"map", Kind::Text, "shear"},
        {"q", Kind::Exponent, "2"},
        {"s", Kind::Number, "0.5"},
        {"A", Kind::Positive, "1"},
        {"B", Kind::Positive, "1"},
        {"eps", Kind::Positive, "0.1"},
        {"n", Kind::Int, "256"}}},
  };
  return t;
}

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw ConfigError("invalid '" + field + "': " + why);
}

double parse_double(const std::string& field, std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (s == "inf" || s == "INF" || s == "Infinity") return INF;
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) bad(field, "not a number: '" + s + "'");
    return v;
  } catch (const std::invalid_argument&) {
    bad(field, "not a number: '" + s + "'");
  } catch (const std::out_of_range&) {
    bad(field, "out of range: '" + s + "'");
  }
}

double to_double(const std::string& field, const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_double(field, v.get<std::string>());
  bad(field, "expected a number");
}

json encode(double v) { return std::isinf(v) ? json(v > 0 ? "inf" : "-inf") : json(v); }

json normalize(const Key& k, const json& v) {
  const std::string f = k.name;
  switch (k.kind) {
    case Kind::Text:
      if (!v.is_string()) bad(f, "expected a string");
      return v;
    case Kind::Int: {
      const double d = to_double(f, v);
      if (!std::isfinite(d) || d != std::floor(d) || std::abs(d) > 1e9) bad(f, "expected an integer");
      return json(static_cast<long>(d));
    }
    case Kind::NumberList: {
      std::vector<double> xs;
      if (v.is_array()) {
        for (const auto& e : v) xs.push_back(to_double(f, e));
      } else if (v.is_string()) {
        std::stringstream ss(v.get<std::string>());
        std::string cell;
        while (std::getline(ss, cell, ','))
          if (!cell.empty()) xs.push_back(parse_double(f, cell));
      } else if (v.is_number()) {
        xs.push_back(v.get<double>());
      } else {
        bad(f, "expected a list of numbers");
      }
      json out = json::array();
      for (double x : xs) {
        if (!std::isfinite(x)) bad(f, "list entries must be finite");
        out.push_back(x);
      }
      return out;
    }
    default:
      break;
  }
  const double d = to_double(f, v);
  if (std::isnan(d)) bad(f, "not a number");
  switch (k.kind) {
    case Kind::Positive:
      if (!(d > 0) || !std::isfinite(d)) bad(f, "must be positive and finite");
      break;
    case Kind::PositiveOrInf:
      if (!(d > 0)) bad(f, "must be positive or inf");
      break;
    case Kind::Exponent:
      if (!(d >= 1)) bad(f, "exponent must satisfy q >= 1 (or inf)");
      break;
    case Kind::FiniteExponent:
      if (!(d >= 1) || !std::isfinite(d)) bad(f, "exponent must be finite and >= 1");
      break;
    case Kind::Number:
      if (!std::isfinite(d)) bad(f, "must be finite");
      break;
    default:
      break;
  }
  return encode(d);
}

double num(const json& p, const char* key) { return to_double(key, p.at(key)); }
long integer(const json& p, const char* key) { return p.at(key).get<long>(); }
std::string text(const json& p, const char* key) { return p.at(key).get<std::string>(); }
std::vector<double> list(const json& p, const char* key) { return p.at(key).get<std::vector<double>>(); }
bool has(const json& p, const char* key) { return !p.at(key).is_null(); }

int grid_size(const json& p, const char* key, int lo, int hi) {
  const long n = integer(p, key);
  if (n < lo || n > hi) bad(key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(n);
}

void print_json(std::ostream& os, const json& j) { os << j.dump(2) << '\n'; }

double default_C(double A, double B, double eps) {
  return std::isfinite(B) ? B - eps : A * (1 + 1 / std::sqrt(eps));
}

QuadProblem quad_from(const json& p, double q) {
  QuadProblem qp;
  qp.A = num(p, "A");
  qp.B = num(p, "B");
  if (!(qp.A < qp.B)) bad("B", "must exceed A");
  qp.q = q;
  qp.eps = num(p, "eps");
  qp.C = has(p, "C") ? num(p, "C") : default_C(qp.A, qp.B, qp.eps);
  return qp;
}

// Each handler returns 0 on success and 1 when the computed check fails.
int cmd_formula(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const double A = num(c.params, "A"), B = num(c.params, "B");
  if (!(A < B)) bad("B", "must exceed A");
  const FormulaValue v = pb4_formula(A, B, num(c.params, "q"));
  out << format_number(v.value) << '\n';
  err << "exactness: " << exactness_name(v.flag) << '\n';
  return 0;
}

int cmd_verify_upper(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const json& p = c.params;
  const double A = num(p, "A"), B = num(p, "B");
  if (!(A < B)) bad("B", "must exceed A");
  const std::string m = text(p, "mode");
  GridPolicy pol;
  pol.n = grid_size(p, "n", 16, 4096);
  if (m == "auto") pol.mode = BracketMode::Auto;
  else if (m == "stencil") pol.mode = BracketMode::Stencil;
  else if (m == "exact") pol.mode = BracketMode::Exact;
  else bad("mode", "expected auto, stencil or exact");
  const auto rows = verify_upper(A, B, num(p, "q"), list(p, "eps"), has(p, "C") ? list(p, "C") : std::vector<double>{},
                                 pol);
  write_convergence_csv(out, rows);
  for (std::size_t k = 1; k < rows.size(); ++k)
    if (rows[k].ratio > rows[k - 1].ratio) {
      err << "ratio increased at eps = " << format_number(rows[k].eps) << '\n';
      return 1;
    }
  return 0;
}

int cmd_verify_lower(const RunConfig& c, std::ostream& out, std::ostream&) {
  const json& p = c.params;
  const double q = num(p, "q");
  const QuadProblem qp = quad_from(p, q);
  const AdmissiblePair pair = build_pair(qp, default_quad_grid(qp, grid_size(p, "n", 16, 4096)));
  const LowerCertificate cert = verify_lower(pair, q, qp.A, qp.B, num(p, "tol"));
  json j = to_json(cert);
  j["admissible"] = pair.admissible;
  print_json(out, j);
  return cert.holds() && pair.admissible ? 0 : 1;
}

int cmd_stokes(const RunConfig& c, std::ostream& out, std::ostream&) {
  const json& p = c.params;
  const QuadProblem qp = quad_from(p, 2.0);
  const AdmissiblePair pair = build_pair(qp, default_quad_grid(qp, grid_size(p, "n", 16, 4096)));
  const StokesRecord in = stokes_defect(pair, pair.region);
  const StokesRecord outside = stokes_defect(pair, pair.region.complement());
  auto ok = [](const StokesRecord& r) { return std::abs(r.signed_integral) >= 0.97 && std::abs(r.signed_integral) <= 1.03; };
  const bool pass = ok(in) && ok(outside);
  print_json(out, {{"region", {{"signed", in.signed_integral}, {"abs", in.abs_integral}}},
                   {"complement", {{"signed", outside.signed_integral}, {"abs", outside.abs_integral}}},
                   {"pass", pass}});
  return pass ? 0 : 1;
}

ScalarField read_field_file(const std::string& path, const char* field) {
  std::ifstream is(path);
  if (!is) bad(field, "cannot open '" + path + "'");
  return read_field_csv(is);
}

void dump_field(const std::string& path, const ScalarField& f, const char* field) {
  std::ofstream os(path);
  if (!os) bad(field, "cannot write '" + path + "'");
  write_field_csv(os, f);
}

int cmd_flex(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const json& p = c.params;
  ScalarField F, G;
  if (has(p, "F") != has(p, "G")) bad(has(p, "F") ? "G" : "F", "F and G must be given together");
  if (has(p, "F")) {
    F = read_field_file(text(p, "F"), "F");
    G = read_field_file(text(p, "G"), "G");
  } else {
    std::tie(F, G) = overlapping_bumps(grid_size(p, "n", 16, 8192));
  }
  const double delta = num(p, "delta"), eps_cell = num(p, "eps_cell");
  const FlexReport r = flex_report(F, G, delta, eps_cell, num(p, "q"));
  if (has(p, "dump_F") || has(p, "dump_G")) {
    const Grid2D& g = F.grid();
    const CellDecomposition cells = decompose({g.x_min, g.x_max, g.y_min, g.y_max}, delta, eps_cell);
    if (has(p, "dump_F")) dump_field(text(p, "dump_F"), flatten_F(F, cells), "dump_F");
    if (has(p, "dump_G")) dump_field(text(p, "dump_G"), localize_G(G, cells), "dump_G");
  }
  print_json(out, to_json(r));
  const bool pass = r.max_bracket == 0.0 && r.locally_constant && r.sup_dist_F <= r.modulus_F &&
                    r.lq_dist_G <= r.lq_bound_G;
  if (!pass) err << "flexibility bounds violated\n";
  return pass ? 0 : 1;
}

int cmd_highdim(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const json& p = c.params;
  HighDimSpec s;
  s.n = grid_size(p, "n", 2, 64);
  s.d = grid_size(p, "d", 0, 126);
  s.q = num(p, "q");
  s.b = num(p, "b");
  s.delta_prime = num(p, "delta_prime");
  const DecayTable t = decay_curve(s, list(p, "alpha"));
  write_decay_csv(out, t);
  for (std::size_t k = 1; k < t.size(); ++k)
    if (!(t[k].grad_lq_q < t[k - 1].grad_lq_q) || !(t[k].field_lq_q < t[k - 1].field_lq_q)) {
      err << "decay is not strict at alpha = " << format_number(t[k].alpha) << '\n';
      return 1;
    }
  return 0;
}

int cmd_curve(const RunConfig& c, std::ostream& out, std::ostream&) {
  const json& p = c.params;
  const double A = num(p, "A"), B = num(p, "B");
  const ExtendedExponent q = num(p, "q");
  const std::string kind = text(p, "kind");
  json j = {{"A", encode(A)}, {"B", encode(B)}, {"q", encode(q.value)}, {"kind", kind}};
  int code = 0;
  if (kind == "nonseparating") {
    const CurvePairResult r = nonseparating_pair(default_torus_spec(grid_size(p, "n", 32, 4096)), q);
    const bool zero = sup_abs(r.pair.bracket) == 0.0;
    j["formula"] = 0.0;
    j["measured"] = r.norm;
    j["certificate"] = {{"status", zero && r.pair.admissible ? "EXACT_ZERO" : "GAP"},
                        {"admissible", r.pair.admissible}};
    code = zero && r.pair.admissible ? 0 : 1;
  } else if (kind == "separating") {
    const double formula = pb4_curve_formula(A, B, q);
    j["formula"] = encode(formula);
    if (!std::isfinite(B) || !std::isfinite(A)) {
      j["measured"] = nullptr;
      j["certificate"] = {{"status", "FORMULA_ONLY"}};
    } else {
      SeparatingSpec s;
      s.model = {A, B};
      s.q = q;
      s.eps = num(p, "eps");
      s.C_A = has(p, "C_A") ? num(p, "C_A") : 0.99 * A;
      s.C_B = has(p, "C_B") ? num(p, "C_B") : 0.99 * B;
      s.nt = s.ntheta = grid_size(p, "n", 32, 4096);
      const CurvePairResult r = separating_pair(s);
      const bool lower = r.norm >= (1 - 0.03) * formula;
      const bool upper = r.norm <= 1.05 * r.formula;
      j["measured"] = r.norm;
      j["certificate"] = {{"status", lower ? "LOWER_RESPECTED" : "GAP"},
                          {"upper_ok", upper},
                          {"construction_formula", r.formula},
                          {"admissible", r.pair.admissible}};
      code = lower && upper && r.pair.admissible ? 0 : 1;
    }
  } else {
    bad("kind", "expected separating or nonseparating");
  }
  print_json(out, j);
  return code;
}

int cmd_optimize(const RunConfig& c, std::ostream& out, std::ostream&) {
  const json& p = c.params;
  const double A = num(p, "A"), B = num(p, "B"), q = num(p, "q");
  if (!(A < B)) bad("B", "must exceed A");
  const int n = grid_size(p, "n", 32, 2048);
  const int iters = grid_size(p, "iters", 0, 1000000);
  const int levels = grid_size(p, "levels", 1, 8);
  if ((n >> (levels - 1)) < 32) bad("levels", "coarsest grid would have fewer than 32 nodes");
  const double mu = num(p, "mu");
  const std::string init = text(p, "init");
  OptResult r;
  if (init == "warm") {
    r = minimize_multilevel(A, B, q, n, iters, levels, mu);
  } else if (init == "random") {
    if (levels != 1) bad("levels", "random init runs on a single level");
    RectangleSetup s = rectangle_setup(A, B, q, n);
    s.problem.max_iter = iters;
    s.problem.mu = mu;
    r = minimize_random(s.problem, c.seed);
  } else {
    bad("init", "expected warm or random");
  }
  if (has(p, "history")) {
    std::ofstream os(text(p, "history"));
    if (!os) bad("history", "cannot write '" + text(p, "history") + "'");
    write_history_csv(os, r.history);
  }
  const CertificateReport cert = certificate(r, pb4_formula(A, B, q).value, num(p, "tol"));
  print_json(out, {{"A", A},
                   {"B", B},
                   {"q", q},
                   {"mu", mu},
                   {"levels", levels},
                   {"iterations", r.history.back().iter},
                   {"stop_reason", r.stop_reason},
                   {"final_objective", r.final_objective},
                   {"floor", r.floor},
                   {"final_norm", r.final_norm},
                   {"certificate", to_json(cert)}});
  return cert.status == CertificateStatus::LOWER_RESPECTED ? 0 : 1;
}

int cmd_invariance(const RunConfig& c, std::ostream& out, std::ostream&) {
  const json& p = c.params;
  const std::string m = text(p, "map");
  const int n = grid_size(p, "n", 32, 2048);
  const ExtendedExponent q = num(p, "q");
  InvarianceResult r{};
  json j = {{"map", m}, {"q", encode(q.value)}};
  if (m == "shear") {
    r = symp_invariance_check(planar_test_pair(n), shear_map(num(p, "s")), q);
  } else if (m == "identity") {
    r = symp_invariance_check(planar_test_pair(n), identity_map(), q);
  } else if (m == "annulus") {
    const CylinderModel model{num(p, "A"), num(p, "B")};
    const AnnulusMap am = cylinder_to_annulus(model, num(p, "eps"));
    r = symp_invariance_check(cylinder_test_pair(model, n), am.map, q);
    j["annulus"] = {{"inner_radius", am.inner_radius}, {"curve_radius", am.curve_radius},
                    {"outer_radius", am.outer_radius}, {"area_inner", am.area_inner},
                    {"area_outer", am.area_outer}, {"ok", am.ok}};
    r.pass = r.pass && am.ok;
  } else {
    bad("map", "expected shear, identity or annulus");
  }
  j["norm_before"] = r.norm_before;
  j["norm_after"] = r.norm_after;
  j["rel_diff"] = r.rel_diff;
  j["pass"] = r.pass;
  print_json(out, j);
  return r.pass ? 0 : 1;
}

using Handler = int (*)(const RunConfig&, std::ostream&, std::ostream&);
const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"formula", cmd_formula},       {"verify-upper", cmd_verify_upper}, {"verify-lower", cmd_verify_lower},
      {"stokes", cmd_stokes},         {"flex", cmd_flex},                 {"highdim-decay", cmd_highdim},
      {"curve", cmd_curve},           {"optimize", cmd_optimize},         {"invariance", cmd_invariance}};
  return h;
}

json read_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("invalid 'config': cannot open '" + path + "'");
  try {
    json j = json::parse(is);
    if (!j.is_object()) throw ConfigError("invalid 'config': expected a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid 'config': malformed JSON: ") + e.what());
  }
}

}  // namespace

RunConfig resolve_config(const std::string& subcommand, const json& raw) {
  const auto& table = key_table();
  auto it = table.find(subcommand);
  if (it == table.end()) bad("subcommand", "unknown subcommand '" + subcommand + "'");
  if (!raw.is_object()) bad("config", "expected a JSON object");
  RunConfig c;
  c.subcommand = subcommand;
  c.params = json::object();
  for (const auto& [k, v] : raw.items()) {
    if (k == "subcommand" || k == "seed" || k == "out") continue;
    const bool known = std::any_of(it->second.begin(), it->second.end(), [&](const Key& key) { return k == key.name; });
    if (!known) bad(k, "not a parameter of " + subcommand);
  }
  for (const Key& k : it->second) {
    if (raw.contains(k.name) && !raw.at(k.name).is_null()) {
      c.params[k.name] = normalize(k, raw.at(k.name));
    } else if (k.def == nullptr) {
      bad(k.name, "required by " + subcommand);
    } else if (std::string(k.def).empty()) {
      c.params[k.name] = nullptr;
    } else {
      c.params[k.name] = normalize(k, json(k.def));
    }
  }
  if (raw.contains("seed")) {
    const double s = to_double("seed", raw.at("seed"));
    if (!(s >= 0) || s != std::floor(s) || s > 4294967295.0) bad("seed", "expected a nonnegative integer");
    c.seed = static_cast<unsigned>(s);
  }
  if (raw.contains("out")) {
    if (!raw.at("out").is_string()) bad("out", "expected a path");
    c.out = raw.at("out").get<std::string>();
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  const json j = read_json_file(path);
  if (!j.contains("subcommand") || !j.at("subcommand").is_string()) bad("subcommand", "missing from config");
  return resolve_config(j.at("subcommand").get<std::string>(), j);
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"pb4lab: pb4 invariants of quadrilaterals and curves"};
  app.require_subcommand(0, 1);
  std::string top_config;
  app.add_option("--config", top_config, "JSON config with a \"subcommand\" key");

  struct SubState {
    CLI::App* app;
    std::string config, out, seed;
    std::map<std::string, std::string> flags;
  };
  std::map<std::string, SubState> subs;
  for (const auto& [name, keys] : key_table()) {
    SubState& s = subs[name];
    s.app = app.add_subcommand(name);
    s.app->add_option("--config", s.config, "JSON config; flags override its values");
    s.app->add_option("--out", s.out, "output path (default stdout)");
    s.app->add_option("--seed", s.seed, "seed for randomized runs");
    for (const Key& k : keys) s.app->add_option(std::string("--") + k.name, s.flags[k.name]);
  }

  std::vector<std::string> args(argv.rbegin(), argv.rend());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return 2;
  }

  try {
    std::string sub;
    json raw = json::object();
    const SubState* state = nullptr;
    for (const auto& [name, s] : subs)
      if (s.app->parsed()) {
        sub = name;
        state = &s;
      }
    const std::string config_path = state && !state->config.empty() ? state->config : top_config;
    if (!config_path.empty()) {
      raw = read_json_file(config_path);
      if (raw.contains("subcommand")) {
        if (!raw.at("subcommand").is_string()) bad("subcommand", "expected a string");
        const std::string from_file = raw.at("subcommand").get<std::string>();
        if (sub.empty()) sub = from_file;
        else if (from_file != sub) bad("subcommand", "config names '" + from_file + "' but '" + sub + "' was given");
      }
    }
    if (sub.empty()) {
      err << "error: no subcommand given\n" << app.help();
      return 2;
    }
    if (state) {
      for (const auto& [k, v] : state->flags)
        if (state->app->count(std::string("--") + k) > 0) raw[k] = v;
      if (state->app->count("--seed") > 0) raw["seed"] = state->seed;
      if (state->app->count("--out") > 0) raw["out"] = state->out;
    }
    RunConfig cfg = resolve_config(sub, raw);
    json echo = {{"subcommand", cfg.subcommand}, {"params", cfg.params}, {"seed", cfg.seed}};
    if (!cfg.out.empty()) echo["out"] = cfg.out;
    err << "config: " << echo.dump() << '\n';

    const Handler h = handlers().at(cfg.subcommand);
    if (cfg.out.empty()) return h(cfg, out, err);
    std::ostringstream buf;
    const int code = h(cfg, buf, err);
    std::ofstream os(cfg.out);
    if (!os) bad("out", "cannot write '" + cfg.out + "'");
    os << buf.str();
    return code;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace pb4
