// packbound: upper bounds for translative packings of three-dimensional convex bodies.

#include "packbound/b3.hpp"
#include "packbound/bundle_io.hpp"
#include "packbound/certify.hpp"
#include "packbound/domaincheck.hpp"
#include "packbound/errors.hpp"
#include "packbound/geometry.hpp"
#include "packbound/model.hpp"
#include "packbound/numeric.hpp"
#include "packbound/sdpa.hpp"
#include "packbound/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifndef PACKBOUND_SOLID_DIR
#define PACKBOUND_SOLID_DIR "tools/solids"
#endif

namespace pb = packbound;
using nlohmann::json;

namespace {

enum Exit { Ok = 0, Generic = 1, Usage = 2, SolverFailure = 3, CertificationFailure = 4, DomainFailure = 5 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string solid_dir() {
  if (const char* env = std::getenv("PACKBOUND_SOLID_DIR")) return env;
  return PACKBOUND_SOLID_DIR;
}

struct RunConfig {
  std::string solid;
  int d = 3;
  std::string alpha;  // empty: the solid's default
  std::string delta;  // empty: circumradius-based default
  std::string spacing = "1/50";
  unsigned precision = 256;
  double tol = 1e-20;
  double eta = 1e-5;
  int max_iter = 250;
  std::string backend = "builtin";
  std::string sdpa_solution;
  int max_depth = 6;
  int split_threshold = 30;
  int threads = 1;
  std::size_t spot = 0;
  std::string solution_out = "solution.json";
  std::string certificate_out = "certificate.json";
  std::string cube_list;
  bool verbose = false;
};

std::uint64_t g_seed = 0;

void validate(const RunConfig& c) {
  if (c.d <= 0 || c.d % 2 == 0) throw UsageError("--d must be odd and positive");
  if (c.precision < 64) throw UsageError("--precision must be at least 64");
  if (!c.alpha.empty() && pb::parse_rational(c.alpha) < 1) throw UsageError("--alpha must be at least 1");
  if (c.backend != "builtin" && c.backend != "file") throw UsageError("--backend is builtin or file");
  if (c.threads < 1) throw UsageError("--threads must be positive");
}

mpq_class alpha_of(const RunConfig& c, const pb::Solid& s) {
  return c.alpha.empty() ? s.alpha : pb::parse_rational(c.alpha);
}

struct Built {
  pb::Solid solid;
  pb::SdpModel model;
};

Built build_model(const std::string& solid, int d, const std::string& spacing) {
  Built b;
  b.solid = pb::load_solid(solid, solid_dir());
  auto samples = pb::generate_samples(b.solid, pb::parse_rational(spacing));
  b.model = pb::assemble(b.solid, d, samples);
  return b;
}

pb::RunMetadata metadata() { return {pb::utc_timestamp(), g_seed}; }

// ---- formatting ------------------------------------------------------------

std::string coefficient_text(const pb::Coefficient& c) {
  if (c.is_rational()) return c.rational_part().get_str();
  std::string s = c.str();
  return s.find(' ') == std::string::npos ? s : "(" + s + ")";
}

template <class Poly>
std::string poly_text(const Poly& p, const char* var) {
  if (p.is_zero()) return "0";
  std::string out;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    std::string mono;
    for (int i = 0; i < 3; ++i) {
      if (it->first[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += var + std::to_string(i + 1);
      if (it->first[i] > 1) mono += "^" + std::to_string(it->first[i]);
    }
    std::string c = coefficient_text(it->second);
    if (!out.empty()) {
      if (c[0] == '-') {
        out += " - ";
        c = c.substr(1);
      } else {
        out += " + ";
      }
    }
    if (mono.empty()) out += c;
    else if (c == "1") out += mono;
    else if (c == "-1") out += "-" + mono;
    else out += c + "*" + mono;
  }
  return out;
}

std::string series_text(const std::vector<long>& c, const char* var) {
  std::string out;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] == 0) continue;
    if (!out.empty()) out += " + ";
    std::string mono = k == 0 ? "" : k == 1 ? var : std::string(var) + "^" + std::to_string(k);
    if (mono.empty()) out += std::to_string(c[k]);
    else out += (c[k] == 1 ? "" : std::to_string(c[k])) + mono;
  }
  return out;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// ---- invariants ------------------------------------------------------------

int cmd_invariants(bool dump, int upto) {
  const auto& irr = pb::irreps();
  std::cout << "Character table of B3 (order " << pb::kGroupOrder << ")\n";
  std::printf("%-6s", "");
  for (const char* c : pb::kClassNames) std::printf("%9s", c);
  std::printf("\n");
  for (const auto& r : irr) {
    std::printf("%-6s", r.name.c_str());
    for (int v : r.character) std::printf("%9d", v);
    std::printf("\n");
  }
  std::cout << "\nMolien series (invariants):   " << series_text(pb::molien_coefficients(pb::Series::Invariant, upto), "t")
            << " + ...\n";
  std::cout << "Coinvariant Poincare series:  " << series_text(pb::molien_coefficients(pb::Series::Coinvariant, 9), "t")
            << "\n";
  std::cout << "Invariant harmonics:          "
            << series_text(pb::molien_coefficients(pb::Series::HarmonicInvariant, upto), "t") << " + ...\n";
  if (!dump) return Ok;

  const auto& data = pb::isotypic_data();
  std::cout << "\nCoinvariant basis by isotypic component\n";
  for (const auto& iso : data) {
    std::cout << "\n" << iso.irrep.name << " (dimension " << iso.dim() << ")\n";
    for (std::size_t k = 0; k < iso.rows.size(); ++k) {
      std::cout << "  row " << k + 1 << ", degree " << iso.rows[k].degree << "\n";
      for (std::size_t j = 0; j < iso.rows[k].phi.size(); ++j)
        std::cout << "    phi_" << k + 1 << j + 1 << " = " << poly_text(iso.rows[k].phi[j], "x") << "\n";
    }
  }
  std::cout << "\nMatrices Q^pi in theta1, theta2, theta3\n";
  for (const auto& iso : data) {
    std::cout << "\n" << iso.irrep.name << "\n";
    for (std::size_t r = 0; r < iso.qpi.size(); ++r)
      for (std::size_t s = r; s < iso.qpi[r].size(); ++s)
        std::cout << "  Q[" << r + 1 << "," << s + 1 << "] = " << poly_text(iso.qpi[r][s], "t") << "\n";
  }
  return Ok;
}

// ---- model -----------------------------------------------------------------

int cmd_model(const RunConfig& cfg, const std::string& json_out, const std::string& sdpa_out) {
  validate(cfg);
  auto b = build_model(cfg.solid, cfg.d, cfg.spacing);
  const auto& m = b.model;
  std::cout << "solid " << b.solid.name << ", d = " << m.d << ", s of degree " << 2 * m.ds << "\n";
  std::cout << "blocks (" << m.blocks.size() << "):";
  for (const auto& blk : m.blocks)
    std::cout << " " << pb::role_name(blk.role) << "/" << pb::irreps()[blk.irrep].name << ":" << blk.size();
  std::size_t identity = 0;
  for (const auto& c : m.constraints) identity += c.kind == pb::ConstraintKind::Identity;
  std::cout << "\nconstraints: 1 normalization, " << identity << " identity, " << m.samples.size() << " sample\n";
  if (!json_out.empty()) pb::write_text_file(json_out, pb::model_to_json(m));
  if (!sdpa_out.empty()) pb::write_sdpa(pb::to_numeric(m, cfg.precision), sdpa_out);
  return Ok;
}

// ---- solve -----------------------------------------------------------------

pb::SolutionBundle run_solver(const RunConfig& cfg, const pb::NumericModel& nm) {
  pb::SolverOptions o;
  o.precision = cfg.precision;
  o.tol = cfg.tol;
  o.max_iter = cfg.max_iter;
  o.verbose = cfg.verbose;
  pb::PrecisionScope scope(cfg.precision);
  if (cfg.backend == "file") {
    if (cfg.sdpa_solution.empty()) throw UsageError("--backend file needs --sdpa-solution");
    return pb::import_sdpa_solution(pb::read_text_file(cfg.sdpa_solution), nm);
  }
  auto first = pb::solve_builtin(nm, o);
  std::cout << "first pass: objective " << first.primal_objective.str(12) << " after " << first.iterations
            << " iterations\n";
  if (cfg.eta <= 0) return first;
  auto ac = pb::analytic_center_pass(nm, first, cfg.eta, o);
  std::cout << "analytic center pass: objective " << pb::objective_value(ac, nm).str(12) << " after "
            << ac.iterations << " iterations\n";
  return ac;
}

void print_solution_stats(const pb::SolutionBundle& sol, const pb::NumericModel& nm) {
  pb::PrecisionScope scope(nm.precision);
  std::cout << "min eigenvalue " << pb::min_eigenvalue(sol, nm).str(6) << ", max violation "
            << pb::max_violation(sol, nm).str(6) << "\n";
}

int cmd_solve(const RunConfig& cfg) {
  validate(cfg);
  auto b = build_model(cfg.solid, cfg.d, cfg.spacing);
  auto nm = pb::to_numeric(b.model, cfg.precision);
  auto sol = run_solver(cfg, nm);
  print_solution_stats(sol, nm);
  pb::write_text_file(cfg.solution_out, pb::bundle_to_json(sol, {cfg.solid, cfg.d, cfg.spacing}, metadata()));
  std::cout << "wrote " << cfg.solution_out << "\n";
  return Ok;
}

// ---- certify and check-domain ------------------------------------------------

json interval_pair(const pb::Interval& x) { return json::array({x.lower_str(), x.upper_str()}); }

struct DomainResult {
  pb::CheckReport report;
  std::optional<pb::SpotResult> spot;
};

json certificate_document(const pb::CertifiedSolution& c, const std::optional<DomainResult>& dom, double wall) {
  json j = json::parse(pb::certificate_to_json(c));
  json out;
  out["format"] = "packbound-certificate";
  out["version"] = 1;
  for (auto& [k, v] : j.items()) out[k] = v;
  if (dom) {
    const auto& r = dom->report;
    json dc = {{"status", pb::status_name(r.status)},
               {"delta", r.delta.get_str()},
               {"cubes_processed", r.cubes_processed},
               {"leaf_cubes", r.cube_list.size()},
               {"max_grid_size", r.max_grid_size}};
    if (dom->spot)
      dc["spot_test"] = {{"points", dom->spot->points}, {"worst", dom->spot->worst}, {"passed", dom->spot->passed}};
    out["domain_check"] = dc;
  } else {
    out["domain_check"] = nullptr;
  }
  out["metadata"] = {{"created", pb::utc_timestamp()}, {"seed", g_seed}, {"wall_time", wall}};
  return out;
}

bool needs_domain_check(const pb::Solid& s, const mpq_class& alpha) { return s.needs_samples() || alpha > 1; }

DomainResult run_domain_check(const RunConfig& cfg, const pb::CertifiedSolution& c, const pb::SdpModel& model,
                              const pb::Solid& solid, const mpq_class& alpha) {
  auto f = pb::nonpositivity_function(model, c.blocks);
  pb::CheckOptions o;
  o.alpha = alpha;
  if (!cfg.delta.empty()) o.delta = pb::parse_rational(cfg.delta);
  o.max_depth = cfg.max_depth;
  o.split_threshold = cfg.split_threshold;
  o.threads = cfg.threads;
  DomainResult out;
  out.report = pb::check_domain(f, solid, o);
  const auto& r = out.report;
  std::cout << "domain check: " << pb::status_name(r.status) << " (delta " << r.delta.get_str() << ", "
            << r.cubes_processed << " cubes, " << r.cube_list.size() << " leaves, max N " << r.max_grid_size << ", "
            << fixed(r.wall_time, 2) << " s)\n";
  if (!cfg.cube_list.empty()) {
    std::ofstream f(cfg.cube_list);
    if (!f) throw pb::IoFailure("cannot write " + cfg.cube_list);
    pb::write_cube_list(f, r.cube_list);
  }
  if (r.status != pb::CheckReport::Status::Certified) {
    std::ostringstream msg;
    msg << pb::status_name(r.status) << " in cube (" << r.cube.corner[0] << ", " << r.cube.corner[1] << ", "
        << r.cube.corner[2] << ") depth " << r.cube.depth << " N " << r.cube.grid_size;
    if (r.status == pb::CheckReport::Status::NonNegativeValue)
      msg << " near (" << r.point[0] << ", " << r.point[1] << ", " << r.point[2] << ")";
    throw DomainError(msg.str());
  }
  if (cfg.spot > 0) {
    out.spot = pb::spot_test(f, solid, alpha, cfg.spot, g_seed);
    std::cout << "spot test: " << out.spot->points << " points, largest value " << out.spot->worst << "\n";
    if (!out.spot->passed) throw DomainError("spot test found a nonnegative value");
  }
  return out;
}

struct Certified {
  Built built;
  pb::CertifiedSolution cert;
  mpq_class alpha;
};

Certified certify_bundle(const RunConfig& cfg, const pb::LoadedBundle& lb) {
  Certified out;
  out.built = build_model(lb.model.solid, lb.model.d, lb.model.spacing);
  out.alpha = alpha_of(cfg, out.built.solid);
  pb::CertifyOptions co;
  co.precision = std::max<mpfr_prec_t>(256, lb.solution.precision);
  out.cert = pb::certify(lb.solution, out.built.model, out.built.solid, out.alpha, co);
  return out;
}

int cmd_certify(const RunConfig& cfg, const std::string& solution) {
  if (!cfg.alpha.empty() && pb::parse_rational(cfg.alpha) < 1) throw UsageError("--alpha must be at least 1");
  auto t0 = std::chrono::steady_clock::now();
  auto lb = pb::read_bundle(solution);
  auto c = certify_bundle(cfg, lb);
  std::cout << pb::certificate_report(c.cert);
  if (needs_domain_check(c.built.solid, c.alpha))
    std::cout << "nonpositivity outside alpha (K - K) still needs check-domain\n";
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  pb::write_text_file(cfg.certificate_out, certificate_document(c.cert, std::nullopt, wall).dump(1) + "\n");
  std::cout << "wrote " << cfg.certificate_out << "\n";
  return Ok;
}

int cmd_check_domain(const RunConfig& cfg, const std::string& solution) {
  if (cfg.threads < 1) throw UsageError("--threads must be positive");
  if (!cfg.alpha.empty() && pb::parse_rational(cfg.alpha) < 1) throw UsageError("--alpha must be at least 1");
  auto lb = pb::read_bundle(solution);
  if (!cfg.solid.empty()) {
    const auto name = pb::load_solid(lb.model.solid, solid_dir()).name;
    if (pb::load_solid(cfg.solid, solid_dir()).name != name)
      throw UsageError("--solid does not match the solution's solid '" + name + "'");
  }
  auto c = certify_bundle(cfg, lb);
  run_domain_check(cfg, c.cert, c.built.model, c.built.solid, c.alpha);
  return Ok;
}

// ---- bound -----------------------------------------------------------------

int cmd_bound(const RunConfig& cfg) {
  validate(cfg);
  auto t0 = std::chrono::steady_clock::now();
  auto b = build_model(cfg.solid, cfg.d, cfg.spacing);
  const mpq_class alpha = alpha_of(cfg, b.solid);
  auto nm = pb::to_numeric(b.model, cfg.precision);
  std::cout << "model: " << b.model.blocks.size() << " blocks, " << nm.rows.size() << " constraints, "
            << b.model.samples.size() << " samples\n";
  auto sol = run_solver(cfg, nm);
  print_solution_stats(sol, nm);
  pb::write_text_file(cfg.solution_out, pb::bundle_to_json(sol, {cfg.solid, cfg.d, cfg.spacing}, metadata()));

  pb::CertifyOptions co;
  co.precision = std::max<mpfr_prec_t>(256, cfg.precision);
  auto cert = pb::certify(sol, b.model, b.solid, alpha, co);
  std::optional<DomainResult> dom;
  if (needs_domain_check(b.solid, alpha)) dom = run_domain_check(cfg, cert, b.model, b.solid, alpha);

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  pb::write_text_file(cfg.certificate_out, certificate_document(cert, dom, wall).dump(1) + "\n");
  std::cout << pb::certificate_report(cert);
  std::cout << "wrote " << cfg.solution_out << " and " << cfg.certificate_out << "\n";
  return Ok;
}

// ---- reference -------------------------------------------------------------

int cmd_reference_c1(double p) {
  std::cout << "C1 lattice packing density of B^" << p << "_3: " << fixed(pb::c1_density(p), 10) << "\n";
  return Ok;
}

int cmd_reference_transfer(double bound, double ratio) {
  auto t = pb::bound_transfer(bound, ratio);
  std::cout << "bound for 1/2 (K - K): " << fixed(t.value, 9) << (t.clamped ? " (clamped to 1)" : "") << "\n";
  return Ok;
}

struct Row {
  const char* body;
  const char* lower;
  const char* lower_src;
  const char* upper;
  const char* upper_src;
};

void print_rows(const char* title, const std::vector<Row>& rows) {
  std::printf("\n%s\n", title);
  std::printf("  %-26s %-30s %s\n", "body", "lower bound", "upper bound");
  for (const auto& r : rows) {
    std::string lo = std::string(r.lower) + (*r.lower_src ? std::string(" [") + r.lower_src + "]" : "");
    std::string up = std::string(r.upper) + (*r.upper_src ? std::string(" [") + r.upper_src + "]" : "");
    std::printf("  %-26s %-30s %s\n", r.body, lo.c_str(), up.c_str());
  }
}

int cmd_reference_tables() {
  std::cout << "Published density bounds. [new] marks bounds obtained with this method;\n"
               "other labels name the source of a literature value.\n";
  print_rows("Superballs, lattice packing",
             {{"B^1_3 (octahedron)", "18/19 = 0.9473...", "Minkowski 1904", "18/19", "Minkowski 1904"},
              {"B^2_3 (ball)", "pi/sqrt(18) = 0.7404...", "", "pi/sqrt(18)", "Gauss 1840"},
              {"B^3_3", "0.8095...", "Jiao 2009", "0.8236...", "new"},
              {"B^4_3", "0.8698...", "Jiao 2009", "0.8742...", "new"},
              {"B^5_3", "0.9080...", "Jiao 2009", "0.9224...", "new"},
              {"B^6_3", "0.9318...", "Jiao 2009", "0.9338...", "new"}});
  print_rows("Superballs, translative packing",
             {{"B^1_3 (octahedron)", "18/19 = 0.9473...", "Minkowski 1904", "0.9729...", "new"},
              {"B^2_3 (ball)", "pi/sqrt(18) = 0.7404...", "", "pi/sqrt(18)", "Hales 2011"},
              {"B^3_3", "0.8095...", "Jiao 2009", "0.8236...", "new"},
              {"B^4_3", "0.8698...", "Jiao 2009", "0.8742...", "new"},
              {"B^5_3", "0.9080...", "Jiao 2009", "0.9224...", "new"},
              {"B^6_3", "0.9318...", "Jiao 2009", "0.9338...", "new"}});
  print_rows("Superballs, congruent packing",
             {{"B^1_3 (octahedron)", "18/19 = 0.9473...", "Minkowski 1904", "1 - 1.4...e-12", "Gravel 2011"},
              {"B^2_3 (ball)", "pi/sqrt(18) = 0.7404...", "", "pi/sqrt(18)", "Hales 2011"},
              {"B^3_3", "0.8095...", "Jiao 2009", "< 1", ""},
              {"B^4_3", "0.8698...", "Jiao 2009", "< 1", ""},
              {"B^5_3", "0.9080...", "Jiao 2009", "< 1", ""},
              {"B^6_3", "0.9318...", "Jiao 2009", "< 1", ""}});
  print_rows("Polytopes with tetrahedral symmetry, lattice packing",
             {{"Tetrahedron", "18/49 = 0.3673...", "Groemer 1962", "18/49", "Hoylman 1970"},
              {"Truncated tetrahedron", "0.6809...", "Betke 2000", "0.6809...", "Betke 2000"},
              {"Truncated cuboctahedron", "0.8493...", "Betke 2000", "0.8493...", "Betke 2000"},
              {"Rhombicuboctahedron", "0.8758...", "Betke 2000", "0.8758...", "Betke 2000"},
              {"Cuboctahedron", "0.9183...", "Groemer 1962", "0.9183...", "Hoylman 1970"},
              {"Truncated cube", "0.9737...", "Betke 2000", "0.9737...", "Betke 2000"}});
  print_rows("Polytopes with tetrahedral symmetry, translative packing",
             {{"Tetrahedron", "18/49 = 0.3673...", "Groemer 1962", "0.3745...", "new"},
              {"Truncated tetrahedron", "0.6809...", "Betke 2000", "0.7292...", "new"},
              {"Truncated cuboctahedron", "0.8493...", "Betke 2000", "0.8758...", "Torquato 2009"},
              {"Rhombicuboctahedron", "0.8758...", "Betke 2000", "0.8758...", "de Graaf 2011"},
              {"Cuboctahedron", "0.9183...", "Groemer 1962", "0.9364...", "new"},
              {"Truncated cube", "0.9737...", "Betke 2000", "0.9845...", "new"}});
  print_rows("Polytopes with tetrahedral symmetry, congruent packing",
             {{"Tetrahedron", "4000/4671 = 0.8563...", "Chen 2010", "1 - 2.6...e-25", "Gravel 2011"},
              {"Truncated tetrahedron", "207/208 = 0.9951...", "Jiao 2011, Damasceno 2012", "< 1", ""},
              {"Truncated cuboctahedron", "0.8493...", "Betke 2000", "0.8758...", "Torquato 2009"},
              {"Rhombicuboctahedron", "0.8758...", "Betke 2000", "0.8758...", "de Graaf 2011"},
              {"Cuboctahedron", "0.9183...", "Groemer 1962", "< 1", ""},
              {"Truncated cube", "0.9737...", "Betke 2000", "< 1", ""}});

  std::cout << "\nCharacter table of B3\n";
  std::printf("  %-6s", "");
  for (const char* c : pb::kClassNames) std::printf("%9s", c);
  std::printf("\n");
  for (const auto& r : pb::irreps()) {
    std::printf("  %-6s", r.name.c_str());
    for (int v : r.character) std::printf("%9d", v);
    std::printf("\n");
  }

  std::cout << "\nRigorously verified bounds (degree 13 solutions)\n";
  std::printf("  %-30s %-14s %s\n", "body", "upper bound", "factor alpha");
  const std::vector<std::array<const char*, 3>> verified = {
      {"Regular octahedron (B^1_3)", "0.972912750", "1.001"}, {"B^3_3", "0.823611150", "1.002"},
      {"B^4_3", "0.874257405", "1"},                          {"B^5_3", "0.922441815", "1.005"},
      {"B^6_3", "0.933843309", "1"},                          {"Regular tetrahedron", "0.374568355", "1.02"},
      {"Truncated cube", "0.984519783", "1.003"},             {"Truncated tetrahedron", "0.729209804", "1.023"}};
  for (const auto& v : verified) std::printf("  %-30s %-14s %s\n", v[0], v[1], v[2]);
  return Ok;
}

// ---- config ----------------------------------------------------------------

// Flags from a JSON object, appended after the command line so that they take precedence.
std::vector<std::string> config_args(const std::string& path) {
  json j;
  try {
    j = json::parse(pb::read_text_file(path));
  } catch (const json::exception& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw UsageError("config " + path + ": expected a JSON object");
  std::vector<std::string> out;
  for (auto& [k, v] : j.items()) {
    const std::string flag = "--" + k;
    if (v.is_boolean()) {
      if (v.get<bool>()) out.push_back(flag);
    } else if (v.is_string()) {
      out.push_back(flag);
      out.push_back(v.get<std::string>());
    } else if (v.is_number()) {
      out.push_back(flag);
      out.push_back(v.dump());
    } else {
      throw UsageError("config key '" + k + "' must be a string, number or boolean");
    }
  }
  return out;
}

void add_solver_flags(CLI::App* c, RunConfig& cfg) {
  c->add_option("--precision", cfg.precision, "working precision in bits")->capture_default_str();
  c->add_option("--tol", cfg.tol, "duality gap and infeasibility tolerance")->capture_default_str();
  c->add_option("--eta", cfg.eta, "objective slack of the analytic center pass (0 skips it)")->capture_default_str();
  c->add_option("--max-iter", cfg.max_iter, "iteration limit per pass")->capture_default_str();
  c->add_option("--backend", cfg.backend, "builtin, or file to import an SDPA result")->capture_default_str();
  c->add_option("--sdpa-solution", cfg.sdpa_solution, "SDPA result file for --backend file");
  c->add_flag("--verbose", cfg.verbose, "print solver iterations");
}

void add_domain_flags(CLI::App* c, RunConfig& cfg) {
  c->add_option("--delta", cfg.delta, "initial cube side (default from the circumradius)");
  c->add_option("--max-depth", cfg.max_depth, "maximal number of cube subdivisions")->capture_default_str();
  c->add_option("--split-threshold", cfg.split_threshold, "largest grid size before splitting a cube")
      ->capture_default_str();
  c->add_option("--threads", cfg.threads, "worker threads")->capture_default_str();
  c->add_option("--cube-list", cfg.cube_list, "write the cube list of the float pass here");
  c->add_option("--spot", cfg.spot, "random points for the float spot test (0 skips it)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Upper bounds for translative packings of three-dimensional convex bodies", "packbound"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::string config_path;
  app.add_option("--config", config_path, "JSON object of flags; its values override the command line");
  app.add_option("--seed", g_seed, "seed for randomized checks")->capture_default_str();

  bool dump = false;
  int upto = 18;
  auto* inv = app.add_subcommand("invariants", "character table, series, coinvariant basis and Q matrices");
  inv->add_flag("--dump", dump, "also print the coinvariant rows and the Q matrices");
  inv->add_option("--upto", upto, "series degree")->capture_default_str();

  std::string json_out, sdpa_out;
  auto* mod = app.add_subcommand("model", "assemble the semidefinite program");
  mod->add_option("--solid", cfg.solid, "superball:p=<p>, a shipped solid, or a solid file")->required();
  mod->add_option("--d", cfg.d, "odd degree")->capture_default_str();
  mod->add_option("--spacing", cfg.spacing, "sample grid pitch")->capture_default_str();
  mod->add_option("--precision", cfg.precision, "bits for the SDPA export")->capture_default_str();
  mod->add_option("--json", json_out, "write the model as JSON");
  mod->add_option("--sdpa", sdpa_out, "write the model in SDPA sparse format");

  auto* sol = app.add_subcommand("solve", "solve the program and write a solution bundle");
  sol->add_option("--solid", cfg.solid)->required();
  sol->add_option("--d", cfg.d)->capture_default_str();
  sol->add_option("--spacing", cfg.spacing)->capture_default_str();
  add_solver_flags(sol, cfg);
  sol->add_option("--out", cfg.solution_out, "solution bundle")->capture_default_str();

  std::string solution;
  auto* cer = app.add_subcommand("certify", "interval-certify a solution bundle");
  cer->add_option("--solution", solution)->required();
  cer->add_option("--alpha", cfg.alpha, "enlargement factor (default from the solid)");
  cer->add_option("--out", cfg.certificate_out, "certificate")->capture_default_str();

  auto* chk = app.add_subcommand("check-domain", "prove nonpositivity of F[g] outside alpha (K - K)");
  chk->add_option("--solution", solution)->required();
  chk->add_option("--solid", cfg.solid, "must match the solution's solid");
  chk->add_option("--alpha", cfg.alpha);
  add_domain_flags(chk, cfg);

  auto* bnd = app.add_subcommand("bound", "assemble, solve, certify and check in one run");
  bnd->add_option("--solid", cfg.solid)->required();
  bnd->add_option("--d", cfg.d)->capture_default_str();
  bnd->add_option("--alpha", cfg.alpha);
  bnd->add_option("--spacing", cfg.spacing)->capture_default_str();
  add_solver_flags(bnd, cfg);
  add_domain_flags(bnd, cfg);
  bnd->add_option("--solution-out", cfg.solution_out)->capture_default_str();
  bnd->add_option("--certificate-out", cfg.certificate_out)->capture_default_str();

  auto* ref = app.add_subcommand("reference", "reference densities and published tables");
  ref->require_subcommand(1);
  double p = 4, bound = 0, ratio = 0;
  auto* c1 = ref->add_subcommand("c1", "density of the C1 lattice packing of a superball");
  c1->add_option("--p", p)->required();
  auto* tr = ref->add_subcommand("transfer", "bound for 1/2 (K - K) from a bound for K");
  tr->add_option("--bound", bound)->required();
  tr->add_option("--ratio", ratio, "vol(1/2 (K - K)) / vol K")->required();
  auto* tab = ref->add_subcommand("tables", "published bounds and the character table");

  std::vector<std::string> args;
  for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);  // CLI11 wants them reversed
  try {
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
      if (args[i + 1] == "--config") {
        auto extra = config_args(args[i]);
        for (auto& e : extra) args.insert(args.begin(), e);
        break;
      }
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? Ok : Usage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Usage;
  } catch (const pb::IoFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Usage;
  }

  try {
    if (*inv) return cmd_invariants(dump, upto);
    if (*mod) return cmd_model(cfg, json_out, sdpa_out);
    if (*sol) return cmd_solve(cfg);
    if (*cer) return cmd_certify(cfg, solution);
    if (*chk) return cmd_check_domain(cfg, solution);
    if (*bnd) return cmd_bound(cfg);
    if (*c1) return cmd_reference_c1(p);
    if (*tr) return cmd_reference_transfer(bound, ratio);
    if (*tab) return cmd_reference_tables();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Usage;
  } catch (const pb::EvenDegree& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Usage;
  } catch (const pb::IoFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Usage;
  } catch (const pb::NoProgress& e) {
    std::cerr << "solver failed: " << e.what() << "\n";
    return SolverFailure;
  } catch (const pb::Infeasible& e) {
    std::cerr << "solver failed: " << e.what() << "\n";
    return SolverFailure;
  } catch (const pb::NotRepairable& e) {
    std::cerr << "certification failed: " << e.what() << "\n";
    return CertificationFailure;
  } catch (const pb::BasisDeficient& e) {
    std::cerr << "certification failed: " << e.what() << "\n";
    return CertificationFailure;
  } catch (const pb::CertificationFailed& e) {
    std::cerr << "certification failed: " << e.what() << "\n";
    return CertificationFailure;
  } catch (const DomainError& e) {
    std::cerr << "domain check failed: " << e.what() << "\n";
    return DomainFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Generic;
  }
  return Usage;
}
