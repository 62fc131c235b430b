// Acceptance run: one PASS/FAIL line per criterion.
//
// Usage: acceptance [--expect-fail N[,N...]]
// Exit status is 0 when the set of failing criteria equals the expected set.

#include "packbound/b3.hpp"
#include "packbound/certify.hpp"
#include "packbound/domaincheck.hpp"
#include "packbound/errors.hpp"
#include "packbound/fourier.hpp"
#include "packbound/geometry.hpp"
#include "packbound/solver.hpp"
#include "oracles.hpp"
#include "reference_data.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace packbound;

namespace {

const std::string kSolids = PACKBOUND_SOLID_DIR;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome invariant_regression() {
  const auto t0 = Clock::now();
  const auto& data = isotypic_data();
  bool chars = true;
  const auto& irr = irreps();
  for (std::size_t r = 0; r < irr.size(); ++r) {
    chars = chars && irr[r].name == reference::irrep_names()[r];
    for (int c = 0; c < kNumClasses; ++c) chars = chars && irr[r].character[c] == reference::characters()[r][c];
  }
  int matched = 0;
  std::string mismatched;
  for (const auto& iso : data) {
    auto c = oracle::common_scalar(iso.qpi, reference::qpi().at(iso.irrep.name));
    if (c && *c > 0) {
      ++matched;
    } else {
      mismatched += (mismatched.empty() ? "" : ",") + iso.irrep.name;
    }
  }
  const double t = seconds_since(t0);
  std::ostringstream d;
  d << "character table " << (chars ? "exact" : "differs") << "; Q matrices matching up to a positive scalar: "
    << matched << "/10";
  if (!mismatched.empty()) d << " (differ: " << mismatched << ")";
  d << "; " << fmt("%.1f s", t);
  return {chars && matched == 10 && t < 60, d.str()};
}

Outcome series() {
  const bool a = molien_coefficients(Series::Invariant, 18) == reference::kMolien;
  const bool b = molien_coefficients(Series::Coinvariant, 9) == reference::kCoinvariant;
  const bool c = molien_coefficients(Series::HarmonicInvariant, 18) == reference::kHarmonic;
  std::ostringstream d;
  d << "invariant " << (a ? "match" : "differ") << ", coinvariant " << (b ? "match" : "differ")
    << ", harmonic invariant " << (c ? "match" : "differ");
  return {a && b && c, d.str()};
}

Outcome fourier() {
  std::mt19937_64 rng(3);
  int involution = 0;
  for (int k = 0; k < 50; ++k) {
    ThetaPolynomial g = oracle::random_invariant(rng, 12);
    involution += fourier_apply(fourier_apply(g)) == g;
  }
  auto h4 = invariant_harmonic_basis(4);
  const bool fixed = h4.size() == 1 && fourier_apply(h4[0]) == h4[0];
  const ThetaPolynomial t1 = ThetaPolynomial::theta(1);
  const ThetaPolynomial expected = ThetaPolynomial(Coefficient(mpq_class(3, 2), -1)) - t1;
  const bool symbolic = fourier_apply(t1) == expected;
  std::uniform_real_distribution<double> coord(-1.2, 1.2);
  double worst = 0;
  for (int k = 0; k < 10; ++k) {
    std::array<double, 3> u{coord(rng), coord(rng), coord(rng)};
    const double n2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
    const double exact = expand_theta(fourier_apply(t1)).evaluate_double(u) * std::exp(-oracle::kPi * n2);
    worst = std::max(worst, std::abs(exact - oracle::transform_by_quadrature(expand_theta(t1), u)));
  }
  std::ostringstream d;
  d << "F(F(g)) = g for " << involution << "/50; degree-4 harmonic " << (fixed ? "fixed" : "not fixed")
    << "; F[theta1] " << (symbolic ? "= 3/(2 pi) - theta1" : "differs") << ", quadrature gap "
    << fmt("%.2e", worst) << " at 10 points";
  return {involution == 50 && fixed && symbolic && worst <= 1e-6, d.str()};
}

Outcome robinson() {
  const auto t0 = Clock::now();
  SosResult r = sos_feasibility(contract_theta(robinson_polynomial()), 3, SolverOptions{});
  const double t = seconds_since(t0);
  std::ostringstream d;
  d << (r.feasible ? "reported feasible" : "reported infeasible") << ", t* = " << r.t_star.str(6) << "; "
    << fmt("%.1f s", t);
  return {!r.feasible && t < 300, d.str()};
}

Outcome c1_densities() {
  double worst = 0;
  for (const auto& [p, v] : reference::kSuperballLattice) worst = std::max(worst, std::abs(c1_density(p) - v));
  std::ostringstream d;
  d << "p = 3, 4, 5, 6: " << fmt("%.6f", c1_density(3)) << " " << fmt("%.6f", c1_density(4)) << " "
    << fmt("%.6f", c1_density(5)) << " " << fmt("%.6f", c1_density(6)) << "; max gap " << fmt("%.1e", worst);
  return {worst <= 1e-3, d.str()};
}

Outcome transfer() {
  const TransferredBound t = bound_transfer(0.374568355, 2.5);
  const bool exact = std::abs(t.value - 0.936420888) <= 5e-10;
  const bool table = std::floor(t.value * 1e4) == 9364;
  return {exact && table && !t.clamped, "0.374568355 x 5/2 = " + fmt("%.9f", t.value)};
}

struct BoundRun {
  Interval bound;
  double seconds = 0;
};

BoundRun superball_bound(int d) {
  const auto t0 = Clock::now();
  PrecisionScope scope(256);
  Solid s = Solid::superball(4);
  SdpModel m = assemble(s, d, generate_samples(s, mpq_class(1, 50)));
  NumericModel nm = to_numeric(m, 256);
  SolverOptions opts;
  SolutionBundle first = solve_builtin(nm, opts);
  SolutionBundle ac = analytic_center_pass(nm, first, 1e-5, opts);
  CertifiedSolution c = certify(ac, m, s, 1);
  return {c.bound, seconds_since(t0)};
}

Outcome end_to_end() {
  const BoundRun b3 = superball_bound(3);
  const BoundRun b5 = superball_bound(5);
  const double u3 = b3.bound.upper_double(), u5 = b5.bound.upper_double();
  std::ostringstream d;
  d << "superball p=4: B3 = " << b3.bound.upper_str(12) << ", B5 = " << b5.bound.upper_str(12) << "; "
    << fmt("%.1f s", b3.seconds + b5.seconds);
  return {b3.bound.lower_double() > 0.8698 && u3 <= 1.2 && u5 <= u3 + 1e-6 && b3.seconds + b5.seconds < 1800, d.str()};
}

// The real small tetrahedron solve shared by the domain-check criteria.
struct TetraInstance {
  Solid solid;
  CheckFunction f;
  CheckOptions opts;
};

const TetraInstance& tetra_instance() {
  static const TetraInstance inst = [] {
    PrecisionScope scope(256);
    TetraInstance t;
    t.solid = load_solid("tetra", kSolids);
    SdpModel m = assemble(t.solid, 3, generate_samples(t.solid, mpq_class(1, 50)));
    NumericModel nm = to_numeric(m, 256);
    SolverOptions opts;
    SolutionBundle first = solve_builtin(nm, opts);
    SolutionBundle ac = analytic_center_pass(nm, first, 1e-5, opts);
    CertifiedSolution c = certify(ac, m, t.solid, mpq_class(102, 100));
    t.f = nonpositivity_function(m, c.blocks);
    t.opts.alpha = mpq_class(102, 100);
    t.opts.delta = mpq_class(1, 10);
    t.opts.split_threshold = 30;
    return t;
  }();
  return inst;
}

Outcome domain_soundness() {
  const auto& t = tetra_instance();
  const auto t0 = Clock::now();
  CheckReport r = check_domain(t.f, t.solid, t.opts);
  SpotResult spot = spot_test(t.f, t.solid, t.opts.alpha, 1000000, 0);
  CheckReport flipped = check_domain(t.f.negated(), t.solid, t.opts);
  // d(C, N)^2 against (h / N)^2 * 3 and (h / 2N)^2 * 3 with h = delta / 2^depth
  int formula_ok = 0;
  for (int k = 0; k < 20; ++k) {
    Cube c;
    c.depth = k % 4;
    c.factor2 = k % 2 == 1;
    const int n = 2 + 3 * k;
    mpq_class step = t.opts.delta / (mpz_class(1) << c.depth) / n;
    if (c.factor2) step /= 2;
    formula_ok += grid_distance_sq(c, n, t.opts.delta) == 3 * step * step;
  }
  std::ostringstream d;
  d << "tetrahedron d=3, alpha 1.02, delta 0.1: " << status_name(r.status) << " (" << r.cubes_processed
    << " cubes, max N " << r.max_grid_size << "); spot test " << spot.points << " points, max "
    << fmt("%.3e", spot.worst) << "; sign flip: " << status_name(flipped.status) << "; d(C,N) " << formula_ok
    << "/20; " << fmt("%.1f s", seconds_since(t0));
  return {r.status == CheckReport::Status::Certified && spot.passed &&
              flipped.status == CheckReport::Status::NonNegativeValue && formula_ok == 20,
          d.str()};
}

Outcome certification_arithmetic() {
  PrecisionScope scope(256);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  int sound = 0;
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + k % 7;
    RealMatrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) a(i, j) = a(j, i) = Real(u(rng));
    if (k % 2 == 0) a = a * a.transpose() + RealMatrix::Identity(n, n) * Real(std::pow(10.0, -(k % 20)));
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(a, Eigen::EigenvaluesOnly);
    const Real true_min = eig.eigenvalues().minCoeff();
    try {
      sound += repair_psd(a).lambda <= true_min;
    } catch (const NotRepairable&) {
      sound += true_min < Real(1e-30);
    }
  }
  Solid s = Solid::superball(4);
  SdpModel m = assemble(s, 3, {});
  NumericModel nm = to_numeric(m, 256);
  SolverOptions opts;
  SolutionBundle ac = analytic_center_pass(nm, solve_builtin(nm, opts), 1e-5, opts);
  SolutionBundle exact = absorb_residual(ac, m, residual_basis(m));
  bool accepted = true, rejected = false;
  try {
    certify(exact, m, s, 1);
  } catch (const Error&) {
    accepted = false;
  }
  SolutionBundle bad = exact;
  bad.blocks[m.blocks.size() - 1](0, 0) += Real(1e-3);
  try {
    certify(bad, m, s, 1);
  } catch (const CertificationFailed&) {
    rejected = true;
  }
  std::ostringstream d;
  d << "lambda sound on " << sound << "/100 matrices; exactly feasible solution "
    << (accepted ? "certified" : "rejected") << "; 1e-3 perturbation " << (rejected ? "rejected" : "accepted");
  return {sound == 100 && accepted && rejected, d.str()};
}

Outcome thread_determinism() {
  const auto& t = tetra_instance();
  CheckOptions o = t.opts;
  std::vector<CheckReport> reports;
  for (int threads : {1, 4, 16}) {
    o.threads = threads;
    reports.push_back(check_domain(t.f, t.solid, o));
  }
  bool same = true;
  for (const auto& r : reports)
    same = same && r.status == reports[0].status && r.cube == reports[0].cube && r.cube_list == reports[0].cube_list;
  std::ostringstream d;
  d << "threads 1/4/16: " << status_name(reports[0].status) << " / " << status_name(reports[1].status) << " / "
    << status_name(reports[2].status) << (same ? ", identical cube lists" : ", outputs differ");
  return {same, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected_failures;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--expect-fail" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string item;
      while (std::getline(ss, item, ',')) expected_failures.insert(std::stoi(item));
    } else {
      std::fprintf(stderr, "usage: acceptance [--expect-fail N[,N...]]\n");
      return 2;
    }
  }

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"invariant-theory regression", invariant_regression},
      {"series", series},
      {"Fourier", fourier},
      {"Robinson negative control", robinson},
      {"C1 densities", c1_densities},
      {"bound transfer", transfer},
      {"end-to-end desk-scale bound", end_to_end},
      {"domain checker soundness", domain_soundness},
      {"certification arithmetic", certification_arithmetic},
      {"concurrency determinism", thread_determinism},
  };

  std::set<int> failures;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const int id = static_cast<int>(k) + 1;
    if (!o.pass) failures.insert(id);
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[k].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu of %zu criteria passed\n", criteria.size() - failures.size(), criteria.size());
  return failures == expected_failures ? 0 : 1;
}
