#include "packbound/errors.hpp"
#include "packbound/geometry.hpp"
#include "packbound/sdpa.hpp"
#include "packbound/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace packbound;

namespace {

struct Toy {
  NumericModel model;
  double optimum;
};

NumericModel empty_model(std::vector<NumericBlock> blocks) {
  NumericModel m;
  m.precision = 256;
  m.blocks = std::move(blocks);
  return m;
}

NumericBlock dense(int n) { return {BlockRole::R, -1, n, false, "dense"}; }
NumericBlock diag(int n) { return {BlockRole::R, -1, n, true, "lp"}; }

void add_row(NumericModel& m, std::vector<NumericEntry> entries, double rhs) {
  m.rows.push_back(std::move(entries));
  m.rhs.push_back(Real(rhs));
  m.row_labels.push_back("row" + std::to_string(m.rows.size()));
}

// min x s.t. [[x, 1], [1, x]] >= 0
Toy two_by_two() {
  NumericModel m = empty_model({dense(2)});
  m.objective = {{0, 0, 0, Real(1)}};
  add_row(m, {{0, 0, 1, Real(0.5)}}, 1);
  add_row(m, {{0, 0, 0, Real(1)}, {0, 1, 1, Real(-1)}}, 0);
  return {m, 1};
}

// min y1 + 2 y2 s.t. y1 + y2 = 1, y >= 0
Toy pure_lp() {
  NumericModel m = empty_model({diag(2)});
  m.objective = {{0, 0, 0, Real(1)}, {0, 1, 1, Real(2)}};
  add_row(m, {{0, 0, 0, Real(1)}, {0, 1, 1, Real(1)}}, 1);
  return {m, 1};
}

// min <C, Y> s.t. tr Y = 1 has the smallest eigenvalue of C as optimum.
Toy smallest_eigenvalue(int n) {
  NumericModel m = empty_model({dense(n)});
  std::vector<NumericEntry> trace;
  for (int i = 0; i < n; ++i) {
    m.objective.push_back({0, i, i, Real(2)});
    if (i + 1 < n) m.objective.push_back({0, i, i + 1, Real(1)});
    trace.push_back({0, i, i, Real(1)});
  }
  add_row(m, trace, 1);
  // eigenvalues of the tridiagonal (1, 2, 1) matrix are 2 + 2 cos(k pi / (n + 1))
  return {m, 2 - 2 * std::cos(std::acos(-1.0) / (n + 1))};
}

// min -s s.t. Y01 = 1, Y00 = Y11, Y00 + s = 3
Toy mixed_blocks() {
  NumericModel m = empty_model({dense(2), diag(1)});
  m.objective = {{1, 0, 0, Real(-1)}};
  add_row(m, {{0, 0, 1, Real(0.5)}}, 1);
  add_row(m, {{0, 0, 0, Real(1)}, {0, 1, 1, Real(-1)}}, 0);
  add_row(m, {{0, 0, 0, Real(1)}, {1, 0, 0, Real(1)}}, 3);
  return {m, -2};
}

// x^4 + 1 = (1, x, x^2) G (1, x, x^2)^T with G >= 0, as a pure feasibility problem.
NumericModel quartic_sos() {
  NumericModel m = empty_model({dense(3)});
  add_row(m, {{0, 0, 0, Real(1)}}, 1);
  add_row(m, {{0, 0, 1, Real(1)}}, 0);
  add_row(m, {{0, 0, 2, Real(1)}, {0, 1, 1, Real(1)}}, 0);
  add_row(m, {{0, 1, 2, Real(1)}}, 0);
  add_row(m, {{0, 2, 2, Real(1)}}, 1);
  return m;
}

SdpModel superball_model(int d) {
  Solid s = Solid::superball(4);
  return assemble(s, d, generate_samples(s, mpq_class(1, 50)));
}

}  // namespace

TEST(Toy, KnownOptima) {
  PrecisionScope scope(256);
  std::vector<Toy> toys{two_by_two(), pure_lp(), smallest_eigenvalue(2), smallest_eigenvalue(3), mixed_blocks()};
  SolverOptions opts;
  for (std::size_t k = 0; k < toys.size(); ++k) {
    SolutionBundle sol = solve_builtin(toys[k].model, opts);
    EXPECT_EQ(sol.status, "optimal") << k;
    EXPECT_NEAR(objective_value(sol, toys[k].model).convert_to<double>(), toys[k].optimum, 1e-8) << k;
    EXPECT_GE(sol.primal_objective.convert_to<double>(), sol.dual_objective.convert_to<double>() - 1e-12) << k;
    EXPECT_LT(max_violation(sol, toys[k].model).convert_to<double>(), 1e-15) << k;
    EXPECT_GE(min_eigenvalue(sol, toys[k].model).convert_to<double>(), -1e-15) << k;
  }
}

TEST(Toy, QuarticIsSumOfSquares) {
  PrecisionScope scope(256);
  NumericModel m = quartic_sos();
  SolutionBundle sol = solve_builtin(m, SolverOptions{});
  EXPECT_EQ(sol.status, "optimal");
  EXPECT_LT(max_violation(sol, m).convert_to<double>(), 1e-15);
  EXPECT_GT(min_eigenvalue(sol, m).convert_to<double>(), 0);
}

TEST(Toy, AnalyticCenterRespectsTheObjectiveBound) {
  PrecisionScope scope(256);
  const double eta = 1e-5;
  for (Toy toy : {two_by_two(), smallest_eigenvalue(3), mixed_blocks()}) {
    SolverOptions opts;
    SolutionBundle first = solve_builtin(toy.model, opts);
    SolutionBundle ac = analytic_center_pass(toy.model, first, eta, opts);
    const double z = first.primal_objective.convert_to<double>();
    EXPECT_LE(objective_value(ac, toy.model).convert_to<double>(), z + eta + 1e-15);
    EXPECT_LT(max_violation(ac, toy.model).convert_to<double>(), 1e-15);
  }
}

TEST(Sdpa, ToyRoundTrip) {
  PrecisionScope scope(256);
  for (const auto& m : {two_by_two().model, mixed_blocks().model}) {
    const std::string text = export_sdpa(m);
    NumericModel back = import_sdpa(text, 256);
    EXPECT_EQ(back.blocks.size(), m.blocks.size());
    EXPECT_EQ(export_sdpa(back), text);
  }
}

TEST(Sdpa, SuperballModelRoundTripsExactly) {
  PrecisionScope scope(256);
  NumericModel m = to_numeric(superball_model(3), 256);
  const std::string text = export_sdpa(m);
  NumericModel back = import_sdpa(text, 256);
  EXPECT_TRUE(back == m);
}

TEST(Sdpa, ExportIsDeterministic) {
  PrecisionScope scope(256);
  const std::string a = export_sdpa(to_numeric(superball_model(3), 256));
  const std::string b = export_sdpa(to_numeric(superball_model(3), 256));
  EXPECT_EQ(a, b);
}

TEST(Sdpa, BlocksFollowIrrepOrderWithinRoles) {
  NumericModel m = to_numeric(superball_model(3), 256);
  int last_role = -1, last_irrep = -1;
  for (const auto& b : m.blocks) {
    if (b.diagonal) continue;
    const int role = static_cast<int>(b.role);
    ASSERT_GE(role, last_role);
    if (role == last_role) EXPECT_GT(b.irrep, last_irrep);
    last_role = role;
    last_irrep = b.irrep;
  }
}

TEST(Sdpa, SolutionImport) {
  PrecisionScope scope(256);
  Toy toy = two_by_two();
  const std::string text =
      "xVec = \n{1,1}\nxMat = \n{\n{ {1,0},{0,1} }\n}\nyMat = \n{\n{ {+1.0,+1.0},{+1.0,+1.0} }\n}\n";
  SolutionBundle sol = import_sdpa_solution(text, toy.model);
  ASSERT_EQ(sol.blocks.size(), 1u);
  EXPECT_EQ(sol.blocks[0](0, 1), Real(1));
  EXPECT_EQ(objective_value(sol, toy.model), Real(1));
}

TEST(Pipeline, SuperballDegreeThreeAnalyticCenter) {
  PrecisionScope scope(256);
  NumericModel m = to_numeric(superball_model(3), 256);
  SolverOptions opts;
  SolutionBundle first = solve_builtin(m, opts);
  EXPECT_EQ(first.status, "optimal");
  EXPECT_GE(first.primal_objective, first.dual_objective - Real(1e-18));
  SolutionBundle ac = analytic_center_pass(m, first, 1e-5, opts);
  EXPECT_LE(objective_value(ac, m), first.primal_objective + Real(1e-5) + Real(1e-18));
  const Real eig = min_eigenvalue(ac, m);
  const Real viol = max_violation(ac, m);
  EXPECT_GT(eig, 0);
  EXPECT_GE(eig, 10 * viol);
}

TEST(Robinson, NotASumOfSquares) {
  SolverOptions opts;
  ExactPolynomial r = robinson_polynomial();
  ASSERT_TRUE(r.is_b3_invariant());
  SosResult res = sos_feasibility(contract_theta(r), 3, opts);
  EXPECT_FALSE(res.feasible);
  EXPECT_NEAR(res.t_star.convert_to<double>(), 1.0 / 48, 1e-12);
}

TEST(Robinson, SumOfSixthPowersIsSos) {
  ExactPolynomial q = ExactPolynomial::monomial({6, 0, 0}) + ExactPolynomial::monomial({0, 6, 0}) +
                      ExactPolynomial::monomial({0, 0, 6});
  SosResult res = sos_feasibility(contract_theta(q), 3, SolverOptions{});
  EXPECT_TRUE(res.feasible);
}

TEST(Errors, EvenDegreeModelIsRejected) {
  EXPECT_THROW(superball_model(4), EvenDegree);
}
