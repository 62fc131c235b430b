#pragma once

#include "packbound/certify.hpp"
#include "packbound/geometry.hpp"
#include "packbound/interval.hpp"
#include "packbound/model.hpp"

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace packbound {

// A B3-invariant function P(theta1, theta2, theta3) with interval coefficients, evaluated
// by nested Horner schemes in the theta values.
class CheckFunction {
public:
  CheckFunction() = default;
  static CheckFunction from_theta(const ThetaPolynomial& p, mpfr_prec_t prec = 256);
  static CheckFunction from_terms(const std::vector<std::pair<Exponent, Interval>>& terms);

  CheckFunction negated() const;
  // dP / dtheta_k
  CheckFunction theta_derivative(int k) const;

  double evaluate(const Point& x) const;
  Interval evaluate(const Box& x) const;
  // Gradient with respect to x, via the chain rule through theta_k = sum x_i^{2k}.
  std::array<Interval, 3> gradient(const Box& x) const;

  const std::array<int, 3>& extent() const { return dim_; }
  Interval coefficient(const Exponent& e) const;

private:
  Interval horner(const Interval& t1, const Interval& t2, const Interval& t3) const;
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * dim_[1] + j) * dim_[0] + i;
  }
  std::array<int, 3> dim_{1, 1, 1};
  std::vector<Interval> c_{Interval(0L)};
  std::vector<double> cd_{0.0};
};

// F[g] = sum over the R blocks of <F[V^{pi,d}], R^pi>.
CheckFunction nonpositivity_function(const SdpModel& model, const std::vector<IntervalMatrix>& blocks);

struct Cube {
  std::array<std::int64_t, 3> corner{};  // in units of delta / 2^depth
  int depth = 0;
  int grid_size = 0;
  bool factor2 = false;  // the cube misses alpha (K° - K°)
  friend bool operator==(const Cube& a, const Cube& b) {
    return a.corner == b.corner && a.depth == b.depth && a.grid_size == b.grid_size && a.factor2 == b.factor2;
  }
};

Box cube_box(const Cube& c, const mpq_class& delta, mpfr_prec_t prec);
mpq_class cube_side(const Cube& c, const mpq_class& delta);

// Partition cubes meeting {s < 0} \ alpha (K° - K°) within 0 <= x1 <= x2 <= x3, dropping a
// cube only when interval membership proves it disjoint from that set.
std::vector<Cube> build_cover(const Solid& solid, const mpq_class& alpha, const mpq_class& delta);

// Upper endpoint bounds |grad F| over the cube.
Interval gradient_bound(const Cube& c, const mpq_class& delta, const CheckFunction& f,
                        mpfr_prec_t prec = 128);

// d(C, N)^2 = 3 (h / N)^2, or 3 (h / 2N)^2 when the cube misses the alpha-body; h the side.
mpq_class grid_distance_sq(const Cube& c, int n, const mpq_class& delta);
Interval grid_distance(const Cube& c, int n, const mpq_class& delta, mpfr_prec_t prec = 128);

enum class CubeOutcome { Passed, NeedLargerN, NonNegativeValue };

struct CubeVerdict {
  CubeOutcome outcome = CubeOutcome::NeedLargerN;
  bool mu_is_minus_infinity = true;
  double mu = 0;           // float pass: max of F over the exterior grid points
  Point point{};           // where a nonnegative value was seen
};

// One grid test. Float mode evaluates F in doubles with eps-membership; interval mode
// repeats everything with intervals at the given precision. Border points count as outside.
CubeVerdict check_cube(const Cube& c, int n, const CheckFunction& f, const Solid& solid, const mpq_class& alpha,
                       const mpq_class& delta, bool interval_mode, double margin = 1.0, mpfr_prec_t prec = 128);

struct CheckOptions {
  mpq_class alpha = 1;
  mpq_class delta = 0;  // 0: circumradius of the alpha-body / 16
  int n_start = 2;
  int split_threshold = 30;
  int max_depth = 6;
  int threads = 1;
  // The float pass accepts nu d(C, N) <= margin |mu| so that the interval pass agrees.
  double margin = 0.9;
  mpfr_prec_t precision = 128;
};

struct CheckReport {
  enum class Status { Certified, NonNegativeValue, MaxGridSizeExceeded, IntervalRejected };
  Status status = Status::Certified;
  Cube cube;       // failing cube
  Point point{};   // NonNegativeValue location
  std::size_t cubes_processed = 0;
  int max_grid_size = 0;
  double wall_time = 0;
  mpq_class delta;
  std::vector<Cube> cube_list;  // float pass output
};

const char* status_name(CheckReport::Status s);

CheckReport check_domain(const CheckFunction& f, const Solid& solid, const CheckOptions& opts);

// Lines "cx cy cz depth grid_size factor2", corner in units of delta / 2^depth.
void write_cube_list(std::ostream& out, const std::vector<Cube>& cubes);
std::vector<Cube> read_cube_list(std::istream& in);

struct SpotResult {
  std::size_t points = 0;
  double worst = 0;  // largest F value seen
  Point worst_point{};
  bool passed = false;
};

// Float evaluation of F at uniform random points of {s < 0} \ alpha (K° - K°).
SpotResult spot_test(const CheckFunction& f, const Solid& solid, const mpq_class& alpha, std::size_t points,
                     std::uint64_t seed, double threshold = 1e-12);

// Smallest alpha in {1, 1 + step, ...} up to alpha_max for which F < 0 at every point of a
// grid of pitch h in the region; float arithmetic only. Returns 0 when none qualifies.
double scan_alpha(const CheckFunction& f, const Solid& solid, double h, double step = 1e-3, double alpha_max = 1.2);

}  // namespace packbound
