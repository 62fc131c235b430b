#pragma once

#include "packbound/interval.hpp"
#include "packbound/polynomial.hpp"

#include <gmpxx.h>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace packbound {

enum class Position { Interior, Exterior, Border };
const char* position_name(Position p);

// a . x <= rhs
struct Halfspace {
  std::array<mpq_class, 3> normal;
  mpq_class rhs;
};

using Point = std::array<double, 3>;
using Box = std::array<Interval, 3>;

// A convex body K, described through its difference body K - K.
//
// Superballs are scaled so that K - K = {x : sum |x_i|^p <= 2}, hence K = 2^{1/p - 1} B^p.
// Polytopes list the halfspaces of K - K directly.
struct Solid {
  enum class Kind { Superball, Polytope };

  Kind kind = Kind::Superball;
  std::string name;
  mpq_class p;  // superball exponent
  std::vector<Halfspace> halfspaces;
  std::vector<Point> vertices;  // vertices of K when known (validation only)
  mpq_class circumradius_sq;    // squared circumradius of K - K (polytopes)
  mpq_class volume;             // volume of K rounded up (polytopes)
  std::optional<mpq_class> volume_ratio;  // vol(K - K) / vol(K)
  mpq_class alpha = 1;          // default enlargement factor for certification

  static Solid superball(const mpq_class& p);

  bool is_even_superball() const;
  // The polynomial s of the SOS multiplier; samples live in {s < 0}.
  ThetaPolynomial constraint() const;
  // Half the x-degree of s.
  int constraint_degree() const;
  bool needs_samples() const { return !is_even_superball(); }

  double circumradius() const;
  Interval volume_interval(mpfr_prec_t prec = Interval::default_precision()) const;
  double volume_double() const;
  mpq_class difference_ratio() const;  // vol(K - K) / vol(K)
};

// Membership in alpha (K - K). Float mode compares against a tolerance eps.
Position difference_body_position(const Solid& solid, const Point& x, double alpha, double eps = 1e-9);
// Interval mode: Interior/Exterior only when certified for every point of the box.
Position difference_body_position(const Solid& solid, const Box& x, const Interval& alpha);

// Membership in {s < 0}.
Position outer_ball_position(const Solid& solid, const Point& x, double eps = 1e-9);
Position outer_ball_position(const Solid& solid, const Box& x);

bool in_fundamental_domain(const Point& x);

// Volume of the unit l^p ball in R^3: 8 Gamma(1 + 1/p)^3 / Gamma(1 + 3/p).
double superball_volume(double p);
Interval superball_volume_interval(const mpq_class& p, mpfr_prec_t prec = Interval::default_precision());

// Density of the C1-lattice packing of B^p_3.
double c1_density(double p);

struct TransferredBound {
  double value = 0;
  bool clamped = false;
};
// Density bound for 1/2 (K - K) from a bound for K; ratio = vol(1/2 (K - K)) / vol(K).
TransferredBound bound_transfer(double bound_for_k, double ratio);

// Exact value of "p/q" or a decimal such as "1.02" or "1e-3".
mpq_class parse_rational(const std::string& s);

// "superball:p=4", a shipped solid name, or a path to a solid config file.
Solid load_solid(const std::string& ref, const std::string& solid_dir);
Solid parse_solid_config(const std::string& text);

}  // namespace packbound
