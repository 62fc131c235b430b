#include "packbound/domaincheck.hpp"

#include "packbound/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace packbound {

namespace {

class IntervalPrecisionScope {
public:
  explicit IntervalPrecisionScope(mpfr_prec_t bits) : saved_(Interval::default_precision()) {
    Interval::set_default_precision(bits);
  }
  ~IntervalPrecisionScope() { Interval::set_default_precision(saved_); }
  IntervalPrecisionScope(const IntervalPrecisionScope&) = delete;
  IntervalPrecisionScope& operator=(const IntervalPrecisionScope&) = delete;

private:
  mpfr_prec_t saved_;
};

std::array<double, 3> thetas(const Point& x) {
  std::array<double, 3> t{};
  for (double xi : x) {
    const double s = xi * xi;
    t[0] += s;
    t[1] += s * s;
    t[2] += s * s * s;
  }
  return t;
}

std::array<Interval, 3> thetas(const Box& x) {
  const mpfr_prec_t prec = x[0].precision();
  std::array<Interval, 3> t{Interval(0L, prec), Interval(0L, prec), Interval(0L, prec)};
  for (const auto& xi : x) {
    const Interval s = xi.sqr();
    t[0] += s;
    t[1] += s.sqr();
    t[2] += s.pow(3);
  }
  return t;
}

mpq_class pow2(int k) {
  mpq_class r = 1;
  for (int i = 0; i < k; ++i) r *= 2;
  return r;
}

// Smallest k with s(0, 0, k delta) >= 0. The constraint polynomials are increasing in each
// |x_i|, so {s < 0} lies in the cube [-k delta, k delta]^3.
std::int64_t region_extent(const Solid& solid, double step) {
  for (std::int64_t k = 1;; ++k) {
    if (outer_ball_position(solid, Point{0, 0, static_cast<double>(k) * step}, 0) != Position::Interior) return k;
    if (k > 100000) throw Error("constraint region is too large for the cube cover");
  }
}

// Keep a cube unless it provably misses {s < 0} \ alpha (K° - K°) inside the fundamental domain.
bool keep_cube(Cube& c, const Solid& solid, const Interval& alpha, const mpq_class& delta, mpfr_prec_t prec) {
  // no point with x1 <= x2 <= x3: lower x1 > upper x2, lower x2 > upper x3 or lower x1 > upper x3
  if (c.corner[0] > c.corner[1] + 1 || c.corner[1] > c.corner[2] + 1 || c.corner[0] > c.corner[2] + 1) return false;
  const Box b = cube_box(c, delta, prec);
  const Position body = difference_body_position(solid, b, alpha);
  if (body == Position::Interior) return false;
  if (outer_ball_position(solid, b) == Position::Exterior) return false;
  c.factor2 = body == Position::Exterior;
  return true;
}

std::vector<Cube> split(const Cube& c, const Solid& solid, const Interval& alpha, const mpq_class& delta,
                        mpfr_prec_t prec) {
  std::vector<Cube> out;
  for (int dx = 0; dx < 2; ++dx)
    for (int dy = 0; dy < 2; ++dy)
      for (int dz = 0; dz < 2; ++dz) {
        Cube k;
        k.corner = {2 * c.corner[0] + dx, 2 * c.corner[1] + dy, 2 * c.corner[2] + dz};
        k.depth = c.depth + 1;
        if (keep_cube(k, solid, alpha, delta, prec)) out.push_back(k);
      }
  return out;
}

// Runs task(i) for i < n on `threads` workers. A task returning true marks a failure; tasks
// with an index above the smallest failure seen so far may be skipped, so the smallest
// failing index is always found.
std::size_t parallel_first_failure(std::size_t n, int threads, const std::function<bool(std::size_t)>& task) {
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> first{std::numeric_limits<std::size_t>::max()};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      if (i > first.load()) continue;
      if (task(i)) {
        std::size_t cur = first.load();
        while (i < cur && !first.compare_exchange_weak(cur, i)) {
        }
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return first.load();
}

int next_grid_size(int n, int threshold) {
  const int grown = std::max(n + 2, static_cast<int>(std::ceil(1.5 * n)));
  return n < threshold ? std::min(grown, threshold) : grown;
}

}  // namespace

CheckFunction CheckFunction::from_theta(const ThetaPolynomial& p, mpfr_prec_t prec) {
  std::vector<std::pair<Exponent, Interval>> terms;
  for (const auto& [e, c] : p.terms()) terms.emplace_back(e, to_interval(c, prec));
  if (terms.empty()) terms.emplace_back(Exponent{0, 0, 0}, Interval(0L, prec));
  return from_terms(terms);
}

CheckFunction CheckFunction::from_terms(const std::vector<std::pair<Exponent, Interval>>& terms) {
  CheckFunction f;
  const mpfr_prec_t prec = terms.empty() ? Interval::default_precision() : terms.front().second.precision();
  for (const auto& [e, c] : terms)
    for (int k = 0; k < 3; ++k) f.dim_[k] = std::max(f.dim_[k], e[k] + 1);
  const std::size_t n = static_cast<std::size_t>(f.dim_[0]) * f.dim_[1] * f.dim_[2];
  f.c_.assign(n, Interval(0L, prec));
  for (const auto& [e, c] : terms) f.c_[f.index(e[0], e[1], e[2])] += c;
  f.cd_.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.cd_[i] = f.c_[i].mid_double();
  return f;
}

CheckFunction CheckFunction::negated() const {
  CheckFunction f = *this;
  for (auto& c : f.c_) c = -c;
  for (auto& c : f.cd_) c = -c;
  return f;
}

CheckFunction CheckFunction::theta_derivative(int k) const {
  std::vector<std::pair<Exponent, Interval>> terms;
  const mpfr_prec_t prec = c_.front().precision();
  for (int c = 0; c < dim_[2]; ++c)
    for (int b = 0; b < dim_[1]; ++b)
      for (int a = 0; a < dim_[0]; ++a) {
        Exponent e{a, b, c};
        if (e[k] == 0) continue;
        const Interval v = c_[index(a, b, c)] * Interval(static_cast<long>(e[k]), prec);
        --e[k];
        terms.emplace_back(e, v);
      }
  if (terms.empty()) terms.emplace_back(Exponent{0, 0, 0}, Interval(0L, prec));
  return from_terms(terms);
}

Interval CheckFunction::coefficient(const Exponent& e) const {
  for (int k = 0; k < 3; ++k)
    if (e[k] < 0 || e[k] >= dim_[k]) return Interval(0L, c_.front().precision());
  return c_[index(e[0], e[1], e[2])];
}

double CheckFunction::evaluate(const Point& x) const {
  const auto t = thetas(x);
  double r3 = 0;
  for (int k = dim_[2] - 1; k >= 0; --k) {
    double r2 = 0;
    for (int j = dim_[1] - 1; j >= 0; --j) {
      double r1 = 0;
      for (int i = dim_[0] - 1; i >= 0; --i) r1 = r1 * t[0] + cd_[index(i, j, k)];
      r2 = r2 * t[1] + r1;
    }
    r3 = r3 * t[2] + r2;
  }
  return r3;
}

Interval CheckFunction::horner(const Interval& t1, const Interval& t2, const Interval& t3) const {
  const mpfr_prec_t prec = t1.precision();
  Interval r3(0L, prec);
  for (int k = dim_[2] - 1; k >= 0; --k) {
    Interval r2(0L, prec);
    for (int j = dim_[1] - 1; j >= 0; --j) {
      Interval r1(0L, prec);
      for (int i = dim_[0] - 1; i >= 0; --i) {
        r1 *= t1;
        r1 += c_[index(i, j, k)];
      }
      r2 *= t2;
      r2 += r1;
    }
    r3 *= t3;
    r3 += r2;
  }
  return r3;
}

Interval CheckFunction::evaluate(const Box& x) const {
  const auto t = thetas(x);
  return horner(t[0], t[1], t[2]);
}

std::array<Interval, 3> CheckFunction::gradient(const Box& x) const {
  const auto t = thetas(x);
  const mpfr_prec_t prec = x[0].precision();
  std::array<Interval, 3> dp{theta_derivative(0).horner(t[0], t[1], t[2]), theta_derivative(1).horner(t[0], t[1], t[2]),
                             theta_derivative(2).horner(t[0], t[1], t[2])};
  std::array<Interval, 3> g;
  for (int i = 0; i < 3; ++i) {
    const Interval s = x[i].sqr();
    // d/dx_i = x_i (2 P1 + 4 x_i^2 P2 + 6 x_i^4 P3)
    Interval inner = Interval(2L, prec) * dp[0] + Interval(4L, prec) * s * dp[1] + Interval(6L, prec) * s.sqr() * dp[2];
    g[i] = x[i] * inner;
  }
  return g;
}

CheckFunction nonpositivity_function(const SdpModel& model, const std::vector<IntervalMatrix>& blocks) {
  const mpfr_prec_t prec = blocks.empty() ? Interval::default_precision() : blocks.front().a.empty()
                                                                                ? Interval::default_precision()
                                                                                : blocks.front().a.front().precision();
  std::map<Exponent, Interval, WeightedLess> acc;
  std::map<Coefficient::Terms, Interval> cache;
  for (std::size_t b = 0; b < model.blocks.size(); ++b) {
    if (model.blocks[b].role != BlockRole::R) continue;
    const auto& poly = model.polynomials[b];
    const int n = static_cast<int>(model.blocks[b].size());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (const auto& [e, c] : poly[i][j].terms()) {
          auto it = cache.find(c.terms());
          if (it == cache.end()) it = cache.emplace(c.terms(), to_interval(c, prec)).first;
          const Interval v = it->second * blocks[b](i, j);
          auto [slot, fresh] = acc.emplace(e, v);
          if (!fresh) slot->second += v;
        }
  }
  std::vector<std::pair<Exponent, Interval>> terms(acc.begin(), acc.end());
  if (terms.empty()) terms.emplace_back(Exponent{0, 0, 0}, Interval(0L, prec));
  return CheckFunction::from_terms(terms);
}

mpq_class cube_side(const Cube& c, const mpq_class& delta) { return delta / pow2(c.depth); }

Box cube_box(const Cube& c, const mpq_class& delta, mpfr_prec_t prec) {
  const mpq_class h = cube_side(c, delta);
  Box b;
  for (int i = 0; i < 3; ++i) {
    const mpq_class lo = h * mpq_class(static_cast<long>(c.corner[i]));
    b[i] = Interval::hull(Interval(lo, prec), Interval(mpq_class(lo + h), prec));
  }
  return b;
}

std::vector<Cube> build_cover(const Solid& solid, const mpq_class& alpha, const mpq_class& delta) {
  const mpfr_prec_t prec = 128;
  const Interval a(alpha, prec);
  const std::int64_t m = region_extent(solid, delta.get_d());
  std::vector<Cube> out;
  for (std::int64_t i = 0; i < m; ++i)
    for (std::int64_t j = 0; j < m; ++j)
      for (std::int64_t k = 0; k < m; ++k) {
        Cube c;
        c.corner = {i, j, k};
        if (keep_cube(c, solid, a, delta, prec)) out.push_back(c);
      }
  return out;
}

Interval gradient_bound(const Cube& c, const mpq_class& delta, const CheckFunction& f, mpfr_prec_t prec) {
  const auto g = f.gradient(cube_box(c, delta, prec));
  Interval s(0L, prec);
  for (const auto& gi : g) s += gi.mag().sqr();
  return s.sqrt().mag();
}

mpq_class grid_distance_sq(const Cube& c, int n, const mpq_class& delta) {
  mpq_class step = cube_side(c, delta) / n;
  if (c.factor2) step /= 2;
  return 3 * step * step;
}

Interval grid_distance(const Cube& c, int n, const mpq_class& delta, mpfr_prec_t prec) {
  return Interval(grid_distance_sq(c, n, delta), prec).sqrt();
}

CubeVerdict check_cube(const Cube& c, int n, const CheckFunction& f, const Solid& solid, const mpq_class& alpha,
                       const mpq_class& delta, bool interval_mode, double margin, mpfr_prec_t prec) {
  if (n < 1) throw Error("grid size must be positive");
  CubeVerdict v;
  const mpq_class step = cube_side(c, delta) / n;
  const Interval nu = gradient_bound(c, delta, f, prec);
  const Interval dist = grid_distance(c, n, delta, prec);
  if (!interval_mode) {
    const double a = alpha.get_d();
    double mu = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j)
        for (int k = 0; k <= n; ++k) {
          const Point x{mpq_class(step * (c.corner[0] * n + i)).get_d(), mpq_class(step * (c.corner[1] * n + j)).get_d(),
                        mpq_class(step * (c.corner[2] * n + k)).get_d()};
          if (difference_body_position(solid, x, a) == Position::Interior) continue;
          const double fx = f.evaluate(x);
          v.mu_is_minus_infinity = false;
          if (fx >= 0) {
            v.outcome = CubeOutcome::NonNegativeValue;
            v.mu = fx;
            v.point = x;
            return v;
          }
          mu = std::max(mu, fx);
        }
    v.mu = mu;
    if (v.mu_is_minus_infinity) return v;
    v.outcome = (nu * dist).upper_double() <= margin * -mu ? CubeOutcome::Passed : CubeOutcome::NeedLargerN;
    return v;
  }

  IntervalPrecisionScope scope(prec);
  const Interval a(alpha, prec);
  bool have = false;
  Interval mu_hi(0L, prec);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int k = 0; k <= n; ++k) {
        const std::array<mpq_class, 3> q{step * (c.corner[0] * n + i), step * (c.corner[1] * n + j),
                                         step * (c.corner[2] * n + k)};
        const Box x{Interval(q[0], prec), Interval(q[1], prec), Interval(q[2], prec)};
        if (difference_body_position(solid, x, a) == Position::Interior) continue;
        const Interval fx = f.evaluate(x);
        if (!fx.certainly_negative()) {
          v.mu_is_minus_infinity = false;
          v.mu = fx.upper_double();
          v.point = {q[0].get_d(), q[1].get_d(), q[2].get_d()};
          v.outcome = mpfr_sgn(fx.lower()) >= 0 ? CubeOutcome::NonNegativeValue : CubeOutcome::NeedLargerN;
          return v;
        }
        const Interval up(fx.upper(), fx.upper(), prec);
        if (!have || mpfr_greater_p(up.upper(), mu_hi.upper())) mu_hi = up;
        have = true;
      }
  v.mu_is_minus_infinity = !have;
  if (!have) return v;
  v.mu = mu_hi.upper_double();
  v.outcome = (nu * dist).certainly_le(-mu_hi) ? CubeOutcome::Passed : CubeOutcome::NeedLargerN;
  return v;
}

const char* status_name(CheckReport::Status s) {
  switch (s) {
    case CheckReport::Status::Certified: return "Certified";
    case CheckReport::Status::NonNegativeValue: return "NonNegativeValue";
    case CheckReport::Status::MaxGridSizeExceeded: return "MaxGridSizeExceeded";
    case CheckReport::Status::IntervalRejected: return "IntervalRejected";
  }
  return "?";
}

CheckReport check_domain(const CheckFunction& f, const Solid& solid, const CheckOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckReport rep;
  rep.delta = opts.delta;
  if (rep.delta <= 0) {
    const double r = opts.alpha.get_d() * solid.circumradius() / 16;
    rep.delta = mpq_class(static_cast<long>(std::floor(r * 10000)), 10000);
    if (rep.delta <= 0) throw Error("cube side rounds to zero");
  }
  const mpq_class& delta = rep.delta;
  const mpfr_prec_t prec = opts.precision;
  const Interval alpha(opts.alpha, prec);

  struct Outcome {
    enum Kind { Leaf, Split, Fail } kind = Leaf;
    Cube cube;
    std::vector<Cube> children;
    CheckReport::Status status = CheckReport::Status::Certified;
    Point point{};
  };

  // Float pass: grid sizes and splitting.
  std::vector<Cube> level = build_cover(solid, opts.alpha, delta);
  std::vector<Cube> leaves;
  while (!level.empty()) {
    std::vector<Outcome> out(level.size());
    const std::size_t fail = parallel_first_failure(level.size(), opts.threads, [&](std::size_t idx) {
      IntervalPrecisionScope scope(prec);
      Outcome& o = out[idx];
      Cube c = level[idx];
      int n = opts.n_start;
      for (;;) {
        const CubeVerdict v = check_cube(c, n, f, solid, opts.alpha, delta, false, opts.margin, prec);
        if (v.outcome == CubeOutcome::NonNegativeValue) {
          c.grid_size = n;
          o = {Outcome::Fail, c, {}, CheckReport::Status::NonNegativeValue, v.point};
          return true;
        }
        if (v.outcome == CubeOutcome::Passed) {
          c.grid_size = n;
          o = {Outcome::Leaf, c, {}, CheckReport::Status::Certified, {}};
          return false;
        }
        bool too_fine = n >= opts.split_threshold;
        if (!v.mu_is_minus_infinity && !too_fine) {
          // grid size that the current estimate asks for
          const double need = gradient_bound(c, delta, f, prec).upper_double() *
                              std::sqrt(grid_distance_sq(c, 1, delta).get_d()) / (opts.margin * -v.mu);
          too_fine = need > opts.split_threshold;
        }
        if (too_fine) {
          if (c.depth >= opts.max_depth) {
            c.grid_size = n;
            o = {Outcome::Fail, c, {}, CheckReport::Status::MaxGridSizeExceeded, {}};
            return true;
          }
          o = {Outcome::Split, c, split(c, solid, alpha, delta, prec), CheckReport::Status::Certified, {}};
          return false;
        }
        n = next_grid_size(n, opts.split_threshold);
      }
    });
    rep.cubes_processed += level.size();
    if (fail < level.size()) {
      rep.status = out[fail].status;
      rep.cube = out[fail].cube;
      rep.point = out[fail].point;
      rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return rep;
    }
    std::vector<Cube> next;
    for (auto& o : out) {
      if (o.kind == Outcome::Leaf) {
        leaves.push_back(o.cube);
        rep.max_grid_size = std::max(rep.max_grid_size, o.cube.grid_size);
      } else {
        next.insert(next.end(), o.children.begin(), o.children.end());
      }
    }
    level = std::move(next);
  }
  rep.cube_list = leaves;

  // Interval pass over exactly the float pass's (cube, N) pairs.
  std::vector<CubeVerdict> verdicts(leaves.size());
  const std::size_t fail = parallel_first_failure(leaves.size(), opts.threads, [&](std::size_t idx) {
    IntervalPrecisionScope scope(prec);
    verdicts[idx] = check_cube(leaves[idx], leaves[idx].grid_size, f, solid, opts.alpha, delta, true, 1.0, prec);
    return verdicts[idx].outcome != CubeOutcome::Passed;
  });
  rep.cubes_processed += leaves.size();
  if (fail < leaves.size()) {
    rep.status = verdicts[fail].outcome == CubeOutcome::NonNegativeValue ? CheckReport::Status::NonNegativeValue
                                                                        : CheckReport::Status::IntervalRejected;
    rep.cube = leaves[fail];
    rep.point = verdicts[fail].point;
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

void write_cube_list(std::ostream& out, const std::vector<Cube>& cubes) {
  for (const auto& c : cubes)
    out << c.corner[0] << " " << c.corner[1] << " " << c.corner[2] << " " << c.depth << " " << c.grid_size << " "
        << (c.factor2 ? 1 : 0) << "\n";
}

std::vector<Cube> read_cube_list(std::istream& in) {
  std::vector<Cube> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    Cube c;
    int f2 = 0;
    if (!(ls >> c.corner[0] >> c.corner[1] >> c.corner[2] >> c.depth >> c.grid_size >> f2))
      throw IoFailure("malformed cube_list line: " + line);
    c.factor2 = f2 != 0;
    out.push_back(c);
  }
  return out;
}

SpotResult spot_test(const CheckFunction& f, const Solid& solid, const mpq_class& alpha, std::size_t points,
                     std::uint64_t seed, double threshold) {
  const double step = solid.circumradius() / 64;
  const double m = static_cast<double>(region_extent(solid, step)) * step;
  const ThetaPolynomial s = solid.constraint();
  const double a = alpha.get_d();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-m, m);
  SpotResult r;
  r.worst = -std::numeric_limits<double>::infinity();
  const std::size_t max_draws = points * 1000 + 1000;
  for (std::size_t draws = 0; r.points < points && draws < max_draws; ++draws) {
    const Point x{u(rng), u(rng), u(rng)};
    if (s.evaluate_double(thetas(x)) >= 0) continue;
    if (difference_body_position(solid, x, a) == Position::Interior) continue;
    ++r.points;
    const double v = f.evaluate(x);
    if (v > r.worst) {
      r.worst = v;
      r.worst_point = x;
    }
  }
  r.passed = r.points == points && r.worst <= threshold;
  return r;
}

double scan_alpha(const CheckFunction& f, const Solid& solid, double h, double step, double alpha_max) {
  const std::int64_t m = region_extent(solid, h);
  const ThetaPolynomial s = solid.constraint();
  struct Sample {
    Point x;
    double value;
  };
  std::vector<Sample> pts;
  for (std::int64_t i = 0; i <= m; ++i)
    for (std::int64_t j = i; j <= m; ++j)
      for (std::int64_t k = j; k <= m; ++k) {
        const Point x{static_cast<double>(i) * h, static_cast<double>(j) * h, static_cast<double>(k) * h};
        if (s.evaluate_double(thetas(x)) >= 0) continue;
        pts.push_back({x, f.evaluate(x)});
      }
  for (int n = 0;; ++n) {
    const double a = 1.0 + n * step;
    if (a > alpha_max + 1e-12) return 0;
    bool ok = true;
    for (const auto& p : pts)
      if (p.value >= 0 && difference_body_position(solid, p.x, a) != Position::Interior) {
        ok = false;
        break;
      }
    if (ok) return a;
  }
}

}  // namespace packbound
