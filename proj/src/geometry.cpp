#include "packbound/geometry.hpp"

#include "packbound/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace packbound {

namespace {

using Big = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<60>,
                                          boost::multiprecision::et_off>;

// Smallest even integer that is at least p.
int next_even(const mpq_class& p) {
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), p.get_num_mpz_t(), p.get_den_mpz_t());
  long v = c.get_si();
  return static_cast<int>(v % 2 == 0 ? v : v + 1);
}

bool is_integer(const mpq_class& q) { return q.get_den() == 1; }

// |x|^p for an interval x.
Interval abs_pow(const Interval& x, const mpq_class& p) {
  Interval a = x.abs();
  if (is_integer(p)) return a.pow(static_cast<unsigned>(p.get_num().get_ui()));
  const mpfr_prec_t prec = x.precision();
  Interval pe(p, prec);
  mpfr_t lo, hi;
  mpfr_init2(lo, prec);
  mpfr_init2(hi, prec);
  if (mpfr_sgn(a.upper()) == 0) {
    mpfr_set_zero(lo, 1);
    mpfr_set_zero(hi, 1);
  } else {
    Interval top(a.upper(), a.upper(), prec);
    Interval up = (pe * top.log()).exp();
    mpfr_set(hi, up.upper(), MPFR_RNDU);
    if (mpfr_sgn(a.lower()) == 0) {
      mpfr_set_zero(lo, 1);
    } else {
      Interval bot(a.lower(), a.lower(), prec);
      Interval down = (pe * bot.log()).exp();
      mpfr_set(lo, down.lower(), MPFR_RNDD);
    }
  }
  Interval r(lo, hi, prec);
  mpfr_clear(lo);
  mpfr_clear(hi);
  return r;
}

Interval eval_theta_interval(const ThetaPolynomial& t, const Box& x) {
  const mpfr_prec_t prec = x[0].precision();
  std::array<Interval, 3> th{Interval(0L, prec), Interval(0L, prec), Interval(0L, prec)};
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i) th[k] += x[i].pow(2 * (k + 1));
  Interval s(0L, prec);
  for (const auto& [e, c] : t.terms()) {
    if (!c.is_rational()) throw Error("constraint polynomial must have rational coefficients");
    Interval m(c.rational_part(), prec);
    for (int k = 0; k < 3; ++k)
      if (e[k] > 0) m *= th[k].pow(e[k]);
    s += m;
  }
  return s;
}

Position classify_sign(const Interval& v) {
  if (v.certainly_negative()) return Position::Interior;
  if (v.certainly_positive()) return Position::Exterior;
  return Position::Border;
}

Position classify_sign(double v, double eps) {
  if (v < -eps) return Position::Interior;
  if (v > eps) return Position::Exterior;
  return Position::Border;
}

// Gamma over an interval of positive arguments; Gamma is unimodal on (0, inf).
Interval gamma_enclosure(const Interval& a) {
  const mpfr_prec_t prec = a.precision();
  // Location of the minimum, 1.46163214496836234126..., bracketed.
  const double xmin_lo = 1.4616321449683622, xmin_hi = 1.4616321449683625;
  mpfr_t glo, ghi, t;
  mpfr_inits2(prec, glo, ghi, t, static_cast<mpfr_ptr>(nullptr));
  if (mpfr_cmp_d(a.upper(), xmin_lo) <= 0) {
    mpfr_gamma(glo, a.upper(), MPFR_RNDD);
    mpfr_gamma(ghi, a.lower(), MPFR_RNDU);
  } else if (mpfr_cmp_d(a.lower(), xmin_hi) >= 0) {
    mpfr_gamma(glo, a.lower(), MPFR_RNDD);
    mpfr_gamma(ghi, a.upper(), MPFR_RNDU);
  } else {
    mpfr_set_d(glo, 0.8856031944108886, MPFR_RNDD);
    mpfr_nextbelow(glo);
    mpfr_gamma(ghi, a.lower(), MPFR_RNDU);
    mpfr_gamma(t, a.upper(), MPFR_RNDU);
    mpfr_max(ghi, ghi, t, MPFR_RNDU);
  }
  Interval r(glo, ghi, prec);
  mpfr_clears(glo, ghi, t, static_cast<mpfr_ptr>(nullptr));
  return r;
}

}  // namespace

mpq_class parse_rational(const std::string& s) {
  if (s.empty()) throw IoFailure("empty number");
  if (s.find('/') != std::string::npos) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw IoFailure("bad rational: " + s);
    q.canonicalize();
    return q;
  }
  std::string t = s;
  bool neg = false;
  if (t[0] == '-' || t[0] == '+') {
    neg = t[0] == '-';
    t = t.substr(1);
  }
  long exp10 = 0;
  auto epos = t.find_first_of("eE");
  if (epos != std::string::npos) {
    exp10 = std::stol(t.substr(epos + 1));
    t = t.substr(0, epos);
  }
  auto dot = t.find('.');
  std::string digits = t;
  if (dot != std::string::npos) {
    digits = t.substr(0, dot) + t.substr(dot + 1);
    exp10 -= static_cast<long>(t.size() - dot - 1);
  }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    throw IoFailure("bad number: " + s);
  mpz_class num(digits, 10), ten = 10, scale;
  mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(std::labs(exp10)));
  mpq_class q = exp10 >= 0 ? mpq_class(num * scale) : mpq_class(num, scale);
  q.canonicalize();
  return neg ? mpq_class(-q) : q;
}

const char* position_name(Position p) {
  switch (p) {
    case Position::Interior: return "interior";
    case Position::Exterior: return "exterior";
    case Position::Border: return "border";
  }
  return "?";
}

Solid Solid::superball(const mpq_class& p) {
  if (p < 1) throw Error("superball exponent must be at least 1");
  Solid s;
  s.kind = Kind::Superball;
  s.p = p;
  s.name = "superball p=" + p.get_str();
  s.volume_ratio = mpq_class(8);
  return s;
}

bool Solid::is_even_superball() const {
  return kind == Kind::Superball && is_integer(p) && p.get_num() % 2 == 0;
}

ThetaPolynomial Solid::constraint() const {
  if (kind == Kind::Polytope) return ThetaPolynomial::theta(1) - ThetaPolynomial(Coefficient(circumradius_sq));
  if (is_even_superball()) {
    int e = static_cast<int>(p.get_num().get_si());
    return contract_theta(power_sum(e)) - ThetaPolynomial(Coefficient(mpq_class(2)));
  }
  // B^p sits inside {sum x^{p'} <= 2^{p'/p}}; the constant is rounded up to a rational.
  int pe = next_even(p);
  Interval c = (Interval(mpq_class(pe) / p, 256) * Interval(2L, 256).log()).exp();
  mpq_class cq;
  mpfr_get_q(cq.get_mpq_t(), c.upper());
  mpz_class scale = 1;
  for (int i = 0; i < 30; ++i) scale *= 10;
  mpz_class num;
  mpz_cdiv_q(num.get_mpz_t(), mpz_class(cq.get_num() * scale).get_mpz_t(), cq.get_den_mpz_t());
  mpq_class bound(num, scale);
  bound.canonicalize();
  return contract_theta(power_sum(pe)) - ThetaPolynomial(Coefficient(bound));
}

int Solid::constraint_degree() const {
  if (kind == Kind::Polytope) return 1;
  return next_even(p) / 2;
}

double Solid::circumradius() const {
  if (kind == Kind::Polytope) return std::sqrt(circumradius_sq.get_d());
  double pv = p.get_d();
  if (pv >= 2) return std::sqrt(3.0 * std::pow(2.0 / 3.0, 2.0 / pv));
  return std::pow(2.0, 1.0 / pv);
}

Interval Solid::volume_interval(mpfr_prec_t prec) const {
  if (kind == Kind::Polytope) return Interval(volume, prec);
  // K = 2^{1/p - 1} B^p
  Interval e = Interval(mpq_class(3) / p - 3, prec);
  Interval scale = (e * Interval(2L, prec).log()).exp();
  return scale * superball_volume_interval(p, prec);
}

double Solid::volume_double() const {
  if (kind == Kind::Polytope) return volume.get_d();
  double pv = p.get_d();
  return std::pow(2.0, 3.0 / pv - 3.0) * superball_volume(pv);
}

mpq_class Solid::difference_ratio() const {
  if (volume_ratio) return *volume_ratio;
  throw Error("volume ratio unknown for " + name);
}

Position difference_body_position(const Solid& solid, const Point& x, double alpha, double eps) {
  if (solid.kind == Solid::Kind::Superball) {
    double pv = solid.p.get_d();
    double v = 0;
    for (double xi : x) v += std::pow(std::fabs(xi), pv);
    return classify_sign(v - 2.0 * std::pow(alpha, pv), eps);
  }
  double worst = -1e300;
  for (const auto& h : solid.halfspaces) {
    double v = h.normal[0].get_d() * x[0] + h.normal[1].get_d() * x[1] + h.normal[2].get_d() * x[2] -
               alpha * h.rhs.get_d();
    worst = std::max(worst, v);
  }
  return classify_sign(worst, eps);
}

Position difference_body_position(const Solid& solid, const Box& x, const Interval& alpha) {
  const mpfr_prec_t prec = x[0].precision();
  if (solid.kind == Solid::Kind::Superball) {
    Interval v(0L, prec);
    for (const auto& xi : x) v += abs_pow(xi, solid.p);
    Interval ap = abs_pow(alpha, solid.p);
    return classify_sign(v - Interval(2L, prec) * ap);
  }
  bool all_inside = true;
  for (const auto& h : solid.halfspaces) {
    Interval v = -(alpha * Interval(h.rhs, prec));
    for (int i = 0; i < 3; ++i)
      if (h.normal[i] != 0) v += Interval(h.normal[i], prec) * x[i];
    if (v.certainly_positive()) return Position::Exterior;
    if (!v.certainly_negative()) all_inside = false;
  }
  return all_inside ? Position::Interior : Position::Border;
}

Position outer_ball_position(const Solid& solid, const Point& x, double eps) {
  std::array<double, 3> th{};
  for (int k = 0; k < 3; ++k)
    for (double xi : x) th[k] += std::pow(xi, 2 * (k + 1));
  return classify_sign(solid.constraint().evaluate_double(th), eps);
}

Position outer_ball_position(const Solid& solid, const Box& x) {
  return classify_sign(eval_theta_interval(solid.constraint(), x));
}

bool in_fundamental_domain(const Point& x) { return 0 <= x[0] && x[0] <= x[1] && x[1] <= x[2]; }

double superball_volume(double p) {
  return 8.0 * std::pow(std::tgamma(1.0 + 1.0 / p), 3) / std::tgamma(1.0 + 3.0 / p);
}

Interval superball_volume_interval(const mpq_class& p, mpfr_prec_t prec) {
  Interval g1 = gamma_enclosure(Interval(mpq_class(1) + mpq_class(1) / p, prec));
  Interval g3 = gamma_enclosure(Interval(mpq_class(1) + mpq_class(3) / p, prec));
  return Interval(8L, prec) * g1.pow(3) / g3;
}

double c1_density(double p) {
  if (p < 2.302) throw NoRoot("C1 lattices are defined for p >= 2.302");
  Big pb(p);
  Big c = boost::multiprecision::pow(Big(2), -1 / pb);
  auto f = [&](const Big& s) { return boost::multiprecision::pow(s + c, pb) + 2 * boost::multiprecision::pow(s, pb) - 1; };
  Big lo = 0, hi = 1;
  if (!(f(lo) < 0 && f(hi) > 0)) throw NoRoot("bisection bracket failed");
  const Big tol("1e-30");
  while (hi - lo > tol) {
    Big mid = (lo + hi) / 2;
    if (f(mid) > 0)
      hi = mid;
    else
      lo = mid;
  }
  Big s = (lo + hi) / 2;
  Big vol = 8 * boost::multiprecision::pow(boost::math::tgamma(1 + 1 / pb), 3) / boost::math::tgamma(1 + 3 / pb);
  Big dens = vol / (boost::multiprecision::pow(Big(2), 3 - 2 / pb) * (3 * s + c));
  return static_cast<double>(dens);
}

TransferredBound bound_transfer(double bound_for_k, double ratio) {
  if (!(ratio > 0)) throw Error("volume ratio must be positive");
  TransferredBound t;
  t.value = bound_for_k * ratio;
  if (t.value > 1.0) {
    t.value = 1.0;
    t.clamped = true;
  }
  return t;
}

Solid parse_solid_config(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Solid s;
  s.kind = Solid::Kind::Polytope;
  bool superball = false;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::vector<std::string> args;
    for (std::string a; ls >> a;) args.push_back(a);
    auto need = [&](std::size_t n) {
      if (args.size() != n) throw IoFailure("solid config: wrong arity for '" + key + "'");
    };
    if (key == "superball") {
      need(1);
      if (args[0].rfind("p=", 0) != 0) throw IoFailure("solid config: expected p=<value>");
      std::string name = s.name;
      mpq_class alpha = s.alpha;
      s = Solid::superball(parse_rational(args[0].substr(2)));
      if (!name.empty()) s.name = name;
      s.alpha = alpha;
      superball = true;
    } else if (key == "name") {
      need(1);
      s.name = args[0];
    } else if (key == "alpha") {
      need(1);
      s.alpha = parse_rational(args[0]);
    } else if (key == "circumradius_sq") {
      need(1);
      s.circumradius_sq = parse_rational(args[0]);
    } else if (key == "volume") {
      need(1);
      s.volume = parse_rational(args[0]);
    } else if (key == "volume_ratio") {
      need(1);
      s.volume_ratio = parse_rational(args[0]);
    } else if (key == "ineq") {
      need(4);
      Halfspace h;
      for (int i = 0; i < 3; ++i) h.normal[i] = parse_rational(args[i]);
      h.rhs = parse_rational(args[3]);
      if (h.rhs <= 0) throw IoFailure("solid config: origin must be interior to every halfspace");
      s.halfspaces.push_back(h);
    } else if (key == "vertex") {
      need(3);
      s.vertices.push_back({parse_rational(args[0]).get_d(), parse_rational(args[1]).get_d(),
                            parse_rational(args[2]).get_d()});
    } else {
      throw IoFailure("solid config: unknown key '" + key + "'");
    }
  }
  if (s.alpha < 1) throw IoFailure("solid config: alpha must be >= 1");
  if (!superball) {
    if (s.halfspaces.empty()) throw IoFailure("solid config: no halfspaces");
    if (s.circumradius_sq <= 0 || s.volume <= 0) throw IoFailure("solid config: missing circumradius_sq or volume");
  }
  return s;
}

Solid load_solid(const std::string& ref, const std::string& solid_dir) {
  namespace fs = std::filesystem;
  if (ref.rfind("superball:", 0) == 0) {
    if (ref.rfind("superball:p=", 0) != 0) throw IoFailure("expected superball:p=<value>");
    return Solid::superball(parse_rational(ref.substr(12)));
  }
  fs::path path(ref);
  if (!fs::exists(path)) {
    std::string name = ref == "tetra" ? "tetrahedron" : ref;
    path = fs::path(solid_dir) / (name + ".solid");
  }
  std::ifstream f(path);
  if (!f) throw IoFailure("cannot open solid '" + ref + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_solid_config(ss.str());
}

}  // namespace packbound
