#include "packbound/interval.hpp"

#include "packbound/errors.hpp"

#include <memory>
#include <utility>

namespace packbound {

namespace {
thread_local mpfr_prec_t g_default_precision = 256;

struct Tmp {
  explicit Tmp(mpfr_prec_t p) { mpfr_init2(v, p); }
  ~Tmp() { mpfr_clear(v); }
  Tmp(const Tmp&) = delete;
  Tmp& operator=(const Tmp&) = delete;
  mpfr_t v;
};

std::string decimal(mpfr_srcptr x, int digits, mpfr_rnd_t rnd) {
  if (mpfr_zero_p(x)) return "0";
  mpfr_exp_t exp = 0;
  char* s = mpfr_get_str(nullptr, &exp, 10, digits, x, rnd);
  std::string m(s);
  mpfr_free_str(s);
  std::string sign;
  if (!m.empty() && m[0] == '-') {
    sign = "-";
    m = m.substr(1);
  }
  // m holds the digits of 0.m * 10^exp
  if (exp > 0 && exp <= static_cast<mpfr_exp_t>(m.size())) {
    std::string r = m.substr(0, exp);
    if (static_cast<std::size_t>(exp) < m.size()) r += "." + m.substr(exp);
    return sign + r;
  }
  if (exp <= 0 && exp > -4) return sign + "0." + std::string(-exp, '0') + m;
  return sign + m.substr(0, 1) + "." + m.substr(1) + "e" + std::to_string(exp - 1);
}
}  // namespace

mpfr_prec_t Interval::default_precision() { return g_default_precision; }
void Interval::set_default_precision(mpfr_prec_t bits) { g_default_precision = bits; }

void Interval::init(mpfr_prec_t prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
}

Interval::Interval(long v, mpfr_prec_t prec) {
  init(prec);
  mpfr_set_si(lo_, v, MPFR_RNDD);
  mpfr_set_si(hi_, v, MPFR_RNDU);
}

Interval::Interval(double v, mpfr_prec_t prec) {
  init(prec);
  mpfr_set_d(lo_, v, MPFR_RNDD);
  mpfr_set_d(hi_, v, MPFR_RNDU);
}

Interval::Interval(const mpq_class& q, mpfr_prec_t prec) {
  init(prec);
  mpfr_set_q(lo_, q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, q.get_mpq_t(), MPFR_RNDU);
}

Interval::Interval(mpfr_srcptr lo, mpfr_srcptr hi, mpfr_prec_t prec) {
  init(prec);
  mpfr_set(lo_, lo, MPFR_RNDD);
  mpfr_set(hi_, hi, MPFR_RNDU);
  if (mpfr_greater_p(lo_, hi_)) throw Error("interval with lower > upper");
}

Interval Interval::from_strings(const std::string& lo, const std::string& hi, mpfr_prec_t prec) {
  Interval r(0L, prec);
  if (mpfr_set_str(r.lo_, lo.c_str(), 10, MPFR_RNDD) != 0 && !mpfr_number_p(r.lo_))
    throw IoFailure("bad number: " + lo);
  if (mpfr_set_str(r.hi_, hi.c_str(), 10, MPFR_RNDU) != 0 && !mpfr_number_p(r.hi_))
    throw IoFailure("bad number: " + hi);
  if (mpfr_greater_p(r.lo_, r.hi_)) throw IoFailure("interval with lower > upper");
  return r;
}

Interval Interval::hull(const Interval& a, const Interval& b) {
  Interval r = a;
  if (mpfr_less_p(b.lo_, r.lo_)) mpfr_set(r.lo_, b.lo_, MPFR_RNDD);
  if (mpfr_greater_p(b.hi_, r.hi_)) mpfr_set(r.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval Interval::pi(mpfr_prec_t prec) {
  Interval r(0L, prec);
  mpfr_const_pi(r.lo_, MPFR_RNDD);
  mpfr_const_pi(r.hi_, MPFR_RNDU);
  return r;
}

Interval::Interval(const Interval& o) {
  init(o.precision());
  mpfr_set(lo_, o.lo_, MPFR_RNDD);
  mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& o) noexcept {
  init(mpfr_get_prec(o.lo_));
  mpfr_swap(lo_, o.lo_);
  mpfr_swap(hi_, o.hi_);
}

Interval& Interval::operator=(const Interval& o) {
  if (this != &o) {
    mpfr_set_prec(lo_, o.precision());
    mpfr_set_prec(hi_, o.precision());
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
  }
  return *this;
}

Interval& Interval::operator=(Interval&& o) noexcept {
  mpfr_swap(lo_, o.lo_);
  mpfr_swap(hi_, o.hi_);
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

double Interval::mid_double() const {
  Tmp t(precision() + 1);
  mpfr_add(t.v, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(t.v, t.v, 1, MPFR_RNDN);
  return mpfr_get_d(t.v, MPFR_RNDN);
}

std::string Interval::lower_str(int digits) const { return decimal(lo_, digits, MPFR_RNDD); }
std::string Interval::upper_str(int digits) const { return decimal(hi_, digits, MPFR_RNDU); }

Interval& Interval::operator+=(const Interval& o) {
  mpfr_add(lo_, lo_, o.lo_, MPFR_RNDD);
  mpfr_add(hi_, hi_, o.hi_, MPFR_RNDU);
  return *this;
}

Interval& Interval::operator-=(const Interval& o) {
  Tmp t(precision());
  mpfr_sub(t.v, lo_, o.hi_, MPFR_RNDD);
  mpfr_sub(hi_, hi_, o.lo_, MPFR_RNDU);
  mpfr_swap(lo_, t.v);
  return *this;
}

Interval& Interval::operator*=(const Interval& o) {
  const mpfr_prec_t p = precision();
  int sa = mpfr_sgn(lo_) >= 0 ? 1 : (mpfr_sgn(hi_) <= 0 ? -1 : 0);
  int sb = mpfr_sgn(o.lo_) >= 0 ? 1 : (mpfr_sgn(o.hi_) <= 0 ? -1 : 0);
  Tmp l(p), h(p);
  if (sa == 1 && sb == 1) {
    mpfr_mul(l.v, lo_, o.lo_, MPFR_RNDD);
    mpfr_mul(h.v, hi_, o.hi_, MPFR_RNDU);
  } else if (sa == -1 && sb == -1) {
    mpfr_mul(l.v, hi_, o.hi_, MPFR_RNDD);
    mpfr_mul(h.v, lo_, o.lo_, MPFR_RNDU);
  } else if (sa == 1 && sb == -1) {
    mpfr_mul(l.v, hi_, o.lo_, MPFR_RNDD);
    mpfr_mul(h.v, lo_, o.hi_, MPFR_RNDU);
  } else if (sa == -1 && sb == 1) {
    mpfr_mul(l.v, lo_, o.hi_, MPFR_RNDD);
    mpfr_mul(h.v, hi_, o.lo_, MPFR_RNDU);
  } else {
    Tmp t(p);
    mpfr_mul(l.v, lo_, o.lo_, MPFR_RNDD);
    mpfr_mul(t.v, lo_, o.hi_, MPFR_RNDD);
    mpfr_min(l.v, l.v, t.v, MPFR_RNDD);
    mpfr_mul(t.v, hi_, o.lo_, MPFR_RNDD);
    mpfr_min(l.v, l.v, t.v, MPFR_RNDD);
    mpfr_mul(t.v, hi_, o.hi_, MPFR_RNDD);
    mpfr_min(l.v, l.v, t.v, MPFR_RNDD);
    mpfr_mul(h.v, lo_, o.lo_, MPFR_RNDU);
    mpfr_mul(t.v, lo_, o.hi_, MPFR_RNDU);
    mpfr_max(h.v, h.v, t.v, MPFR_RNDU);
    mpfr_mul(t.v, hi_, o.lo_, MPFR_RNDU);
    mpfr_max(h.v, h.v, t.v, MPFR_RNDU);
    mpfr_mul(t.v, hi_, o.hi_, MPFR_RNDU);
    mpfr_max(h.v, h.v, t.v, MPFR_RNDU);
  }
  mpfr_swap(lo_, l.v);
  mpfr_swap(hi_, h.v);
  return *this;
}

Interval& Interval::operator/=(const Interval& o) {
  if (o.contains_zero()) throw Error("interval division by an interval containing zero");
  const mpfr_prec_t p = precision();
  Tmp il(p), ih(p);
  mpfr_ui_div(il.v, 1, o.hi_, MPFR_RNDD);
  mpfr_ui_div(ih.v, 1, o.lo_, MPFR_RNDU);
  Interval inv(il.v, ih.v, p);
  return *this *= inv;
}

Interval Interval::operator-() const {
  Interval r(0L, precision());
  mpfr_neg(r.lo_, hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  return r;
}

Interval Interval::abs() const {
  if (mpfr_sgn(lo_) >= 0) return *this;
  if (mpfr_sgn(hi_) <= 0) return -*this;
  Interval r(0L, precision());
  mpfr_set_zero(r.lo_, 1);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, hi_, MPFR_RNDU);
  return r;
}

Interval Interval::mag() const {
  Interval a = abs();
  mpfr_set(a.lo_, a.hi_, MPFR_RNDD);
  return a;
}

Interval Interval::sqr() const {
  Interval a = abs();
  mpfr_sqr(a.lo_, a.lo_, MPFR_RNDD);
  mpfr_sqr(a.hi_, a.hi_, MPFR_RNDU);
  return a;
}

Interval Interval::pow(unsigned n) const {
  if (n == 0) return Interval(1L, precision());
  if (n % 2 == 0) {
    Interval a = abs();
    mpfr_pow_ui(a.lo_, a.lo_, n, MPFR_RNDD);
    mpfr_pow_ui(a.hi_, a.hi_, n, MPFR_RNDU);
    return a;
  }
  Interval r = *this;
  mpfr_pow_ui(r.lo_, lo_, n, MPFR_RNDD);
  mpfr_pow_ui(r.hi_, hi_, n, MPFR_RNDU);
  return r;
}

Interval Interval::sqrt() const {
  if (mpfr_sgn(lo_) < 0) throw Error("sqrt of an interval with negative part");
  Interval r = *this;
  mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
  mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
  return r;
}

Interval Interval::log() const {
  if (mpfr_sgn(lo_) <= 0) throw Error("log of an interval that is not positive");
  Interval r = *this;
  mpfr_log(r.lo_, lo_, MPFR_RNDD);
  mpfr_log(r.hi_, hi_, MPFR_RNDU);
  return r;
}

Interval Interval::exp() const {
  Interval r = *this;
  mpfr_exp(r.lo_, lo_, MPFR_RNDD);
  mpfr_exp(r.hi_, hi_, MPFR_RNDU);
  return r;
}

Interval Interval::width() const {
  Interval r(0L, precision());
  mpfr_sub(r.lo_, hi_, lo_, MPFR_RNDD);
  mpfr_sub(r.hi_, hi_, lo_, MPFR_RNDU);
  return r;
}

}  // namespace packbound
