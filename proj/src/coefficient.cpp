#include "packbound/coefficient.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace packbound {

Coefficient::Coefficient(const mpq_class& q, int pi_exp) {
  if (q != 0) {
    mpq_class c = q;
    c.canonicalize();
    terms_.emplace(pi_exp, c);
  }
}

bool Coefficient::is_rational() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0);
}

mpq_class Coefficient::rational_part() const {
  auto it = terms_.find(0);
  return it == terms_.end() ? mpq_class(0) : it->second;
}

int Coefficient::min_pi_exp() const { return terms_.empty() ? 0 : terms_.begin()->first; }
int Coefficient::max_pi_exp() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

void Coefficient::add_term(int e, const mpq_class& q) {
  if (q == 0) return;
  auto [it, inserted] = terms_.emplace(e, q);
  if (!inserted) {
    it->second += q;
    if (it->second == 0) terms_.erase(it);
  }
}

Coefficient& Coefficient::operator+=(const Coefficient& o) {
  for (const auto& [e, q] : o.terms_) add_term(e, q);
  return *this;
}

Coefficient& Coefficient::operator-=(const Coefficient& o) {
  for (const auto& [e, q] : o.terms_) add_term(e, -q);
  return *this;
}

Coefficient operator*(const Coefficient& a, const Coefficient& b) {
  Coefficient r;
  for (const auto& [ea, qa] : a.terms_)
    for (const auto& [eb, qb] : b.terms_) r.add_term(ea + eb, qa * qb);
  return r;
}

Coefficient& Coefficient::operator*=(const Coefficient& o) { return *this = *this * o; }

Coefficient& Coefficient::operator*=(const mpq_class& q) {
  if (q == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= q;
  return *this;
}

Coefficient Coefficient::operator-() const {
  Coefficient r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

double Coefficient::to_double() const {
  double s = 0;
  for (const auto& [e, q] : terms_) s += q.get_d() * std::pow(std::numbers::pi, e);
  return s;
}

std::string Coefficient::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, q] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << q.get_str() << " * pi^" << e;
  }
  return os.str();
}

Coefficient Coefficient::parse(const std::string& s) {
  Coefficient c;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) {
    if (tok == "+") continue;
    if (tok == "0" && c.is_zero() && is.peek() == EOF) break;
    mpq_class q;
    if (q.set_str(tok, 10) != 0) throw std::invalid_argument("bad rational: " + tok);
    q.canonicalize();
    std::string star, pe;
    if (!(is >> star >> pe) || star != "*" || pe.rfind("pi^", 0) != 0)
      throw std::invalid_argument("bad coefficient: " + s);
    c.add_term(std::stoi(pe.substr(3)), q);
  }
  return c;
}

}  // namespace packbound
