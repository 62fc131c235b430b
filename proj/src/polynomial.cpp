#include "packbound/polynomial.hpp"

#include "packbound/errors.hpp"
#include "packbound/rational_matrix.hpp"

#include <algorithm>
#include <mutex>
#include <set>
#include <sstream>

namespace packbound {

template <class Less>
SparsePoly<Less> SparsePoly<Less>::deserialize(const std::string& text) {
  SparsePoly p;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw IoFailure("bad polynomial line: " + line);
    std::istringstream hs(line.substr(0, colon));
    Exponent e{};
    if (!(hs >> e[0] >> e[1] >> e[2])) throw IoFailure("bad exponent: " + line);
    p.add_term(e, Coefficient::parse(line.substr(colon + 1)));
  }
  return p;
}

template class SparsePoly<GrlexLess>;
template class SparsePoly<WeightedLess>;

ExactPolynomial ExactPolynomial::variable(int i) {
  Exponent e{0, 0, 0};
  e[i] = 1;
  return ExactPolynomial(Base::monomial(e));
}

int ExactPolynomial::degree() const {
  if (is_zero()) return -1;
  const auto& e = leading_exponent();
  return e[0] + e[1] + e[2];
}

bool ExactPolynomial::is_homogeneous() const {
  if (is_zero()) return true;
  const auto& lo = terms_.begin()->first;
  return lo[0] + lo[1] + lo[2] == degree();
}

ExactPolynomial ExactPolynomial::homogeneous_part(int k) const {
  ExactPolynomial r;
  for (const auto& [e, c] : terms_)
    if (e[0] + e[1] + e[2] == k) r.add_term(e, c);
  return r;
}

ExactPolynomial ExactPolynomial::substitute_signed_permutation(
    const std::array<int, 3>& perm, const std::array<int, 3>& signs) const {
  ExactPolynomial r;
  for (const auto& [e, c] : terms_) {
    Exponent f{0, 0, 0};
    int sign = 1;
    for (int i = 0; i < 3; ++i) {
      f[perm[i]] += e[i];
      if (e[i] % 2 != 0) sign *= signs[i];
    }
    r.add_term(f, sign > 0 ? c : -c);
  }
  return r;
}

bool ExactPolynomial::is_b3_invariant() const {
  for (const auto& [e, c] : terms_) {
    if (e[0] % 2 || e[1] % 2 || e[2] % 2) return false;
    Exponent f = e;
    std::sort(f.begin(), f.end());
    do {
      if (coefficient(f) != c) return false;
    } while (std::next_permutation(f.begin(), f.end()));
  }
  return true;
}

double ExactPolynomial::evaluate_double(const std::array<double, 3>& x) const {
  return evaluate<double>(x, [](const Coefficient& c) { return c.to_double(); });
}

ThetaPolynomial ThetaPolynomial::theta(int i) {
  Exponent e{0, 0, 0};
  e[i - 1] = 1;
  return ThetaPolynomial(Base::monomial(e));
}

int ThetaPolynomial::weighted_degree() const {
  return is_zero() ? -1 : WeightedLess::weight(leading_exponent());
}

ThetaPolynomial ThetaPolynomial::weighted_part(int w) const {
  ThetaPolynomial r;
  for (const auto& [e, c] : terms_)
    if (WeightedLess::weight(e) == w) r.add_term(e, c);
  return r;
}

double ThetaPolynomial::evaluate_double(const std::array<double, 3>& t) const {
  double s = 0;
  for (const auto& [e, c] : terms_) {
    double m = c.to_double();
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < e[i]; ++k) m *= t[i];
    s += m;
  }
  return s;
}

std::vector<Exponent> theta_monomials_of_weight(int w) {
  std::vector<Exponent> out;
  if (w < 0 || w % 2) return out;
  for (int k = w / 6; k >= 0; --k)
    for (int j = (w - 6 * k) / 4; j >= 0; --j) {
      int rest = w - 6 * k - 4 * j;
      out.push_back({rest / 2, j, k});
    }
  std::sort(out.begin(), out.end(), WeightedLess());
  return out;
}

std::vector<Exponent> theta_monomials(int max_weight) {
  std::vector<Exponent> out;
  for (int w = 0; w <= max_weight; w += 2) {
    auto part = theta_monomials_of_weight(w);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::vector<Exponent> monomials_of_degree(int k) {
  std::vector<Exponent> out;
  for (int a = k; a >= 0; --a)
    for (int b = k - a; b >= 0; --b) out.push_back({a, b, k - a - b});
  return out;
}

ExactPolynomial power_sum(int k) {
  ExactPolynomial p;
  for (int i = 0; i < 3; ++i) {
    Exponent e{0, 0, 0};
    e[i] = k;
    p.add_term(e, Coefficient(1));
  }
  return p;
}

namespace {

std::mutex cache_mutex;
std::map<Exponent, ExactPolynomial> theta_expansions;
std::map<int, std::pair<std::vector<Exponent>, RationalMatrix>> contraction_tables;

ExactPolynomial expand_theta_monomial(const Exponent& t) {
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = theta_expansions.find(t);
    if (it != theta_expansions.end()) return it->second;
  }
  ExactPolynomial r = ExactPolynomial(power_sum(2).pow(t[0]) * power_sum(4).pow(t[1]) *
                                      power_sum(6).pow(t[2]));
  std::lock_guard<std::mutex> lock(cache_mutex);
  theta_expansions.emplace(t, r);
  return r;
}

// Monomials x^(2a) x^(2b) x^(2c) with a >= b >= c and a + b + c = w / 2; as many as
// theta-monomials of weight w.
std::vector<Exponent> sorted_even_monomials(int w) {
  std::vector<Exponent> out;
  int h = w / 2;
  for (int a = h; a >= 0; --a)
    for (int b = std::min(a, h - a); b >= 0; --b) {
      int c = h - a - b;
      if (c > b) continue;
      out.push_back({2 * a, 2 * b, 2 * c});
    }
  return out;
}

const std::pair<std::vector<Exponent>, RationalMatrix>& contraction_table(int w) {
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = contraction_tables.find(w);
    if (it != contraction_tables.end()) return it->second;
  }
  auto unknowns = theta_monomials_of_weight(w);
  auto eqs = sorted_even_monomials(w);
  if (eqs.size() != unknowns.size()) throw NotInTheRing("contraction table size mismatch");
  RationalMatrix m(eqs.size(), unknowns.size());
  for (std::size_t u = 0; u < unknowns.size(); ++u) {
    ExactPolynomial x = expand_theta_monomial(unknowns[u]);
    for (std::size_t e = 0; e < eqs.size(); ++e) m(e, u) = x.coefficient(eqs[e]).rational_part();
  }
  RationalMatrix inv;
  try {
    inv = inverse(m);
  } catch (const Singular&) {
    throw NotInTheRing("theta basis matrix is singular");
  }
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto [it, ok] = contraction_tables.emplace(w, std::make_pair(std::move(unknowns), std::move(inv)));
  return it->second;
}

}  // namespace

ExactPolynomial expand_theta(const ThetaPolynomial& t) {
  ExactPolynomial r;
  for (const auto& [e, c] : t.terms()) r += expand_theta_monomial(e) * c;
  return r;
}

ThetaPolynomial contract_theta(const ExactPolynomial& p) {
  if (!p.is_b3_invariant()) throw NotInvariant("polynomial is not B3-invariant");
  ThetaPolynomial out;
  std::set<int> degrees;
  for (const auto& [e, c] : p.terms()) degrees.insert(e[0] + e[1] + e[2]);
  for (int w : degrees) {
    const auto& [unknowns, inv] = contraction_table(w);
    auto eqs = sorted_even_monomials(w);
    std::set<int> pis;
    for (const auto& e : eqs) {
      const Coefficient c = p.coefficient(e);
      for (const auto& [k, q] : c.terms()) pis.insert(k);
    }
    for (int k : pis) {
      std::vector<mpq_class> b(eqs.size());
      for (std::size_t i = 0; i < eqs.size(); ++i) {
        const Coefficient c = p.coefficient(eqs[i]);
        const auto& terms = c.terms();
        auto it = terms.find(k);
        if (it != terms.end()) b[i] = it->second;
      }
      auto x = inv * b;
      for (std::size_t u = 0; u < unknowns.size(); ++u)
        if (x[u] != 0) out.add_term(unknowns[u], Coefficient(x[u], k));
    }
  }
  return out;
}

}  // namespace packbound
