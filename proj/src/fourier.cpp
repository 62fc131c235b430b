#include "packbound/fourier.hpp"

#include "packbound/errors.hpp"
#include "packbound/rational_matrix.hpp"

#include <map>
#include <mutex>
#include <set>

namespace packbound {

ExactPolynomial laplacian(const ExactPolynomial& p) {
  ExactPolynomial r;
  for (int i = 0; i < 3; ++i) r += p.derivative(i).derivative(i);
  return r;
}

namespace {

std::mutex fourier_mutex;
std::map<int, std::vector<ThetaPolynomial>> harmonic_bases;
std::map<int, std::vector<ExactPolynomial>> full_harmonic_bases;
std::map<Exponent, ThetaPolynomial> transformed_monomials;

ThetaPolynomial theta_mono(const Exponent& e) {
  return ThetaPolynomial(ThetaPolynomial::Base::monomial(e));
}

ExactPolynomial x_mono(const Exponent& e) { return ExactPolynomial(ExactPolynomial::Base::monomial(e)); }

std::vector<ExactPolynomial> harmonic_basis(int k) {
  {
    std::lock_guard<std::mutex> lock(fourier_mutex);
    auto it = full_harmonic_bases.find(k);
    if (it != full_harmonic_bases.end()) return it->second;
  }
  auto dom = monomials_of_degree(k);
  std::vector<ExactPolynomial> out;
  if (k < 2) {
    for (const auto& m : dom) out.push_back(x_mono(m));
  } else {
    auto cod = monomials_of_degree(k - 2);
    RationalMatrix a(cod.size(), dom.size());
    for (std::size_t j = 0; j < dom.size(); ++j) {
      ExactPolynomial l = laplacian(x_mono(dom[j]));
      for (std::size_t i = 0; i < cod.size(); ++i) a(i, j) = l.coefficient(cod[i]).rational_part();
    }
    RationalMatrix n = null_space(a);
    for (std::size_t c = 0; c < n.cols(); ++c) {
      ExactPolynomial h;
      for (std::size_t j = 0; j < dom.size(); ++j)
        if (n(j, c) != 0) h.add_term(dom[j], Coefficient(n(j, c)));
      out.push_back(h);
    }
  }
  std::lock_guard<std::mutex> lock(fourier_mutex);
  full_harmonic_bases.emplace(k, out);
  return out;
}

// Solves p = sum_cols c_col * col exactly, coefficient by coefficient in powers of pi.
template <class Poly>
std::vector<Coefficient> solve_in_basis(const std::vector<Poly>& cols, const std::vector<Exponent>& coords,
                                        const Poly& p) {
  RationalMatrix a(coords.size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < coords.size(); ++i) a(i, j) = cols[j].coefficient(coords[i]).rational_part();
  std::set<int> pis;
  for (const auto& [e, c] : p.terms())
    for (const auto& [k, q] : c.terms()) pis.insert(k);
  std::vector<Coefficient> out(cols.size());
  for (int k : pis) {
    std::vector<mpq_class> b(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) {
      const Coefficient c = p.coefficient(coords[i]);
      const auto& t = c.terms();
      auto it = t.find(k);
      if (it != t.end()) b[i] = it->second;
    }
    auto x = solve_exact(a, b);
    for (std::size_t j = 0; j < cols.size(); ++j) out[j] += Coefficient(x[j], k);
  }
  return out;
}

}  // namespace

std::vector<ThetaPolynomial> invariant_harmonic_basis(int k) {
  {
    std::lock_guard<std::mutex> lock(fourier_mutex);
    auto it = harmonic_bases.find(k);
    if (it != harmonic_bases.end()) return it->second;
  }
  std::vector<ThetaPolynomial> out;
  auto dom = theta_monomials_of_weight(k);
  if (k == 0) {
    out.push_back(ThetaPolynomial(Coefficient(1)));
  } else if (!dom.empty()) {
    auto cod = theta_monomials_of_weight(k - 2);
    RationalMatrix a(cod.size(), dom.size());
    for (std::size_t j = 0; j < dom.size(); ++j) {
      ThetaPolynomial l = contract_theta(laplacian(expand_theta(theta_mono(dom[j]))));
      for (std::size_t i = 0; i < cod.size(); ++i) a(i, j) = l.coefficient(cod[i]).rational_part();
    }
    RationalMatrix n = null_space(a);
    for (std::size_t c = 0; c < n.cols(); ++c) {
      ThetaPolynomial h;
      for (std::size_t j = 0; j < dom.size(); ++j)
        if (n(j, c) != 0) h.add_term(dom[j], Coefficient(n(j, c)));
      out.push_back(h);
    }
  }
  std::lock_guard<std::mutex> lock(fourier_mutex);
  harmonic_bases.emplace(k, out);
  return out;
}

std::vector<HarmonicComponent> harmonic_decompose(const ThetaPolynomial& p, int j) {
  for (const auto& [e, c] : p.terms())
    if (WeightedLess::weight(e) != j) throw NotHomogeneous("not homogeneous of degree " + std::to_string(j));
  std::vector<ThetaPolynomial> cols;
  for (int r = 0; 2 * r <= j; ++r) {
    int k = j - 2 * r;
    ThetaPolynomial radial = ThetaPolynomial::theta(1).pow(r);
    for (const auto& h : invariant_harmonic_basis(k)) {
      cols.push_back(radial * h);
    }
  }
  auto x = solve_in_basis(cols, theta_monomials_of_weight(j), p);
  std::map<int, ThetaPolynomial> parts;
  std::size_t idx = 0;
  for (int r = 0; 2 * r <= j; ++r)
    for (const auto& h : invariant_harmonic_basis(j - 2 * r)) parts[r] += h * x[idx++];
  std::vector<HarmonicComponent> out;
  for (const auto& [r, h] : parts)
    if (!h.is_zero()) out.push_back({r, j - 2 * r, expand_theta(h)});
  return out;
}

std::vector<HarmonicComponent> harmonic_decompose(const ExactPolynomial& p, int j) {
  for (const auto& [e, c] : p.terms())
    if (e[0] + e[1] + e[2] != j) throw NotHomogeneous("not homogeneous of degree " + std::to_string(j));
  if (p.is_b3_invariant()) return harmonic_decompose(contract_theta(p), j);
  std::vector<ExactPolynomial> cols;
  ExactPolynomial radial(Coefficient(1));
  ExactPolynomial t1 = power_sum(2);
  for (int r = 0; 2 * r <= j; ++r) {
    for (const auto& h : harmonic_basis(j - 2 * r)) {
      cols.push_back(radial * h);
    }
    radial *= t1;
  }
  auto x = solve_in_basis(cols, monomials_of_degree(j), p);
  std::map<int, ExactPolynomial> parts;
  std::size_t idx = 0;
  for (int r = 0; 2 * r <= j; ++r)
    for (const auto& h : harmonic_basis(j - 2 * r)) parts[r] += h * x[idx++];
  std::vector<HarmonicComponent> out;
  for (const auto& [r, h] : parts)
    if (!h.is_zero()) out.push_back({r, j - 2 * r, h});
  return out;
}

std::vector<mpq_class> laguerre(int r, const mpq_class& alpha) {
  std::vector<mpq_class> prev{1};
  if (r == 0) return prev;
  std::vector<mpq_class> cur{1 + alpha, -1};
  for (int n = 1; n < r; ++n) {
    // (n+1) L_{n+1} = (2n+1+alpha-t) L_n - (n+alpha) L_{n-1}
    std::vector<mpq_class> next(n + 2);
    for (int i = 0; i <= n; ++i) {
      next[i] += (2 * n + 1 + alpha) * cur[i];
      next[i + 1] -= cur[i];
    }
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= (n + alpha) * prev[i];
    for (auto& c : next) c /= n + 1;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

namespace {

ThetaPolynomial transform_theta_monomial(const Exponent& m) {
  {
    std::lock_guard<std::mutex> lock(fourier_mutex);
    auto it = transformed_monomials.find(m);
    if (it != transformed_monomials.end()) return it->second;
  }
  ThetaPolynomial out;
  int j = WeightedLess::weight(m);
  for (const auto& comp : harmonic_decompose(theta_mono(m), j)) {
    ThetaPolynomial h = contract_theta(comp.h);
    auto lag = laguerre(comp.r, mpq_class(1, 2) + comp.k);
    mpz_class fact = 1;
    for (int i = 2; i <= comp.r; ++i) fact *= i;
    ThetaPolynomial radial;
    for (std::size_t i = 0; i < lag.size(); ++i)
      radial.add_term({static_cast<int>(i), 0, 0},
                      Coefficient(lag[i] * fact, static_cast<int>(i) - comp.r));
    mpq_class sign = (comp.k / 2) % 2 == 0 ? 1 : -1;
    out += h * radial * sign;
  }
  std::lock_guard<std::mutex> lock(fourier_mutex);
  transformed_monomials.emplace(m, out);
  return out;
}

}  // namespace

ThetaPolynomial fourier_apply(const ThetaPolynomial& g) {
  ThetaPolynomial out;
  for (const auto& [e, c] : g.terms()) out += transform_theta_monomial(e) * c;
  return out;
}

ExactPolynomial fourier_apply(const ExactPolynomial& g) {
  return expand_theta(fourier_apply(contract_theta(g)));
}

}  // namespace packbound
