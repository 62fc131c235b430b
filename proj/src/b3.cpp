#include "packbound/b3.hpp"

#include "packbound/errors.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <set>

namespace packbound {

IntMatrix3 multiply(const IntMatrix3& a, const IntMatrix3& b) {
  IntMatrix3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

namespace {

constexpr IntMatrix3 kIdentity = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

int det3(const IntMatrix3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

int order3(const IntMatrix3& m) {
  IntMatrix3 p = m;
  int k = 1;
  while (p != kIdentity) {
    p = multiply(p, m);
    ++k;
  }
  return k;
}

bool is_diagonal(const IntMatrix3& m) { return m[0][0] && m[1][1] && m[2][2]; }

}  // namespace

int GroupElement::det() const { return det3(matrix); }
int GroupElement::trace() const { return matrix[0][0] + matrix[1][1] + matrix[2][2]; }
int GroupElement::order() const { return order3(matrix); }

GroupElement GroupElement::inverse() const {
  GroupElement g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g.matrix[i][j] = matrix[j][i];
  g.cls = cls;
  return g;
}

// (det, trace, order) does not separate 3C2 from 6C2' or 3sigma_h from 6sigma_d; the
// three-element classes are exactly the diagonal ones.
ConjugacyClass classify(const IntMatrix3& m) {
  int d = det3(m), t = m[0][0] + m[1][1] + m[2][2], o = order3(m);
  switch (o) {
    case 1: return ConjugacyClass::E;
    case 2:
      if (t == -3) return ConjugacyClass::I;
      if (d == 1) return is_diagonal(m) ? ConjugacyClass::C2 : ConjugacyClass::C2p;
      return is_diagonal(m) ? ConjugacyClass::SigmaH : ConjugacyClass::SigmaD;
    case 3: return ConjugacyClass::C3;
    case 4: return d == 1 ? ConjugacyClass::C4 : ConjugacyClass::S4;
    case 6: return ConjugacyClass::S6;
    default: throw Error("element of unexpected order");
  }
}

std::vector<GroupElement> enumerate_group() {
  const std::array<IntMatrix3, 3> gens = {{
      {{{-1, 0, 0}, {0, 1, 0}, {0, 0, 1}}},
      {{{1, 0, 0}, {0, 0, -1}, {0, -1, 0}}},
      {{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}},
  }};
  std::set<IntMatrix3> seen{kIdentity};
  std::deque<IntMatrix3> queue{kIdentity};
  while (!queue.empty()) {
    IntMatrix3 m = queue.front();
    queue.pop_front();
    for (const auto& g : gens) {
      IntMatrix3 p = multiply(g, m);
      if (seen.insert(p).second) queue.push_back(p);
    }
  }
  std::vector<GroupElement> out;
  for (const auto& m : seen) out.push_back({m, classify(m)});
  std::stable_sort(out.begin(), out.end(), [](const GroupElement& a, const GroupElement& b) {
    if (a.cls != b.cls) return a.cls < b.cls;
    return a.matrix > b.matrix;
  });
  return out;
}

const std::vector<GroupElement>& group() {
  static const std::vector<GroupElement> g = enumerate_group();
  return g;
}

const std::vector<int>& inverse_table() {
  static const std::vector<int> t = [] {
    const auto& g = group();
    std::vector<int> inv(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      auto m = g[i].inverse().matrix;
      for (std::size_t j = 0; j < g.size(); ++j)
        if (g[j].matrix == m) inv[i] = static_cast<int>(j);
    }
    return inv;
  }();
  return t;
}

ExactPolynomial act(const GroupElement& g, const ExactPolynomial& p) {
  // (g^{-1} x)_i = g_{ji} x_j for the unique nonzero g_{ji}.
  std::array<int, 3> perm{}, signs{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (g.matrix[j][i] != 0) {
        perm[i] = j;
        signs[i] = g.matrix[j][i];
      }
  return p.substitute_signed_permutation(perm, signs);
}

const std::vector<Irrep>& irreps() {
  static const std::vector<Irrep> table = {
      {"A1g", 1, {1, 1, 1, 1, 1, 1, 1, 1, 1, 1}},
      {"A1u", 1, {1, -1, 1, -1, 1, -1, 1, 1, -1, -1}},
      {"A2g", 1, {1, 1, 1, 1, -1, -1, 1, -1, -1, 1}},
      {"A2u", 1, {1, -1, 1, -1, -1, 1, 1, -1, 1, -1}},
      {"Eg", 2, {2, 2, 2, 2, 0, 0, -1, 0, 0, -1}},
      {"Eu", 2, {2, -2, 2, -2, 0, 0, -1, 0, 0, 1}},
      {"T1g", 3, {3, 3, -1, -1, -1, -1, 0, 1, 1, 0}},
      {"T1u", 3, {3, -3, -1, 1, -1, 1, 0, 1, -1, 0}},
      {"T2g", 3, {3, 3, -1, -1, 1, 1, 0, -1, -1, 0}},
      {"T2u", 3, {3, -3, -1, 1, 1, -1, 0, -1, 1, 0}},
  };
  return table;
}

int irrep_index(const std::string& name) {
  const auto& t = irreps();
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i].name == name) return static_cast<int>(i);
  throw Error("unknown irreducible: " + name);
}

ExactPolynomial isotypic_projector(const Irrep& pi, const ExactPolynomial& p) {
  const auto& g = group();
  const auto& inv = inverse_table();
  ExactPolynomial r;
  for (std::size_t i = 0; i < g.size(); ++i) {
    int chi = pi.character_of(g[inv[i]].cls);
    if (chi != 0) r += act(g[i], p) * mpq_class(chi);
  }
  return r * mpq_class(pi.dim, kGroupOrder);
}

namespace {

mpq_class dot(const ExactPolynomial& p, const ExactPolynomial& q) {
  mpq_class s = 0;
  for (const auto& [e, c] : p.terms()) s += c.rational_part() * q.coefficient(e).rational_part();
  return s;
}

// Row-echelon basis keyed by leading exponent.
class Echelon {
public:
  ExactPolynomial reduce(ExactPolynomial v) const {
    for (auto it = basis_.rbegin(); it != basis_.rend(); ++it) {
      Coefficient c = v.coefficient(it->first);
      if (!c.is_zero()) v -= it->second * c;
    }
    return v;
  }
  bool add(const ExactPolynomial& v) {
    ExactPolynomial r = reduce(v);
    if (r.is_zero()) return false;
    mpq_class lead = r.leading_coefficient().rational_part();
    r *= mpq_class(1 / lead);
    Exponent e = r.leading_exponent();
    for (auto& [k, b] : basis_) {
      Coefficient c = b.coefficient(e);
      if (!c.is_zero()) b -= r * c;
    }
    basis_.emplace(e, std::move(r));
    return true;
  }
  bool contains(const ExactPolynomial& v) const { return reduce(v).is_zero(); }
  std::vector<ExactPolynomial> vectors() const {
    std::vector<ExactPolynomial> out;
    for (auto it = basis_.rbegin(); it != basis_.rend(); ++it) out.push_back(it->second);
    return out;
  }

private:
  std::map<Exponent, ExactPolynomial, GrlexLess> basis_;
};

ExactPolynomial normalize_lead(ExactPolynomial p) {
  mpq_class lead = p.leading_coefficient().rational_part();
  return p * mpq_class(1 / lead);
}

ExactPolynomial monomial_poly(const Exponent& e) {
  return ExactPolynomial(ExactPolynomial::Base::monomial(e));
}

ExactPolynomial theta_monomial_x(const Exponent& t) {
  return expand_theta(ThetaPolynomial(ThetaPolynomial::Base::monomial(t)));
}

constexpr int kTopCoinvariantDegree = 9;

IsotypicData build_one(const Irrep& pi) {
  const auto& g = group();
  const auto& inv = inverse_table();
  const int d = pi.dim;
  IsotypicData data;
  data.irrep = pi;

  int k0 = -1;
  ExactPolynomial seed;
  for (int k = 0; k <= kTopCoinvariantDegree && k0 < 0; ++k)
    for (const auto& m : monomials_of_degree(k)) {
      ExactPolynomial v = isotypic_projector(pi, monomial_poly(m));
      if (!v.is_zero()) {
        k0 = k;
        seed = normalize_lead(v);
        break;
      }
    }
  if (k0 < 0) throw DegenerateChoice("no seed for " + pi.name);

  // Orthogonal basis of the irreducible subspace spanned by the orbit of the seed.
  std::vector<ExactPolynomial> basis{seed};
  for (const auto& h : g) {
    if (static_cast<int>(basis.size()) == d) break;
    ExactPolynomial w = act(h, seed);
    for (const auto& v : basis) w -= v * mpq_class(dot(v, w) / dot(v, v));
    if (!w.is_zero()) basis.push_back(w);
  }
  if (static_cast<int>(basis.size()) != d) throw DegenerateChoice("orbit too small for " + pi.name);

  std::vector<mpq_class> norms(d);
  for (int a = 0; a < d; ++a) norms[a] = dot(basis[a], basis[a]);
  for (int a = 0; a < d; ++a) data.weights.push_back(norms[0] / norms[a]);

  data.rep.reserve(g.size());
  for (const auto& h : g) {
    RationalMatrix r(d, d);
    for (int b = 0; b < d; ++b) {
      ExactPolynomial img = act(h, basis[b]);
      for (int a = 0; a < d; ++a) r(a, b) = dot(basis[a], img) / norms[a];
    }
    data.rep.push_back(std::move(r));
  }

  // Serre: p_{ij}(f) = (d/48) sum_g pi_{ji}(g^{-1}) g f.
  auto serre = [&](int i, int j, const ExactPolynomial& f) {
    ExactPolynomial r;
    for (std::size_t n = 0; n < g.size(); ++n) {
      const mpq_class& c = data.rep[inv[n]](j, i);
      if (c != 0) r += act(g[n], f) * c;
    }
    return r * mpq_class(d, kGroupOrder);
  };

  data.rows.push_back({k0, basis});
  for (int k = k0 + 1; static_cast<int>(data.rows.size()) < d; ++k) {
    if (k > kTopCoinvariantDegree) throw DegenerateChoice("missing rows for " + pi.name);
    Echelon ideal;
    for (const auto& row : data.rows)
      for (const auto& t : theta_monomials_of_weight(k - row.degree))
        ideal.add(theta_monomial_x(t) * row.phi[0]);
    for (const auto& m : monomials_of_degree(k)) {
      ExactPolynomial v = serre(0, 0, monomial_poly(m));
      if (v.is_zero() || ideal.contains(v)) continue;
      CoinvariantRow row;
      row.degree = k;
      row.phi.push_back(normalize_lead(v));
      for (int i = 1; i < d; ++i) row.phi.push_back(serre(i, 0, row.phi[0]));
      data.rows.push_back(std::move(row));
      break;
    }
  }
  return data;
}

}  // namespace

std::vector<ExactPolynomial> isotypic_project(int k, const Irrep& pi) {
  Echelon e;
  for (const auto& m : monomials_of_degree(k)) e.add(isotypic_projector(pi, monomial_poly(m)));
  return e.vectors();
}

std::vector<IsotypicData> build_coinvariant_rows() {
  std::vector<IsotypicData> out;
  for (const auto& pi : irreps()) out.push_back(build_one(pi));
  return out;
}

void build_qpi(std::vector<IsotypicData>& data) {
  for (auto& iso : data) {
    const int n = static_cast<int>(iso.rows.size());
    iso.qpi.assign(n, std::vector<ThetaPolynomial>(n));
    for (int k = 0; k < n; ++k)
      for (int l = k; l < n; ++l) {
        ExactPolynomial s;
        for (int i = 0; i < iso.dim(); ++i)
          s += iso.rows[k].phi[i] * iso.rows[l].phi[i] * iso.weights[i];
        iso.qpi[k][l] = contract_theta(s);
        iso.qpi[l][k] = iso.qpi[k][l];
      }
  }
}

const std::vector<IsotypicData>& isotypic_data() {
  static const std::vector<IsotypicData> data = [] {
    auto d = build_coinvariant_rows();
    build_qpi(d);
    return d;
  }();
  return data;
}

std::vector<long> molien_coefficients(Series series, int upto) {
  std::vector<long> c(upto + 1, 0);
  c[0] = 1;
  auto divide_by = [&](int d) {  // multiply by 1/(1 - t^d)
    for (int k = d; k <= upto; ++k) c[k] += c[k - d];
  };
  switch (series) {
    case Series::Invariant:
      for (int d : {2, 4, 6}) divide_by(d);
      break;
    case Series::HarmonicInvariant:
      for (int d : {4, 6}) divide_by(d);
      break;
    case Series::Coinvariant:
      for (int d : {2, 4, 6}) {  // multiply by 1 + t + ... + t^(d-1)
        std::vector<long> n(upto + 1, 0);
        for (int k = 0; k <= upto; ++k)
          for (int j = 0; j < d && k + j <= upto; ++j) n[k + j] += c[k];
        c = n;
      }
      break;
  }
  return c;
}

}  // namespace packbound
