#include "packbound/model.hpp"

#include "packbound/errors.hpp"
#include "packbound/fourier.hpp"

#include <json.hpp>

#include <map>
#include <set>

namespace packbound {

const char* role_name(BlockRole r) {
  switch (r) {
    case BlockRole::R: return "R";
    case BlockRole::S1: return "S1";
    case BlockRole::S2: return "S2";
  }
  return "?";
}

std::vector<IndexPair> index_set(const IsotypicData& data, int t) {
  std::vector<IndexPair> out;
  for (std::size_t r = 0; r < data.rows.size(); ++r) {
    int deg = data.rows[r].degree;
    if (deg > t) continue;
    for (const auto& a : theta_monomials(t - deg)) out.push_back({a, static_cast<int>(r)});
  }
  return out;
}

ThetaMatrix build_v_matrix(const IsotypicData& data, int t) {
  auto idx = index_set(data, t);
  const std::size_t n = idx.size();
  ThetaMatrix v(n, std::vector<ThetaPolynomial>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Exponent ab{idx[i].a[0] + idx[j].a[0], idx[i].a[1] + idx[j].a[1], idx[i].a[2] + idx[j].a[2]};
      ThetaPolynomial e = ThetaPolynomial(ThetaPolynomial::Base::monomial(ab)) * data.qpi[idx[i].row][idx[j].row];
      v[i][j] = e;
      v[j][i] = e;
    }
  return v;
}

ThetaMatrix build_v_matrix(int irrep, int t) { return build_v_matrix(isotypic_data().at(irrep), t); }

ThetaMatrix fourier_matrix(const ThetaMatrix& v) {
  ThetaMatrix f(v.size(), std::vector<ThetaPolynomial>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i; j < v.size(); ++j) {
      f[i][j] = fourier_apply(v[i][j]);
      f[j][i] = f[i][j];
    }
  return f;
}

CoefficientMatrix evaluate_block_at_zero(const ThetaMatrix& m) {
  CoefficientMatrix out(m.size(), std::vector<Coefficient>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) out[i][j] = m[i][j].constant_term();
  return out;
}

std::size_t SdpModel::num_r_blocks() const {
  std::size_t n = 0;
  for (const auto& b : blocks)
    if (b.role == BlockRole::R) ++n;
  return n;
}

std::vector<Sample> generate_samples(const Solid& solid, const mpq_class& spacing) {
  if (spacing <= 0) throw Error("sample spacing must be positive");
  std::vector<Sample> out;
  if (!solid.needs_samples()) return out;
  const double h = spacing.get_d();
  auto inside_outer = [&](const Point& x) { return outer_ball_position(solid, x) == Position::Interior; };
  long kmax = 0;
  while (inside_outer({0.0, 0.0, (kmax + 1) * h})) ++kmax;
  for (long k = 0; k <= kmax; ++k)
    for (long j = 0; j <= k; ++j)
      for (long i = 0; i <= j; ++i) {
        Point x{i * h, j * h, k * h};
        if (!inside_outer(x)) continue;
        if (difference_body_position(solid, x, 1.0) == Position::Interior) continue;
        out.push_back({spacing * i, spacing * j, spacing * k});
      }
  return out;
}

namespace {

void append_entries(std::vector<SparseEntry>& out, int block, const CoefficientMatrix& m) {
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i; j < m.size(); ++j)
      if (!m[i][j].is_zero()) out.push_back({block, static_cast<int>(i), static_cast<int>(j), m[i][j]});
}

}  // namespace

SdpModel assemble(const Solid& solid, int d, const std::vector<Sample>& samples) {
  if (d <= 0 || d % 2 == 0) throw EvenDegree("degree d must be odd and positive");
  SdpModel m;
  m.d = d;
  m.ds = solid.constraint_degree();
  if (m.ds > d) throw DegreeMismatch("constraint degree exceeds d");
  m.solid_name = solid.name;
  m.s = solid.constraint();
  m.samples = samples;

  const auto& data = isotypic_data();
  for (BlockRole role : {BlockRole::R, BlockRole::S1, BlockRole::S2}) {
    for (std::size_t pi = 0; pi < data.size(); ++pi) {
      int t = role == BlockRole::S1 ? d - m.ds : d;
      BlockIndex b{role, static_cast<int>(pi), t, index_set(data[pi], t)};
      if (b.pairs.empty()) continue;
      ThetaMatrix v = build_v_matrix(data[pi], t);
      if (role == BlockRole::R) {
        v = fourier_matrix(v);
      } else if (role == BlockRole::S1) {
        for (auto& row : v)
          for (auto& e : row) e = e * m.s;
      }
      m.blocks.push_back(std::move(b));
      m.polynomials.push_back(std::move(v));
    }
  }

  // (a) normalization and the objective
  LinearConstraint norm;
  norm.kind = ConstraintKind::Normalization;
  const std::size_t nr = m.num_r_blocks();
  for (std::size_t b = 0; b < nr; ++b) {
    append_entries(m.objective, static_cast<int>(b), evaluate_block_at_zero(m.polynomials[b]));
    const auto& blk = m.blocks[b];
    append_entries(norm.entries, static_cast<int>(b),
                   evaluate_block_at_zero(build_v_matrix(data[blk.irrep], blk.t)));
  }
  m.constraints.push_back(std::move(norm));

  // (b) one equality per theta-monomial
  std::map<Exponent, std::vector<SparseEntry>, WeightedLess> rows;
  for (std::size_t b = 0; b < m.blocks.size(); ++b) {
    const auto& p = m.polynomials[b];
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = i; j < p.size(); ++j)
        for (const auto& [e, c] : p[i][j].terms())
          rows[e].push_back({static_cast<int>(b), static_cast<int>(i), static_cast<int>(j), c});
  }
  for (auto& [e, entries] : rows) {
    LinearConstraint c;
    c.kind = ConstraintKind::Identity;
    c.monomial = e;
    c.entries = std::move(entries);
    m.constraints.push_back(std::move(c));
  }

  // (c) F[g](x) <= 0 at every sample
  for (const auto& x : samples) {
    std::array<mpq_class, 3> th;
    for (int k = 0; k < 3; ++k) {
      th[k] = 0;
      for (int i = 0; i < 3; ++i) {
        mpq_class v = 1;
        for (int r = 0; r < 2 * (k + 1); ++r) v *= x[i];
        th[k] += v;
      }
    }
    std::map<Exponent, mpq_class> powers;
    auto power = [&](const Exponent& e) -> const mpq_class& {
      auto it = powers.find(e);
      if (it != powers.end()) return it->second;
      mpq_class v = 1;
      for (int k = 0; k < 3; ++k)
        for (int r = 0; r < e[k]; ++r) v *= th[k];
      return powers.emplace(e, v).first->second;
    };
    LinearConstraint c;
    c.kind = ConstraintKind::Sample;
    c.point = x;
    for (std::size_t b = 0; b < nr; ++b) {
      const auto& p = m.polynomials[b];
      for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i; j < p.size(); ++j) {
          Coefficient v;
          for (const auto& [e, coef] : p[i][j].terms()) v += coef * power(e);
          if (!v.is_zero()) c.entries.push_back({static_cast<int>(b), static_cast<int>(i), static_cast<int>(j), v});
        }
    }
    m.constraints.push_back(std::move(c));
  }
  return m;
}

std::string model_to_json(const SdpModel& model) {
  using nlohmann::json;
  auto triplets = [](const std::vector<SparseEntry>& es) {
    json a = json::array();
    for (const auto& e : es) a.push_back({e.block, e.i, e.j, e.value.str()});
    return a;
  };
  json j;
  j["d"] = model.d;
  j["ds"] = model.ds;
  j["solid"] = model.solid_name;
  j["s"] = model.s.serialize();
  json blocks = json::array();
  const auto& irr = irreps();
  for (const auto& b : model.blocks) {
    json pairs = json::array();
    for (const auto& p : b.pairs) pairs.push_back({p.a[0], p.a[1], p.a[2], p.row});
    blocks.push_back({{"role", role_name(b.role)}, {"irrep", irr[b.irrep].name}, {"t", b.t},
                      {"size", b.size()}, {"index", pairs}});
  }
  j["blocks"] = blocks;
  j["objective"] = triplets(model.objective);
  json cons = json::array();
  for (const auto& c : model.constraints) {
    json e;
    switch (c.kind) {
      case ConstraintKind::Normalization:
        e["kind"] = "normalization";
        e["sense"] = ">=";
        e["rhs"] = 1;
        break;
      case ConstraintKind::Identity:
        e["kind"] = "identity";
        e["monomial"] = {c.monomial[0], c.monomial[1], c.monomial[2]};
        e["sense"] = "=";
        e["rhs"] = 0;
        break;
      case ConstraintKind::Sample:
        e["kind"] = "sample";
        e["point"] = {c.point[0].get_str(), c.point[1].get_str(), c.point[2].get_str()};
        e["sense"] = "<=";
        e["rhs"] = 0;
        break;
    }
    e["entries"] = triplets(c.entries);
    cons.push_back(e);
  }
  j["constraints"] = cons;
  return j.dump(1);
}

}  // namespace packbound
