#include "packbound/certify.hpp"

#include "packbound/b3.hpp"
#include "packbound/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

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

// Endpoint-wise maximum.
Interval imax(const Interval& a, const Interval& b) {
  mpfr_srcptr lo = mpfr_cmp(a.lower(), b.lower()) >= 0 ? a.lower() : b.lower();
  mpfr_srcptr hi = mpfr_cmp(a.upper(), b.upper()) >= 0 ? a.upper() : b.upper();
  return Interval(lo, hi, a.precision());
}

// sum over entries of value * X_ij, off-diagonal entries counted twice
Interval functional(const std::vector<SparseEntry>& es, const std::vector<IntervalMatrix>& blocks,
                    std::map<int, Interval>& pi_cache, mpfr_prec_t prec) {
  Interval s(0L, prec);
  for (const auto& e : es) {
    if (e.block >= static_cast<int>(blocks.size())) continue;
    Interval c(0L, prec);
    for (const auto& [k, q] : e.value.terms()) {
      auto it = pi_cache.find(k);
      if (it == pi_cache.end()) {
        Interval p = Interval::pi(prec);
        Interval v = p.pow(static_cast<unsigned>(std::abs(k)));
        if (k < 0) v = Interval(1L, prec) / v;
        it = pi_cache.emplace(k, v).first;
      }
      c += Interval(q, prec) * it->second;
    }
    if (e.i != e.j) c *= Interval(2L, prec);
    s += c * blocks[e.block](e.i, e.j);
  }
  return s;
}

nlohmann::json interval_json(const Interval& x) { return nlohmann::json::array({x.lower_str(), x.upper_str()}); }

}  // namespace

Interval to_interval(const Coefficient& c, mpfr_prec_t prec) {
  Interval s(0L, prec);
  for (const auto& [k, q] : c.terms()) {
    Interval v = Interval::pi(prec).pow(static_cast<unsigned>(std::abs(k)));
    if (k < 0) v = Interval(1L, prec) / v;
    s += Interval(q, prec) * v;
  }
  return s;
}

Interval to_interval(const Real& x, mpfr_prec_t prec) {
  mpfr_srcptr p = x.backend().data();
  return Interval(p, p, prec);
}

RepairedMatrix repair_psd(const RealMatrix& a, double lambda_floor) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw Error("repair_psd: matrix is not square");
  RepairedMatrix out;
  out.tilde = IntervalMatrix(n);
  if (n == 0) return out;
  Real dmin = a(0, 0);
  for (int i = 1; i < n; ++i) dmin = std::min<Real>(dmin, a(i, i));
  if (dmin <= 0) throw NotRepairable("repair_psd: nonpositive diagonal entry");
  // smallest power of two >= dmin
  long ex = 0;
  Real mant = boost::multiprecision::frexp(dmin, &ex);
  Real lambda = boost::multiprecision::ldexp(Real(1), static_cast<int>(mant == Real(0.5) ? ex - 1 : ex));
  RealMatrix sym = (a + a.transpose()) / 2;
  for (;;) {
    if (lambda < Real(lambda_floor)) throw NotRepairable("repair_psd: no Cholesky factorization above the floor");
    RealMatrix shifted = sym;
    for (int i = 0; i < n; ++i) shifted(i, i) -= lambda;
    Eigen::LLT<RealMatrix> llt(shifted);
    if (llt.info() == Eigen::Success) {
      out.cholesky = llt.matrixL();
      break;
    }
    lambda /= 2;
  }
  out.lambda = lambda;
  const mpfr_prec_t prec = Interval::default_precision();
  std::vector<Interval> l(static_cast<std::size_t>(n) * n, Interval(0L, prec));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k <= i; ++k) l[static_cast<std::size_t>(i) * n + k] = to_interval(out.cholesky(i, k), prec);
  const Interval lam = to_interval(lambda, prec);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      Interval s(0L, prec);
      for (int k = 0; k <= j; ++k) s += l[static_cast<std::size_t>(i) * n + k] * l[static_cast<std::size_t>(j) * n + k];
      if (i == j) s += lam;
      out.tilde(i, j) = s;
      out.tilde(j, i) = s;
    }
  return out;
}

ResidualBasis residual_basis(const SdpModel& model) {
  ResidualBasis rb;
  for (std::size_t k = 0; k < model.constraints.size(); ++k)
    if (model.constraints[k].kind == ConstraintKind::Identity) rb.identity_rows.push_back(static_cast<int>(k));
  const std::size_t m = rb.identity_rows.size();

  // Columns: upper-triangle entries of the S2 blocks in (block, i, j) order.
  std::map<std::tuple<int, int, int>, std::vector<mpq_class>> cols;
  for (std::size_t b = 0; b < model.blocks.size(); ++b) {
    if (model.blocks[b].role != BlockRole::S2) continue;
    const int n = static_cast<int>(model.blocks[b].size());
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) cols[{static_cast<int>(b), i, j}].assign(m, mpq_class(0));
  }
  for (std::size_t r = 0; r < m; ++r)
    for (const auto& e : model.constraints[rb.identity_rows[r]].entries) {
      if (model.blocks[e.block].role != BlockRole::S2) continue;
      if (!e.value.is_rational()) throw BasisDeficient("S2 entry with an irrational coefficient");
      cols[{e.block, std::min(e.i, e.j), std::max(e.i, e.j)}][r] += e.value.rational_part();
    }

  std::vector<std::vector<mpq_class>> reduced;
  std::vector<std::size_t> pivot_row;
  for (const auto& [key, col] : cols) {
    if (rb.entries.size() == m) break;
    std::vector<mpq_class> v = col;
    for (std::size_t k = 0; k < reduced.size(); ++k) {
      const mpq_class f = v[pivot_row[k]];
      if (f == 0) continue;
      for (std::size_t r = 0; r < m; ++r) v[r] -= f * reduced[k][r];
    }
    std::size_t p = m;
    for (std::size_t r = 0; r < m; ++r)
      if (v[r] != 0) {
        p = r;
        break;
      }
    if (p == m) continue;
    const mpq_class piv = v[p];
    for (auto& x : v) x /= piv;
    reduced.push_back(std::move(v));
    pivot_row.push_back(p);
    rb.entries.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key)});
  }
  if (rb.entries.size() != m)
    throw BasisDeficient("S2 entries span " + std::to_string(rb.entries.size()) + " of " + std::to_string(m) +
                         " identity rows");
  rb.rows.assign(pivot_row.begin(), pivot_row.end());
  std::sort(rb.rows.begin(), rb.rows.end());
  rb.ahat = RationalMatrix(m, m);
  for (std::size_t c = 0; c < m; ++c) {
    const auto& e = rb.entries[c];
    const auto& col = cols.at({e.block, e.i, e.j});
    for (std::size_t r = 0; r < m; ++r) rb.ahat(r, c) = col[rb.rows[r]];
  }
  rb.ahat_inverse = inverse(rb.ahat);
  rb.ahat_inverse_norm = rb.ahat_inverse.inf_norm();
  return rb;
}

ResidualBound residual_bound(const std::vector<IntervalMatrix>& blocks, const SdpModel& model,
                             const ResidualBasis& basis) {
  const mpfr_prec_t prec = Interval::default_precision();
  std::map<int, Interval> pi_cache;
  ResidualBound rb;
  rb.r_inf = Interval(0L, prec);
  for (int k : basis.identity_rows) {
    rb.coefficients.push_back(functional(model.constraints[k].entries, blocks, pi_cache, prec));
    rb.r_inf = imax(rb.r_inf, rb.coefficients.back().abs());
  }
  rb.expansion_bound = Interval(basis.ahat_inverse_norm, prec) * rb.r_inf;
  for (std::size_t b = 0; b < model.blocks.size(); ++b) {
    if (model.blocks[b].role != BlockRole::S2) continue;
    // |T|_F^2 = sum of c^2 over diagonal entries plus c^2 / 2 over off-diagonal ones.
    mpq_class w = 0;
    for (const auto& e : basis.entries)
      if (e.block == static_cast<int>(b)) w += e.i == e.j ? mpq_class(1) : mpq_class(1, 2);
    rb.s2_blocks.push_back(static_cast<int>(b));
    rb.t_norm.push_back(rb.expansion_bound * Interval(w, prec).sqrt());
  }
  return rb;
}

CertifiedSolution certify_repaired(std::vector<IntervalMatrix> blocks, std::vector<Real> lambdas,
                                   const SdpModel& model, const ResidualBasis& basis, const Solid& solid,
                                   const mpq_class& alpha, const CertifyOptions& opts) {
  IntervalPrecisionScope iscope(opts.precision);
  const mpfr_prec_t prec = opts.precision;
  if (blocks.size() != model.blocks.size() || lambdas.size() != model.blocks.size())
    throw Error("certify: block count does not match the model");
  const auto& irr = irreps();
  CertifiedSolution c;
  c.solid = model.solid_name;
  c.d = model.d;
  c.alpha = alpha;
  c.ahat_inverse_norm = basis.ahat_inverse_norm;

  std::map<int, Interval> pi_cache;
  c.normalization = functional(model.normalization().entries, blocks, pi_cache, prec);
  if (!c.normalization.certainly_positive())
    throw CertificationFailed("normalization (a): g(0) = [" + c.normalization.lower_str(12) + ", " +
                              c.normalization.upper_str(12) + "] is not certainly positive");

  c.residual = residual_bound(blocks, model, basis);
  for (std::size_t k = 0; k < c.residual.s2_blocks.size(); ++k) {
    const int b = c.residual.s2_blocks[k];
    if (model.blocks[b].size() == 0) continue;
    const Interval lam = to_interval(lambdas[b], prec);
    if (!c.residual.t_norm[k].certainly_le(lam))
      throw CertificationFailed("S2 " + irr[model.blocks[b].irrep].name + ": coefficient norm bound " +
                                c.residual.t_norm[k].upper_str(6) + " exceeds eigenvalue bound " +
                                lam.lower_str(6));
  }

  // Rescale by a single number sigma >= 1 / g(0) so that (a) holds.
  const Interval inv = Interval(1L, prec) / c.normalization;
  c.scale = Interval(inv.upper(), inv.upper(), prec);
  c.objective = functional(model.objective, blocks, pi_cache, prec) * c.scale;
  c.volume = solid.volume_interval(prec);
  c.bound = Interval(alpha, prec).pow(3) * c.objective * c.volume;
  c.blocks = std::move(blocks);
  c.lambdas = std::move(lambdas);
  return c;
}

CertifiedSolution certify(const SolutionBundle& sol, const SdpModel& model, const Solid& solid,
                          const mpq_class& alpha, const CertifyOptions& opts) {
  PrecisionScope scope(sol.precision);
  IntervalPrecisionScope iscope(opts.precision);
  if (sol.blocks.size() < model.blocks.size()) throw Error("certify: solution has too few blocks");
  std::vector<IntervalMatrix> blocks;
  std::vector<Real> lambdas;
  const auto& irr = irreps();
  for (std::size_t b = 0; b < model.blocks.size(); ++b) {
    try {
      RepairedMatrix r = repair_psd(sol.blocks[b], opts.lambda_floor);
      blocks.push_back(std::move(r.tilde));
      lambdas.push_back(r.lambda);
    } catch (const NotRepairable& e) {
      throw NotRepairable(std::string(role_name(model.blocks[b].role)) + " " + irr[model.blocks[b].irrep].name +
                          ": " + e.what());
    }
  }
  return certify_repaired(std::move(blocks), std::move(lambdas), model, residual_basis(model), solid, alpha, opts);
}

SolutionBundle absorb_residual(const SolutionBundle& sol, const SdpModel& model, const ResidualBasis& basis) {
  PrecisionScope scope(sol.precision);
  SolutionBundle out = sol;
  const std::size_t m = basis.identity_rows.size();
  std::vector<Real> r(m, Real(0));
  for (std::size_t k = 0; k < m; ++k)
    for (const auto& e : model.constraints[basis.identity_rows[k]].entries) {
      Real v = to_real(e.value) * sol.blocks[e.block](e.i, e.j);
      r[k] += e.i == e.j ? v : Real(2 * v);
    }
  for (std::size_t c = 0; c < m; ++c) {
    Real t = 0;
    for (std::size_t k = 0; k < m; ++k) t += to_real(basis.ahat_inverse(c, k)) * r[k];
    const auto& e = basis.entries[c];
    auto& blk = out.blocks[e.block];
    if (e.i == e.j) {
      blk(e.i, e.i) -= t;
    } else {
      blk(e.i, e.j) -= t / 2;
      blk(e.j, e.i) -= t / 2;
    }
  }
  return out;
}

std::string certificate_to_json(const CertifiedSolution& c) {
  nlohmann::json j;
  j["solid"] = c.solid;
  j["d"] = c.d;
  j["alpha"] = c.alpha.get_str();
  j["bound"] = interval_json(c.bound);
  j["objective"] = interval_json(c.objective);
  j["normalization"] = interval_json(c.normalization);
  j["scale"] = interval_json(c.scale);
  j["volume"] = interval_json(c.volume);
  j["ahat_inverse_norm"] = c.ahat_inverse_norm.get_str();
  j["residual_inf"] = interval_json(c.residual.r_inf);
  j["expansion_bound"] = interval_json(c.residual.expansion_bound);
  nlohmann::json s2 = nlohmann::json::array();
  for (std::size_t k = 0; k < c.residual.s2_blocks.size(); ++k) {
    const int b = c.residual.s2_blocks[k];
    s2.push_back({{"block", b}, {"t_norm", interval_json(c.residual.t_norm[k])}, {"lambda", real_str(c.lambdas[b])}});
  }
  j["s2_checks"] = s2;
  nlohmann::json blocks = nlohmann::json::array();
  for (std::size_t b = 0; b < c.blocks.size(); ++b) {
    nlohmann::json m = nlohmann::json::array();
    for (int r = 0; r < c.blocks[b].n; ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int col = 0; col < c.blocks[b].n; ++col) row.push_back(interval_json(c.blocks[b](r, col)));
      m.push_back(row);
    }
    blocks.push_back({{"index", b}, {"lambda", real_str(c.lambdas[b])}, {"matrix", m}});
  }
  j["blocks"] = blocks;
  return j.dump(1) + "\n";
}

std::string certificate_report(const CertifiedSolution& c) {
  std::ostringstream out;
  out << "body                 upper bound          factor alpha\n";
  std::string body = c.solid;
  if (body.size() < 20) body.resize(20, ' ');
  out << body << " " << c.bound.upper_str(12) << "       " << c.alpha.get_d() << "\n";
  out << "bound interval [" << c.bound.lower_str(20) << ", " << c.bound.upper_str(20) << "]\n";
  return out.str();
}

}  // namespace packbound
