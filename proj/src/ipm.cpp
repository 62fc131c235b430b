#include "packbound/ipm.hpp"

#include "packbound/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>

namespace packbound {

namespace {

void fma_into(Real& acc, const Real& a, const Real& b) {
  mpfr_fma(acc.backend().data(), a.backend().data(), b.backend().data(), acc.backend().data(), MPFR_RNDN);
}

// tr(A B) for symmetric A.
Real trace_product(const RealMatrix& a, const RealMatrix& b) {
  Real s = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) fma_into(s, a(i, j), b(j, i));
  return s;
}

Real max_abs(const RealMatrix& a) {
  Real s = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s = std::max<Real>(s, abs(a.data()[i]));
  return s;
}

struct Layout {
  std::vector<int> offset;
  int count = 0;
  const NumericModel* model = nullptr;

  explicit Layout(const NumericModel& m) : model(&m) {
    for (const auto& b : m.blocks) {
      offset.push_back(count);
      count += b.diagonal ? b.size : b.size * (b.size + 1) / 2;
    }
  }
  int var(int b, int i, int j) const {
    const auto& blk = model->blocks[b];
    if (blk.diagonal) return offset[b] + i;
    if (i > j) std::swap(i, j);
    const int n = blk.size;
    return offset[b] + i * n - i * (i - 1) / 2 + (j - i);
  }
};

}  // namespace

PrimalForm eliminate(const NumericModel& model) {
  PrecisionScope scope(model.precision);
  Layout lay(model);
  const int nv = lay.count;
  const int lp = model.lp_block();
  auto is_lp = [&](int v) { return lp >= 0 && v >= lay.offset[lp] && v < lay.offset[lp] + model.blocks[lp].size; };

  std::vector<std::map<int, Real>> rows(model.rows.size());
  for (std::size_t k = 0; k < model.rows.size(); ++k)
    for (const auto& e : model.rows[k]) {
      Real v = e.i == e.j ? e.value : Real(2 * e.value);
      rows[k][lay.var(e.block, e.i, e.j)] += v;
    }
  std::vector<Real> obj(nv, Real(0));
  for (const auto& e : model.objective) obj[lay.var(e.block, e.i, e.j)] += e.i == e.j ? e.value : Real(2 * e.value);

  // Slack variables that occur in a single row are solved for directly.
  std::vector<int> occurrences(nv, 0);
  for (const auto& r : rows)
    for (const auto& [v, c] : r)
      if (c != 0) ++occurrences[v];
  std::vector<int> row_pivot(rows.size(), -1);
  std::vector<char> pivoted(nv, 0);
  for (std::size_t k = 0; k < rows.size(); ++k)
    for (const auto& [v, c] : rows[k])
      if (c != 0 && is_lp(v) && occurrences[v] == 1) {
        row_pivot[k] = v;
        pivoted[v] = 1;
        break;
      }

  // Remaining rows: dense elimination with complete pivoting.
  std::vector<int> cand;
  std::vector<int> cand_pos(nv, -1);
  for (int v = 0; v < nv; ++v)
    if (!pivoted[v]) {
      cand_pos[v] = static_cast<int>(cand.size());
      cand.push_back(v);
    }
  std::vector<std::size_t> rest;
  for (std::size_t k = 0; k < rows.size(); ++k)
    if (row_pivot[k] < 0) rest.push_back(k);
  const int r2 = static_cast<int>(rest.size()), nc = static_cast<int>(cand.size());
  RealMatrix a = RealMatrix::Zero(r2, nc);
  RealVector rhs(r2);
  for (int i = 0; i < r2; ++i) {
    for (const auto& [v, c] : rows[rest[i]]) a(i, cand_pos[v]) = c;
    rhs(i) = model.rhs[rest[i]];
  }
  const Real scale = std::max<Real>(Real(1), max_abs(a));
  const Real thr = scale * pow(Real(2), -static_cast<int>(model.precision * 6 / 10));
  std::vector<int> pivot_col;
  std::vector<char> is_pivot_col(nc, 0);
  int rank = 0;
  for (; rank < r2; ++rank) {
    Real best = 0;
    int bi = -1, bj = -1;
    for (int i = rank; i < r2; ++i)
      for (int j = 0; j < nc; ++j)
        if (!is_pivot_col[j] && abs(a(i, j)) > best) {
          best = abs(a(i, j));
          bi = i;
          bj = j;
        }
    if (bi < 0 || best <= thr) break;
    a.row(rank).swap(a.row(bi));
    std::swap(rhs(rank), rhs(bi));
    Real p = a(rank, bj);
    a.row(rank) /= p;
    rhs(rank) /= p;
    for (int i = 0; i < r2; ++i) {
      if (i == rank || a(i, bj) == 0) continue;
      Real f = a(i, bj);
      a.row(i) -= f * a.row(rank);
      rhs(i) -= f * rhs(rank);
    }
    pivot_col.push_back(bj);
    is_pivot_col[bj] = 1;
  }
  for (int i = rank; i < r2; ++i)
    if (abs(rhs(i)) > thr) throw Infeasible("equality constraints are inconsistent");

  PrimalForm pf;
  pf.eliminated_rows = static_cast<int>(rows.size()) - r2;
  pf.dependent_rows = r2 - rank;
  std::vector<int> free_index(nc, -1);
  for (int j = 0; j < nc; ++j)
    if (!is_pivot_col[j]) free_index[j] = pf.m++;
  const int m = pf.m;

  // Every variable as an affine function of z: column 0 is the constant.
  RealMatrix expr = RealMatrix::Zero(nv, m + 1);
  for (int j = 0; j < nc; ++j)
    if (free_index[j] >= 0) expr(cand[j], 1 + free_index[j]) = 1;
  for (int k = 0; k < rank; ++k) {
    const int v = cand[pivot_col[k]];
    expr(v, 0) = rhs(k);
    for (int j = 0; j < nc; ++j)
      if (free_index[j] >= 0 && a(k, j) != 0) expr(v, 1 + free_index[j]) = -a(k, j);
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const int v = row_pivot[k];
    if (v < 0) continue;
    const Real av = rows[k].at(v);
    RealVector e = RealVector::Zero(m + 1);
    e(0) = model.rhs[k];
    for (const auto& [u, c] : rows[k])
      if (u != v && c != 0) e -= c * expr.row(u).transpose();
    expr.row(v) = (e / av).transpose();
  }

  for (std::size_t b = 0; b < model.blocks.size(); ++b) {
    const auto& blk = model.blocks[b];
    if (blk.diagonal) continue;
    const int n = blk.size;
    pf.dense_blocks.push_back(static_cast<int>(b));
    RealMatrix f0(n, n);
    std::vector<RealMatrix> fi(m, RealMatrix::Zero(n, n));
    for (int p = 0; p < n; ++p)
      for (int q = p; q < n; ++q) {
        const int v = lay.var(static_cast<int>(b), p, q);
        f0(p, q) = f0(q, p) = -expr(v, 0);
        for (int i = 0; i < m; ++i)
          if (expr(v, 1 + i) != 0) fi[i](p, q) = fi[i](q, p) = expr(v, 1 + i);
      }
    pf.f0.push_back(std::move(f0));
    pf.f.push_back(std::move(fi));
  }
  if (lp >= 0) {
    const int nlp = model.blocks[lp].size;
    pf.lp_block = lp;
    pf.g = RealMatrix(nlp, m);
    pf.g0 = RealVector(nlp);
    for (int k = 0; k < nlp; ++k) {
      const int v = lay.offset[lp] + k;
      pf.g0(k) = -expr(v, 0);
      for (int i = 0; i < m; ++i) pf.g(k, i) = expr(v, 1 + i);
    }
  } else {
    pf.g = RealMatrix(0, m);
    pf.g0 = RealVector(0);
  }
  pf.c = RealVector::Zero(m);
  pf.c0 = 0;
  for (int v = 0; v < nv; ++v) {
    if (obj[v] == 0) continue;
    pf.c0 += obj[v] * expr(v, 0);
    for (int i = 0; i < m; ++i) pf.c(i) += obj[v] * expr(v, 1 + i);
  }
  return pf;
}

std::vector<RealMatrix> recover_blocks(const PrimalForm& pf, const NumericModel& model, const RealVector& z) {
  PrecisionScope scope(model.precision);
  std::vector<RealMatrix> out(model.blocks.size());
  for (std::size_t d = 0; d < pf.dense_blocks.size(); ++d) {
    RealMatrix x = -pf.f0[d];
    for (int i = 0; i < pf.m; ++i)
      if (z(i) != 0) x += z(i) * pf.f[d][i];
    out[pf.dense_blocks[d]] = x;
  }
  if (pf.lp_block >= 0) out[pf.lp_block] = pf.g * z - pf.g0;
  return out;
}

namespace {

// Largest step a with X + a dX positive semidefinite (infinity if unbounded).
Real max_step(const RealMatrix& x, const RealMatrix& dx) {
  Eigen::LLT<RealMatrix> llt(x);
  RealMatrix l = llt.matrixL();
  RealMatrix li = l.triangularView<Eigen::Lower>().solve(RealMatrix::Identity(x.rows(), x.cols()));
  RealMatrix mm = li * dx * li.transpose();
  mm = (mm + mm.transpose()) / 2;
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(mm, Eigen::EigenvaluesOnly);
  Real lmin = es.eigenvalues().minCoeff();
  if (lmin >= 0) return Real(std::numeric_limits<double>::max());
  return -1 / lmin;
}

Real max_step_lp(const RealVector& x, const RealVector& dx) {
  Real best = std::numeric_limits<double>::max();
  for (Eigen::Index k = 0; k < x.size(); ++k)
    if (dx(k) < 0) best = std::min<Real>(best, -x(k) / dx(k));
  return best;
}

}  // namespace

IpmResult run_ipm(const PrimalForm& pf, const IpmOptions& o) {
  const int m = pf.m;
  const int nd = static_cast<int>(pf.f0.size());
  const int nlp = static_cast<int>(pf.g0.size());
  const Real lambda = o.lambda0;
  const Real tol = o.tol;
  const Real gamma = o.gamma;

  IpmResult res;
  RealVector z = RealVector::Zero(m);
  std::vector<RealMatrix> X(nd), Y(nd);
  int ntot = nlp;
  for (int b = 0; b < nd; ++b) {
    const auto n = pf.f0[b].rows();
    X[b] = lambda * RealMatrix::Identity(n, n);
    Y[b] = lambda * RealMatrix::Identity(n, n);
    ntot += static_cast<int>(n);
  }
  RealVector xl = RealVector::Constant(nlp, lambda), yl = RealVector::Constant(nlp, lambda);
  Real f0max = 0, cmax = max_abs(pf.c);
  for (const auto& f : pf.f0) f0max = std::max(f0max, max_abs(f));
  f0max = std::max(f0max, max_abs(pf.g0));

  std::vector<RealMatrix> P(nd);
  RealVector Pl(nlp), dres(m);
  int stalls = 0;
  for (int it = 0;; ++it) {
    // Residuals and objectives.
    Real pinf = 0;
    for (int b = 0; b < nd; ++b) {
      P[b] = -pf.f0[b] - X[b];
      for (int i = 0; i < m; ++i)
        if (z(i) != 0) P[b] += z(i) * pf.f[b][i];
      pinf = std::max(pinf, max_abs(P[b]));
    }
    if (nlp > 0) {
      Pl = pf.g * z - pf.g0 - xl;
      pinf = std::max(pinf, max_abs(Pl));
    }
    for (int i = 0; i < m; ++i) {
      Real s = pf.c(i);
      for (int b = 0; b < nd; ++b) s -= trace_product(pf.f[b][i], Y[b]);
      for (int k = 0; k < nlp; ++k)
        if (pf.g(k, i) != 0) s -= pf.g(k, i) * yl(k);
      dres(i) = s;
    }
    Real dinf = max_abs(dres);
    Real pobj = pf.c.dot(z) + pf.c0;
    Real dobj = pf.c0;
    for (int b = 0; b < nd; ++b) dobj += trace_product(pf.f0[b], Y[b]);
    if (nlp > 0) dobj += pf.g0.dot(yl);
    Real xy = 0;
    for (int b = 0; b < nd; ++b) xy += trace_product(X[b], Y[b]);
    if (nlp > 0) xy += xl.dot(yl);
    const Real mu = xy / ntot;
    const Real rp = pinf / (1 + f0max), rd = dinf / (1 + cmax);
    const Real rg = abs(pobj - dobj) / std::max<Real>(Real(1), (abs(pobj) + abs(dobj)) / 2);

    res.primal_objective = pobj;
    res.dual_objective = dobj;
    res.primal_infeasibility = rp;
    res.dual_infeasibility = rd;
    res.iterations = it;
    if (o.verbose)
      std::cerr << "ipm " << it << " pobj " << static_cast<double>(pobj) << " dobj " << static_cast<double>(dobj)
                << " pinf " << static_cast<double>(rp) << " dinf " << static_cast<double>(rd) << " mu "
                << static_cast<double>(mu) << "\n";
    if (rp <= tol && rd <= tol && rg <= tol && mu <= tol) {
      res.status = "optimal";
      break;
    }
    Real big = 0;
    for (int b = 0; b < nd; ++b) big = std::max({big, max_abs(X[b]), max_abs(Y[b])});
    if (nlp > 0) big = std::max({big, max_abs(xl), max_abs(yl)});
    if (big > Real("1e40")) {
      res.status = "infeasible";
      break;
    }
    if (it >= o.max_iter || stalls >= 8) {
      res.status = "no-progress";
      break;
    }

    // Schur complement.
    std::vector<RealMatrix> Xinv(nd);
    for (int b = 0; b < nd; ++b) {
      Eigen::LLT<RealMatrix> llt(X[b]);
      Xinv[b] = llt.solve(RealMatrix::Identity(X[b].rows(), X[b].cols()));
    }
    RealMatrix B = RealMatrix::Zero(m, m);
    for (int b = 0; b < nd; ++b) {
      for (int j = 0; j < m; ++j) {
        if (max_abs(pf.f[b][j]) == 0) continue;
        RealMatrix T = Xinv[b] * pf.f[b][j] * Y[b];
        for (int i = 0; i <= j; ++i) B(i, j) += trace_product(pf.f[b][i], T);
      }
    }
    if (nlp > 0) {
      RealVector w = yl.cwiseQuotient(xl);
      Real gi;
      for (int k = 0; k < nlp; ++k)
        for (int i = 0; i < m; ++i) {
          if (pf.g(k, i) == 0) continue;
          gi = pf.g(k, i) * w(k);
          for (int j = i; j < m; ++j) fma_into(B(i, j), gi, pf.g(k, j));
        }
    }
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < i; ++j) B(i, j) = B(j, i);
    Eigen::LLT<RealMatrix> bllt(B);
    const bool llt_ok = bllt.info() == Eigen::Success;
    Eigen::LDLT<RealMatrix> bldlt;
    if (!llt_ok) bldlt.compute(B);

    struct Dir {
      RealVector dz;
      std::vector<RealMatrix> dX, dY;
      RealVector dxl, dyl;
    };
    auto direction = [&](const std::vector<RealMatrix>& Rc, const RealVector& rc) {
      Dir d;
      RealVector rhs = -dres;
      std::vector<RealMatrix> W(nd);
      for (int b = 0; b < nd; ++b) W[b] = Xinv[b] * (Rc[b] - P[b] * Y[b]);
      for (int i = 0; i < m; ++i)
        for (int b = 0; b < nd; ++b) rhs(i) += trace_product(pf.f[b][i], W[b]);
      if (nlp > 0) {
        RealVector u = (rc - Pl.cwiseProduct(yl)).cwiseQuotient(xl);
        rhs += pf.g.transpose() * u;
      }
      d.dz = llt_ok ? RealVector(bllt.solve(rhs)) : RealVector(bldlt.solve(rhs));
      d.dX.resize(nd);
      d.dY.resize(nd);
      for (int b = 0; b < nd; ++b) {
        d.dX[b] = P[b];
        for (int j = 0; j < m; ++j)
          if (d.dz(j) != 0) d.dX[b] += d.dz(j) * pf.f[b][j];
        RealMatrix dy = Xinv[b] * (Rc[b] - d.dX[b] * Y[b]);
        d.dY[b] = (dy + dy.transpose()) / 2;
      }
      if (nlp > 0) {
        d.dxl = pf.g * d.dz + Pl;
        d.dyl = (rc - d.dxl.cwiseProduct(yl)).cwiseQuotient(xl);
      }
      return d;
    };
    auto steps = [&](const Dir& d) {
      Real ap = std::numeric_limits<double>::max(), ad = ap;
      for (int b = 0; b < nd; ++b) {
        ap = std::min(ap, max_step(X[b], d.dX[b]));
        ad = std::min(ad, max_step(Y[b], d.dY[b]));
      }
      if (nlp > 0) {
        ap = std::min(ap, max_step_lp(xl, d.dxl));
        ad = std::min(ad, max_step_lp(yl, d.dyl));
      }
      return std::pair<Real, Real>(ap, ad);
    };

    // Predictor.
    std::vector<RealMatrix> Rc(nd);
    for (int b = 0; b < nd; ++b) Rc[b] = -X[b] * Y[b];
    RealVector rc = nlp > 0 ? RealVector(-xl.cwiseProduct(yl)) : RealVector(0);
    Dir aff = direction(Rc, rc);
    auto [apa, ada] = steps(aff);
    apa = std::min<Real>(Real(1), apa);
    ada = std::min<Real>(Real(1), ada);
    Real xy_aff = 0;
    for (int b = 0; b < nd; ++b)
      xy_aff += trace_product(RealMatrix(X[b] + apa * aff.dX[b]), RealMatrix(Y[b] + ada * aff.dY[b]));
    if (nlp > 0) xy_aff += (xl + apa * aff.dxl).dot(yl + ada * aff.dyl);
    Real sigma = pow(std::max<Real>(Real(0), xy_aff) / xy, 3);
    sigma = std::min<Real>(Real(1), sigma);

    // Corrector.
    for (int b = 0; b < nd; ++b)
      Rc[b] = sigma * mu * RealMatrix::Identity(X[b].rows(), X[b].cols()) - X[b] * Y[b] - aff.dX[b] * aff.dY[b];
    if (nlp > 0)
      rc = RealVector::Constant(nlp, sigma * mu) - xl.cwiseProduct(yl) - aff.dxl.cwiseProduct(aff.dyl);
    Dir dir = direction(Rc, rc);
    auto [ap, ad] = steps(dir);
    ap = std::min<Real>(Real(1), gamma * ap);
    ad = std::min<Real>(Real(1), gamma * ad);
    stalls = (ap < Real("1e-10") && ad < Real("1e-10")) ? stalls + 1 : 0;

    z += ap * dir.dz;
    for (int b = 0; b < nd; ++b) {
      X[b] += ap * dir.dX[b];
      Y[b] += ad * dir.dY[b];
      X[b] = (X[b] + X[b].transpose()) / 2;
      Y[b] = (Y[b] + Y[b].transpose()) / 2;
    }
    if (nlp > 0) {
      xl += ap * dir.dxl;
      yl += ad * dir.dyl;
    }
  }
  res.z = z;
  res.x = X;
  res.y = Y;
  res.xlp = xl;
  res.ylp = yl;
  return res;
}

}  // namespace packbound
