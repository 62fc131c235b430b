#include "packbound/numeric.hpp"

#include "packbound/errors.hpp"

#include <cmath>

namespace packbound {

unsigned bits_to_digits10(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

PrecisionScope::PrecisionScope(unsigned bits) : saved_digits_(Real::default_precision()) {
  Real::default_precision(bits_to_digits10(bits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_digits_); }

Real to_real(const mpq_class& q) {
  Real r;
  mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

Real real_pi() {
  Real r;
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

Real to_real(const Coefficient& c) {
  Real s = 0;
  if (c.is_zero()) return s;
  Real pi = real_pi();
  for (const auto& [e, q] : c.terms()) s += to_real(q) * pow(pi, e);
  return s;
}

std::string real_str(const Real& x) {
  if (x == 0) return "0";
  mpfr_exp_t exp = 0;
  const std::size_t digits = static_cast<std::size_t>(Real::default_precision()) + 2;
  char* s = mpfr_get_str(nullptr, &exp, 10, digits, x.backend().data(), MPFR_RNDN);
  std::string m(s);
  mpfr_free_str(s);
  std::string sign;
  if (m[0] == '-') {
    sign = "-";
    m = m.substr(1);
  }
  while (m.size() > 1 && m.back() == '0') m.pop_back();
  return sign + "0." + m + "e" + std::to_string(exp);
}

Real parse_real(const std::string& s) {
  Real r;
  if (mpfr_set_str(r.backend().data(), s.c_str(), 10, MPFR_RNDN) != 0) throw IoFailure("bad number: " + s);
  return r;
}

int NumericModel::lp_block() const {
  for (std::size_t b = 0; b < blocks.size(); ++b)
    if (blocks[b].diagonal) return static_cast<int>(b);
  return -1;
}

NumericModel to_numeric(const SdpModel& model, unsigned precision) {
  PrecisionScope scope(precision);
  NumericModel n;
  n.precision = precision;
  const auto& irr = irreps();
  for (const auto& b : model.blocks)
    n.blocks.push_back({b.role, b.irrep, static_cast<int>(b.size()), false,
                        std::string(role_name(b.role)) + " " + irr[b.irrep].name});
  int nslack = 0;
  for (const auto& c : model.constraints)
    if (c.kind != ConstraintKind::Identity) ++nslack;
  const int lp = static_cast<int>(n.blocks.size());
  if (nslack > 0) n.blocks.push_back({BlockRole::R, -1, nslack, true, "LP slacks"});

  auto convert = [](const std::vector<SparseEntry>& es) {
    std::vector<NumericEntry> out;
    out.reserve(es.size());
    for (const auto& e : es) out.push_back({e.block, e.i, e.j, to_real(e.value)});
    return out;
  };
  n.objective = convert(model.objective);
  int slack = 0;
  for (const auto& c : model.constraints) {
    auto row = convert(c.entries);
    switch (c.kind) {
      case ConstraintKind::Normalization:
        row.push_back({lp, slack, slack, Real(-1)});
        ++slack;
        n.rhs.push_back(Real(1));
        n.row_labels.push_back("normalization");
        break;
      case ConstraintKind::Identity:
        n.rhs.push_back(Real(0));
        n.row_labels.push_back("identity " + std::to_string(c.monomial[0]) + " " + std::to_string(c.monomial[1]) +
                               " " + std::to_string(c.monomial[2]));
        break;
      case ConstraintKind::Sample:
        row.push_back({lp, slack, slack, Real(1)});
        ++slack;
        n.rhs.push_back(Real(0));
        n.row_labels.push_back("sample " + c.point[0].get_str() + " " + c.point[1].get_str() + " " +
                               c.point[2].get_str());
        break;
    }
    n.rows.push_back(std::move(row));
  }
  return n;
}

bool operator==(const NumericEntry& a, const NumericEntry& b) {
  return a.block == b.block && a.i == b.i && a.j == b.j && a.value == b.value;
}

bool operator==(const NumericBlock& a, const NumericBlock& b) {
  return a.size == b.size && a.diagonal == b.diagonal && a.role == b.role && a.irrep == b.irrep;
}

bool operator==(const NumericModel& a, const NumericModel& b) {
  return a.blocks == b.blocks && a.objective == b.objective && a.rows == b.rows && a.rhs == b.rhs;
}

}  // namespace packbound
