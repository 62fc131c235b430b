#include "packbound/b3.hpp"
#include "packbound/polynomial.hpp"
#include "oracles.hpp"
#include "reference_data.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace packbound;

namespace {

ThetaPolynomial det3(const std::vector<std::vector<ThetaPolynomial>>& q) {
  return q[0][0] * (q[1][1] * q[2][2] - q[1][2] * q[2][1]) - q[0][1] * (q[1][0] * q[2][2] - q[1][2] * q[2][0]) +
         q[0][2] * (q[1][0] * q[2][1] - q[1][1] * q[2][0]);
}

std::vector<std::vector<ThetaPolynomial>> full_matrix(const std::vector<std::vector<reference::ThetaTerm>>& upper,
                                                      int n) {
  std::vector<std::vector<ThetaPolynomial>> q(n, std::vector<ThetaPolynomial>(n));
  std::size_t k = 0;
  for (int r = 0; r < n; ++r)
    for (int s = r; s < n; ++s, ++k) q[r][s] = q[s][r] = reference::to_theta(upper[k]);
  return q;
}

}  // namespace

TEST(Group, HasFortyEightElementsInTenClasses) {
  const auto& g = group();
  ASSERT_EQ(g.size(), 48u);
  std::array<int, kNumClasses> counts{};
  for (const auto& e : g) ++counts[static_cast<int>(e.cls)];
  for (int c = 0; c < kNumClasses; ++c) EXPECT_EQ(counts[c], kClassSizes[c]) << kClassNames[c];
  std::set<IntMatrix3> distinct;
  for (const auto& e : g) distinct.insert(e.matrix);
  EXPECT_EQ(distinct.size(), 48u);
}

TEST(Group, InverseTableIsConsistent) {
  const auto& g = group();
  const auto& inv = inverse_table();
  const IntMatrix3 id{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_EQ(multiply(g[k].matrix, g[inv[k]].matrix), id);
}

TEST(Characters, MatchReferenceTableExactly) {
  const auto& irr = irreps();
  ASSERT_EQ(irr.size(), 10u);
  for (std::size_t r = 0; r < irr.size(); ++r) {
    EXPECT_EQ(irr[r].name, reference::irrep_names()[r]);
    for (int c = 0; c < kNumClasses; ++c) EXPECT_EQ(irr[r].character[c], reference::characters()[r][c]);
  }
}

TEST(Characters, AreOrthonormal) {
  const auto& irr = irreps();
  for (const auto& a : irr)
    for (const auto& b : irr) {
      long s = 0;
      for (int c = 0; c < kNumClasses; ++c) s += kClassSizes[c] * a.character[c] * b.character[c];
      EXPECT_EQ(s, a.name == b.name ? 48 : 0);
    }
}

TEST(Series, MolienCoefficients) {
  EXPECT_EQ(molien_coefficients(Series::Invariant, 18), reference::kMolien);
  EXPECT_EQ(molien_coefficients(Series::Coinvariant, 9), reference::kCoinvariant);
  EXPECT_EQ(molien_coefficients(Series::HarmonicInvariant, 18), reference::kHarmonic);
}

TEST(Series, InvariantCountMatchesThetaMonomials) {
  // dim of degree-n invariants = #{(i, j, k) : 2i + 4j + 6k = n}
  auto m = molien_coefficients(Series::Invariant, 30);
  for (int n = 0; n <= 30; ++n) {
    long count = 0;
    for (int k = 0; 6 * k <= n; ++k)
      for (int j = 0; 6 * k + 4 * j <= n; ++j) count += (n - 6 * k - 4 * j) % 2 == 0;
    EXPECT_EQ(m[n], count) << n;
  }
}

TEST(Coinvariants, RowsHaveExpectedShape) {
  const auto& data = isotypic_data();
  ASSERT_EQ(data.size(), 10u);
  int total = 0;
  for (const auto& iso : data) {
    EXPECT_EQ(static_cast<int>(iso.rows.size()), iso.dim()) << iso.irrep.name;
    for (const auto& row : iso.rows) {
      EXPECT_EQ(static_cast<int>(row.phi.size()), iso.dim());
      for (const auto& p : row.phi) {
        EXPECT_TRUE(p.is_homogeneous());
        EXPECT_EQ(p.degree(), row.degree);
      }
    }
    total += iso.dim() * iso.dim();
  }
  EXPECT_EQ(total, 48);
}

TEST(Coinvariants, RowsTransformByTheSameMatrices) {
  const auto& g = group();
  for (const auto& iso : isotypic_data()) {
    for (std::size_t k = 0; k < g.size(); k += 7) {
      const auto& rep = iso.rep[k];
      for (const auto& row : iso.rows)
        for (int i = 0; i < iso.dim(); ++i) {
          ExactPolynomial lhs = act(g[k], row.phi[i]);
          ExactPolynomial rhs;
          for (int j = 0; j < iso.dim(); ++j) rhs += row.phi[j] * rep(j, i);
          EXPECT_EQ(lhs, rhs) << iso.irrep.name;
        }
    }
  }
}

TEST(QMatrices, AreSymmetricAndInvariant) {
  for (const auto& iso : isotypic_data()) {
    const auto& q = iso.qpi;
    for (std::size_t r = 0; r < q.size(); ++r)
      for (std::size_t s = 0; s < q.size(); ++s) {
        EXPECT_EQ(q[r][s], q[s][r]);
        EXPECT_TRUE(expand_theta(q[r][s]).is_b3_invariant());
      }
  }
}

TEST(QMatrices, EntryMatchesWeightedSumOfProducts) {
  for (const auto& iso : isotypic_data()) {
    for (std::size_t r = 0; r < iso.rows.size(); ++r)
      for (std::size_t s = r; s < iso.rows.size(); ++s) {
        ExactPolynomial sum;
        for (int i = 0; i < iso.dim(); ++i) sum += iso.rows[r].phi[i] * iso.rows[s].phi[i] * iso.weights[i];
        EXPECT_EQ(expand_theta(iso.qpi[r][s]), sum) << iso.irrep.name;
      }
  }
}

TEST(QMatrices, MatchReferenceUpToPositiveScalar) {
  const auto& ref = reference::qpi();
  int matched = 0;
  for (const auto& iso : isotypic_data()) {
    auto c = oracle::common_scalar(iso.qpi, ref.at(iso.irrep.name));
    if (iso.irrep.name == "T1g" || iso.irrep.name == "T2u") {
      EXPECT_FALSE(c.has_value()) << iso.irrep.name;
      continue;
    }
    ASSERT_TRUE(c.has_value()) << iso.irrep.name;
    EXPECT_GT(*c, 0) << iso.irrep.name;
    ++matched;
  }
  EXPECT_EQ(matched, 8);
}

// The two reference matrices that differ from ours have a third row that lies in the span
// of the first two over the invariant ring, so their determinant vanishes identically and
// they cannot come from a basis of the coinvariant rows.
TEST(QMatrices, DifferingReferenceMatricesAreSingular) {
  const auto& ref = reference::qpi();
  const auto& data = isotypic_data();
  for (const char* name : {"T1g", "T2u"}) {
    EXPECT_TRUE(det3(full_matrix(ref.at(name), 3)).is_zero()) << name;
    EXPECT_FALSE(det3(data[irrep_index(name)].qpi).is_zero()) << name;
  }
}
