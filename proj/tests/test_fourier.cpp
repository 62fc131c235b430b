#include "packbound/errors.hpp"
#include "packbound/fourier.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace packbound;

namespace {

const double kPi = oracle::kPi;

ThetaPolynomial th(int i) { return ThetaPolynomial::theta(i); }
ExactPolynomial x(int i) { return ExactPolynomial::variable(i); }

std::mt19937_64 rng(77);

ThetaPolynomial random_invariant(int max_weight) { return oracle::random_invariant(rng, max_weight); }
using oracle::transform_by_quadrature;

}  // namespace

TEST(Laplacian, Examples) {
  EXPECT_EQ(laplacian(expand_theta(th(1))), ExactPolynomial(Coefficient(6)));
  EXPECT_TRUE(laplacian(x(0) * x(1) * x(2)).is_zero());
  EXPECT_EQ(laplacian(expand_theta(th(2))), expand_theta(th(1)) * mpq_class(12));
}

TEST(Harmonic, DecomposeTheta1) {
  auto comps = harmonic_decompose(th(1), 2);
  ASSERT_EQ(comps.size(), 1u);
  EXPECT_EQ(comps[0].r, 1);
  EXPECT_EQ(comps[0].k, 0);
  EXPECT_EQ(comps[0].h, ExactPolynomial(Coefficient(1)));
}

TEST(Harmonic, DecomposeTheta2) {
  auto comps = harmonic_decompose(th(2), 4);
  ExactPolynomial h4 = expand_theta(th(2) - mpq_class(3, 5) * th(1) * th(1));
  bool seen4 = false, seen0 = false;
  for (const auto& c : comps) {
    if (c.h.is_zero()) continue;
    if (c.k == 4) {
      EXPECT_EQ(c.r, 0);
      EXPECT_EQ(c.h, h4);
      seen4 = true;
    } else if (c.k == 0) {
      EXPECT_EQ(c.r, 2);
      EXPECT_EQ(c.h, ExactPolynomial(Coefficient(mpq_class(3, 5))));
      seen0 = true;
    } else {
      ADD_FAILURE() << "unexpected component k=" << c.k;
    }
  }
  EXPECT_TRUE(seen4 && seen0);
  EXPECT_TRUE(laplacian(h4).is_zero());
}

TEST(Harmonic, LinearPolynomialIsHarmonic) {
  auto comps = harmonic_decompose(x(0), 1);
  ASSERT_EQ(comps.size(), 1u);
  EXPECT_EQ(comps[0].r, 0);
  EXPECT_EQ(comps[0].k, 1);
  EXPECT_EQ(comps[0].h, x(0));
}

TEST(Harmonic, RejectsInhomogeneousInput) {
  EXPECT_THROW(harmonic_decompose(x(0) + x(0) * x(1), 1), NotHomogeneous);
}

TEST(Harmonic, ReassemblesRandomInvariants) {
  for (int k = 0; k < 5; ++k) {
    ThetaPolynomial p = random_invariant(12).weighted_part(12);
    if (p.is_zero()) continue;
    ExactPolynomial sum;
    for (const auto& c : harmonic_decompose(p, 12)) {
      EXPECT_TRUE(laplacian(c.h).is_zero());
      sum += expand_theta(th(1).pow(c.r)) * c.h;
    }
    EXPECT_EQ(sum, expand_theta(p));
  }
}

TEST(Harmonic, InvariantBasisDimensions) {
  const int expected[] = {1, 0, 0, 0, 1, 0, 1, 0, 1, 0, 1, 0, 2, 0, 1, 0, 2, 0, 2};
  for (int k = 0; k <= 18; k += 2) EXPECT_EQ(static_cast<int>(invariant_harmonic_basis(k).size()), expected[k]) << k;
}

TEST(Laguerre, Recurrence) {
  EXPECT_EQ(laguerre(0, mpq_class(1, 2)), std::vector<mpq_class>{1});
  EXPECT_EQ(laguerre(1, mpq_class(1, 2)), (std::vector<mpq_class>{mpq_class(3, 2), -1}));
  EXPECT_EQ(laguerre(2, mpq_class(1, 2)), (std::vector<mpq_class>{mpq_class(15, 8), mpq_class(-5, 2), mpq_class(1, 2)}));
}

TEST(Fourier, GaussianIsSelfDual) {
  EXPECT_EQ(fourier_apply(ThetaPolynomial(Coefficient(1))), ThetaPolynomial(Coefficient(1)));
}

TEST(Fourier, Theta1) {
  ThetaPolynomial expected = ThetaPolynomial(Coefficient(mpq_class(3, 2), -1)) - th(1);
  EXPECT_EQ(fourier_apply(th(1)), expected);
  EXPECT_EQ(fourier_apply(expand_theta(th(1))), expand_theta(expected));
}

TEST(Fourier, DegreeFourHarmonicIsFixed) {
  ThetaPolynomial h = th(2) - mpq_class(3, 5) * th(1) * th(1);
  EXPECT_EQ(fourier_apply(h), h);
  auto basis = invariant_harmonic_basis(4);
  ASSERT_EQ(basis.size(), 1u);
  EXPECT_EQ(fourier_apply(basis[0]), basis[0]);
}

TEST(Fourier, DegreeSixHarmonicChangesSign) {
  for (const auto& h : invariant_harmonic_basis(6)) EXPECT_EQ(fourier_apply(h), -h);
}

TEST(Fourier, IsAnInvolution) {
  for (int k = 0; k < 50; ++k) {
    ThetaPolynomial g = random_invariant(12);
    EXPECT_EQ(fourier_apply(fourier_apply(g)), g);
  }
}

TEST(Fourier, IsLinear) {
  for (int k = 0; k < 5; ++k) {
    ThetaPolynomial p = random_invariant(10), q = random_invariant(10);
    mpq_class a(3, 7), b(-2);
    EXPECT_EQ(fourier_apply(a * p + b * q), a * fourier_apply(p) + b * fourier_apply(q));
  }
}

TEST(Fourier, PreservesTopDegree) {
  for (int k = 0; k < 5; ++k) {
    ThetaPolynomial p = random_invariant(10);
    const int w = p.weighted_degree();
    ThetaPolynomial top = p.weighted_part(w);
    EXPECT_EQ(fourier_apply(p).weighted_part(w), fourier_apply(top).weighted_part(w));
  }
}

TEST(Fourier, RejectsNonInvariantInput) {
  EXPECT_THROW(fourier_apply(x(0) * x(0)), NotInvariant);
}

TEST(Fourier, Theta1MatchesQuadrature) {
  std::uniform_real_distribution<double> coord(-1.2, 1.2);
  ExactPolynomial g = expand_theta(th(1));
  for (int k = 0; k < 10; ++k) {
    std::array<double, 3> u{coord(rng), coord(rng), coord(rng)};
    const double n2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
    const double exact = (3 / (2 * kPi) - n2) * std::exp(-kPi * n2);
    EXPECT_NEAR(transform_by_quadrature(g, u), exact, 1e-6);
  }
}

TEST(Fourier, RandomInvariantsMatchQuadrature) {
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  for (int k = 0; k < 5; ++k) {
    ThetaPolynomial g = random_invariant(8);
    ExactPolynomial fg = expand_theta(fourier_apply(g));
    ExactPolynomial gx = expand_theta(g);
    for (int j = 0; j < 10; ++j) {
      std::array<double, 3> u{coord(rng), coord(rng), coord(rng)};
      const double n2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
      EXPECT_NEAR(fg.evaluate_double(u) * std::exp(-kPi * n2), transform_by_quadrature(gx, u), 1e-6);
    }
  }
}
