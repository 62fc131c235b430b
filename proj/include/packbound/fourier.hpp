#pragma once

#include "packbound/polynomial.hpp"

#include <vector>

namespace packbound {

ExactPolynomial laplacian(const ExactPolynomial& p);

// p = theta1^r h with h harmonic and homogeneous of degree k.
struct HarmonicComponent {
  int r = 0;
  int k = 0;
  ExactPolynomial h;
};

// Decomposition of a homogeneous polynomial of degree j into radial powers times
// harmonics. Invariant inputs are decomposed inside the invariant ring.
std::vector<HarmonicComponent> harmonic_decompose(const ExactPolynomial& p, int j);
std::vector<HarmonicComponent> harmonic_decompose(const ThetaPolynomial& p, int j);

// Basis of the B3-invariant harmonics of degree k, as theta polynomials.
std::vector<ThetaPolynomial> invariant_harmonic_basis(int k);

// Coefficients (in t) of the generalized Laguerre polynomial L_r^alpha(t).
std::vector<mpq_class> laguerre(int r, const mpq_class& alpha);

// F[g] with FT(g(x) exp(-pi |x|^2))(u) = F[g](u) exp(-pi |u|^2), for B3-invariant g.
ExactPolynomial fourier_apply(const ExactPolynomial& g);
ThetaPolynomial fourier_apply(const ThetaPolynomial& g);

}  // namespace packbound
