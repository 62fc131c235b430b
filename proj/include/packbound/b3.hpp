#pragma once

#include "packbound/polynomial.hpp"
#include "packbound/rational_matrix.hpp"

#include <array>
#include <string>
#include <vector>

namespace packbound {

enum class ConjugacyClass { E, I, C2, SigmaH, C2p, SigmaD, C3, C4, S4, S6 };
inline constexpr int kNumClasses = 10;
inline constexpr int kGroupOrder = 48;
inline constexpr std::array<const char*, kNumClasses> kClassNames = {
    "E", "i", "3C2", "3sigma_h", "6C2'", "6sigma_d", "8C3", "6C4", "6S4", "8S6"};
inline constexpr std::array<int, kNumClasses> kClassSizes = {1, 1, 3, 3, 6, 6, 8, 6, 6, 8};

using IntMatrix3 = std::array<std::array<int, 3>, 3>;

struct GroupElement {
  IntMatrix3 matrix{};
  ConjugacyClass cls = ConjugacyClass::E;

  int det() const;
  int trace() const;
  int order() const;
  GroupElement inverse() const;
};

IntMatrix3 multiply(const IntMatrix3& a, const IntMatrix3& b);
ConjugacyClass classify(const IntMatrix3& m);

// Closure of the three reflection generators; identity first.
std::vector<GroupElement> enumerate_group();
const std::vector<GroupElement>& group();
// Index of g^{-1} in group().
const std::vector<int>& inverse_table();

// (g p)(x) = p(g^{-1} x).
ExactPolynomial act(const GroupElement& g, const ExactPolynomial& p);

struct Irrep {
  std::string name;
  int dim = 0;
  std::array<int, kNumClasses> character{};
  int character_of(ConjugacyClass c) const { return character[static_cast<int>(c)]; }
};

// The ten irreducibles in character-table order A1g A1u A2g A2u Eg Eu T1g T1u T2g T2u.
const std::vector<Irrep>& irreps();
int irrep_index(const std::string& name);

// p^pi(p) = (d/48) sum_g chi(g^{-1}) g p.
ExactPolynomial isotypic_projector(const Irrep& pi, const ExactPolynomial& p);
// Basis of the isotypic component of type pi in degree k, in reduced echelon form.
std::vector<ExactPolynomial> isotypic_project(int k, const Irrep& pi);

struct CoinvariantRow {
  int degree = 0;
  std::vector<ExactPolynomial> phi;  // phi_{k1}, ..., phi_{k d}
};

struct IsotypicData {
  Irrep irrep;
  std::vector<CoinvariantRow> rows;
  // The basis of the lowest row is orthogonal for the coefficient inner product but not
  // normalized; weights[i] = |phi_{11}|^2 / |phi_{1i}|^2 make sum_i w_i phi_ki phi_li invariant.
  std::vector<mpq_class> weights;
  // pi(g) in the basis of the lowest row, indexed like group(): g phi_{ki} = sum_j pi_ji(g) phi_{kj}.
  std::vector<RationalMatrix> rep;
  // Q^pi as a full symmetric matrix of theta polynomials.
  std::vector<std::vector<ThetaPolynomial>> qpi;

  int dim() const { return irrep.dim; }
};

std::vector<IsotypicData> build_coinvariant_rows();
void build_qpi(std::vector<IsotypicData>& data);
// Rows and Q^pi for all ten irreducibles, built once.
const std::vector<IsotypicData>& isotypic_data();

enum class Series { Invariant, Coinvariant, HarmonicInvariant };
std::vector<long> molien_coefficients(Series series, int upto);

}  // namespace packbound
