#pragma once

#include "packbound/b3.hpp"
#include "packbound/geometry.hpp"
#include "packbound/polynomial.hpp"

#include <gmpxx.h>

#include <array>
#include <string>
#include <vector>

namespace packbound {

using ThetaMatrix = std::vector<std::vector<ThetaPolynomial>>;
using CoefficientMatrix = std::vector<std::vector<Coefficient>>;

enum class BlockRole { R, S1, S2 };
const char* role_name(BlockRole r);

// (theta-monomial a, row r of the coinvariant basis)
struct IndexPair {
  Exponent a{};
  int row = 0;
  friend bool operator==(const IndexPair& x, const IndexPair& y) { return x.a == y.a && x.row == y.row; }
};

// Pairs (a, r) with weighted degree of a plus the degree of row r at most t.
std::vector<IndexPair> index_set(const IsotypicData& data, int t);

// V^{pi,t}_{(a,r),(b,s)} = a b Q^pi_{rs}.
ThetaMatrix build_v_matrix(const IsotypicData& data, int t);
ThetaMatrix build_v_matrix(int irrep, int t);
ThetaMatrix fourier_matrix(const ThetaMatrix& v);
// Substitute x = 0.
CoefficientMatrix evaluate_block_at_zero(const ThetaMatrix& m);

struct BlockIndex {
  BlockRole role = BlockRole::R;
  int irrep = 0;
  int t = 0;
  std::vector<IndexPair> pairs;
  std::size_t size() const { return pairs.size(); }
};

// Entry of a linear functional on the blocks: value * (X_block)_{ij}, with i <= j.
// Off-diagonal entries stand for the symmetric pair, i.e. the functional is
// sum_b sum_{i,j} C_ij X_ij with C symmetric and value = C_ij for i <= j.
struct SparseEntry {
  int block = 0;
  int i = 0;
  int j = 0;
  Coefficient value;
};

enum class ConstraintKind { Normalization, Identity, Sample };

struct LinearConstraint {
  ConstraintKind kind = ConstraintKind::Identity;
  Exponent monomial{};           // Identity rows: the theta-monomial
  std::array<mpq_class, 3> point;  // Sample rows: the sample point
  std::vector<SparseEntry> entries;
  // Normalization: functional >= 1; Identity: functional = 0; Sample: functional <= 0.
};

using Sample = std::array<mpq_class, 3>;

struct SdpModel {
  int d = 0;
  int ds = 0;
  std::string solid_name;
  ThetaPolynomial s;
  std::vector<BlockIndex> blocks;       // all R, then all S1, then all S2, in irrep order
  std::vector<ThetaMatrix> polynomials;  // F[V] for R, s V for S1, V for S2
  std::vector<SparseEntry> objective;
  std::vector<LinearConstraint> constraints;
  std::vector<Sample> samples;

  std::size_t num_r_blocks() const;
  const LinearConstraint& normalization() const { return constraints.front(); }
};

// Grid points of the given pitch in {s < 0} minus the open difference body, inside the
// fundamental domain 0 <= x1 <= x2 <= x3. Empty for even superballs.
std::vector<Sample> generate_samples(const Solid& solid, const mpq_class& spacing);

SdpModel assemble(const Solid& solid, int d, const std::vector<Sample>& samples);

std::string model_to_json(const SdpModel& model);

}  // namespace packbound
