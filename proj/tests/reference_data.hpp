#pragma once

// Reference values shared by the unit tests and the acceptance binary.

#include "packbound/polynomial.hpp"

#include <map>
#include <string>
#include <vector>

namespace packbound::reference {

struct ThetaTerm {
  long c;
  int i, j, k;  // theta1^i theta2^j theta3^k
};

// Published Q^pi matrices, upper triangle in row-major order. They are keyed by the
// irreducible whose character matches the published coinvariant basis: the published
// basis table names A1u/A2u, Eg/Eu and T1u/T2u the other way round.
inline const std::map<std::string, std::vector<std::vector<ThetaTerm>>>& qpi() {
  static const std::map<std::string, std::vector<std::vector<ThetaTerm>>> table = {
    {"A1g", {
        {{1, 0, 0, 0}},
    }},
    {"A1u", {
        {{-1, 9, 0, 0}, {12, 7, 1, 0}, {-10, 6, 0, 1}, {-48, 5, 2, 0}, {78, 4, 1, 1}, {66, 3, 3, 0}, {-34, 3, 0, 2}, {-150, 2, 2, 1}, {-9, 1, 4, 0}, {126, 1, 1, 2}, {6, 0, 3, 1}, {-36, 0, 0, 3}},
    }},
    {"A2g", {
        {{-1, 6, 0, 0}, {9, 4, 1, 0}, {-8, 3, 0, 1}, {-21, 2, 2, 0}, {36, 1, 1, 1}, {3, 0, 3, 0}, {-18, 0, 0, 2}},
    }},
    {"A2u", {
        {{1, 3, 0, 0}, {-3, 1, 1, 0}, {2, 0, 0, 1}},
    }},
    {"Eg", {
        {{-2, 2, 0, 0}, {6, 0, 1, 0}},
        {{-2, 1, 1, 0}, {6, 0, 0, 1}},
        {{1, 4, 0, 0}, {-6, 2, 1, 0}, {8, 1, 0, 1}, {1, 0, 2, 0}},
    }},
    {"Eu", {
        {{-2, 5, 0, 0}, {12, 3, 1, 0}, {-4, 2, 0, 1}, {-18, 1, 2, 0}, {12, 0, 1, 1}},
        {{-2, 4, 1, 0}, {6, 3, 0, 1}, {6, 2, 2, 0}, {-22, 1, 1, 1}, {12, 0, 0, 2}},
        {{1, 7, 0, 0}, {-9, 5, 1, 0}, {10, 4, 0, 1}, {19, 3, 2, 0}, {-36, 2, 1, 1}, {-3, 1, 3, 0}, {16, 1, 0, 2}, {2, 0, 2, 1}},
    }},
    {"T1g", {
        {{12, 1, 0, 1}, {-12, 0, 2, 0}},
        {{2, 5, 0, 0}, {-12, 3, 1, 0}, {16, 2, 0, 1}, {6, 1, 2, 0}, {-12, 0, 1, 1}},
        {{2, 6, 0, 0}, {-12, 4, 1, 0}, {10, 3, 0, 1}, {12, 2, 2, 0}, {-6, 1, 1, 1}, {-6, 0, 3, 0}},
        {{2, 6, 0, 0}, {-10, 4, 1, 0}, {10, 3, 0, 1}, {10, 1, 1, 1}, {-12, 0, 0, 2}},
        {{1, 7, 0, 0}, {-3, 5, 1, 0}, {2, 4, 0, 1}, {-9, 3, 2, 0}, {24, 2, 1, 1}, {3, 1, 3, 0}, {-12, 1, 0, 2}, {-6, 0, 2, 1}},
        {{4, 6, 1, 0}, {-3, 5, 0, 1}, {-21, 4, 2, 0}, {32, 3, 1, 1}, {12, 2, 3, 0}, {-12, 2, 0, 2}, {-9, 1, 2, 1}, {-3, 0, 4, 0}},
    }},
    {"T1u", {
        {{6, 1, 0, 0}},
        {{6, 0, 1, 0}},
        {{6, 0, 0, 1}},
        {{6, 0, 0, 1}},
        {{1, 4, 0, 0}, {-6, 2, 1, 0}, {8, 1, 0, 1}, {3, 0, 2, 0}},
        {{1, 5, 0, 0}, {-5, 3, 1, 0}, {5, 2, 0, 1}, {5, 0, 1, 1}},
    }},
    {"T2g", {
        {{3, 2, 0, 0}, {-3, 0, 1, 0}},
        {{6, 1, 1, 0}, {-6, 0, 0, 1}},
        {{-1, 4, 0, 0}, {6, 2, 1, 0}, {-2, 1, 0, 1}, {-3, 0, 2, 0}},
        {{-2, 4, 0, 0}, {12, 2, 1, 0}, {-10, 1, 0, 1}},
        {{-1, 5, 0, 0}, {4, 3, 1, 0}, {-2, 2, 0, 1}, {3, 1, 2, 0}, {-4, 0, 1, 1}},
        {{-2, 4, 1, 0}, {1, 3, 0, 1}, {9, 2, 2, 0}, {-7, 1, 1, 1}, {-3, 0, 3, 0}, {2, 0, 0, 2}},
    }},
    {"T2u", {
        {{-12, 3, 0, 0}, {48, 1, 1, 0}, {-36, 0, 0, 1}},
        {{-6, 4, 0, 0}, {24, 2, 1, 0}, {-12, 1, 0, 1}, {-6, 0, 2, 0}},
        {{-6, 3, 1, 0}, {6, 2, 0, 1}, {18, 1, 2, 0}, {-18, 0, 1, 1}},
        {{-2, 5, 0, 0}, {6, 3, 1, 0}, {2, 2, 0, 1}, {-6, 0, 1, 1}},
        {{1, 6, 0, 0}, {-9, 4, 1, 0}, {8, 3, 0, 1}, {15, 2, 2, 0}, {-12, 1, 1, 1}, {-3, 0, 3, 0}},
        {{1, 7, 0, 0}, {-6, 5, 1, 0}, {5, 4, 0, 1}, {3, 3, 2, 0}, {6, 1, 3, 0}, {-9, 0, 2, 1}},
    }},
  };
  return table;
}

inline ThetaPolynomial to_theta(const std::vector<ThetaTerm>& terms) {
  ThetaPolynomial p;
  for (const auto& t : terms) p.add_term({t.i, t.j, t.k}, Coefficient(mpq_class(t.c)));
  return p;
}

// Character table, rows A1g A1u A2g A2u Eg Eu T1g T1u T2g T2u, columns
// E i 3C2 3sigma_h 6C2' 6sigma_d 8C3 6C4 6S4 8S6.
inline const std::vector<std::vector<int>>& characters() {
  static const std::vector<std::vector<int>> table = {
      {1, 1, 1, 1, 1, 1, 1, 1, 1, 1},          {1, -1, 1, -1, 1, -1, 1, 1, -1, -1},
      {1, 1, 1, 1, -1, -1, 1, -1, -1, 1},      {1, -1, 1, -1, -1, 1, 1, -1, 1, -1},
      {2, 2, 2, 2, 0, 0, -1, 0, 0, -1},        {2, -2, 2, -2, 0, 0, -1, 0, 0, 1},
      {3, 3, -1, -1, -1, -1, 0, 1, 1, 0},      {3, -3, -1, 1, -1, 1, 0, 1, -1, 0},
      {3, 3, -1, -1, 1, 1, 0, -1, -1, 0},      {3, -3, -1, 1, 1, -1, 0, -1, 1, 0}};
  return table;
}

inline const std::vector<std::string>& irrep_names() {
  static const std::vector<std::string> n = {"A1g", "A1u", "A2g", "A2u", "Eg", "Eu", "T1g", "T1u", "T2g", "T2u"};
  return n;
}

// Series expansions through t^18.
inline const std::vector<long> kMolien = {1, 0, 1, 0, 2, 0, 3, 0, 4, 0, 5, 0, 7, 0, 8, 0, 10, 0, 12};
inline const std::vector<long> kCoinvariant = {1, 3, 5, 7, 8, 8, 7, 5, 3, 1};
inline const std::vector<long> kHarmonic = {1, 0, 0, 0, 1, 0, 1, 0, 1, 0, 1, 0, 2, 0, 1, 0, 2, 0, 2};

// Lattice packing lower bounds of superballs B^p_3, p = 3, 4, 5, 6, to four decimals.
inline const std::vector<std::pair<int, double>> kSuperballLattice = {
    {3, 0.8095}, {4, 0.8698}, {5, 0.9080}, {6, 0.9318}};

}  // namespace packbound::reference
