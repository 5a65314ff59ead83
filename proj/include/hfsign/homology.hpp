#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "hfsign/bigint.hpp"
#include "hfsign/diagram.hpp"
#include "hfsign/signs.hpp"

namespace hfsign {

struct SparseIntMatrix {
  int rows = 0;
  int cols = 0;
  std::map<std::pair<int, int>, BigInt> entries;  // no stored zeros

  void add(int r, int c, const BigInt& v);
  BigInt at(int r, int c) const;
  bool is_zero() const { return entries.empty(); }
  SparseIntMatrix multiply(const SparseIntMatrix& other) const;
  std::string to_triplet_text() const;  // "rows cols" then "r c value" lines
};

struct DiagramBasis {
  std::vector<DiagramGenerator> gens;
  std::map<std::string, int> index;
};

DiagramBasis diagram_basis(const GridDiagram& d);

// Signed boundary matrix: entry (y, x) sums the evaluated signs of the
// diagram flows from x to y.
SparseIntMatrix differential(const GridDiagram& d, const SignFunction& s,
                             int jobs = 1);

struct DSquaredResult {
  bool zero = true;
  std::string x_key, z_key;  // witness pair on failure
  // (first flow, second flow, sign of the composite) for each path x -> z
  std::vector<std::tuple<std::string, std::string, int>> pairs;
};

DSquaredResult d_squared_is_zero(const GridDiagram& d, const SignFunction& s,
                                 int jobs = 1);

struct SnfResult {
  std::vector<BigInt> factors;  // nonzero invariant factors, divisibility chain
  int rank = 0;
};

SnfResult smith_normal_form(const SparseIntMatrix& m);

// Exact rank over the rationals by fraction-free elimination.
long long rational_rank(const SparseIntMatrix& m);

// Sign-free boundary matrix over GF(2); independent of any sign data.
long long gf2_differential_rank(const GridDiagram& d);
long long gf2_homology_dimension(const GridDiagram& d);

struct HomologyResult {
  long long betti = 0;
  std::vector<BigInt> torsion;  // invariant factors > 1
  long long f2_dim = 0;
  long long q_rank = 0;

  bool operator==(const HomologyResult&) const = default;
  std::string to_json() const;
  std::string to_text() const;
};

HomologyResult homology(const GridDiagram& d, const SignFunction& s, int jobs = 1);

}  // namespace hfsign
