#pragma once

#include <cstdint>
#include <vector>

namespace hfsign {

struct Gf2Solution {
  bool consistent = false;
  long long dimension = 0;           // affine solution space dimension
  std::vector<uint8_t> values;       // one particular solution, free vars = 0
};

// Linear system over GF(2). Short rows are folded into a parity union-find;
// the remaining rows go through dense bitset elimination over the classes.
class Gf2Solver {
 public:
  explicit Gf2Solver(int nvars);
  // xor-semantics: repeated variables cancel
  void add_row(std::vector<int> vars, int rhs);
  Gf2Solution solve() const;
  int row_count() const { return static_cast<int>(rows_.size()); }

 private:
  int nvars_;
  struct Row {
    std::vector<int> vars;
    int rhs;
  };
  std::vector<Row> rows_;
};

// Dense elimination helper used for GF(2) ranks of 0/1 matrices.
class Gf2Echelon {
 public:
  explicit Gf2Echelon(int width);
  // Reduces the row against current pivots and absorbs it if independent.
  // Returns false when the row is inconsistent (0 = 1).
  bool insert(std::vector<uint64_t> row, int rhs);
  int rank() const { return rank_; }
  int width() const { return width_; }
  // Particular solution with free variables zero. Only valid when every
  // inserted row was consistent.
  std::vector<uint8_t> solution() const;

 private:
  int width_;
  int words_;
  int rank_ = 0;
  std::vector<int> pivot_of_bit_;           // bit -> row index or -1
  std::vector<std::vector<uint64_t>> rows_;  // pivot rows
  std::vector<int> pivot_bit_;
  std::vector<int> rhs_;
};

}  // namespace hfsign
