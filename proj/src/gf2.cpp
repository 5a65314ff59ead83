#include "hfsign/gf2.hpp"

#include <algorithm>
#include <unordered_set>

#include "hfsign/common.hpp"
#include "hfsign/errors.hpp"

namespace hfsign {

namespace {

// union-find with parity to the representative
struct ParityUf {
  std::vector<int> parent;
  std::vector<uint8_t> parity;

  explicit ParityUf(int n) : parent(n), parity(n, 0) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }

  std::pair<int, uint8_t> find(int v) {
    uint8_t p = 0;
    while (parent[v] != v) {
      p ^= parity[v];
      v = parent[v];
    }
    return {v, p};
  }

  // enforce value(a) ^ value(b) == rel; false on conflict
  bool unite(int a, int b, uint8_t rel) {
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    if (ra == rb) return static_cast<uint8_t>(pa ^ pb) == rel;
    parent[rb] = ra;
    parity[rb] = static_cast<uint8_t>(pa ^ pb ^ rel);
    return true;
  }
};

}  // namespace

Gf2Solver::Gf2Solver(int nvars) : nvars_(nvars) {}

void Gf2Solver::add_row(std::vector<int> vars, int rhs) {
  std::sort(vars.begin(), vars.end());
  std::vector<int> cleaned;
  for (size_t k = 0; k < vars.size();) {
    size_t m = k;
    while (m < vars.size() && vars[m] == vars[k]) ++m;
    if ((m - k) % 2) cleaned.push_back(vars[k]);
    k = m;
  }
  for (int v : cleaned)
    if (v < 0 || v >= nvars_) throw Error("gf2 row references unknown variable");
  rows_.push_back({std::move(cleaned), rhs & 1});
}

Gf2Solution Gf2Solver::solve() const {
  // node nvars_ is a virtual constant-zero variable: a one-variable row
  // becomes a parity link to it, so all short rows live in the union-find
  const int kConst = nvars_;
  ParityUf uf(nvars_ + 1);
  std::vector<std::pair<std::vector<int>, int>> pending;
  bool consistent = true;

  auto handle_short = [&](const std::vector<int>& vars, int rhs) {
    if (vars.empty()) {
      if (rhs) consistent = false;
      return true;
    }
    if (vars.size() == 1) {
      if (!uf.unite(vars[0], kConst, static_cast<uint8_t>(rhs))) consistent = false;
      return true;
    }
    if (vars.size() == 2) {
      if (!uf.unite(vars[0], vars[1], static_cast<uint8_t>(rhs))) consistent = false;
      return true;
    }
    return false;
  };

  for (const Row& row : rows_) {
    if (!consistent) break;
    if (!handle_short(row.vars, row.rhs)) pending.push_back({row.vars, row.rhs});
  }

  // rewrite long rows over representatives until no new short rows appear
  bool changed = true;
  while (consistent && changed) {
    changed = false;
    std::vector<std::pair<std::vector<int>, int>> next;
    for (auto& [vars, rhs] : pending) {
      std::vector<int> reps;
      reps.reserve(vars.size());
      int r = rhs;
      for (int v : vars) {
        auto [root, p] = uf.find(v);
        r ^= p;
        reps.push_back(root);
      }
      std::sort(reps.begin(), reps.end());
      std::vector<int> folded;
      for (size_t k = 0; k < reps.size();) {
        size_t m = k;
        while (m < reps.size() && reps[m] == reps[k]) ++m;
        if ((m - k) % 2) folded.push_back(reps[k]);
        k = m;
      }
      if (folded.size() <= 2) {
        handle_short(folded, r);
        changed = true;
        if (!consistent) break;
      } else {
        next.push_back({std::move(folded), r});
      }
    }
    pending = std::move(next);
  }

  Gf2Solution sol;
  if (!consistent) return sol;

  std::vector<int> rep_index(nvars_ + 1, -1);
  int nclasses = 0;
  for (int v = 0; v <= nvars_; ++v) {
    auto [r, p] = uf.find(v);
    (void)p;
    if (rep_index[r] < 0) rep_index[r] = nclasses++;
  }

  Gf2Echelon ech(nclasses);
  {
    // pin the constant node to zero: its class root takes the link parity
    auto [croot, cp] = uf.find(kConst);
    std::vector<uint64_t> row((nclasses + 63) / 64, 0);
    int idx = rep_index[croot];
    row[idx >> 6] |= 1ULL << (idx & 63);
    if (!ech.insert(std::move(row), cp)) return sol;
  }
  // dedupe the folded rows before elimination
  std::unordered_set<uint64_t> seen;
  for (auto& [vars, rhs] : pending) {
    int r = rhs;
    std::vector<int> idx;
    idx.reserve(vars.size());
    for (int v : vars) {
      auto [root, p] = uf.find(v);
      r ^= p;
      idx.push_back(rep_index[root]);
    }
    std::sort(idx.begin(), idx.end());
    uint64_t h = splitmix64(static_cast<uint64_t>(r) + 0x1234);
    for (int i : idx) h = hash_combine(h, static_cast<uint64_t>(i));
    if (!seen.insert(h).second) continue;
    std::vector<uint64_t> row((nclasses + 63) / 64, 0);
    for (int i : idx) row[i >> 6] ^= 1ULL << (i & 63);
    if (!ech.insert(std::move(row), r)) return sol;
  }

  std::vector<uint8_t> rep_values = ech.solution();
  sol.consistent = true;
  sol.dimension = static_cast<long long>(nclasses) - ech.rank();
  sol.values.resize(nvars_);
  for (int v = 0; v < nvars_; ++v) {
    auto [r, p] = uf.find(v);
    sol.values[v] = static_cast<uint8_t>(rep_values[rep_index[r]] ^ p);
  }
  return sol;
}

Gf2Echelon::Gf2Echelon(int width)
    : width_(width), words_((width + 63) / 64), pivot_of_bit_(width, -1) {}

bool Gf2Echelon::insert(std::vector<uint64_t> row, int rhs) {
  if (words_ == 0) return rhs == 0;
  rhs &= 1;
  while (true) {
    int lead = -1;
    for (int w = 0; w < words_; ++w) {
      if (row[w]) {
        lead = (w << 6) + __builtin_ctzll(row[w]);
        break;
      }
    }
    if (lead < 0) return rhs == 0;
    int p = pivot_of_bit_[lead];
    if (p < 0) {
      pivot_of_bit_[lead] = static_cast<int>(rows_.size());
      rows_.push_back(std::move(row));
      pivot_bit_.push_back(lead);
      rhs_.push_back(rhs);
      ++rank_;
      return true;
    }
    const auto& prow = rows_[p];
    for (int w = 0; w < words_; ++w) row[w] ^= prow[w];
    rhs ^= rhs_[p];
  }
}

std::vector<uint8_t> Gf2Echelon::solution() const {
  std::vector<uint8_t> val(width_, 0);
  // process pivots from the highest leading bit down
  std::vector<int> order(rows_.size());
  for (size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return pivot_bit_[a] > pivot_bit_[b]; });
  for (int idx : order) {
    int lead = pivot_bit_[idx];
    int acc = rhs_[idx];
    const auto& row = rows_[idx];
    for (int w = 0; w < words_; ++w) {
      uint64_t bits = row[w];
      while (bits) {
        int b = (w << 6) + __builtin_ctzll(bits);
        bits &= bits - 1;
        if (b != lead) acc ^= val[b];
      }
    }
    val[lead] = static_cast<uint8_t>(acc);
  }
  return val;
}

}  // namespace hfsign
