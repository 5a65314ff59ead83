#include "hfsign/homology.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hfsign/common.hpp"
#include "hfsign/gf2.hpp"
#include "json.hpp"

namespace hfsign {

namespace {

using nlohmann::json;

}  // namespace

void SparseIntMatrix::add(int r, int c, const BigInt& v) {
  if (v.is_zero()) return;
  auto key = std::make_pair(r, c);
  auto it = entries.find(key);
  if (it == entries.end()) {
    entries.emplace(key, v);
    return;
  }
  it->second += v;
  if (it->second.is_zero()) entries.erase(it);
}

BigInt SparseIntMatrix::at(int r, int c) const {
  auto it = entries.find({r, c});
  return it == entries.end() ? BigInt() : it->second;
}

SparseIntMatrix SparseIntMatrix::multiply(const SparseIntMatrix& other) const {
  if (cols != other.rows) throw Error("matrix dimension mismatch");
  // index other by row
  std::vector<std::vector<std::pair<int, const BigInt*>>> by_row(other.rows);
  for (const auto& [rc, v] : other.entries) by_row[rc.first].push_back({rc.second, &v});
  SparseIntMatrix out;
  out.rows = rows;
  out.cols = other.cols;
  for (const auto& [rc, v] : entries) {
    for (const auto& [c2, v2] : by_row[rc.second]) out.add(rc.first, c2, v * *v2);
  }
  return out;
}

std::string SparseIntMatrix::to_triplet_text() const {
  std::ostringstream os;
  os << rows << " " << cols << "\n";
  for (const auto& [rc, v] : entries)
    os << rc.first << " " << rc.second << " " << v.str() << "\n";
  return os.str();
}

DiagramBasis diagram_basis(const GridDiagram& d) {
  DiagramBasis b;
  b.gens = generators(d);
  for (size_t k = 0; k < b.gens.size(); ++k)
    b.index.emplace(b.gens[k].key(), static_cast<int>(k));
  return b;
}

SparseIntMatrix differential(const GridDiagram& d, const SignFunction& s, int jobs) {
  if (s.power != d.total_power())
    throw PowerMismatch("sign function power " + std::to_string(s.power) +
                        ", diagram power " + std::to_string(d.total_power()));
  DiagramBasis basis = diagram_basis(d);
  int ngen = static_cast<int>(basis.gens.size());
  std::vector<std::vector<std::pair<int, long long>>> cols(ngen);
  parallel_for(jobs, ngen, [&](int xi) {
    std::map<int, long long> acc;
    for (const auto& [flow, y] : flows_from(d, basis.gens[xi])) {
      int yi = basis.index.at(y.key());
      acc[yi] += s(to_formal(d, flow, basis.gens[xi]));
    }
    for (const auto& [yi, v] : acc)
      if (v != 0) cols[xi].push_back({yi, v});
  });
  SparseIntMatrix m;
  m.rows = ngen;
  m.cols = ngen;
  for (int xi = 0; xi < ngen; ++xi)
    for (const auto& [yi, v] : cols[xi]) m.add(yi, xi, BigInt(v));
  return m;
}

DSquaredResult d_squared_is_zero(const GridDiagram& d, const SignFunction& s,
                                 int jobs) {
  SparseIntMatrix m = differential(d, s, jobs);
  SparseIntMatrix sq = m.multiply(m);
  DSquaredResult res;
  if (sq.is_zero()) return res;
  res.zero = false;
  auto [rc, v] = *sq.entries.begin();
  (void)v;
  DiagramBasis basis = diagram_basis(d);
  int zi = rc.first, xi = rc.second;
  res.x_key = basis.gens[xi].key();
  res.z_key = basis.gens[zi].key();
  const DiagramGenerator& x = basis.gens[xi];
  for (const auto& [f1, y] : flows_from(d, x)) {
    for (const auto& [f2, z] : flows_from(d, y)) {
      if (z.key() != res.z_key) continue;
      FormalFlow a = to_formal(d, f1, x);
      FormalFlow b = to_formal(d, f2, y);
      res.pairs.push_back({flow_key(a), flow_key(b), s(a) * s(b)});
    }
  }
  return res;
}

namespace {

// Scalar plugs for the elimination routines. The int64 flavor throws
// std::overflow_error when values outgrow the machine word; callers rerun
// the slow arbitrary-precision flavor in that case.
struct Int64Ops {
  using Num = long long;
  static Num from_big(const BigInt& v) { return v.to_int64(); }
  static BigInt to_big(Num v) { return BigInt(v); }
  static bool is_zero(Num v) { return v == 0; }
  static Num mul(Num a, Num b) {
    Num r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("mul");
    return r;
  }
  static Num sub(Num a, Num b) {
    Num r;
    if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("sub");
    return r;
  }
  static Num div(Num a, Num b) { return a / b; }
  static Num mod(Num a, Num b) { return a % b; }
  static Num abs(Num a) {
    if (a == std::numeric_limits<long long>::min()) throw std::overflow_error("abs");
    return a < 0 ? -a : a;
  }
  static int cmp_abs(Num a, Num b) {
    unsigned long long x = a < 0 ? 0ULL - static_cast<unsigned long long>(a)
                                 : static_cast<unsigned long long>(a);
    unsigned long long y = b < 0 ? 0ULL - static_cast<unsigned long long>(b)
                                 : static_cast<unsigned long long>(b);
    return x < y ? -1 : (x == y ? 0 : 1);
  }
  static Num gcd(Num a, Num b) {
    a = abs(a);
    b = abs(b);
    while (b) {
      Num r = a % b;
      a = b;
      b = r;
    }
    return a;
  }
  static bool is_unit(Num v) { return v == 1 || v == -1; }
};

struct BigOps {
  using Num = BigInt;
  static Num from_big(const BigInt& v) { return v; }
  static BigInt to_big(Num v) { return v; }
  static bool is_zero(const Num& v) { return v.is_zero(); }
  static Num mul(const Num& a, const Num& b) { return a * b; }
  static Num sub(const Num& a, const Num& b) { return a - b; }
  static Num div(const Num& a, const Num& b) { return a / b; }
  static Num mod(const Num& a, const Num& b) { return a % b; }
  static Num abs(const Num& a) { return a.abs(); }
  static int cmp_abs(const Num& a, const Num& b) { return BigInt::cmp_abs(a, b); }
  static Num gcd(const Num& a, const Num& b) { return BigInt::gcd(a, b); }
  static bool is_unit(const Num& v) { return cmp_abs(v, BigInt(1)) == 0; }
};

template <class Ops>
std::vector<std::map<int, typename Ops::Num>> load_rows(const SparseIntMatrix& m) {
  std::vector<std::map<int, typename Ops::Num>> rows(m.rows);
  for (const auto& [rc, v] : m.entries) rows[rc.first][rc.second] = Ops::from_big(v);
  return rows;
}

template <class Ops>
SnfResult snf_impl(const SparseIntMatrix& m) {
  using Num = typename Ops::Num;
  auto rows = load_rows<Ops>(m);
  std::vector<bool> row_done(m.rows, false), col_done(m.cols, false);
  std::vector<Num> diag;

  while (true) {
    // pivot: smallest |value|, then lexicographic (row, col); the first unit
    // entry in lexicographic order already realizes the minimum
    int pr = -1, pc = -1;
    bool have = false, unit = false;
    for (int r = 0; r < m.rows && !unit; ++r) {
      if (row_done[r]) continue;
      for (const auto& [c, v] : rows[r]) {
        if (col_done[c]) continue;
        if (!have || Ops::cmp_abs(v, rows[pr].at(pc)) < 0) {
          have = true;
          pr = r;
          pc = c;
          if (Ops::is_unit(v)) {
            unit = true;
            break;
          }
        }
      }
    }
    if (!have) break;

    // clear the pivot column, then the pivot row, until both stay clean
    while (true) {
      bool col_clean = true;
      for (int r = 0; r < m.rows && col_clean; ++r) {
        if (r == pr || row_done[r]) continue;
        auto it = rows[r].find(pc);
        if (it == rows[r].end()) continue;
        Num q = Ops::div(it->second, rows[pr].at(pc));
        if (!Ops::is_zero(q)) {
          for (const auto& [c, v] : rows[pr]) {
            if (col_done[c]) continue;
            auto rit = rows[r].find(c);
            Num upd = rit == rows[r].end() ? Num(0) : rit->second;
            upd = Ops::sub(upd, Ops::mul(q, v));
            if (Ops::is_zero(upd)) {
              if (rit != rows[r].end()) rows[r].erase(rit);
            } else {
              rows[r][c] = upd;
            }
          }
        }
        it = rows[r].find(pc);
        if (it != rows[r].end()) {
          // nonzero remainder, strictly smaller than the pivot
          pr = r;
          col_clean = false;
        }
      }
      if (!col_clean) continue;
      bool row_clean = true;
      std::vector<std::pair<int, Num>> prow(rows[pr].begin(), rows[pr].end());
      for (const auto& [c, v] : prow) {
        if (c == pc || col_done[c]) continue;
        Num q = Ops::div(v, rows[pr].at(pc));
        if (!Ops::is_zero(q)) {
          for (int r = 0; r < m.rows; ++r) {
            if (row_done[r]) continue;
            auto pivot_it = rows[r].find(pc);
            if (pivot_it == rows[r].end()) continue;
            auto rit = rows[r].find(c);
            Num upd = rit == rows[r].end() ? Num(0) : rit->second;
            upd = Ops::sub(upd, Ops::mul(q, pivot_it->second));
            if (Ops::is_zero(upd)) {
              if (rit != rows[r].end()) rows[r].erase(rit);
            } else {
              rows[r][c] = upd;
            }
          }
        }
        if (rows[pr].count(c)) {
          pc = c;
          row_clean = false;
          break;
        }
      }
      if (row_clean) break;
    }

    diag.push_back(Ops::abs(rows[pr].at(pc)));
    row_done[pr] = true;
    col_done[pc] = true;
  }

  // refine the diagonal into a divisibility chain
  bool changed = true;
  while (changed) {
    changed = false;
    std::sort(diag.begin(), diag.end(),
              [](const Num& a, const Num& b) { return Ops::cmp_abs(a, b) < 0; });
    for (size_t a = 0; a + 1 < diag.size(); ++a) {
      for (size_t b = a + 1; b < diag.size(); ++b) {
        if (Ops::is_zero(Ops::mod(diag[b], diag[a]))) continue;
        Num g = Ops::gcd(diag[a], diag[b]);
        Num l = Ops::div(Ops::mul(diag[a], diag[b]), g);
        diag[a] = g;
        diag[b] = l;
        changed = true;
      }
    }
  }
  SnfResult res;
  for (const Num& v : diag) res.factors.push_back(Ops::to_big(v));
  res.rank = static_cast<int>(res.factors.size());
  return res;
}

template <class Ops>
long long rank_impl(const SparseIntMatrix& m) {
  using Num = typename Ops::Num;
  auto rows = load_rows<Ops>(m);
  std::vector<bool> row_done(m.rows, false), col_done(m.cols, false);
  long long rank = 0;
  while (true) {
    int pr = -1, pc = -1;
    bool have = false, unit = false;
    for (int r = 0; r < m.rows && !unit; ++r) {
      if (row_done[r]) continue;
      for (const auto& [c, v] : rows[r]) {
        if (col_done[c]) continue;
        if (!have || Ops::cmp_abs(v, rows[pr].at(pc)) < 0) {
          have = true;
          pr = r;
          pc = c;
          if (Ops::is_unit(v)) {
            unit = true;
            break;
          }
        }
      }
    }
    if (!have) break;
    Num pivot = rows[pr].at(pc);
    for (int r = 0; r < m.rows; ++r) {
      if (r == pr || row_done[r]) continue;
      auto it = rows[r].find(pc);
      if (it == rows[r].end()) continue;
      Num factor = it->second;
      // integer-preserving update: row <- pivot*row - factor*prow, with the
      // row gcd stripped to keep entries small
      std::map<int, Num> updated;
      for (const auto& [c, v] : rows[r]) {
        if (col_done[c] || c == pc) continue;
        updated[c] = Ops::mul(pivot, v);
      }
      for (const auto& [c, v] : rows[pr]) {
        if (col_done[c] || c == pc) continue;
        auto uit = updated.find(c);
        Num cur = uit == updated.end() ? Num(0) : uit->second;
        cur = Ops::sub(cur, Ops::mul(factor, v));
        if (Ops::is_zero(cur)) updated.erase(c);
        else updated[c] = cur;
      }
      Num g(0);
      for (const auto& [c, v] : updated) {
        (void)c;
        g = Ops::gcd(g, v);
        if (Ops::is_unit(g)) break;
      }
      if (!Ops::is_zero(g) && !Ops::is_unit(g))
        for (auto& [c, v] : updated) {
          (void)c;
          v = Ops::div(v, g);
        }
      rows[r] = std::move(updated);
    }
    row_done[pr] = true;
    col_done[pc] = true;
    ++rank;
  }
  return rank;
}

}  // namespace

SnfResult smith_normal_form(const SparseIntMatrix& m) {
  try {
    return snf_impl<Int64Ops>(m);
  } catch (const std::overflow_error&) {
    return snf_impl<BigOps>(m);
  }
}

long long rational_rank(const SparseIntMatrix& m) {
  try {
    return rank_impl<Int64Ops>(m);
  } catch (const std::overflow_error&) {
    return rank_impl<BigOps>(m);
  }
}

namespace {

// mod-2 boundary matrix rows as bitsets; counts flows without signs
std::vector<std::vector<uint64_t>> gf2_matrix(const GridDiagram& d, int* ngen_out) {
  DiagramBasis basis = diagram_basis(d);
  int ngen = static_cast<int>(basis.gens.size());
  *ngen_out = ngen;
  int words = (ngen + 63) / 64;
  std::vector<std::vector<uint64_t>> rows(ngen, std::vector<uint64_t>(words, 0));
  for (int xi = 0; xi < ngen; ++xi) {
    std::map<int, int> acc;
    for (const auto& [flow, y] : flows_from(d, basis.gens[xi])) {
      (void)flow;
      acc[basis.index.at(y.key())] ^= 1;
    }
    for (const auto& [yi, parity] : acc)
      if (parity) rows[xi][yi >> 6] ^= 1ULL << (yi & 63);  // column xi as a row
  }
  return rows;
}

}  // namespace

long long gf2_differential_rank(const GridDiagram& d) {
  int ngen = 0;
  auto rows = gf2_matrix(d, &ngen);
  Gf2Echelon ech(ngen);
  for (auto& row : rows) ech.insert(std::move(row), 0);
  return ech.rank();
}

long long gf2_homology_dimension(const GridDiagram& d) {
  int ngen = 0;
  auto rows = gf2_matrix(d, &ngen);
  Gf2Echelon ech(ngen);
  for (auto& row : rows) ech.insert(std::move(row), 0);
  return static_cast<long long>(ngen) - 2 * ech.rank();
}

std::string HomologyResult::to_json() const {
  json j;
  j["betti"] = betti;
  j["torsion"] = json::array();
  for (const auto& t : torsion) {
    if (t.fits_int64()) j["torsion"].push_back(t.to_int64());
    else j["torsion"].push_back(t.str());
  }
  j["f2_dim"] = f2_dim;
  j["q_rank"] = q_rank;
  return j.dump();
}

std::string HomologyResult::to_text() const {
  std::ostringstream os;
  os << "betti " << betti << "\ntorsion [";
  for (size_t k = 0; k < torsion.size(); ++k) {
    if (k) os << ", ";
    os << torsion[k].str();
  }
  os << "]\nf2_dim " << f2_dim << "\nq_rank " << q_rank << "\n";
  return os.str();
}

HomologyResult homology(const GridDiagram& d, const SignFunction& s, int jobs) {
  SparseIntMatrix m = differential(d, s, jobs);
  SparseIntMatrix sq = m.multiply(m);
  if (!sq.is_zero())
    throw DifferentialNotSquareZero("the boundary matrix does not square to zero");
  long long ngen = m.rows;
  SnfResult snf = smith_normal_form(m);
  HomologyResult res;
  res.betti = ngen - 2 * snf.rank;
  for (const auto& f : snf.factors)
    if (f > BigInt(1)) res.torsion.push_back(f);
  res.f2_dim = gf2_homology_dimension(d);
  res.q_rank = ngen - 2 * rational_rank(m);
  return res;
}

}  // namespace hfsign
