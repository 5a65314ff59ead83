#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>

#include "doctest.h"
#include "hfsign/bigint.hpp"
#include "hfsign/common.hpp"
#include "hfsign/formal.hpp"
#include "hfsign/gf2.hpp"

using namespace hfsign;

TEST_CASE("bigint arithmetic agrees with int64 on random small values") {
  Rng rng(5150);
  for (int trial = 0; trial < 5000; ++trial) {
    long long a = static_cast<long long>(rng.next() % 2000001) - 1000000;
    long long b = static_cast<long long>(rng.next() % 2000001) - 1000000;
    BigInt A(a), B(b);
    CHECK((A + B).to_int64() == a + b);
    CHECK((A - B).to_int64() == a - b);
    CHECK((A * B).to_int64() == a * b);
    if (b != 0) {
      CHECK((A / B).to_int64() == a / b);
      CHECK((A % B).to_int64() == a % b);
    }
    CHECK((A < B) == (a < b));
    CHECK((A == B) == (a == b));
    CHECK(A.abs().to_int64() == (a < 0 ? -a : a));
  }
}

TEST_CASE("bigint grows past 64 bits and round trips through strings") {
  BigInt big(1);
  for (int k = 0; k < 40; ++k) big *= BigInt(1000);  // 10^120
  std::string s = big.str();
  CHECK(s.size() == 121);
  CHECK(s[0] == '1');
  CHECK_FALSE(big.fits_int64());
  CHECK(BigInt::from_string(s) == big);
  CHECK(BigInt::from_string("-" + s) == -big);
  CHECK((big - big).is_zero());
  CHECK((big / big).to_int64() == 1);
  BigInt q = (big + BigInt(7)) / big;
  CHECK(q.to_int64() == 1);
  CHECK(((big + BigInt(7)) % big).to_int64() == 7);
  CHECK((big * big) / big == big);
}

TEST_CASE("bigint gcd and division identities on random pairs") {
  Rng rng(99);
  for (int trial = 0; trial < 800; ++trial) {
    BigInt a(static_cast<long long>(rng.next() % 2000001) - 1000000);
    BigInt b(static_cast<long long>(rng.next() % 2000001) - 1000000);
    BigInt c(static_cast<long long>(rng.next() % 1001) + 1);
    a = a * c;
    b = b * c;
    if (b.is_zero()) continue;
    BigInt q = a / b, r = a % b;
    CHECK(q * b + r == a);
    CHECK(BigInt::cmp_abs(r, b) < 0);
    BigInt g = BigInt::gcd(a, b);
    if (!a.is_zero()) CHECK((a % g).is_zero());
    CHECK((b % g).is_zero());
    CHECK(g >= c.abs() - (c.abs() - c.abs()));  // gcd is at least the common factor
    CHECK((g % c).is_zero());
  }
  CHECK(BigInt::gcd(BigInt(0), BigInt(-6)).to_int64() == 6);
  CHECK(BigInt::gcd(BigInt(0), BigInt(0)).is_zero());
}

TEST_CASE("bigint string parsing edge cases") {
  CHECK(BigInt::from_string("0").is_zero());
  CHECK(BigInt::from_string("-0").is_zero());
  CHECK(BigInt::from_string("+42").to_int64() == 42);
  CHECK_THROWS(BigInt::from_string(""));
  CHECK_THROWS(BigInt::from_string("12x"));
  CHECK(BigInt(0).str() == "0");
  CHECK(BigInt(-1).str() == "-1");
}

TEST_CASE("gf2 solver on hand-built systems") {
  // x0 + x1 = 1, x1 + x2 = 0, x0 + x2 = 1 (consistent, rank 2)
  Gf2Solver s(3);
  s.add_row({0, 1}, 1);
  s.add_row({1, 2}, 0);
  s.add_row({0, 2}, 1);
  Gf2Solution sol = s.solve();
  CHECK(sol.consistent);
  CHECK(sol.dimension == 1);
  CHECK((sol.values[0] ^ sol.values[1]) == 1);
  CHECK((sol.values[1] ^ sol.values[2]) == 0);

  // inconsistent pair constraints
  Gf2Solver bad(2);
  bad.add_row({0, 1}, 0);
  bad.add_row({0, 1}, 1);
  CHECK_FALSE(bad.solve().consistent);

  // inconsistency visible only after folding a long row
  Gf2Solver fold(4);
  fold.add_row({0, 1}, 0);
  fold.add_row({2, 3}, 0);
  fold.add_row({0, 1, 2, 3}, 1);
  CHECK_FALSE(fold.solve().consistent);

  // repeated variables cancel
  Gf2Solver cancel(2);
  cancel.add_row({0, 0, 1}, 1);
  Gf2Solution csol = cancel.solve();
  CHECK(csol.consistent);
  CHECK(csol.values[1] == 1);

  // empty contradictory row
  Gf2Solver empty(1);
  empty.add_row({}, 1);
  CHECK_FALSE(empty.solve().consistent);
}

TEST_CASE("gf2 solver matches a dense brute-force oracle on random systems") {
  Rng rng(777);
  for (int trial = 0; trial < 200; ++trial) {
    int nvars = 1 + rng.below(10);
    int nrows = rng.below(14);
    std::vector<std::pair<unsigned, int>> rows;  // bitmask, rhs
    Gf2Solver solver(nvars);
    for (int r = 0; r < nrows; ++r) {
      unsigned mask = static_cast<unsigned>(rng.next()) & ((1u << nvars) - 1);
      int rhs = rng.below(2);
      rows.push_back({mask, rhs});
      std::vector<int> vars;
      for (int v = 0; v < nvars; ++v)
        if (mask & (1u << v)) vars.push_back(v);
      solver.add_row(vars, rhs);
    }
    // brute force over all assignments
    long long solutions = 0;
    for (unsigned assign = 0; assign < (1u << nvars); ++assign) {
      bool ok = true;
      for (const auto& [mask, rhs] : rows)
        if (__builtin_parity(mask & assign) != rhs) ok = false;
      if (ok) ++solutions;
    }
    Gf2Solution sol = solver.solve();
    CHECK(sol.consistent == (solutions > 0));
    if (solutions > 0) {
      CHECK((1LL << sol.dimension) == solutions);
      for (const auto& [mask, rhs] : rows) {
        int acc = 0;
        for (int v = 0; v < nvars; ++v)
          if (mask & (1u << v)) acc ^= sol.values[v];
        CHECK(acc == rhs);
      }
    }
  }
}

TEST_CASE("gf2 echelon rank") {
  Gf2Echelon e(4);
  auto row = [&](std::initializer_list<int> bits) {
    std::vector<uint64_t> r(1, 0);
    for (int b : bits) r[0] |= 1ULL << b;
    return r;
  };
  CHECK(e.insert(row({0, 1}), 0));
  CHECK(e.insert(row({1, 2}), 0));
  CHECK(e.insert(row({0, 2}), 0));  // dependent
  CHECK(e.rank() == 2);
  CHECK_FALSE(e.insert(row({0, 2}), 1));  // dependent with wrong parity
}

TEST_CASE("seeded rng determinism") {
  Rng a(42), b(42);
  for (int k = 0; k < 100; ++k) CHECK(a.next() == b.next());
  Rng c(43);
  bool differs = false;
  Rng a2(42);
  for (int k = 0; k < 100; ++k) differs = differs || (a2.next() != c.next());
  CHECK(differs);
  Rng p(7);
  for (int k = 0; k < 50; ++k) {
    auto perm = p.permutation(6);
    std::vector<bool> seen(6, false);
    for (int v : perm) {
      CHECK(v >= 1);
      CHECK(v <= 6);
      seen[v - 1] = true;
    }
    for (bool s : seen) CHECK(s);
  }
}

TEST_CASE("HFSIGN_MAX_N overrides the enumeration bound") {
  setenv("HFSIGN_MAX_N", "3", 1);
  CHECK(enumeration_bound() == 3);
  CHECK_THROWS_AS(enumerate_generators(4), PowerTooLarge);
  CHECK(enumerate_generators(3).size() == 48);
  unsetenv("HFSIGN_MAX_N");
  CHECK(enumeration_bound() == 8);
}

TEST_CASE("parallel_for covers every index exactly once") {
  std::vector<int> hits(1000, 0);
  parallel_for(4, 1000, [&](int i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  parallel_for(1, 0, [&](int) { CHECK(false); });
}
