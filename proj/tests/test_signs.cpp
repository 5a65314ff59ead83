#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <memory>

#include "doctest.h"
#include "hfsign/signs.hpp"

using namespace hfsign;

namespace {

FormalGenerator gen(const Perm& sigma, const std::vector<int>& eps) {
  FormalGenerator g;
  g.sigma = sigma;
  for (int e : eps) g.epsilon.push_back(static_cast<int8_t>(e));
  return g;
}

// all-plus-profile torus rectangle from x determined by the rows carrying the
// bottom and top edges
FormalRectangle rect_between_rows(const Perm& x, int bottom_row, int top_row) {
  FormalRectangle r;
  r.start = gen(x, std::vector<int>(x.size(), 1));
  r.i = std::min(bottom_row, top_row);
  r.j = std::max(bottom_row, top_row);
  int8_t v = bottom_row < top_row ? 1 : -1;
  r.o_bottom = r.o_top = r.o_left = r.o_right = v;
  return r;
}

int cyc_dist(int from, int to, int n) { return ((to - from) % n + n) % n; }

bool cyc_between(int from, int to, int v, int n) {
  int w = cyc_dist(from, to, n);
  int off = cyc_dist(from, v, n);
  return off > 0 && off < w;
}

// interior generator points of the torus rectangle spanning rows
// bottom_row -> top_row and the columns between the matching generator points
std::vector<int> interior_points(const Perm& x, int bottom_row, int top_row) {
  int n = static_cast<int>(x.size());
  int cf = x[bottom_row - 1], ct = x[top_row - 1];
  std::vector<int> out;
  for (int k = 1; k <= n; ++k) {
    if (k == bottom_row || k == top_row) continue;
    if (cyc_between(bottom_row, top_row, k, n) && cyc_between(cf, ct, x[k - 1], n))
      out.push_back(k);
  }
  return out;
}

int table_sign(const SignTable& t, const FormalRectangle& r) { return t.at(r.key()); }

}  // namespace

TEST_CASE("bigon signs: formula examples") {
  // the four power-1 bigons, paired by companions
  FormalBigon a{gen({1}, {1}), 1, 1, 1};
  FormalBigon b = std::get<FormalBigon>(companion(FormalFlow{a}, CompanionKind::Alpha));
  FormalBigon c = std::get<FormalBigon>(companion(FormalFlow{a}, CompanionKind::Beta));
  FormalBigon d = std::get<FormalBigon>(companion(FormalFlow{c}, CompanionKind::Alpha));
  CHECK(bigon_sign(a) == 1);
  CHECK(bigon_sign(b) == bigon_sign(a));
  CHECK(bigon_sign(c) == -bigon_sign(a));
  CHECK(bigon_sign(d) == -bigon_sign(a));

  // prefix product over the entries before the moving coordinate
  FormalBigon e{gen({1, 2}, {-1, 1}), 2, 1, 1};
  CHECK(bigon_sign(e) == -1);

  // reversing the alpha arc negates the sign, reversing the beta arc keeps it
  for (const auto& g : enumerate_generators(2)) {
    for (const auto& bg : bigons_from(g)) {
      FormalGenerator flipped = bg.end();
      FormalBigon alpha_rev{flipped, bg.coord, static_cast<int8_t>(-bg.o_alpha),
                            bg.o_beta};
      FormalBigon beta_rev{flipped, bg.coord, bg.o_alpha,
                           static_cast<int8_t>(-bg.o_beta)};
      REQUIRE(validate_flow(FormalFlow{alpha_rev}));
      REQUIRE(validate_flow(FormalFlow{beta_rev}));
      CHECK(bigon_sign(alpha_rev) == -bigon_sign(bg));
      CHECK(bigon_sign(beta_rev) == bigon_sign(bg));
    }
  }
}

TEST_CASE("solve_profile1: frozen n=2 table, dimensions, and bounds") {
  SolveResult r1 = solve_profile1(1);
  CHECK(r1.table.entries.empty());
  CHECK(r1.dimension == 0);

  SolveResult r2 = solve_profile1(2);
  CHECK(r2.dimension == 1);
  CHECK(r2.table.entries.size() == 4);
  // hand elimination of the four degeneration rows plus the tree gauge:
  // all-plus class rectangles get +1, all-minus class get -1
  for (const Perm& x : all_permutations(2)) {
    CHECK(table_sign(r2.table, rect_between_rows(x, 1, 2)) == 1);
    CHECK(table_sign(r2.table, rect_between_rows(x, 2, 1)) == -1);
  }

  SolveResult r3 = solve_profile1(3);
  CHECK(r3.dimension == 5);  // 3! - 1
  CHECK(r3.table.entries.size() == 6 * 6);

  CHECK(solve_profile1(4).dimension == 23);
  CHECK_THROWS_AS(solve_profile1(99), PowerTooLarge);
}

TEST_CASE("solve_global: dimensions n=1,2,3 and determinism") {
  CHECK(solve_global(1).dimension == 1);
  CHECK(solve_global(2).dimension == 7);
  SolveResult a = solve_global(3);
  CHECK(a.dimension == 47);
  SolveResult b = solve_global(3);
  CHECK(a.table.to_json() == b.table.to_json());  // byte-identical rerun
  CHECK_THROWS_AS(solve_global(4), PowerTooLarge);
  CHECK_THROWS_AS(solve_global(5, true), PowerTooLarge);
}

TEST_CASE("solve_global tables under different gauge seeds are gauge equivalent") {
  SolveResult a = solve_global(2, false, 0);
  SolveResult b = solve_global(2, false, 3);
  CHECK(a.table.gauge_id != b.table.gauge_id);
  auto g = find_gauge(a.table, b.table);
  REQUIRE(g.has_value());
  CHECK_FALSE(a.table.to_json() == b.table.to_json());
}

TEST_CASE("evaluator: profile-1 rectangles are plain table lookups") {
  auto ev = shared_evaluator(3);
  const SignTable& t = ev->profile1_table();
  for (const auto& [key, value] : t.entries) {
    (void)key;
    CHECK((value == 1 || value == -1));
  }
  for (const Perm& x : all_permutations(3)) {
    FormalRectangle r = rect_between_rows(x, 1, 3);
    CHECK(ev->evaluate(FormalFlow{r}) == t.at(r.key()));
  }
}

TEST_CASE("evaluator reduction is independent of flip and reversal orders") {
  // test-only re-derivation: apply the simple-flip squares in an arbitrary
  // coordinate order, then the edge reversals in an arbitrary edge order
  auto reduce_with_orders = [](const SignTable& p1, FormalRectangle r,
                               std::vector<int> flip_order,
                               std::vector<RectEdge> edge_order) {
    int sign = 1;
    for (int p : flip_order) {
      if (p == r.i || p == r.j) continue;
      if (r.start.epsilon[p - 1] != -1) continue;
      FormalBigon before{r.start, p, 1, -1};
      FormalBigon after{r.end(), p, 1, -1};
      sign *= -bigon_sign(before) * bigon_sign(after);
      r = simple_flip(r, p);
    }
    for (RectEdge e : edge_order) {
      int8_t bit = e == RectEdge::Bottom ? r.o_bottom
                   : e == RectEdge::Top  ? r.o_top
                   : e == RectEdge::Left ? r.o_left
                                         : r.o_right;
      if (bit != -1) continue;
      RelationInstance rel = basic_relation(r, e);
      sign *= -bigon_sign(std::get<FormalBigon>(rel.flows[1])) *
              bigon_sign(std::get<FormalBigon>(rel.flows[2]));
      r = reverse_edge(r, e);
    }
    return sign * p1.at(r.key());
  };

  std::vector<RectEdge> edges{RectEdge::Bottom, RectEdge::Top, RectEdge::Left,
                              RectEdge::Right};
  for (int n = 2; n <= 3; ++n) {
    auto ev = shared_evaluator(n);
    std::vector<int> coords;
    for (int p = 1; p <= n; ++p) coords.push_back(p);
    auto [bigons, rects] = enumerate_flows(n);
    (void)bigons;
    for (const auto& r : rects) {
      int reference = ev->evaluate(FormalFlow{r});
      std::vector<int> flip_order = coords;
      do {
        std::vector<RectEdge> edge_order = edges;
        do {
          CHECK(reduce_with_orders(ev->profile1_table(), r, flip_order, edge_order) ==
                reference);
        } while (std::next_permutation(edge_order.begin(), edge_order.end(),
                                       [](RectEdge a, RectEdge b) {
                                         return static_cast<int>(a) < static_cast<int>(b);
                                       }));
      } while (std::next_permutation(flip_order.begin(), flip_order.end()));
    }
  }
}

TEST_CASE("evaluator is gauge equivalent to the solved global table (n=1,2,3)") {
  for (int n = 1; n <= 3; ++n) {
    SignTable evt = materialize(sign_function(shared_evaluator(n)), n, "all_flows");
    SignTable global = solve_global(n).table;
    CHECK(find_gauge(evt, global).has_value());
  }
}

TEST_CASE("apply_gauge: identity, involution, and the n=1 profile gauge") {
  SignTable t = materialize(sign_function(shared_evaluator(1)), 1, "all_flows");
  GaugeMap id = constant_gauge(1, 1);
  CHECK(apply_gauge(t, id).entries == t.entries);

  GaugeMap u = gauge_from_function(
      1, [](const FormalGenerator& g) { return static_cast<int>(g.epsilon[0]); });
  SignTable t2 = apply_gauge(t, u);
  CHECK_FALSE(t2.entries == t.entries);
  // the profile gauge exchanges the two power-1 sign assignments
  for (const auto& [k, v] : t.entries) CHECK(t2.at(k) == -v);
  SignTable t3 = apply_gauge(t2, u);
  CHECK(t3.entries == t.entries);
}

TEST_CASE("restricted gauges act trivially on bigon signs, exhaustively n<=3") {
  for (int n = 1; n <= 3; ++n) {
    auto perms = all_permutations(n);
    long long count = 1LL << perms.size();
    SignTable bigons = materialize(sign_function(shared_evaluator(n)), n, "bigons");
    for (long long mask = 0; mask < count; ++mask) {
      std::map<std::string, int8_t> per_sigma;
      for (size_t k = 0; k < perms.size(); ++k)
        per_sigma[perm_key(perms[k])] = (mask >> k) & 1 ? -1 : 1;
      GaugeMap u = restricted_gauge(n, per_sigma);
      CHECK(u.restricted);
      SignTable moved = apply_gauge(bigons, u);
      CHECK(moved.entries == bigons.entries);
    }
  }
}

TEST_CASE("find_gauge round trip recovers the gauge up to a global sign") {
  SignTable t = materialize(sign_function(shared_evaluator(2)), 2, "all_flows");
  GaugeMap u = random_gauge(2, 424242);
  SignTable moved = apply_gauge(t, u);
  auto got = find_gauge(t, moved);
  REQUIRE(got.has_value());
  int ratio = 0;
  for (const auto& [k, v] : got->u) {
    int r = v * u.u.at(k);
    if (!ratio) ratio = r;
    CHECK(r == ratio);
  }
  auto self = find_gauge(t, t);
  REQUIRE(self.has_value());
  int global = 0;
  for (const auto& [k, v] : self->u) {
    (void)k;
    if (!global) global = v;
    CHECK(v == global);
  }
}

TEST_CASE("find_gauge distinguishes genuinely different sign data") {
  SignTable t = materialize(sign_function(shared_evaluator(2)), 2, "all_flows");
  SignTable broken = t;
  // a single negated entry cannot be a gauge move
  broken.entries.begin()->second =
      static_cast<int8_t>(-broken.entries.begin()->second);
  CHECK_FALSE(find_gauge(t, broken).has_value());

  SignTable p1 = solve_profile1(2).table;
  CHECK_THROWS_AS(find_gauge(t, p1), ScopeMismatch);
}

TEST_CASE("parity character and the twisted assignment") {
  CHECK(parity_character(gen({1, 2}, {1, 1})) == 1);
  CHECK(parity_character(gen({2, 1}, {1, 1})) == -1);
  CHECK(parity_character(gen({1, 2}, {-1, 1})) == -1);

  for (int n = 1; n <= 2; ++n) {
    SignFunction s = sign_function(shared_evaluator(n));
    SignFunction tw = parity_twist(s);
    VerifyReport standard = verify(tw, n, FamAll, false);
    VerifyReport swapped = verify(tw, n, FamAll, true);
    CHECK_FALSE(standard.ok());  // degeneration products are reversed
    CHECK(swapped.ok());
    // squares are untouched by the twist
    for (const auto& v : standard.violations) CHECK(v.family == "degenerations");
  }
}

TEST_CASE("restriction to a smaller power is again a sign assignment") {
  SignFunction s3 = sign_function(shared_evaluator(3));
  for (int8_t fixed : {int8_t{1}, int8_t{-1}}) {
    SignFunction s2 = restrict_power(s3, fixed);
    CHECK(s2.power == 2);
    CHECK(verify(s2, 2, FamAll).ok());
  }
  // both restrictions and the direct power-2 evaluator agree up to gauge
  SignTable a = materialize(restrict_power(s3, 1), 2, "all_flows");
  SignTable b = materialize(restrict_power(s3, -1), 2, "all_flows");
  SignTable direct = materialize(sign_function(shared_evaluator(2)), 2, "all_flows");
  CHECK(find_gauge(a, b).has_value());
  CHECK(find_gauge(a, direct).has_value());

  SignFunction s1 = restrict_power(sign_function(shared_evaluator(2)), 1);
  SignTable r1 = materialize(s1, 1, "all_flows");
  SignTable d1 = materialize(sign_function(shared_evaluator(1)), 1, "all_flows");
  CHECK(find_gauge(r1, d1).has_value());
}

TEST_CASE("verify: clean pass, perturbation detection, gauge stability") {
  for (int n = 1; n <= 3; ++n) {
    VerifyReport rep = verify(sign_function(shared_evaluator(n)), n, FamAll);
    CHECK(rep.ok());
    CHECK(rep.total_checked() > 0);
  }

  // one corrupted table entry must surface as a violation
  auto broken = std::make_shared<SignTable>(
      materialize(sign_function(shared_evaluator(2)), 2, "all_flows"));
  auto it = broken->entries.find(
      FormalRectangle{gen({1, 2}, {1, 1}), 1, 2, 1, 1, 1, 1}.key());
  REQUIRE(it != broken->entries.end());
  it->second = static_cast<int8_t>(-it->second);
  VerifyReport rep = verify(sign_function(broken), 2, FamAll);
  CHECK_FALSE(rep.ok());
  CHECK(rep.violations.size() > 0);
  CHECK(rep.violations.front().flow_keys.size() >= 2);

  // gauge transforms preserve every relation row
  SignFunction gauged = seeded_gauge(sign_function(shared_evaluator(2)), 99);
  CHECK(verify(gauged, 2, FamAll).ok());
}

TEST_CASE("verify: sampled mode is deterministic and family-filtered") {
  SignFunction s = sign_function(shared_evaluator(4));
  VerifyReport a = verify(s, 4, FamAll, false, 2000, 7);
  VerifyReport b = verify(s, 4, FamAll, false, 2000, 7);
  CHECK(a.ok());
  CHECK(a.to_json() == b.to_json());
  VerifyReport c = verify(s, 4, FamDegenerations | FamFlip, false, 500, 1);
  CHECK(c.ok());
  CHECK(c.checked.count("degenerations") == 1);
  CHECK(c.checked.count("basic") == 0);
  // different jobs counts must not change the report
  VerifyReport d = verify(s, 4, FamAll, false, 2000, 7, 4);
  CHECK(a.to_json() == d.to_json());
}

TEST_CASE("conventional decomposition identity on the solved table (n=3,4)") {
  for (int n = 3; n <= 4; ++n) {
    SignTable table = solve_profile1(n).table;
    long long rects_with_interior = 0;
    for (const Perm& x : all_permutations(n)) {
      for (int bottom = 1; bottom <= n; ++bottom) {
        for (int top = 1; top <= n; ++top) {
          if (bottom == top) continue;
          std::vector<int> interior = interior_points(x, bottom, top);
          if (interior.empty()) continue;
          ++rects_with_interior;
          FormalRectangle r = rect_between_rows(x, bottom, top);
          int ref = 0;
          for (int k : interior) {
            // off-corner quadrant, then the full-height left block, then the
            // remaining quadrant
            FormalRectangle b_rect = rect_between_rows(x, k, top);
            Perm w1 = x;
            std::swap(w1[k - 1], w1[top - 1]);
            FormalRectangle ac_rect = rect_between_rows(w1, bottom, top);
            Perm w2 = w1;
            std::swap(w2[bottom - 1], w2[top - 1]);
            FormalRectangle d_rect = rect_between_rows(w2, bottom, k);
            int value = table.at(b_rect.key()) * table.at(ac_rect.key()) *
                        table.at(d_rect.key());
            CHECK(value == table.at(r.key()));
            if (ref == 0) ref = value;
            CHECK(value == ref);  // independent of the chosen interior point
          }
        }
      }
    }
    CHECK(rects_with_interior > 0);
  }
}

TEST_CASE("derived square identity at power 1") {
  // the composite of a bigon with the disk bounded the other way: for the
  // four power-1 bigons the product S(b) * S(a) * S(b) * S(d) over the two
  // routes is -1 whenever (a, d) is a beta-degeneration pair
  auto ev = shared_evaluator(1);
  auto [bigons, rects] = enumerate_flows(1);
  (void)rects;
  for (const auto& a : bigons) {
    FormalFlow fa{a};
    FormalFlow d = companion(fa, CompanionKind::Beta);
    for (const auto& b : bigons_from(flow_end(fa))) {
      int prod = ev->evaluate(FormalFlow{b}) * ev->evaluate(fa) *
                 ev->evaluate(FormalFlow{b}) * ev->evaluate(d);
      CHECK(prod == -1);
    }
  }
}

TEST_CASE("sign table JSON round trip") {
  SignTable t = solve_profile1(2).table;
  SignTable back = SignTable::from_json(t.to_json());
  CHECK(back.n == t.n);
  CHECK(back.scope == t.scope);
  CHECK(back.gauge_id == t.gauge_id);
  CHECK(back.entries == t.entries);
  CHECK(t.to_json().find("\"scope\"") != std::string::npos);
  CHECK_THROWS_AS(t.at("not-a-flow"), ScopeMismatch);
}

TEST_CASE("evaluator power checks and trailing coordinates") {
  SignEvaluator ev(2, 1);
  CHECK(ev.power() == 3);
  // flows moving only base coordinates evaluate through the base table
  FormalGenerator g = gen({1, 2, 3}, {1, 1, -1});
  FormalRectangle r{g, 1, 2, 1, 1, 1, 1};
  REQUIRE(validate_flow(FormalFlow{r}));
  int s = ev.evaluate(FormalFlow{r});
  CHECK((s == 1 || s == -1));
  // bigons at the trailing coordinate work by the closed formula
  FormalBigon b{g, 3, 1, -1};
  REQUIRE(validate_flow(FormalFlow{b}));
  CHECK(ev.evaluate(FormalFlow{b}) == bigon_sign(b));
  // wrong power is rejected
  FormalBigon small{gen({1}, {1}), 1, 1, 1};
  CHECK_THROWS_AS(ev.evaluate(FormalFlow{small}), PowerMismatch);
  // a rectangle moving the trailing coordinate is out of scope
  FormalRectangle bad{gen({1, 3, 2}, {1, 1, 1}), 2, 3, 1, 1, 1, 1};
  REQUIRE(validate_flow(FormalFlow{bad}));
  CHECK_THROWS_AS(ev.evaluate(FormalFlow{bad}), ScopeMismatch);
}
