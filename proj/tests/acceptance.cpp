// Acceptance suite: every check prints one PASS/FAIL line; the binary exits
// nonzero when any check fails.
#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hfsign/common.hpp"
#include "hfsign/homology.hpp"

using namespace hfsign;

namespace {

int failures = 0;

void criterion(int number, const std::string& label, const std::function<bool()>& body) {
  bool ok = false;
  std::string note;
  try {
    ok = body();
  } catch (const std::exception& e) {
    note = std::string(" (") + e.what() + ")";
  }
  std::printf("[%s] criterion %2d: %s%s\n", ok ? "PASS" : "FAIL", number, label.c_str(),
              note.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

SignFunction diagram_signs(const GridDiagram& d) {
  return sign_function(shared_evaluator(d.n, d.b_stabilizations));
}

GridDiagram unknot_grid() { return GridDiagram::make(2, {1, 2}, Perm{2, 1}); }

GridDiagram trefoil_grid() {
  return GridDiagram::make(5, {1, 2, 3, 4, 5}, Perm{3, 4, 5, 1, 2});
}

GridDiagram figure_eight_grid() {
  return GridDiagram::make(6, {6, 1, 4, 5, 3, 2}, Perm{3, 5, 6, 2, 1, 4});
}

// the d^2 and stabilization corpus: 20 seeded O-permutation spheres per size
// plus the three knot diagrams
std::vector<GridDiagram> corpus() {
  std::vector<GridDiagram> out;
  Rng rng(20260808);
  for (int n = 2; n <= 6; ++n)
    for (int k = 0; k < 20; ++k) out.push_back(GridDiagram::make(n, rng.permutation(n)));
  out.push_back(unknot_grid());
  out.push_back(trefoil_grid());
  out.push_back(figure_eight_grid());
  return out;
}

GridDiagram random_spec(const GridDiagram& d, Rng& rng) {
  GridDiagram v = d;
  v.alpha_order = rng.permutation(d.n);
  v.beta_order = rng.permutation(d.n);
  for (int k = 0; k < d.n; ++k) {
    v.alpha_orient[k] = static_cast<int8_t>(rng.sign());
    v.beta_orient[k] = static_cast<int8_t>(rng.sign());
  }
  return v;
}

bool torsion_doubles(const HomologyResult& base, const HomologyResult& stab) {
  std::vector<std::string> expect, got;
  for (const auto& t : base.torsion) {
    expect.push_back(t.str());
    expect.push_back(t.str());
  }
  for (const auto& t : stab.torsion) got.push_back(t.str());
  std::sort(expect.begin(), expect.end());
  std::sort(got.begin(), got.end());
  return expect == got;
}

}  // namespace

int main() {
  criterion(1, "formal object counts for n = 1..5 (8/32/32 at n = 2)", [] {
    for (int n = 1; n <= 5; ++n) {
      auto gens = enumerate_generators(n);
      auto [bigons, rects] = enumerate_flows(n);
      if (static_cast<long long>(gens.size()) != generator_count(n)) return false;
      if (static_cast<long long>(bigons.size()) != 2LL * n * generator_count(n))
        return false;
      if (static_cast<long long>(rects.size()) != 2LL * n * (n - 1) * generator_count(n))
        return false;
    }
    return generator_count(2) == 8 && bigon_count(2) == 32 && rectangle_count(2) == 32;
  });

  criterion(2, "existence: global solve n = 1..3, profile-1 solve n = 2..6", [] {
    for (int n = 1; n <= 3; ++n) solve_global(n);  // throws if inconsistent
    for (int n = 2; n <= 6; ++n) solve_profile1(n);
    return true;
  });

  criterion(3, "uniqueness up to gauge: dimensions 1, 7, 47", [] {
    return solve_global(1).dimension == 1 && solve_global(2).dimension == 7 &&
           solve_global(3).dimension == 47;
  });

  criterion(4, "power-1 bigon signs pair as S(A)=S(B)=-S(C)=-S(D)", [] {
    auto ev = shared_evaluator(1);
    auto [bigons, rects] = enumerate_flows(1);
    (void)rects;
    for (const auto& a : bigons) {
      FormalFlow fa{a};
      int sa = ev->evaluate(fa);
      if (ev->evaluate(companion(fa, CompanionKind::Alpha)) != sa) return false;
      if (ev->evaluate(companion(fa, CompanionKind::Beta)) != -sa) return false;
      if (ev->evaluate(companion(companion(fa, CompanionKind::Beta),
                                 CompanionKind::Alpha)) != -sa)
        return false;
    }
    return true;
  });

  criterion(5, "axioms: exhaustive n = 1..3, 100000 seeded samples at n = 4, 5", [] {
    for (int n = 1; n <= 3; ++n)
      if (!verify(sign_function(shared_evaluator(n)), n, FamAll).ok()) return false;
    for (int n = 4; n <= 5; ++n) {
      VerifyReport rep =
          verify(sign_function(shared_evaluator(n)), n, FamAll, false, 100000, 2026, 4);
      if (!rep.ok() || rep.total_checked() < 100000) return false;
    }
    return true;
  });

  criterion(6, "evaluator is gauge equivalent to the solved table, n = 2, 3", [] {
    for (int n = 2; n <= 3; ++n) {
      SignTable evt = materialize(sign_function(shared_evaluator(n)), n, "all_flows");
      if (!find_gauge(evt, solve_global(n).table).has_value()) return false;
    }
    return true;
  });

  criterion(7, "conventional decomposition identity and choice independence, n = 4, 5", [] {
    auto cyc_dist = [](int from, int to, int n) { return ((to - from) % n + n) % n; };
    auto cyc_between = [&](int from, int to, int v, int n) {
      int off = cyc_dist(from, v, n);
      return off > 0 && off < cyc_dist(from, to, n);
    };
    for (int n = 4; n <= 5; ++n) {
      SignTable table = solve_profile1(n).table;
      auto rect_of = [&](const Perm& x, int bottom, int top) {
        FormalRectangle r;
        r.start.sigma = x;
        r.start.epsilon.assign(n, 1);
        r.i = std::min(bottom, top);
        r.j = std::max(bottom, top);
        int8_t v = bottom < top ? 1 : -1;
        r.o_bottom = r.o_top = r.o_left = r.o_right = v;
        return r;
      };
      long long positive_complexity = 0;
      for (const Perm& x : all_permutations(n)) {
        for (int bottom = 1; bottom <= n; ++bottom) {
          for (int top = 1; top <= n; ++top) {
            if (bottom == top) continue;
            std::vector<int> interior;
            for (int k = 1; k <= n; ++k) {
              if (k == bottom || k == top) continue;
              if (cyc_between(bottom, top, k, n) &&
                  cyc_between(x[bottom - 1], x[top - 1], x[k - 1], n))
                interior.push_back(k);
            }
            if (interior.empty()) continue;
            ++positive_complexity;
            int ref = table.at(rect_of(x, bottom, top).key());
            for (int k : interior) {
              Perm w1 = x;
              std::swap(w1[k - 1], w1[top - 1]);
              Perm w2 = w1;
              std::swap(w2[bottom - 1], w2[top - 1]);
              int value = table.at(rect_of(x, k, top).key()) *
                          table.at(rect_of(w1, bottom, top).key()) *
                          table.at(rect_of(w2, bottom, k).key());
              if (value != ref) return false;  // identity and independence at once
            }
          }
        }
      }
      if (positive_complexity == 0) return false;
    }
    return true;
  });

  criterion(8, "the parity twist passes the role-swapped axioms, n = 1..3", [] {
    for (int n = 1; n <= 3; ++n) {
      SignFunction tw = parity_twist(sign_function(shared_evaluator(n)));
      if (!verify(tw, n, FamAll, true).ok()) return false;
      if (verify(tw, n, FamAll, false).ok()) return false;  // and fails the plain ones
    }
    return true;
  });

  criterion(9, "restricted gauges fix every bigon sign, n = 1..3", [] {
    for (int n = 1; n <= 3; ++n) {
      SignTable bigons = materialize(sign_function(shared_evaluator(n)), n, "bigons");
      auto perms = all_permutations(n);
      for (long long mask = 0; mask < (1LL << perms.size()); ++mask) {
        std::map<std::string, int8_t> per_sigma;
        for (size_t k = 0; k < perms.size(); ++k)
          per_sigma[perm_key(perms[k])] = (mask >> k) & 1 ? -1 : 1;
        if (!(apply_gauge(bigons, restricted_gauge(n, per_sigma)).entries ==
              bigons.entries))
          return false;
      }
    }
    return true;
  });

  criterion(10, "d^2 = 0 over Z across the diagram corpus with stabilizations and specs", [] {
    Rng rng(424242);
    for (const GridDiagram& d : corpus()) {
      if (!d_squared_is_zero(d, diagram_signs(d)).zero) return false;
      GridDiagram s1 = b_stabilize(d);
      GridDiagram s2 = b_stabilize(s1);
      if (!d_squared_is_zero(s1, diagram_signs(s1)).zero) return false;
      if (!d_squared_is_zero(s2, diagram_signs(s2)).zero) return false;
      for (int t = 0; t < 5; ++t) {
        GridDiagram v = random_spec(d, rng);
        if (!d_squared_is_zero(v, diagram_signs(v)).zero) return false;
      }
    }
    return true;
  });

  criterion(11, "sphere grids: homology Z^(2^(n-1)), torsion free, mod-2 oracle", [] {
    Rng rng(555);
    for (int n = 2; n <= 6; ++n) {
      std::vector<Perm> os{identity_perm(n), rng.permutation(n), rng.permutation(n)};
      for (const Perm& O : os) {
        GridDiagram d = GridDiagram::make(n, O);
        HomologyResult h = homology(d, diagram_signs(d));
        long long expect = 1LL << (n - 1);
        if (h.betti != expect || !h.torsion.empty()) return false;
        if (h.q_rank != h.betti) return false;
        if (gf2_homology_dimension(d) != expect || h.f2_dim != expect) return false;
      }
    }
    return true;
  });

  criterion(12, "link mode: unknot Z^2; trefoil free rank 48 with mod-2 oracle", [] {
    GridDiagram u = unknot_grid();
    HomologyResult hu = homology(u, diagram_signs(u));
    if (hu.betti != 2 || !hu.torsion.empty()) return false;
    GridDiagram t = trefoil_grid();
    HomologyResult ht = homology(t, diagram_signs(t));
    if (ht.betti != 48 || !ht.torsion.empty()) return false;
    return gf2_homology_dimension(t) == 48 && ht.f2_dim == 48 && ht.q_rank == 48;
  });

  criterion(13, "type-b stabilization doubles betti and torsion multiplicities", [] {
    for (const GridDiagram& d : corpus()) {
      HomologyResult base = homology(d, diagram_signs(d));
      GridDiagram s = b_stabilize(d);
      HomologyResult stab = homology(s, diagram_signs(s));
      if (stab.betti != 2 * base.betti) return false;
      if (!torsion_doubles(base, stab)) return false;
    }
    return true;
  });

  criterion(14, "homology is independent of gauges, curve orders, orientations", [] {
    Rng rng(987654321);
    for (const GridDiagram& d : corpus()) {
      SignFunction s = diagram_signs(d);
      HomologyResult ref = homology(d, s);
      for (int t = 0; t < 5; ++t)
        if (!(homology(d, seeded_gauge(s, rng.next())) == ref)) return false;
      for (int t = 0; t < 5; ++t) {
        GridDiagram v = d;
        v.alpha_order = rng.permutation(d.n);
        v.beta_order = rng.permutation(d.n);
        if (!(homology(v, diagram_signs(v)) == ref)) return false;
      }
      for (int t = 0; t < 5; ++t) {
        GridDiagram v = d;
        for (int k = 0; k < d.n; ++k) {
          v.alpha_orient[k] = static_cast<int8_t>(rng.sign());
          v.beta_orient[k] = static_cast<int8_t>(rng.sign());
        }
        if (!(homology(v, diagram_signs(v)) == ref)) return false;
      }
    }
    return true;
  });

  criterion(15, "convention calibration: companions, basic variants, solver rows, stabilization", [] {
    // companion algebra
    for (int n = 1; n <= 3; ++n) {
      for (const auto& g : enumerate_generators(n)) {
        for (const FormalFlow& f : flows_from_generator(g)) {
          for (CompanionKind k : {CompanionKind::Alpha, CompanionKind::Beta}) {
            FormalFlow c = companion(f, k);
            if (!validate_flow(c) || flow_key(companion(c, k)) != flow_key(f))
              return false;
            if (!(flow_start(c) == flow_end(f)) || !(flow_end(c) == flow_start(f)))
              return false;
          }
          if (flow_key(companion(f, CompanionKind::Alpha)) ==
              flow_key(companion(f, CompanionKind::Beta)))
            return false;
        }
      }
    }
    // the four basic-relation variants agree at n = 2
    {
      auto [bigons, rects] = enumerate_flows(2);
      (void)bigons;
      for (const auto& r : rects) {
        for (RectEdge e :
             {RectEdge::Bottom, RectEdge::Top, RectEdge::Left, RectEdge::Right}) {
          FormalRectangle rev = reverse_edge(r, e);
          int want = 2;
          for (const FormalRectangle& base : {r, rev}) {
            for (BasicEndpoint ep :
                 {BasicEndpoint::StartCorner, BasicEndpoint::EndCorner}) {
              RelationInstance rel = basic_relation(base, e, ep);
              int c = -bigon_sign(std::get<FormalBigon>(rel.flows[1])) *
                      bigon_sign(std::get<FormalBigon>(rel.flows[2]));
              if (want == 2) want = c;
              else if (want != c) return false;
            }
          }
        }
      }
    }
    // every emitted relation row holds for the solved tables at n = 2, 3
    for (int n = 2; n <= 3; ++n) {
      auto table = std::make_shared<SignTable>(solve_global(n).table);
      if (!verify(sign_function(table), n, FamAll).ok()) return false;
    }
    // stabilization conventions: canceling bigons and doubled spheres
    {
      GridDiagram d = GridDiagram::make(2, {1, 2});
      GridDiagram s = b_stabilize(d);
      SignFunction signs = diagram_signs(s);
      for (const auto& g : generators(s)) {
        std::vector<FormalFlow> images;
        for (const auto& [f, y] : flows_from(s, g)) {
          (void)y;
          if (std::holds_alternative<StabBigonFlow>(f))
            images.push_back(to_formal(s, f, g));
        }
        if (images.size() == 2 && signs(images[0]) != -signs(images[1])) return false;
      }
      HomologyResult h0 = homology(d, diagram_signs(d));
      HomologyResult h1 = homology(s, signs);
      if (h1.betti != 2 * h0.betti) return false;
    }
    return true;
  });

  std::printf("%s\n", failures == 0 ? "acceptance: all criteria passed"
                                    : "acceptance: FAILURES present");
  return failures == 0 ? 0 : 1;
}
