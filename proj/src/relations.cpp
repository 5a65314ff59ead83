#include "hfsign/relations.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <sstream>

#include "hfsign/common.hpp"

namespace hfsign {

namespace {

FormalFlow with_data_from(const FormalFlow& pattern, const FormalGenerator& start) {
  if (const auto* b = std::get_if<FormalBigon>(&pattern)) {
    FormalBigon out = *b;
    out.start = start;
    return out;
  }
  FormalRectangle out = std::get<FormalRectangle>(pattern);
  out.start = start;
  return out;
}

bool coords_disjoint(const FormalFlow& a, const FormalFlow& b) {
  for (int p : moving_coords(a))
    for (int q : moving_coords(b))
      if (p == q) return false;
  return true;
}

// --- torus-grid realization of the all-plus profile sector ---

struct TorusRect {
  int i = 1, j = 2;   // moving rows, i < j
  bool high = false;  // false: bottom edge on row i; true: the vertically
                      // wrapping complement with the bottom edge on row j
};

FormalGenerator profile1_gen(const Perm& x) {
  FormalGenerator g;
  g.sigma = x;
  g.epsilon.assign(x.size(), 1);
  return g;
}

FormalRectangle torus_to_formal(const Perm& x, const TorusRect& t) {
  FormalRectangle r;
  r.start = profile1_gen(x);
  r.i = t.i;
  r.j = t.j;
  int8_t v = t.high ? -1 : 1;
  r.o_bottom = r.o_top = r.o_left = r.o_right = v;
  return r;
}

Perm rect_end_perm(const Perm& x, const TorusRect& t) {
  Perm y = x;
  std::swap(y[t.i - 1], y[t.j - 1]);
  return y;
}

// cell multiplicities, cell (c, r) at index (r-1)*n + (c-1)
std::vector<int> torus_domain(const Perm& x, const TorusRect& t, int n) {
  std::vector<int> dom(n * n, 0);
  int row_from = t.high ? t.j : t.i;
  int height = t.high ? n - (t.j - t.i) : t.j - t.i;
  int col_from = t.high ? x[t.j - 1] : x[t.i - 1];
  int col_to = t.high ? x[t.i - 1] : x[t.j - 1];
  int width = ((col_to - col_from) % n + n) % n;
  for (int dr = 0; dr < height; ++dr) {
    int r = (row_from - 1 + dr) % n + 1;
    for (int dc = 0; dc < width; ++dc) {
      int c = (col_from - 1 + dc) % n + 1;
      dom[(r - 1) * n + (c - 1)] += 1;
    }
  }
  return dom;
}

std::vector<TorusRect> torus_rects(int n) {
  std::vector<TorusRect> out;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (bool high : {false, true}) out.push_back({i, j, high});
  return out;
}

struct DomainTable {
  // domain hash -> (rect index, domain)
  std::unordered_map<uint64_t, std::vector<int>> by_hash;
  std::vector<TorusRect> rects;
  std::vector<std::vector<int>> domains;
};

uint64_t domain_hash(const std::vector<int>& dom) {
  uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (int v : dom) h = hash_combine(h, static_cast<uint64_t>(v + 1));
  return h;
}

DomainTable build_domain_table(const Perm& x, int n) {
  DomainTable t;
  t.rects = torus_rects(n);
  t.domains.reserve(t.rects.size());
  for (size_t k = 0; k < t.rects.size(); ++k) {
    t.domains.push_back(torus_domain(x, t.rects[k], n));
    t.by_hash[domain_hash(t.domains.back())].push_back(static_cast<int>(k));
  }
  return t;
}

}  // namespace

const char* family_name(RelationFamily f) {
  switch (f) {
    case FamDegenerations: return "degenerations";
    case FamDisjoint: return "disjoint";
    case FamGrid: return "grid";
    case FamFlip: return "flip";
    case FamBasic: return "basic";
    default: return "all";
  }
}

unsigned parse_families(const std::string& csv) {
  unsigned out = 0;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item == "all") out |= FamAll;
    else if (item == "degenerations") out |= FamDegenerations;
    else if (item == "disjoint") out |= FamDisjoint;
    else if (item == "grid") out |= FamGrid;
    else if (item == "flip") out |= FamFlip;
    else if (item == "basic") out |= FamBasic;
    else throw UsageError("unknown relation family: " + item);
  }
  if (out == 0) throw UsageError("no relation families selected");
  return out;
}

bool RelationInstance::well_formed() const {
  if (kind == Kind::Square) {
    if (flows.size() != 4) return false;
    const auto& f1 = flows[0];
    const auto& f2 = flows[1];
    const auto& f3 = flows[2];
    const auto& f4 = flows[3];
    for (const auto& f : flows)
      if (!validate_flow(f)) return false;
    return flow_start(f1) == flow_start(f3) && flow_end(f1) == flow_start(f2) &&
           flow_end(f3) == flow_start(f4) && flow_end(f2) == flow_end(f4) &&
           !(flow_start(f1) == flow_end(f2));
  }
  if (flows.size() != 2) return false;
  for (const auto& f : flows)
    if (!validate_flow(f)) return false;
  CompanionKind k =
      kind == Kind::AlphaDegeneration ? CompanionKind::Alpha : CompanionKind::Beta;
  return flow_key(companion(flows[0], k)) == flow_key(flows[1]);
}

int RelationInstance::expected_product(bool swapped_roles) const {
  switch (kind) {
    case Kind::AlphaDegeneration: return swapped_roles ? -1 : 1;
    case Kind::BetaDegeneration: return swapped_roles ? 1 : -1;
    default: return -1;
  }
}

std::pair<FormalFlow, FormalFlow> disjoint_partner(const FormalFlow& f1,
                                                   const FormalFlow& f2) {
  if (!validate_flow(f1) || !validate_flow(f2))
    throw InvalidFlow("disjoint_partner input");
  if (!(flow_end(f1) == flow_start(f2)))
    throw NotComposable("flows do not compose");
  if (!coords_disjoint(f1, f2))
    throw SharedCoordinates("moving coordinates overlap");
  FormalFlow f3 = with_data_from(f2, flow_start(f1));
  FormalFlow f4 = with_data_from(f1, flow_end(f3));
  if (!validate_flow(f3) || !validate_flow(f4) || !(flow_end(f4) == flow_end(f2)))
    throw InvalidFlow("disjoint_partner produced a bad pair");
  return {f3, f4};
}

std::vector<RelationInstance> grid_composites(const Perm& x, int n) {
  if (!is_permutation(x) || static_cast<int>(x.size()) != n)
    throw Error("grid_composites: not a permutation of the stated size");
  std::vector<RelationInstance> out;
  if (n < 2) return out;

  DomainTable from_x = build_domain_table(x, n);
  std::map<Perm, DomainTable> tables;  // from intermediate/start generators
  auto table_for = [&](const Perm& g) -> DomainTable& {
    auto it = tables.find(g);
    if (it == tables.end()) it = tables.emplace(g, build_domain_table(g, n)).first;
    return it->second;
  };

  std::set<std::vector<std::string>> seen;
  for (size_t a = 0; a < from_x.rects.size(); ++a) {
    Perm y = rect_end_perm(x, from_x.rects[a]);
    DomainTable& from_y = table_for(y);
    for (size_t b = 0; b < from_y.rects.size(); ++b) {
      Perm z = rect_end_perm(y, from_y.rects[b]);
      if (z == x) continue;
      std::vector<int> dom = from_x.domains[a];
      for (size_t k = 0; k < dom.size(); ++k) dom[k] += from_y.domains[b][k];

      // every ordered decomposition of dom into two stacked rectangles from x
      std::vector<std::pair<FormalRectangle, FormalRectangle>> decomps;
      for (size_t s1 = 0; s1 < from_x.rects.size(); ++s1) {
        std::vector<int> rem = dom;
        bool ok = true;
        const auto& d1 = from_x.domains[s1];
        for (size_t k = 0; k < rem.size() && ok; ++k) {
          rem[k] -= d1[k];
          if (rem[k] < 0) ok = false;
        }
        if (!ok) continue;
        Perm w = rect_end_perm(x, from_x.rects[s1]);
        DomainTable& from_w = table_for(w);
        auto hit = from_w.by_hash.find(domain_hash(rem));
        if (hit == from_w.by_hash.end()) continue;
        for (int cand : hit->second) {
          if (from_w.domains[cand] != rem) continue;
          if (rect_end_perm(w, from_w.rects[cand]) != z) continue;
          decomps.push_back({torus_to_formal(x, from_x.rects[s1]),
                             torus_to_formal(w, from_w.rects[cand])});
        }
      }
      // Composites wrapping in both torus directions can lose the second cut;
      // their relations follow from planar squares and degeneration rows, so
      // they carry no row of their own.
      if (decomps.size() == 1) continue;
      if (decomps.size() != 2)
        throw DecompositionCountMismatch(
            "composite from " + perm_key(x) + " has " +
            std::to_string(decomps.size()) + " decompositions");

      RelationInstance rel;
      rel.kind = RelationInstance::Kind::Square;
      rel.family = "grid";
      rel.rhs = 1;
      rel.flows = {decomps[0].first, decomps[0].second, decomps[1].first,
                   decomps[1].second};
      std::vector<std::string> sig = {flow_key(rel.flows[0]), flow_key(rel.flows[1]),
                                      flow_key(rel.flows[2]), flow_key(rel.flows[3])};
      std::sort(sig.begin(), sig.end());
      if (!seen.insert(sig).second) continue;
      if (!rel.well_formed())
        throw Error("grid_composites produced a malformed square");
      out.push_back(std::move(rel));
    }
  }
  return out;
}

RelationInstance flip_square(const FormalRectangle& r, int p) {
  FormalRectangle flipped = simple_flip(r, p);  // validates r and p
  int8_t eps = r.start.epsilon[p - 1];
  FormalBigon before{r.start, p, 1, eps};
  FormalBigon after{r.end(), p, 1, eps};
  FormalRectangle mid = flipped;
  mid.start = before.end();
  RelationInstance rel;
  rel.kind = RelationInstance::Kind::Square;
  rel.family = "flip";
  rel.rhs = 1;
  rel.flows = {FormalFlow{before}, FormalFlow{mid}, FormalFlow{r}, FormalFlow{after}};
  if (!rel.well_formed()) throw Error("flip_square produced a malformed square");
  return rel;
}

RelationInstance basic_relation(const FormalRectangle& A, RectEdge edge,
                                BasicEndpoint endpoint) {
  if (!validate_flow(FormalFlow{A})) throw InvalidFlow("basic_relation: " + A.key());
  const FormalGenerator x = A.start;
  const FormalGenerator y = A.end();
  const FormalRectangle AB = reverse_edge(A, edge);
  const FormalGenerator w = AB.start;
  const FormalGenerator z = AB.end();
  const int i = A.i, j = A.j;
  const int8_t b = A.o_bottom, t = A.o_top, l = A.o_left, r = A.o_right;

  FormalBigon b1, b2;  // b1 after A / before A, b2 closing the other path
  bool start_variant = endpoint == BasicEndpoint::StartCorner;
  switch (edge) {
    case RectEdge::Bottom:
      if (start_variant) {
        b1 = {y, i, static_cast<int8_t>(-b), static_cast<int8_t>(-r)};
        b2 = {x, i, static_cast<int8_t>(-b), static_cast<int8_t>(-l)};
      } else {
        b1 = {z, i, static_cast<int8_t>(-b), r};
        b2 = {w, i, static_cast<int8_t>(-b), l};
      }
      break;
    case RectEdge::Top:
      if (start_variant) {
        b1 = {y, j, t, l};
        b2 = {x, j, t, r};
      } else {
        b1 = {z, j, t, static_cast<int8_t>(-l)};
        b2 = {w, j, t, static_cast<int8_t>(-r)};
      }
      break;
    case RectEdge::Left:
      if (start_variant) {
        b1 = {y, j, static_cast<int8_t>(-t), static_cast<int8_t>(-l)};
        b2 = {x, i, static_cast<int8_t>(-b), static_cast<int8_t>(-l)};
      } else {
        b1 = {z, j, t, static_cast<int8_t>(-l)};
        b2 = {w, i, b, static_cast<int8_t>(-l)};
      }
      break;
    case RectEdge::Right:
      if (start_variant) {
        b1 = {y, i, b, r};
        b2 = {x, j, t, r};
      } else {
        b1 = {z, i, static_cast<int8_t>(-b), r};
        b2 = {w, j, static_cast<int8_t>(-t), r};
      }
      break;
  }

  RelationInstance rel;
  rel.kind = RelationInstance::Kind::Square;
  rel.family = "basic";
  rel.rhs = 1;
  if (start_variant)
    rel.flows = {FormalFlow{A}, FormalFlow{b1}, FormalFlow{b2}, FormalFlow{AB}};
  else
    rel.flows = {FormalFlow{AB}, FormalFlow{b1}, FormalFlow{b2}, FormalFlow{A}};
  if (!rel.well_formed()) throw Error("basic_relation produced a malformed square");
  return rel;
}

void for_each_relation(int n, unsigned families,
                       const std::function<void(const RelationInstance&)>& fn) {
  auto gens = enumerate_generators(n);

  if (families & FamDegenerations) {
    for (const auto& g : gens) {
      for (const FormalFlow& f : flows_from_generator(g)) {
        for (CompanionKind k : {CompanionKind::Alpha, CompanionKind::Beta}) {
          FormalFlow c = companion(f, k);
          if (flow_key(f) > flow_key(c)) continue;  // each pair once
          RelationInstance rel;
          rel.kind = k == CompanionKind::Alpha
                         ? RelationInstance::Kind::AlphaDegeneration
                         : RelationInstance::Kind::BetaDegeneration;
          rel.family = "degenerations";
          rel.rhs = k == CompanionKind::Alpha ? 0 : 1;
          rel.flows = {f, c};
          fn(rel);
        }
      }
    }
  }

  if (families & FamDisjoint) {
    for (const auto& g : gens) {
      for (const FormalFlow& f1 : flows_from_generator(g)) {
        FormalGenerator mid = flow_end(f1);
        for (const FormalFlow& f2 : flows_from_generator(mid)) {
          if (!coords_disjoint(f1, f2)) continue;
          auto [f3, f4] = disjoint_partner(f1, f2);
          auto a = std::make_pair(flow_key(f1), flow_key(f2));
          auto bpair = std::make_pair(flow_key(f3), flow_key(f4));
          if (a > bpair) continue;  // each square once
          RelationInstance rel;
          rel.kind = RelationInstance::Kind::Square;
          rel.family = "disjoint";
          rel.rhs = 1;
          rel.flows = {f1, f2, f3, f4};
          fn(rel);
        }
      }
    }
  }

  if (families & FamGrid) {
    for (const Perm& p : all_permutations(n))
      for (const RelationInstance& rel : grid_composites(p, n)) fn(rel);
  }

  if (families & FamFlip) {
    for (const auto& g : gens) {
      for (const FormalRectangle& r : rectangles_from(g)) {
        for (int p = 1; p <= n; ++p) {
          if (p == r.i || p == r.j) continue;
          fn(flip_square(r, p));
        }
      }
    }
  }

  if (families & FamBasic) {
    for (const auto& g : gens) {
      for (const FormalRectangle& r : rectangles_from(g)) {
        for (RectEdge e : {RectEdge::Bottom, RectEdge::Top, RectEdge::Left,
                           RectEdge::Right}) {
          fn(basic_relation(r, e));
        }
      }
    }
  }
}

int GF2System::var(const std::string& key) const {
  auto it = index.find(key);
  if (it == index.end()) throw Error("unknown variable: " + key);
  return it->second;
}

std::string GF2System::to_text() const {
  std::ostringstream os;
  os << "vars " << var_keys.size() << " rows " << rows.size() << "\n";
  for (const auto& row : rows) {
    for (size_t k = 0; k < row.vars.size(); ++k) {
      if (k) os << ' ';
      os << row.vars[k];
    }
    os << " | " << row.rhs << "\n";
  }
  return os.str();
}

GF2System enumerate_relation_rows(int n, unsigned families) {
  GF2System sys;
  auto [bigons, rects] = enumerate_flows(n);
  sys.var_keys.reserve(bigons.size() + rects.size());
  for (const auto& b : bigons) sys.var_keys.push_back(b.key());
  for (const auto& r : rects) sys.var_keys.push_back(r.key());
  for (size_t k = 0; k < sys.var_keys.size(); ++k)
    sys.index.emplace(sys.var_keys[k], static_cast<int>(k));

  std::set<std::pair<std::vector<int>, int>> seen;
  for_each_relation(n, families, [&](const RelationInstance& rel) {
    GF2Row row;
    row.rhs = rel.rhs;
    row.family = rel.family;
    for (const auto& f : rel.flows) row.vars.push_back(sys.var(flow_key(f)));
    std::sort(row.vars.begin(), row.vars.end());
    if (!seen.insert({row.vars, row.rhs}).second) return;
    sys.rows.push_back(std::move(row));
  });
  return sys;
}

}  // namespace hfsign
