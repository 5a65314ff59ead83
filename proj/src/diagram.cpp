#include "hfsign/diagram.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

namespace hfsign {

namespace {

using nlohmann::json;

int mod1(int v, int n) { return ((v - 1) % n + n) % n + 1; }  // wrap into 1..n

int cyc_dist(int from, int to, int n) { return ((to - from) % n + n) % n; }

// strict cyclic betweenness: v in the open interval (from, to)
bool cyc_between(int from, int to, int v, int n) {
  int width = cyc_dist(from, to, n);
  int off = cyc_dist(from, v, n);
  return off > 0 && off < width;
}

}  // namespace

GridDiagram GridDiagram::make(int n, Perm O, std::optional<Perm> X) {
  GridDiagram d;
  d.n = n;
  d.O = std::move(O);
  d.X = std::move(X);
  d.alpha_order = identity_perm(n);
  d.beta_order = identity_perm(n);
  d.alpha_orient.assign(n, 1);
  d.beta_orient.assign(n, 1);
  auto check = validate_diagram(d);
  if (!check.ok) throw BadDiagram(check.diagnostic);
  return d;
}

DiagramValidation validate_diagram(const GridDiagram& d) {
  auto fail = [](std::string msg) { return DiagramValidation{false, std::move(msg)}; };
  if (d.n < 1) return fail("grid size must be positive");
  if (static_cast<int>(d.O.size()) != d.n) return fail("O must have one entry per row");
  if (!is_permutation(d.O)) return fail("O markings must hit every column once");
  if (d.X) {
    if (static_cast<int>(d.X->size()) != d.n)
      return fail("X must have one entry per row");
    if (!is_permutation(*d.X)) return fail("X markings must hit every column once");
    for (int r = 0; r < d.n; ++r)
      if ((*d.X)[r] == d.O[r]) return fail("X and O share a cell in row " + std::to_string(r + 1));
  }
  if (static_cast<int>(d.alpha_order.size()) != d.n || !is_permutation(d.alpha_order))
    return fail("alpha_order must be a permutation of the rows");
  if (static_cast<int>(d.beta_order.size()) != d.n || !is_permutation(d.beta_order))
    return fail("beta_order must be a permutation of the columns");
  if (static_cast<int>(d.alpha_orient.size()) != d.n ||
      static_cast<int>(d.beta_orient.size()) != d.n)
    return fail("orientation vectors must have one entry per curve");
  for (int8_t v : d.alpha_orient)
    if (v != 1 && v != -1) return fail("alpha orientations must be ±1");
  for (int8_t v : d.beta_orient)
    if (v != 1 && v != -1) return fail("beta orientations must be ±1");
  if (d.b_stabilizations < 0) return fail("negative stabilization count");
  return {};
}

std::string DiagramGenerator::key() const {
  std::string s = perm_key(base);
  s += '|';
  for (int8_t v : stab) s += v == 1 ? 'u' : 'd';
  return s;
}

std::vector<DiagramGenerator> generators(const GridDiagram& d) {
  auto check = validate_diagram(d);
  if (!check.ok) throw BadDiagram(check.diagnostic);
  std::vector<DiagramGenerator> out;
  int k = d.b_stabilizations;
  for (const Perm& p : all_permutations(d.n)) {
    for (long long mask = 0; mask < (1LL << k); ++mask) {
      DiagramGenerator g;
      g.base = p;
      g.stab.resize(k);
      for (int m = 0; m < k; ++m)
        g.stab[m] = (mask >> (k - 1 - m)) & 1 ? -1 : 1;  // u sorts before d
      out.push_back(std::move(g));
    }
  }
  return out;
}

namespace {

GridRectFlow make_grid_rect(const Perm& base, int i, int j, bool high, int n) {
  GridRectFlow f;
  f.i = i;
  f.j = j;
  f.high = high;
  if (!high) {
    f.row_from = i;
    f.row_to = j;
    f.col_from = base[i - 1];
    f.col_to = base[j - 1];
  } else {
    f.row_from = j;
    f.row_to = i;
    f.col_from = base[j - 1];
    f.col_to = base[i - 1];
  }
  f.wrap_v = high;
  f.wrap_h = cyc_dist(f.col_from, f.col_to, n) > 0 && f.col_to < f.col_from;
  return f;
}

bool rect_is_empty(const GridDiagram& d, const DiagramGenerator& x,
                   const GridRectFlow& f) {
  int n = d.n;
  int height = cyc_dist(f.row_from, f.row_to, n);
  int width = cyc_dist(f.col_from, f.col_to, n);
  for (int dr = 0; dr < height; ++dr) {
    int r = mod1(f.row_from + dr, n);
    for (int dc = 0; dc < width; ++dc) {
      int c = mod1(f.col_from + dc, n);
      if (d.O[r - 1] == c) return false;
      if (d.X && (*d.X)[r - 1] == c) return false;
    }
  }
  for (int r = 1; r <= n; ++r) {
    if (r == f.i || r == f.j) continue;
    if (cyc_between(f.row_from, f.row_to, r, n) &&
        cyc_between(f.col_from, f.col_to, x.base[r - 1], n))
      return false;
  }
  return true;
}

}  // namespace

std::vector<std::pair<DiagramFlow, DiagramGenerator>> flows_from(
    const GridDiagram& d, const DiagramGenerator& x) {
  auto check = validate_diagram(d);
  if (!check.ok) throw BadDiagram(check.diagnostic);
  if (static_cast<int>(x.base.size()) != d.n || !is_permutation(x.base) ||
      static_cast<int>(x.stab.size()) != d.b_stabilizations)
    throw BadDiagram("generator does not belong to the diagram");

  std::vector<std::pair<DiagramFlow, DiagramGenerator>> out;
  for (int i = 1; i <= d.n; ++i) {
    for (int j = i + 1; j <= d.n; ++j) {
      for (bool high : {false, true}) {
        GridRectFlow f = make_grid_rect(x.base, i, j, high, d.n);
        if (!rect_is_empty(d, x, f)) continue;
        DiagramGenerator y = x;
        std::swap(y.base[i - 1], y.base[j - 1]);
        out.push_back({DiagramFlow{f}, std::move(y)});
      }
    }
  }
  for (int m = 1; m <= d.b_stabilizations; ++m) {
    if (x.stab[m - 1] != 1) continue;  // bigons only run u -> d
    for (int variant : {1, 2}) {
      DiagramGenerator y = x;
      y.stab[m - 1] = -1;
      out.push_back({DiagramFlow{StabBigonFlow{m, variant}}, std::move(y)});
    }
  }
  return out;
}

FormalGenerator generator_to_formal(const GridDiagram& d, const DiagramGenerator& x) {
  int n = d.n;
  int k = d.b_stabilizations;
  FormalGenerator g;
  g.sigma.assign(n + k, 0);
  g.epsilon.assign(n + k, 1);
  for (int r = 1; r <= n; ++r) {
    int a = d.alpha_order[r - 1];
    int c = x.base[r - 1];
    g.sigma[a - 1] = d.beta_order[c - 1];
    g.epsilon[a - 1] =
        static_cast<int8_t>(d.alpha_orient[r - 1] * d.beta_orient[c - 1]);
  }
  for (int m = 1; m <= k; ++m) {
    g.sigma[n + m - 1] = n + m;
    g.epsilon[n + m - 1] = x.stab[m - 1];
  }
  return g;
}

FormalFlow to_formal(const GridDiagram& d, const DiagramFlow& flow,
                     const DiagramGenerator& x) {
  FormalGenerator start = generator_to_formal(d, x);
  if (const auto* sb = std::get_if<StabBigonFlow>(&flow)) {
    if (sb->unit < 1 || sb->unit > d.b_stabilizations ||
        x.stab[sb->unit - 1] != 1)
      throw FlowNotInDiagram("stabilization bigon not available from this generator");
    FormalBigon b;
    b.start = start;
    b.coord = d.n + sb->unit;
    b.o_alpha = sb->variant == 1 ? int8_t{1} : int8_t{-1};
    b.o_beta = b.o_alpha;  // start crossing sign is +1 in state u
    return b;
  }
  const auto& f = std::get<GridRectFlow>(flow);
  int rb = f.row_from;  // bottom edge row
  int rt = f.row_to;    // top edge row
  if (!(f.i >= 1 && f.j <= d.n && f.i < f.j))
    throw FlowNotInDiagram("rectangle rows out of range");
  GridRectFlow expect = make_grid_rect(x.base, f.i, f.j, f.high, d.n);
  if (expect.col_from != f.col_from || expect.col_to != f.col_to ||
      expect.row_from != f.row_from || expect.row_to != f.row_to)
    throw FlowNotInDiagram("rectangle corners do not sit on the generator");
  if (!rect_is_empty(d, x, f))
    throw FlowNotInDiagram("rectangle is not empty");
  int8_t geo_bottom = d.alpha_orient[rb - 1];
  int8_t geo_top = d.alpha_orient[rt - 1];
  int8_t geo_left = d.beta_orient[f.col_from - 1];
  int8_t geo_right = d.beta_orient[f.col_to - 1];
  int label_bottom = d.alpha_order[rb - 1];
  int label_top = d.alpha_order[rt - 1];

  FormalRectangle r;
  r.start = start;
  if (label_bottom < label_top) {
    r.i = label_bottom;
    r.j = label_top;
    r.o_bottom = geo_bottom;
    r.o_top = geo_top;
    r.o_left = geo_left;
    r.o_right = geo_right;
  } else {
    // rotate the local picture half a turn so the lower label sits on the bottom
    r.i = label_top;
    r.j = label_bottom;
    r.o_bottom = static_cast<int8_t>(-geo_top);
    r.o_top = static_cast<int8_t>(-geo_bottom);
    r.o_left = static_cast<int8_t>(-geo_right);
    r.o_right = static_cast<int8_t>(-geo_left);
  }
  FormalFlow out{r};
  if (!validate_flow(out))
    throw FlowNotInDiagram("rectangle does not start on the given generator");
  return out;
}

GridDiagram b_stabilize(const GridDiagram& d) {
  auto check = validate_diagram(d);
  if (!check.ok) throw BadDiagram(check.diagnostic);
  GridDiagram out = d;
  out.b_stabilizations += 1;
  return out;
}

std::string GridDiagram::to_json() const {
  json j;
  j["type"] = "grid";
  j["n"] = n;
  j["O"] = O;
  if (X) j["X"] = *X;
  j["alpha_order"] = alpha_order;
  j["beta_order"] = beta_order;
  j["alpha_orient"] = json::array();
  for (int8_t v : alpha_orient) j["alpha_orient"].push_back(static_cast<int>(v));
  j["beta_orient"] = json::array();
  for (int8_t v : beta_orient) j["beta_orient"].push_back(static_cast<int>(v));
  j["b_stab"] = b_stabilizations;
  return j.dump();
}

GridDiagram GridDiagram::from_json(const std::string& text) {
  json j = json::parse(text);
  static const std::set<std::string> known = {
      "type", "n", "O", "X", "alpha_order", "beta_order",
      "alpha_orient", "beta_orient", "b_stab"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw BadDiagram("unknown diagram field: " + it.key());
  if (j.at("type").get<std::string>() != "grid")
    throw BadDiagram("diagram type must be \"grid\"");
  GridDiagram d;
  d.n = j.at("n").get<int>();
  d.O = j.at("O").get<Perm>();
  if (j.contains("X")) d.X = j.at("X").get<Perm>();
  d.alpha_order = j.contains("alpha_order") ? j.at("alpha_order").get<Perm>()
                                            : identity_perm(d.n);
  d.beta_order = j.contains("beta_order") ? j.at("beta_order").get<Perm>()
                                          : identity_perm(d.n);
  auto signs = [&](const char* name) {
    std::vector<int8_t> out;
    if (!j.contains(name)) {
      out.assign(d.n, 1);
      return out;
    }
    for (const auto& v : j.at(name)) {
      long long s = v.get<long long>();
      if (s != 1 && s != -1) throw BadDiagram(std::string(name) + " entries must be ±1");
      out.push_back(static_cast<int8_t>(s));
    }
    return out;
  };
  d.alpha_orient = signs("alpha_orient");
  d.beta_orient = signs("beta_orient");
  d.b_stabilizations = j.contains("b_stab") ? j.at("b_stab").get<int>() : 0;
  auto check = validate_diagram(d);
  if (!check.ok) throw BadDiagram(check.diagnostic);
  return d;
}

}  // namespace hfsign
