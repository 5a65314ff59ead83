#include "hfsign/signs.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "hfsign/common.hpp"
#include "hfsign/gf2.hpp"
#include "json.hpp"

namespace hfsign {

namespace {

using nlohmann::json;

int8_t to_sign(uint8_t bit) { return bit ? -1 : 1; }

bool is_profile1_rect(const FormalRectangle& r) {
  auto all_plus = [](const FormalGenerator& g) {
    for (int8_t e : g.epsilon)
      if (e != 1) return false;
    return true;
  };
  return all_plus(r.start) && all_plus(r.end());
}

int8_t edge_bit(const FormalRectangle& r, RectEdge e) {
  switch (e) {
    case RectEdge::Bottom: return r.o_bottom;
    case RectEdge::Top: return r.o_top;
    case RectEdge::Left: return r.o_left;
    default: return r.o_right;
  }
}

std::vector<FormalRectangle> profile1_rectangles(int n) {
  std::vector<FormalRectangle> out;
  for (const Perm& p : all_permutations(n)) {
    FormalGenerator g;
    g.sigma = p;
    g.epsilon.assign(n, 1);
    for (const FormalRectangle& r : rectangles_from(g))
      if (is_profile1_rect(r)) out.push_back(r);
  }
  return out;
}

// Normalize tree flows to +1 walking a BFS forest; vertices and edge lists
// are sorted so the result is reproducible.
struct GaugeFixer {
  std::map<std::string, std::vector<std::pair<std::string, int>>> adj;  // vertex -> (flow key, other)
  std::map<std::string, int> value;  // vertex -> ±1

  void add_edge(const std::string& a, const std::string& b, const std::string& flow_key) {
    adj[a].push_back({flow_key, 1});
    adj[b].push_back({flow_key, 1});
    edges[flow_key] = {a, b};
    value.emplace(a, 0);
    value.emplace(b, 0);
  }
  std::map<std::string, std::pair<std::string, std::string>> edges;

  // sign_of: flow key -> ±1 of the assignment being normalized
  std::map<std::string, int8_t> run(const std::function<int(const std::string&)>& sign_of,
                                    const std::string& root_hint) {
    for (auto& [v, lst] : adj) std::sort(lst.begin(), lst.end());
    std::map<std::string, int8_t> u;
    // BFS each component from its least vertex, preferring the hint
    std::vector<std::string> order;
    if (value.count(root_hint)) order.push_back(root_hint);
    for (auto& [v, _] : value) order.push_back(v);
    for (const std::string& root : order) {
      if (u.count(root)) continue;
      u[root] = 1;
      std::deque<std::string> queue{root};
      while (!queue.empty()) {
        std::string cur = queue.front();
        queue.pop_front();
        for (const auto& [fk, _] : adj[cur]) {
          const auto& [a, b] = edges[fk];
          const std::string& other = a == cur ? b : a;
          if (u.count(other)) continue;
          u[other] = static_cast<int8_t>(u[cur] * sign_of(fk));
          queue.push_back(other);
        }
      }
    }
    return u;
  }
};

SignTable gauge_fixed_table(int n, const std::string& scope,
                            const std::vector<FormalFlow>& flows,
                            const std::map<std::string, int8_t>& raw,
                            const std::string& root_hint, int gauge_seed) {
  GaugeFixer fixer;
  for (const FormalFlow& f : flows)
    fixer.add_edge(flow_start(f).key(), flow_end(f).key(), flow_key(f));
  std::string root = root_hint;
  if (gauge_seed != 0 && !fixer.value.empty()) {
    std::vector<std::string> verts;
    for (auto& [v, _] : fixer.value) verts.push_back(v);
    root = verts[static_cast<size_t>(gauge_seed) % verts.size()];
  }
  auto u = fixer.run([&](const std::string& fk) { return static_cast<int>(raw.at(fk)); },
                     root);
  SignTable table;
  table.n = n;
  table.scope = scope;
  table.gauge_id = "bfs(root=" + root + ";tree=lex;seed=" + std::to_string(gauge_seed) + ")";
  for (const FormalFlow& f : flows) {
    std::string k = flow_key(f);
    int s = u.at(flow_start(f).key()) * raw.at(k) * u.at(flow_end(f).key());
    table.entries[k] = static_cast<int8_t>(s);
  }
  return table;
}

int hash_sign(const FormalGenerator& g, uint64_t seed) {
  return (splitmix64(hash_string(g.key()) ^ splitmix64(seed)) & 1) ? -1 : 1;
}

FormalFlow embed_flow(const FormalFlow& f, int8_t fixed_epsilon) {
  auto embed_gen = [&](FormalGenerator g) {
    g.sigma.push_back(g.power() + 1);
    g.epsilon.push_back(fixed_epsilon);
    return g;
  };
  if (const auto* b = std::get_if<FormalBigon>(&f)) {
    FormalBigon out = *b;
    out.start = embed_gen(out.start);
    return FormalFlow{out};
  }
  FormalRectangle out = std::get<FormalRectangle>(f);
  out.start = embed_gen(out.start);
  return FormalFlow{out};
}

}  // namespace

int bigon_sign(const FormalBigon& b) {
  if (!validate_flow(FormalFlow{b})) throw InvalidFlow("bigon_sign: " + b.key());
  int s = b.o_alpha;
  for (int k = 1; k < b.coord; ++k) s *= b.start.epsilon[k - 1];
  return s;
}

int SignTable::at(const std::string& flow_key) const {
  auto it = entries.find(flow_key);
  if (it == entries.end()) throw ScopeMismatch("flow not in table: " + flow_key);
  return it->second;
}

std::string SignTable::to_json() const {
  json j;
  j["n"] = n;
  j["scope"] = scope;
  j["gauge_id"] = gauge_id;
  j["entries"] = json::array();
  for (const auto& [k, v] : entries) j["entries"].push_back({k, static_cast<int>(v)});
  return j.dump();
}

SignTable SignTable::from_json(const std::string& text) {
  json j = json::parse(text);
  SignTable t;
  t.n = j.at("n").get<int>();
  t.scope = j.at("scope").get<std::string>();
  t.gauge_id = j.at("gauge_id").get<std::string>();
  for (const auto& e : j.at("entries")) {
    int v = e.at(1).get<int>();
    if (v != 1 && v != -1) throw Error("sign table entries must be ±1");
    t.entries[e.at(0).get<std::string>()] = static_cast<int8_t>(v);
  }
  return t;
}

int GaugeMap::at(const FormalGenerator& g) const {
  auto it = u.find(g.key());
  if (it == u.end()) throw ScopeMismatch("gauge not defined on " + g.key());
  return it->second;
}

GaugeMap constant_gauge(int n, int8_t value) {
  GaugeMap g;
  g.n = n;
  g.restricted = true;
  for (const auto& gen : enumerate_generators(n)) g.u[gen.key()] = value;
  return g;
}

GaugeMap gauge_from_function(int n, const std::function<int(const FormalGenerator&)>& f) {
  GaugeMap g;
  g.n = n;
  std::map<std::string, int8_t> by_sigma;
  bool restricted = true;
  for (const auto& gen : enumerate_generators(n)) {
    int v = f(gen);
    if (v != 1 && v != -1) throw Error("gauge values must be ±1");
    g.u[gen.key()] = static_cast<int8_t>(v);
    std::string pk = perm_key(gen.sigma);
    auto it = by_sigma.find(pk);
    if (it == by_sigma.end()) by_sigma[pk] = static_cast<int8_t>(v);
    else if (it->second != v) restricted = false;
  }
  g.restricted = restricted;
  return g;
}

GaugeMap restricted_gauge(int n, const std::map<std::string, int8_t>& per_sigma) {
  return gauge_from_function(n, [&](const FormalGenerator& g) -> int {
    auto it = per_sigma.find(perm_key(g.sigma));
    return it == per_sigma.end() ? 1 : it->second;
  });
}

GaugeMap random_gauge(int n, uint64_t seed) {
  return gauge_from_function(
      n, [&](const FormalGenerator& g) { return hash_sign(g, seed); });
}

int parity_character(const FormalGenerator& g) {
  int m = perm_parity(g.sigma);
  for (int8_t e : g.epsilon) m *= e;
  return m;
}

GF2System profile1_system(int n);  // forward declaration for solve_profile1

GF2System profile1_system_impl(int n) {
  GF2System sys;
  std::vector<FormalRectangle> rects = profile1_rectangles(n);
  for (const auto& r : rects) sys.var_keys.push_back(r.key());
  for (size_t k = 0; k < sys.var_keys.size(); ++k)
    sys.index.emplace(sys.var_keys[k], static_cast<int>(k));

  std::set<std::pair<std::vector<int>, int>> seen;
  auto push_row = [&](std::vector<int> vars, int rhs, const char* family) {
    std::sort(vars.begin(), vars.end());
    if (!seen.insert({vars, rhs}).second) return;
    sys.rows.push_back({std::move(vars), rhs, family});
  };

  for (const auto& r : rects) {
    for (CompanionKind k : {CompanionKind::Alpha, CompanionKind::Beta}) {
      FormalFlow c = companion(FormalFlow{r}, k);
      std::string ck = flow_key(c);
      if (r.key() > ck) continue;
      push_row({sys.var(r.key()), sys.var(ck)}, k == CompanionKind::Alpha ? 0 : 1,
               "degenerations");
    }
  }
  for (const Perm& p : all_permutations(n)) {
    for (const RelationInstance& rel : grid_composites(p, n)) {
      std::vector<int> vars;
      for (const auto& f : rel.flows) vars.push_back(sys.var(flow_key(f)));
      push_row(std::move(vars), rel.rhs, "grid");
    }
  }
  return sys;
}

SolveResult solve_profile1(int n) {
  if (n < 1) throw PowerTooLarge("power must be >= 1");
  if (n > profile1_solve_bound())
    throw PowerTooLarge("profile-1 solve bound is " +
                        std::to_string(profile1_solve_bound()));
  GF2System sys = profile1_system_impl(n);
  Gf2Solver solver(static_cast<int>(sys.var_keys.size()));
  for (const auto& row : sys.rows) solver.add_row(row.vars, row.rhs);
  Gf2Solution sol = solver.solve();
  if (!sol.consistent)
    throw InconsistentSystem("profile-1 system at power " + std::to_string(n));

  std::map<std::string, int8_t> raw;
  std::vector<FormalFlow> flows;
  for (size_t k = 0; k < sys.var_keys.size(); ++k) {
    raw[sys.var_keys[k]] = to_sign(sol.values[k]);
  }
  for (const auto& r : profile1_rectangles(n)) flows.push_back(FormalFlow{r});

  FormalGenerator root;
  root.sigma = identity_perm(n);
  root.epsilon.assign(n, 1);
  SolveResult res;
  res.dimension = sol.dimension;
  res.table = gauge_fixed_table(n, "profile1_rectangles", flows, raw, root.key(), 0);
  if (n == 1) {  // no rectangles at all
    res.table.n = 1;
    res.table.scope = "profile1_rectangles";
  }
  return res;
}

SolveResult solve_global(int n, bool allow_large, int gauge_seed) {
  if (n < 1) throw PowerTooLarge("power must be >= 1");
  if (n > 4 || (n == 4 && !allow_large))
    throw PowerTooLarge("global solve supports n <= 3 (n = 4 behind a flag)");
  GF2System sys = enumerate_relation_rows(n, FamAll);
  Gf2Solver solver(static_cast<int>(sys.var_keys.size()));
  for (const auto& row : sys.rows) solver.add_row(row.vars, row.rhs);
  Gf2Solution sol = solver.solve();
  if (!sol.consistent)
    throw InconsistentSystem("full relation system at power " + std::to_string(n));
  long long expected = generator_count(n) - 1;
  if (sol.dimension != expected)
    throw DimensionMismatch("solution space dimension " +
                            std::to_string(sol.dimension) + ", expected " +
                            std::to_string(expected));

  std::map<std::string, int8_t> raw;
  for (size_t k = 0; k < sys.var_keys.size(); ++k)
    raw[sys.var_keys[k]] = to_sign(sol.values[k]);
  std::vector<FormalFlow> flows = scope_flows(n, "all_flows");

  FormalGenerator root;
  root.sigma = identity_perm(n);
  root.epsilon.assign(n, 1);
  SolveResult res;
  res.dimension = sol.dimension;
  res.table = gauge_fixed_table(n, "all_flows", flows, raw, root.key(), gauge_seed);
  return res;
}

std::vector<FormalFlow> scope_flows(int n, const std::string& scope) {
  std::vector<FormalFlow> out;
  if (scope == "all_flows") {
    auto [bigons, rects] = enumerate_flows(n);
    for (auto& b : bigons) out.emplace_back(std::move(b));
    for (auto& r : rects) out.emplace_back(std::move(r));
  } else if (scope == "bigons") {
    auto [bigons, rects] = enumerate_flows(n);
    (void)rects;
    for (auto& b : bigons) out.emplace_back(std::move(b));
  } else if (scope == "profile1_rectangles") {
    for (const auto& r : profile1_rectangles(n)) out.emplace_back(r);
  } else {
    throw ScopeMismatch("unknown scope: " + scope);
  }
  return out;
}

namespace {

std::shared_ptr<const SignTable> cached_profile1_table(int n) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const SignTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end())
    it = cache.emplace(n, std::make_shared<SignTable>(solve_profile1(n).table)).first;
  return it->second;
}

}  // namespace

SignEvaluator::SignEvaluator(int base_n, int extra)
    : base_n_(base_n), extra_(extra), p1_(cached_profile1_table(base_n)) {
  if (extra_ < 0) throw Error("negative trailing coordinate count");
}

std::shared_ptr<const SignEvaluator> shared_evaluator(int base_n, int extra) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const SignEvaluator>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(base_n, extra);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_shared<SignEvaluator>(base_n, extra)).first;
  return it->second;
}

int SignEvaluator::evaluate(const FormalFlow& f) const {
  if (!validate_flow(f)) throw InvalidFlow("evaluate: " + flow_key(f));
  if (flow_power(f) != power())
    throw PowerMismatch("flow power " + std::to_string(flow_power(f)) +
                        ", evaluator power " + std::to_string(power()));
  if (const auto* b = std::get_if<FormalBigon>(&f)) return bigon_sign(*b);
  const auto& r = std::get<FormalRectangle>(f);
  std::string k = r.key();
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(k);
    if (it != memo_.end()) return it->second;
  }
  int s = rectangle_sign(r);
  std::lock_guard<std::mutex> lock(mu_);
  memo_.emplace(std::move(k), s);
  return s;
}

int SignEvaluator::rectangle_sign(const FormalRectangle& rect) const {
  if (rect.j > base_n_)
    throw ScopeMismatch("rectangle moves a fixed trailing coordinate");
  for (int k = base_n_ + 1; k <= power(); ++k)
    if (rect.start.sigma[k - 1] != k)
      throw ScopeMismatch("trailing coordinates must be fixed by the permutation");

  FormalRectangle r = rect;
  int sign = 1;
  for (int p = 1; p <= r.start.power(); ++p) {
    if (p == r.i || p == r.j) continue;
    if (r.start.epsilon[p - 1] == -1) {
      FormalBigon before{r.start, p, 1, -1};
      FormalBigon after{r.end(), p, 1, -1};
      sign *= -bigon_sign(before) * bigon_sign(after);
      r = simple_flip(r, p);
    }
  }
  for (RectEdge e :
       {RectEdge::Bottom, RectEdge::Top, RectEdge::Left, RectEdge::Right}) {
    if (edge_bit(r, e) == -1) {
      RelationInstance rel = basic_relation(r, e);
      sign *= -bigon_sign(std::get<FormalBigon>(rel.flows[1])) *
              bigon_sign(std::get<FormalBigon>(rel.flows[2]));
      r = reverse_edge(r, e);
    }
  }
  FormalRectangle base = r;
  if (extra_ > 0) {
    base.start.sigma.resize(base_n_);
    base.start.epsilon.resize(base_n_);
  }
  auto it = p1_->entries.find(base.key());
  if (it == p1_->entries.end())
    throw Error("profile-1 table miss: " + base.key());
  return sign * it->second;
}

SignFunction sign_function(std::shared_ptr<const SignEvaluator> ev) {
  int p = ev->power();
  return {p, [ev](const FormalFlow& f) { return ev->evaluate(f); }};
}

SignFunction sign_function(std::shared_ptr<const SignTable> table) {
  int n = table->n;
  return {n, [table](const FormalFlow& f) { return table->at(flow_key(f)); }};
}

SignFunction apply_gauge(const SignFunction& s, std::shared_ptr<const GaugeMap> u) {
  if (u->n != s.power) throw ScopeMismatch("gauge power differs from sign power");
  SignFunction base = s;
  return {s.power, [base, u](const FormalFlow& f) {
            return u->at(flow_start(f)) * base(f) * u->at(flow_end(f));
          }};
}

SignFunction seeded_gauge(const SignFunction& s, uint64_t seed) {
  SignFunction base = s;
  return {s.power, [base, seed](const FormalFlow& f) {
            return hash_sign(flow_start(f), seed) * base(f) *
                   hash_sign(flow_end(f), seed);
          }};
}

SignFunction parity_twist(const SignFunction& s) {
  SignFunction base = s;
  return {s.power, [base](const FormalFlow& f) {
            return base(f) * parity_character(flow_start(f));
          }};
}

SignFunction restrict_power(const SignFunction& s, int8_t fixed_epsilon) {
  if (s.power < 2) throw Error("cannot restrict below power 1");
  SignFunction base = s;
  return {s.power - 1, [base, fixed_epsilon](const FormalFlow& f) {
            return base(embed_flow(f, fixed_epsilon));
          }};
}

SignTable apply_gauge(const SignTable& t, const GaugeMap& u) {
  if (u.n != t.n) throw ScopeMismatch("gauge power differs from table power");
  SignTable out = t;
  out.gauge_id = t.gauge_id + "+gauge";
  for (const FormalFlow& f : scope_flows(t.n, t.scope)) {
    std::string k = flow_key(f);
    out.entries[k] = static_cast<int8_t>(u.at(flow_start(f)) * t.at(k) *
                                         u.at(flow_end(f)));
  }
  return out;
}

SignTable parity_twist(const SignTable& t) {
  SignTable out = t;
  out.gauge_id = t.gauge_id + "+twist";
  for (const FormalFlow& f : scope_flows(t.n, t.scope)) {
    std::string k = flow_key(f);
    out.entries[k] = static_cast<int8_t>(t.at(k) * parity_character(flow_start(f)));
  }
  return out;
}

SignTable materialize(const SignFunction& s, int n, const std::string& scope) {
  if (s.power != n) throw PowerMismatch("materialize power mismatch");
  SignTable t;
  t.n = n;
  t.scope = scope;
  t.gauge_id = "materialized";
  for (const FormalFlow& f : scope_flows(n, scope))
    t.entries[flow_key(f)] = static_cast<int8_t>(s(f));
  return t;
}

std::optional<GaugeMap> find_gauge(const SignTable& a, const SignTable& b) {
  if (a.n != b.n || a.scope != b.scope)
    throw ScopeMismatch("find_gauge requires equal power and scope");
  std::vector<FormalFlow> flows = scope_flows(a.n, a.scope);
  GaugeFixer fixer;
  for (const FormalFlow& f : flows)
    fixer.add_edge(flow_start(f).key(), flow_end(f).key(), flow_key(f));
  auto u = fixer.run(
      [&](const std::string& fk) { return a.at(fk) * b.at(fk); }, "");
  for (const FormalFlow& f : flows) {
    std::string k = flow_key(f);
    if (b.at(k) !=
        u.at(flow_start(f).key()) * a.at(k) * u.at(flow_end(f).key()))
      return std::nullopt;
  }
  GaugeMap g;
  g.n = a.n;
  std::map<std::string, int8_t> by_sigma;
  bool restricted = true;
  for (const auto& [genkey, val] : u) {
    g.u[genkey] = val;
    std::string pk = genkey.substr(0, genkey.find('|'));
    auto it = by_sigma.find(pk);
    if (it == by_sigma.end()) by_sigma[pk] = val;
    else if (it->second != val) restricted = false;
  }
  g.restricted = restricted;
  return g;
}

long long VerifyReport::total_checked() const {
  long long t = 0;
  for (const auto& [_, c] : checked) t += c;
  return t;
}

std::string VerifyReport::to_json() const {
  json j;
  j["n"] = n;
  j["swapped_roles"] = swapped_roles;
  j["sampled"] = sampled;
  j["samples"] = samples;
  j["seed"] = seed;
  j["checked"] = json::object();
  for (const auto& [fam, c] : checked) j["checked"][fam] = c;
  j["violation_count"] = violation_count;
  j["violations"] = json::array();
  for (const auto& v : violations) {
    json jv;
    jv["family"] = v.family;
    jv["flows"] = v.flow_keys;
    jv["expected"] = v.expected;
    jv["got"] = v.got;
    j["violations"].push_back(jv);
  }
  return j.dump();
}

std::string VerifyReport::to_text() const {
  std::ostringstream os;
  os << "verify n=" << n << (swapped_roles ? " (roles swapped)" : "")
     << (sampled ? " sampled" : " exhaustive") << "\n";
  for (const auto& [fam, c] : checked) os << "  " << fam << ": " << c << " checked\n";
  os << "  violations: " << violation_count << "\n";
  for (const auto& v : violations) {
    os << "    [" << v.family << "] expected " << v.expected << " got " << v.got << ":";
    for (const auto& k : v.flow_keys) os << " " << k;
    os << "\n";
  }
  return os.str();
}

namespace {

constexpr size_t kViolationCap = 200;

void check_instance(const RelationInstance& rel, const SignFunction& s,
                    bool swapped, VerifyReport& report) {
  report.checked[rel.family] += 1;
  int prod = 1;
  for (const auto& f : rel.flows) prod *= s(f);
  int expected = rel.expected_product(swapped);
  if (prod != expected) {
    report.violation_count += 1;
    if (report.violations.size() < kViolationCap) {
      VerifyReport::Violation v;
      v.family = rel.family;
      for (const auto& f : rel.flows) v.flow_keys.push_back(flow_key(f));
      v.expected = expected;
      v.got = prod;
      report.violations.push_back(std::move(v));
    }
  }
}

FormalGenerator random_generator(int n, Rng& rng) {
  FormalGenerator g;
  g.sigma = rng.permutation(n);
  g.epsilon.resize(n);
  for (int k = 0; k < n; ++k) g.epsilon[k] = static_cast<int8_t>(rng.sign());
  return g;
}

FormalFlow random_flow_from(const FormalGenerator& g, Rng& rng) {
  int n = g.power();
  int nbig = 2 * n;
  int nrect = 2 * n * (n - 1);
  int idx = rng.below(nbig + nrect);
  if (idx < nbig) {
    int coord = idx / 2 + 1;
    int8_t oa = idx % 2 == 0 ? int8_t{1} : int8_t{-1};
    return FormalBigon{g, coord, oa, static_cast<int8_t>(oa * g.epsilon[coord - 1])};
  }
  idx -= nbig;
  int pair = idx / 4;
  int bits = idx % 4;
  int i = 1, j = 2, seen = 0;
  for (int a = 1; a <= n && seen <= pair; ++a)
    for (int b = a + 1; b <= n; ++b)
      if (seen++ == pair) {
        i = a;
        j = b;
      }
  int8_t ob = (bits & 2) ? int8_t{-1} : int8_t{1};
  int8_t ot = (bits & 1) ? int8_t{-1} : int8_t{1};
  FormalRectangle r;
  r.start = g;
  r.i = i;
  r.j = j;
  r.o_bottom = ob;
  r.o_top = ot;
  r.o_left = static_cast<int8_t>(g.epsilon[i - 1] * ob);
  r.o_right = static_cast<int8_t>(g.epsilon[j - 1] * ot);
  return r;
}

FormalRectangle random_rect_from(const FormalGenerator& g, Rng& rng) {
  while (true) {
    FormalFlow f = random_flow_from(g, rng);
    if (auto* r = std::get_if<FormalRectangle>(&f)) return *r;
  }
}

RelationInstance sample_instance(int n, RelationFamily fam, Rng& rng) {
  switch (fam) {
    case FamDegenerations: {
      FormalFlow f = random_flow_from(random_generator(n, rng), rng);
      CompanionKind k = rng.below(2) ? CompanionKind::Beta : CompanionKind::Alpha;
      RelationInstance rel;
      rel.kind = k == CompanionKind::Alpha
                     ? RelationInstance::Kind::AlphaDegeneration
                     : RelationInstance::Kind::BetaDegeneration;
      rel.family = "degenerations";
      rel.rhs = k == CompanionKind::Alpha ? 0 : 1;
      rel.flows = {f, companion(f, k)};
      return rel;
    }
    case FamDisjoint: {
      for (int attempt = 0; attempt < 1000; ++attempt) {
        FormalGenerator g = random_generator(n, rng);
        FormalFlow f1 = random_flow_from(g, rng);
        FormalFlow f2 = random_flow_from(flow_end(f1), rng);
        bool shared = false;
        for (int p : moving_coords(f1))
          for (int q : moving_coords(f2))
            if (p == q) shared = true;
        if (shared) continue;
        auto [f3, f4] = disjoint_partner(f1, f2);
        RelationInstance rel;
        rel.kind = RelationInstance::Kind::Square;
        rel.family = "disjoint";
        rel.rhs = 1;
        rel.flows = {f1, f2, f3, f4};
        return rel;
      }
      throw Error("failed to sample a disjoint square");
    }
    case FamGrid: {
      for (int attempt = 0; attempt < 100; ++attempt) {
        Perm x = rng.permutation(n);
        auto squares = grid_composites(x, n);
        if (squares.empty()) continue;
        return squares[rng.below(static_cast<int>(squares.size()))];
      }
      throw Error("failed to sample a grid square");
    }
    case FamFlip: {
      while (true) {
        FormalRectangle r = random_rect_from(random_generator(n, rng), rng);
        std::vector<int> free;
        for (int p = 1; p <= n; ++p)
          if (p != r.i && p != r.j) free.push_back(p);
        if (free.empty()) continue;
        return flip_square(r, free[rng.below(static_cast<int>(free.size()))]);
      }
    }
    default: {
      FormalRectangle r = random_rect_from(random_generator(n, rng), rng);
      RectEdge edges[4] = {RectEdge::Bottom, RectEdge::Top, RectEdge::Left,
                           RectEdge::Right};
      BasicEndpoint ep = rng.below(2) ? BasicEndpoint::EndCorner
                                      : BasicEndpoint::StartCorner;
      return basic_relation(r, edges[rng.below(4)], ep);
    }
  }
}

}  // namespace

VerifyReport verify(const SignFunction& s, int n, unsigned families,
                    bool swapped_roles, long long samples, uint64_t seed, int jobs) {
  if (s.power != n) throw ScopeMismatch("sign function power differs from n");
  VerifyReport report;
  report.n = n;
  report.families = families;
  report.swapped_roles = swapped_roles;
  report.seed = seed;

  for (RelationFamily fam : {FamDegenerations, FamDisjoint, FamGrid, FamFlip, FamBasic})
    if (families & fam) report.checked[family_name(fam)] = 0;

  if (samples <= 0) {
    for_each_relation(n, families, [&](const RelationInstance& rel) {
      check_instance(rel, s, swapped_roles, report);
    });
    return report;
  }

  report.sampled = true;
  report.samples = samples;
  std::vector<RelationFamily> fams;
  for (RelationFamily fam : {FamDegenerations, FamDisjoint, FamGrid, FamFlip, FamBasic}) {
    if (!(families & fam)) continue;
    if (fam == FamFlip && n < 3) continue;   // no non-moving coordinates
    if (fam == FamGrid && n < 3) continue;   // no composites with distinct ends
    fams.push_back(fam);
  }
  if (fams.empty()) throw Error("no sampleable families at this power");

  struct SampleOutcome {
    int fam = -1;
    int expected = 0;
    int got = 0;
    std::vector<std::string> keys;
    bool violated = false;
  };
  std::vector<SampleOutcome> outcomes(static_cast<size_t>(samples));
  parallel_for(jobs, static_cast<int>(samples), [&](int idx) {
    Rng rng(splitmix64(seed) ^ splitmix64(static_cast<uint64_t>(idx) + 1));
    RelationFamily fam = fams[rng.below(static_cast<int>(fams.size()))];
    RelationInstance rel = sample_instance(n, fam, rng);
    SampleOutcome& out = outcomes[static_cast<size_t>(idx)];
    out.fam = static_cast<int>(fam);
    int prod = 1;
    for (const auto& f : rel.flows) prod *= s(f);
    out.expected = rel.expected_product(swapped_roles);
    out.got = prod;
    if (prod != out.expected) {
      out.violated = true;
      for (const auto& f : rel.flows) out.keys.push_back(flow_key(f));
    }
  });
  for (const auto& out : outcomes) {
    const char* fam = family_name(static_cast<RelationFamily>(out.fam));
    report.checked[fam] += 1;
    if (out.violated) {
      report.violation_count += 1;
      if (report.violations.size() < kViolationCap)
        report.violations.push_back({fam, out.keys, out.expected, out.got});
    }
  }
  return report;
}

GF2System profile1_system(int n) { return profile1_system_impl(n); }

}  // namespace hfsign
