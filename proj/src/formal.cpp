#include "hfsign/formal.hpp"

#include <algorithm>
#include <sstream>

#include "hfsign/common.hpp"
#include "json.hpp"

namespace hfsign {

namespace {

using nlohmann::json;

char sign_char(int8_t v) { return v == 1 ? '+' : '-'; }

// ±1 sorts with +1 first so that lexicographic orders put all-plus data first.
int ord(int8_t v) { return v == 1 ? 0 : 1; }

void check_power(int n) {
  if (n < 1) throw PowerTooLarge("power must be >= 1");
  if (n > enumeration_bound())
    throw PowerTooLarge("power " + std::to_string(n) + " exceeds bound " +
                        std::to_string(enumeration_bound()));
}

int8_t json_sign(const json& v) {
  long long s = v.get<long long>();
  if (s != 1 && s != -1) throw Error("sign values must be +1 or -1");
  return static_cast<int8_t>(s);
}

json generator_json(const FormalGenerator& g) {
  json j;
  j["sigma"] = g.sigma;
  j["epsilon"] = json::array();
  for (int8_t e : g.epsilon) j["epsilon"].push_back(static_cast<int>(e));
  return j;
}

FormalGenerator generator_from(const json& j) {
  FormalGenerator g;
  g.sigma = j.at("sigma").get<std::vector<int>>();
  for (const auto& v : j.at("epsilon")) g.epsilon.push_back(json_sign(v));
  if (!g.valid()) throw Error("invalid generator in JSON input");
  return g;
}

}  // namespace

bool is_permutation(const Perm& p) {
  int n = static_cast<int>(p.size());
  std::vector<bool> seen(n, false);
  for (int v : p) {
    if (v < 1 || v > n || seen[v - 1]) return false;
    seen[v - 1] = true;
  }
  return true;
}

Perm identity_perm(int n) {
  Perm p(n);
  for (int i = 0; i < n; ++i) p[i] = i + 1;
  return p;
}

std::vector<Perm> all_permutations(int n) {
  std::vector<Perm> out;
  Perm p = identity_perm(n);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

int perm_parity(const Perm& p) {
  int n = static_cast<int>(p.size());
  std::vector<bool> seen(n, false);
  int parity = 1;
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (int k = i; !seen[k]; k = p[k] - 1) {
      seen[k] = true;
      ++len;
    }
    if (len % 2 == 0) parity = -parity;
  }
  return parity;
}

Perm inverse_perm(const Perm& p) {
  Perm inv(p.size());
  for (int i = 0; i < static_cast<int>(p.size()); ++i) inv[p[i] - 1] = i + 1;
  return inv;
}

std::string perm_key(const Perm& p) {
  std::string s;
  for (size_t k = 0; k < p.size(); ++k) {
    if (k) s += ',';
    s += std::to_string(p[k]);
  }
  return s;
}

bool FormalGenerator::valid() const {
  if (sigma.empty() || sigma.size() != epsilon.size()) return false;
  if (!is_permutation(sigma)) return false;
  for (int8_t e : epsilon)
    if (e != 1 && e != -1) return false;
  return true;
}

std::string FormalGenerator::key() const {
  std::string s = perm_key(sigma);
  s += '|';
  for (int8_t e : epsilon) s += sign_char(e);
  return s;
}

bool FormalGenerator::operator<(const FormalGenerator& o) const {
  if (sigma != o.sigma) return sigma < o.sigma;
  for (size_t k = 0; k < epsilon.size(); ++k)
    if (epsilon[k] != o.epsilon[k]) return ord(epsilon[k]) < ord(o.epsilon[k]);
  return false;
}

FormalGenerator FormalBigon::end() const {
  FormalGenerator g = start;
  g.epsilon[coord - 1] = static_cast<int8_t>(-g.epsilon[coord - 1]);
  return g;
}

std::string FormalBigon::key() const {
  std::string s = "b|";
  s += start.key();
  s += '|';
  s += std::to_string(coord);
  s += '|';
  s += sign_char(o_alpha);
  s += sign_char(o_beta);
  return s;
}

bool FormalBigon::operator<(const FormalBigon& o) const {
  if (!(start == o.start)) return start < o.start;
  if (coord != o.coord) return coord < o.coord;
  if (o_alpha != o.o_alpha) return ord(o_alpha) < ord(o.o_alpha);
  return ord(o_beta) < ord(o.o_beta);
}

FormalGenerator FormalRectangle::end() const {
  FormalGenerator g = start;
  std::swap(g.sigma[i - 1], g.sigma[j - 1]);
  g.epsilon[i - 1] = static_cast<int8_t>(o_bottom * o_right);
  g.epsilon[j - 1] = static_cast<int8_t>(o_top * o_left);
  return g;
}

std::string FormalRectangle::key() const {
  std::string s = "r|";
  s += start.key();
  s += '|';
  s += std::to_string(i);
  s += ',';
  s += std::to_string(j);
  s += '|';
  s += sign_char(o_bottom);
  s += sign_char(o_top);
  s += sign_char(o_left);
  s += sign_char(o_right);
  return s;
}

bool FormalRectangle::operator<(const FormalRectangle& o) const {
  if (!(start == o.start)) return start < o.start;
  if (i != o.i) return i < o.i;
  if (j != o.j) return j < o.j;
  if (o_bottom != o.o_bottom) return ord(o_bottom) < ord(o.o_bottom);
  if (o_top != o.o_top) return ord(o_top) < ord(o.o_top);
  if (o_left != o.o_left) return ord(o_left) < ord(o.o_left);
  return ord(o_right) < ord(o.o_right);
}

int flow_power(const FormalFlow& f) {
  return std::visit([](const auto& x) { return x.start.power(); }, f);
}

std::string flow_key(const FormalFlow& f) {
  return std::visit([](const auto& x) { return x.key(); }, f);
}

FormalGenerator flow_start(const FormalFlow& f) {
  return std::visit([](const auto& x) { return x.start; }, f);
}

FormalGenerator flow_end(const FormalFlow& f) {
  return std::visit([](const auto& x) { return x.end(); }, f);
}

std::vector<int> moving_coords(const FormalFlow& f) {
  if (const auto* b = std::get_if<FormalBigon>(&f)) return {b->coord};
  const auto& r = std::get<FormalRectangle>(f);
  return {r.i, r.j};
}

bool validate_flow(const FormalFlow& f) {
  if (const auto* b = std::get_if<FormalBigon>(&f)) {
    if (!b->start.valid()) return false;
    int n = b->start.power();
    if (b->coord < 1 || b->coord > n) return false;
    if ((b->o_alpha != 1 && b->o_alpha != -1) || (b->o_beta != 1 && b->o_beta != -1))
      return false;
    return b->start.epsilon[b->coord - 1] == b->o_alpha * b->o_beta;
  }
  const auto& r = std::get<FormalRectangle>(f);
  if (!r.start.valid()) return false;
  int n = r.start.power();
  if (r.i < 1 || r.j > n || r.i >= r.j) return false;
  for (int8_t v : {r.o_bottom, r.o_top, r.o_left, r.o_right})
    if (v != 1 && v != -1) return false;
  return r.start.epsilon[r.i - 1] == r.o_bottom * r.o_left &&
         r.start.epsilon[r.j - 1] == r.o_top * r.o_right;
}

std::pair<FormalGenerator, FormalGenerator> flow_endpoints(const FormalFlow& f) {
  if (!validate_flow(f)) throw InvalidFlow("flow_endpoints: " + flow_key(f));
  return {flow_start(f), flow_end(f)};
}

FormalFlow companion(const FormalFlow& f, CompanionKind kind) {
  if (!validate_flow(f)) throw InvalidFlow("companion: " + flow_key(f));
  if (const auto* b = std::get_if<FormalBigon>(&f)) {
    FormalBigon c;
    c.start = b->end();
    c.coord = b->coord;
    if (kind == CompanionKind::Alpha) {
      c.o_alpha = b->o_alpha;
      c.o_beta = static_cast<int8_t>(-b->o_beta);
    } else {
      c.o_alpha = static_cast<int8_t>(-b->o_alpha);
      c.o_beta = b->o_beta;
    }
    return c;
  }
  const auto& r = std::get<FormalRectangle>(f);
  FormalRectangle c;
  c.start = r.end();
  c.i = r.i;
  c.j = r.j;
  if (kind == CompanionKind::Alpha) {
    c.o_bottom = r.o_bottom;
    c.o_top = r.o_top;
    c.o_left = r.o_right;
    c.o_right = r.o_left;
  } else {
    c.o_bottom = static_cast<int8_t>(-r.o_bottom);
    c.o_top = static_cast<int8_t>(-r.o_top);
    c.o_left = static_cast<int8_t>(-r.o_right);
    c.o_right = static_cast<int8_t>(-r.o_left);
  }
  return c;
}

FormalRectangle reverse_edge(const FormalRectangle& r, RectEdge edge) {
  if (!validate_flow(FormalFlow{r})) throw InvalidFlow("reverse_edge: " + r.key());
  FormalRectangle out = r;
  switch (edge) {
    case RectEdge::Bottom:
      out.o_bottom = static_cast<int8_t>(-r.o_bottom);
      out.start.epsilon[r.i - 1] = static_cast<int8_t>(-r.start.epsilon[r.i - 1]);
      break;
    case RectEdge::Top:
      out.o_top = static_cast<int8_t>(-r.o_top);
      out.start.epsilon[r.j - 1] = static_cast<int8_t>(-r.start.epsilon[r.j - 1]);
      break;
    case RectEdge::Left:
      out.o_left = static_cast<int8_t>(-r.o_left);
      out.start.epsilon[r.i - 1] = static_cast<int8_t>(-r.start.epsilon[r.i - 1]);
      break;
    case RectEdge::Right:
      out.o_right = static_cast<int8_t>(-r.o_right);
      out.start.epsilon[r.j - 1] = static_cast<int8_t>(-r.start.epsilon[r.j - 1]);
      break;
  }
  return out;
}

FormalRectangle simple_flip(const FormalRectangle& r, int p) {
  if (!validate_flow(FormalFlow{r})) throw InvalidFlow("simple_flip: " + r.key());
  if (p == r.i || p == r.j)
    throw MovingCoordinate("simple_flip at moving coordinate " + std::to_string(p));
  if (p < 1 || p > r.start.power())
    throw MovingCoordinate("simple_flip coordinate out of range");
  FormalRectangle out = r;
  out.start.epsilon[p - 1] = static_cast<int8_t>(-r.start.epsilon[p - 1]);
  return out;
}

std::vector<FormalGenerator> enumerate_generators(int n) {
  check_power(n);
  std::vector<FormalGenerator> out;
  for (const Perm& p : all_permutations(n)) {
    // iterate sign profiles with +1 sorting first
    for (long long mask = 0; mask < (1LL << n); ++mask) {
      FormalGenerator g;
      g.sigma = p;
      g.epsilon.resize(n);
      for (int k = 0; k < n; ++k)
        g.epsilon[k] = (mask >> (n - 1 - k)) & 1 ? -1 : 1;
      out.push_back(std::move(g));
    }
  }
  return out;
}

std::vector<FormalBigon> bigons_from(const FormalGenerator& g) {
  std::vector<FormalBigon> out;
  int n = g.power();
  out.reserve(2 * n);
  for (int c = 1; c <= n; ++c) {
    int8_t e = g.epsilon[c - 1];
    out.push_back({g, c, 1, e});
    out.push_back({g, c, -1, static_cast<int8_t>(-e)});
  }
  return out;
}

std::vector<FormalRectangle> rectangles_from(const FormalGenerator& g) {
  std::vector<FormalRectangle> out;
  int n = g.power();
  out.reserve(2 * n * (n - 1));
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      for (int8_t ob : {int8_t{1}, int8_t{-1}}) {
        for (int8_t ot : {int8_t{1}, int8_t{-1}}) {
          FormalRectangle r;
          r.start = g;
          r.i = i;
          r.j = j;
          r.o_bottom = ob;
          r.o_top = ot;
          r.o_left = static_cast<int8_t>(g.epsilon[i - 1] * ob);
          r.o_right = static_cast<int8_t>(g.epsilon[j - 1] * ot);
          out.push_back(std::move(r));
        }
      }
    }
  }
  return out;
}

std::vector<FormalFlow> flows_from_generator(const FormalGenerator& g) {
  std::vector<FormalFlow> out;
  for (auto& b : bigons_from(g)) out.emplace_back(std::move(b));
  for (auto& r : rectangles_from(g)) out.emplace_back(std::move(r));
  return out;
}

std::pair<std::vector<FormalBigon>, std::vector<FormalRectangle>> enumerate_flows(int n) {
  check_power(n);
  std::vector<FormalBigon> bigons;
  std::vector<FormalRectangle> rects;
  for (const FormalGenerator& g : enumerate_generators(n)) {
    for (auto& b : bigons_from(g)) bigons.push_back(std::move(b));
    for (auto& r : rectangles_from(g)) rects.push_back(std::move(r));
  }
  return {std::move(bigons), std::move(rects)};
}

long long generator_count(int n) {
  long long f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f << n;
}

long long bigon_count(int n) { return 2LL * n * generator_count(n); }

long long rectangle_count(int n) { return 2LL * n * (n - 1) * generator_count(n); }

std::string generator_to_json(const FormalGenerator& g) { return generator_json(g).dump(); }

FormalGenerator generator_from_json(const std::string& text) {
  return generator_from(json::parse(text));
}

std::string flow_to_json(const FormalFlow& f) {
  json j;
  if (const auto* b = std::get_if<FormalBigon>(&f)) {
    j["kind"] = "bigon";
    j["start"] = generator_json(b->start);
    j["i"] = b->coord;
    j["o_alpha"] = static_cast<int>(b->o_alpha);
    j["o_beta"] = static_cast<int>(b->o_beta);
  } else {
    const auto& r = std::get<FormalRectangle>(f);
    j["kind"] = "rect";
    j["start"] = generator_json(r.start);
    j["i"] = r.i;
    j["j"] = r.j;
    j["o"] = {static_cast<int>(r.o_bottom), static_cast<int>(r.o_top),
              static_cast<int>(r.o_left), static_cast<int>(r.o_right)};
  }
  return j.dump();
}

FormalFlow flow_from_json(const std::string& text) {
  json j = json::parse(text);
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "bigon") {
    FormalBigon b;
    b.start = generator_from(j.at("start"));
    b.coord = j.at("i").get<int>();
    b.o_alpha = json_sign(j.at("o_alpha"));
    b.o_beta = json_sign(j.at("o_beta"));
    FormalFlow f{b};
    if (!validate_flow(f)) throw InvalidFlow("bigon JSON fails invariants");
    return f;
  }
  if (kind == "rect") {
    FormalRectangle r;
    r.start = generator_from(j.at("start"));
    r.i = j.at("i").get<int>();
    r.j = j.at("j").get<int>();
    const auto& o = j.at("o");
    if (o.size() != 4) throw Error("rect JSON needs 4 orientation bits");
    r.o_bottom = json_sign(o[0]);
    r.o_top = json_sign(o[1]);
    r.o_left = json_sign(o[2]);
    r.o_right = json_sign(o[3]);
    FormalFlow f{r};
    if (!validate_flow(f)) throw InvalidFlow("rect JSON fails invariants");
    return f;
  }
  throw Error("unknown flow kind: " + kind);
}

}  // namespace hfsign
