#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hfsign/errors.hpp"

namespace hfsign {

// Permutations are stored as 1-based image vectors: p[i-1] = image of i.
using Perm = std::vector<int>;

bool is_permutation(const Perm& p);
Perm identity_perm(int n);
std::vector<Perm> all_permutations(int n);  // lexicographic
int perm_parity(const Perm& p);             // +1 even, -1 odd
Perm inverse_perm(const Perm& p);
std::string perm_key(const Perm& p);

// A formal generator of power n: a matching of alpha- to beta-curves plus a
// crossing-sign profile indexed by the alpha curve.
struct FormalGenerator {
  Perm sigma;
  std::vector<int8_t> epsilon;  // entries ±1

  int power() const { return static_cast<int>(sigma.size()); }
  bool valid() const;
  std::string key() const;
  bool operator==(const FormalGenerator&) const = default;
  bool operator<(const FormalGenerator& o) const;
};

// A bigon move at one coordinate. In the canonical local picture the alpha
// arc is the lower boundary and the beta arc the upper one; +1 points
// left-to-right. The start corner is the left one, which forces
// epsilon[coord] = o_alpha * o_beta at the start generator.
struct FormalBigon {
  FormalGenerator start;
  int coord = 1;
  int8_t o_alpha = 1;
  int8_t o_beta = 1;

  FormalGenerator end() const;
  std::string key() const;
  bool operator==(const FormalBigon&) const = default;
  bool operator<(const FormalBigon& o) const;
};

// A rectangle move at two coordinates i < j. Axis-aligned local picture:
// alpha sides horizontal with the lower index on the bottom, beta sides
// vertical; horizontal bits +1 point right, vertical bits +1 point up.
// Start corners are bottom-left (coordinate i) and top-right (coordinate j);
// a corner sign is the product of the two adjacent side bits.
struct FormalRectangle {
  FormalGenerator start;
  int i = 1;
  int j = 2;
  int8_t o_bottom = 1;
  int8_t o_top = 1;
  int8_t o_left = 1;
  int8_t o_right = 1;

  FormalGenerator end() const;
  std::string key() const;
  bool operator==(const FormalRectangle&) const = default;
  bool operator<(const FormalRectangle& o) const;
};

using FormalFlow = std::variant<FormalBigon, FormalRectangle>;

int flow_power(const FormalFlow& f);
std::string flow_key(const FormalFlow& f);
FormalGenerator flow_start(const FormalFlow& f);
FormalGenerator flow_end(const FormalFlow& f);
std::vector<int> moving_coords(const FormalFlow& f);
bool validate_flow(const FormalFlow& f);
std::pair<FormalGenerator, FormalGenerator> flow_endpoints(const FormalFlow& f);

enum class CompanionKind { Alpha, Beta };

// The unique flow closing `f` into a boundary degeneration of the given kind.
FormalFlow companion(const FormalFlow& f, CompanionKind kind);

enum class RectEdge { Bottom, Top, Left, Right };

FormalRectangle reverse_edge(const FormalRectangle& r, RectEdge edge);
FormalRectangle simple_flip(const FormalRectangle& r, int p);

std::vector<FormalGenerator> enumerate_generators(int n);
std::pair<std::vector<FormalBigon>, std::vector<FormalRectangle>> enumerate_flows(int n);

std::vector<FormalBigon> bigons_from(const FormalGenerator& g);
std::vector<FormalRectangle> rectangles_from(const FormalGenerator& g);
std::vector<FormalFlow> flows_from_generator(const FormalGenerator& g);

// Counting formulas.
long long generator_count(int n);
long long bigon_count(int n);
long long rectangle_count(int n);

// JSON serialization.
std::string generator_to_json(const FormalGenerator& g);
FormalGenerator generator_from_json(const std::string& text);
std::string flow_to_json(const FormalFlow& f);
FormalFlow flow_from_json(const std::string& text);

}  // namespace hfsign
