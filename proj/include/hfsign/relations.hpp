#pragma once

#include <functional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hfsign/formal.hpp"

namespace hfsign {

enum RelationFamily : unsigned {
  FamDegenerations = 1u,
  FamDisjoint = 2u,
  FamGrid = 4u,
  FamFlip = 8u,
  FamBasic = 16u,
  FamAll = 31u,
};

const char* family_name(RelationFamily f);
unsigned parse_families(const std::string& csv);  // "degenerations,flip,..." or "all"

// One constraint a sign assignment must satisfy. Degenerations carry a pair
// of flows, squares carry two composable length-2 paths with common ends.
// rhs is the GF(2) value of the sum of the flow sign bits (sign s = (-1)^bit):
// 0 for alpha degenerations, 1 for beta degenerations and squares.
struct RelationInstance {
  enum class Kind { AlphaDegeneration, BetaDegeneration, Square };
  Kind kind = Kind::Square;
  std::vector<FormalFlow> flows;
  int rhs = 1;
  std::string family;

  bool well_formed() const;
  int expected_product(bool swapped_roles = false) const;  // ±1
};

// Swap the order of two composable flows with disjoint moving coordinates.
std::pair<FormalFlow, FormalFlow> disjoint_partner(const FormalFlow& f1,
                                                   const FormalFlow& f2);

// Square relations among rectangles with the all-plus sign profile, realized
// on the n x n torus grid with generator points at (x(r), r). Every ordered
// composable pair of such rectangles with distinct outer generators yields a
// composite region with exactly two ordered decompositions; the pairing of
// the two decompositions is the emitted square.
std::vector<RelationInstance> grid_composites(const Perm& x, int n);

// Square tying a rectangle to its simple flip at a non-moving coordinate p
// through a pair of bigons supported at p.
RelationInstance flip_square(const FormalRectangle& r, int p);

enum class BasicEndpoint { StartCorner, EndCorner };

// Square tying a rectangle to the rectangle with one edge orientation
// reversed, through two bigons supported at the moving coordinates adjacent
// to the reversed edge. The bigon orientation bits come from the local
// picture in which the curve carrying the reversed edge doubles back past
// the chosen endpoint of the edge.
RelationInstance basic_relation(const FormalRectangle& r, RectEdge edge,
                                BasicEndpoint endpoint = BasicEndpoint::StartCorner);

// Enumerates relation instances of the selected families in a deterministic
// order, each instance exactly once.
void for_each_relation(int n, unsigned families,
                       const std::function<void(const RelationInstance&)>& fn);

struct GF2Row {
  std::vector<int> vars;
  int rhs;
  std::string family;
};

struct GF2System {
  std::vector<std::string> var_keys;
  std::unordered_map<std::string, int> index;
  std::vector<GF2Row> rows;

  int var(const std::string& key) const;
  std::string to_text() const;  // "vars m rows k" header then "idx idx ... | rhs"
};

GF2System enumerate_relation_rows(int n, unsigned families);

}  // namespace hfsign
