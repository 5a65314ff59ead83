#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hfsign/formal.hpp"

namespace hfsign {

// Toroidal grid diagram. Rows and columns are 1-based, rows bottom-to-top and
// columns left-to-right; alpha circles are horizontal, beta circles vertical.
// A generator places one point per row at (column base(r), row r); markings
// live in cells, with the O of row r in cell (O[r], r). Type-b stabilizations
// are modeled as abstract two-state units appended after the base
// coordinates, each carrying two canceling bigons from state u to state d.
struct GridDiagram {
  int n = 0;
  Perm O;
  std::optional<Perm> X;
  Perm alpha_order;               // row -> alpha label
  Perm beta_order;                // column -> beta label
  std::vector<int8_t> alpha_orient;  // +1 rightward
  std::vector<int8_t> beta_orient;   // +1 upward
  int b_stabilizations = 0;

  static GridDiagram make(int n, Perm O, std::optional<Perm> X = std::nullopt);
  int total_power() const { return n + b_stabilizations; }
  std::string to_json() const;
  static GridDiagram from_json(const std::string& text);
};

struct DiagramValidation {
  bool ok = true;
  std::string diagnostic;
};

DiagramValidation validate_diagram(const GridDiagram& d);

struct DiagramGenerator {
  Perm base;                    // row -> occupied column
  std::vector<int8_t> stab;     // +1 = u, -1 = d per stabilization unit
  std::string key() const;
};

// Empty rectangle on the torus with start corners on the generator: rows
// i < j; `high` selects the vertically wrapping representative whose bottom
// edge lies on row j. Extents and wrap flags are derived from the start.
struct GridRectFlow {
  int i = 1, j = 2;
  bool high = false;
  int col_from = 0, col_to = 0;  // corner columns, left then right
  int row_from = 0, row_to = 0;  // bottom then top row
  bool wrap_h = false, wrap_v = false;
};

struct StabBigonFlow {
  int unit = 1;     // 1-based stabilization unit
  int variant = 1;  // 1 or 2
};

using DiagramFlow = std::variant<GridRectFlow, StabBigonFlow>;

std::vector<DiagramGenerator> generators(const GridDiagram& d);

std::vector<std::pair<DiagramFlow, DiagramGenerator>> flows_from(
    const GridDiagram& d, const DiagramGenerator& x);

FormalGenerator generator_to_formal(const GridDiagram& d, const DiagramGenerator& x);

FormalFlow to_formal(const GridDiagram& d, const DiagramFlow& flow,
                     const DiagramGenerator& x);

GridDiagram b_stabilize(const GridDiagram& d);

}  // namespace hfsign
