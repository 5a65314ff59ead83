#pragma once

#include <stdexcept>
#include <string>

namespace hfsign {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define HFSIGN_DEFINE_ERROR(name)                                  \
  struct name : Error {                                            \
    explicit name(const std::string& m) : Error(#name ": " + m) {} \
  }

HFSIGN_DEFINE_ERROR(PowerTooLarge);
HFSIGN_DEFINE_ERROR(InvalidFlow);
HFSIGN_DEFINE_ERROR(MovingCoordinate);
HFSIGN_DEFINE_ERROR(NotComposable);
HFSIGN_DEFINE_ERROR(SharedCoordinates);
HFSIGN_DEFINE_ERROR(DecompositionCountMismatch);
HFSIGN_DEFINE_ERROR(InconsistentSystem);
HFSIGN_DEFINE_ERROR(DimensionMismatch);
HFSIGN_DEFINE_ERROR(ScopeMismatch);
HFSIGN_DEFINE_ERROR(PowerMismatch);
HFSIGN_DEFINE_ERROR(BadDiagram);
HFSIGN_DEFINE_ERROR(FlowNotInDiagram);
HFSIGN_DEFINE_ERROR(DifferentialNotSquareZero);
HFSIGN_DEFINE_ERROR(UsageError);

#undef HFSIGN_DEFINE_ERROR

}  // namespace hfsign
