#pragma once

#include <stdexcept>
#include <string>

namespace polyrig {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotFullDimensional : Error { using Error::Error; };
struct RedundantVertex : Error { using Error::Error; };
struct DegenerateInput : Error { using Error::Error; };
struct OriginNotInterior : Error { using Error::Error; };
struct NonpositiveOffset : Error { using Error::Error; };
struct Unbounded : Error { using Error::Error; };
struct EmptyInterior : Error { using Error::Error; };
struct EmptyFace : Error { using Error::Error; };
struct PointNotInterior : Error { using Error::Error; };
struct InconsistentDiagonal : Error { using Error::Error; };
struct GraphMismatch : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct NotInscribed : Error { using Error::Error; };
struct NotCombEquivalent : Error { using Error::Error; };
struct DisconnectedGraph : Error { using Error::Error; };
struct InvalidWeights : Error { using Error::Error; };
struct NotPSD : Error { using Error::Error; };
struct PreconditionViolated : Error { using Error::Error; };
struct UnknownFixture : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

}  // namespace polyrig
