#pragma once
#include <stdexcept>
#include <string>

namespace regge {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// geometry
struct DegenerateSimplex : Error { using Error::Error; };
struct DegenerateInput : Error { using Error::Error; };

// complex
struct IndexMismatch : Error { using Error::Error; };
struct DegenerateCone : Error { using Error::Error; };

// regge
struct DomainViolation : Error { using Error::Error; };
struct InadmissibleDisplacement : Error { using Error::Error; };

// rigidity
struct DegenerateConfiguration : Error { using Error::Error; };

// moves
struct PointNotInterior : Error { using Error::Error; };
struct NotConvexBipyramid : Error { using Error::Error; };
struct IncompatibleEdgeSets : Error { using Error::Error; };
struct GenericityFailure : Error { using Error::Error; };
struct InvalidMove : Error { using Error::Error; };

// catalog
struct ThetaOutOfRange : Error { using Error::Error; };
struct UnknownName : Error { using Error::Error; };
struct CaseUnclassifiable : Error { using Error::Error; };

// io
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };

} // namespace regge
