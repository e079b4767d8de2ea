#pragma once

#include <stdexcept>
#include <string>

namespace emq {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// medium
struct NegativeDamping : Error { using Error::Error; };
struct NonPositiveCoupling : Error { using Error::Error; };
struct PoleSingularity : Error { using Error::Error; };

// operators
struct LayoutMismatch : Error { using Error::Error; };
struct ZeroField : Error { using Error::Error; };

// kraus
struct NegativeTimeStep : Error { using Error::Error; };
struct DimensionTooLarge : Error { using Error::Error; };

// dilations
struct StructureViolation : Error { using Error::Error; };

// circuit
struct DimensionMismatch : Error { using Error::Error; };
struct NonUnitaryBlock : Error { using Error::Error; };
struct ZeroProbabilityBranch : Error { using Error::Error; };

// evolution
struct NonPositiveRate : Error { using Error::Error; };

// configuration
struct ParseError : Error { using Error::Error; };
struct SchemaError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };

}  // namespace emq
