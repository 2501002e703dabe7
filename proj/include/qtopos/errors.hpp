#pragma once

#include <stdexcept>
#include <string>

namespace qtopos {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// matrix-core
struct NonHermitian : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };

// contexts
struct NonCommuting : Error { using Error::Error; };
struct TrivialContext : Error { using Error::Error; };
struct CanonicalizationClash : Error { using Error::Error; };
struct EmptySeed : Error { using Error::Error; };

// presheaf / subobjects / measures
struct NotComparable : Error { using Error::Error; };
struct NotInContext : Error { using Error::Error; };
struct FamilyMismatch : Error { using Error::Error; };
struct WellDefinednessViolation : Error { using Error::Error; };
struct MissingContext : Error { using Error::Error; };

// scenario / cli
struct ScenarioError : Error { using Error::Error; };

}  // namespace qtopos
