#pragma once

#include <stdexcept>
#include <string>

namespace framed {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FRAMED_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  };

// expression kernel
FRAMED_DEFINE_ERROR(SingularPoint)
FRAMED_DEFINE_ERROR(BranchUnset)
FRAMED_DEFINE_ERROR(EssentialOrBranch)
FRAMED_DEFINE_ERROR(SingularMatrix)
FRAMED_DEFINE_ERROR(ParseError)

// surface data
FRAMED_DEFINE_ERROR(NotAnEnd)
FRAMED_DEFINE_ERROR(IrregularEnd)
FRAMED_DEFINE_ERROR(Unsupported)
FRAMED_DEFINE_ERROR(ContinuationFailure)
FRAMED_DEFINE_ERROR(ValidationError)

// schwarzian engine
FRAMED_DEFINE_ERROR(DegenerateData)
FRAMED_DEFINE_ERROR(ResonanceError)
FRAMED_DEFINE_ERROR(BadPole)

// representations
FRAMED_DEFINE_ERROR(PathThroughSingularity)
FRAMED_DEFINE_ERROR(CriticalPoint)

// spectral index
FRAMED_DEFINE_ERROR(MeshQuality)
FRAMED_DEFINE_ERROR(DisjointnessViolation)
FRAMED_DEFINE_ERROR(AssemblyError)
FRAMED_DEFINE_ERROR(FactorizationBreakdown)
FRAMED_DEFINE_ERROR(NotConverged)

#undef FRAMED_DEFINE_ERROR

}  // namespace framed
