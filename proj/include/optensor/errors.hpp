#pragma once

#include <stdexcept>
#include <string>

namespace optensor {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define OPTENSOR_DEFINE_ERROR(Name) \
  struct Name : Error {             \
    using Error::Error;             \
  }

OPTENSOR_DEFINE_ERROR(DuplicateWire);
OPTENSOR_DEFINE_ERROR(UnknownWire);
OPTENSOR_DEFINE_ERROR(NotHermitian);
OPTENSOR_DEFINE_ERROR(InvalidWiring);
OPTENSOR_DEFINE_ERROR(NonRealScalar);
OPTENSOR_DEFINE_ERROR(PhysicalityViolation);
OPTENSOR_DEFINE_ERROR(SignatureMismatch);
OPTENSOR_DEFINE_ERROR(NotPhysicalInput);
OPTENSOR_DEFINE_ERROR(DegenerateTable);
OPTENSOR_DEFINE_ERROR(BadFiducials);
OPTENSOR_DEFINE_ERROR(ZeroEffect);
OPTENSOR_DEFINE_ERROR(UnboundedRatio);
OPTENSOR_DEFINE_ERROR(HookupMismatch);
OPTENSOR_DEFINE_ERROR(BadRegion);
OPTENSOR_DEFINE_ERROR(TooSparse);
OPTENSOR_DEFINE_ERROR(NoFoliation);
OPTENSOR_DEFINE_ERROR(TruncationOverflow);
OPTENSOR_DEFINE_ERROR(BadCompletion);
OPTENSOR_DEFINE_ERROR(IoError);

#undef OPTENSOR_DEFINE_ERROR

}  // namespace optensor
