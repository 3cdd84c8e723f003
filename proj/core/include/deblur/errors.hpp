#ifndef DEBLUR_ERRORS_HPP
#define DEBLUR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace deblur {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define DEBLUR_ERROR_TYPE(Name)                                                \
  class Name : public Error {                                                  \
  public:                                                                      \
    using Error::Error;                                                        \
  }

// image-core
DEBLUR_ERROR_TYPE(LengthMismatch);
DEBLUR_ERROR_TYPE(ZeroReference);
DEBLUR_ERROR_TYPE(IoError);
DEBLUR_ERROR_TYPE(MalformedFile);

// psf-model
DEBLUR_ERROR_TYPE(InvalidSpread);
DEBLUR_ERROR_TYPE(UnsupportedSize);

// blur-operators
DEBLUR_ERROR_TYPE(KernelTooWide);
DEBLUR_ERROR_TYPE(IncompatibleVariant);
DEBLUR_ERROR_TYPE(DimensionMismatch);
DEBLUR_ERROR_TYPE(TooLarge);

// noise-models
DEBLUR_ERROR_TYPE(ZeroSignal);
DEBLUR_ERROR_TYPE(NegativeIntensity);
DEBLUR_ERROR_TYPE(BadFraction);

// svd-filter
DEBLUR_ERROR_TYPE(NotSeparable);
DEBLUR_ERROR_TYPE(SingularOperator);
DEBLUR_ERROR_TYPE(InvalidFilter);

// regularization
DEBLUR_ERROR_TYPE(BadSize);
DEBLUR_ERROR_TYPE(NullSpaceOverlap);
DEBLUR_ERROR_TYPE(NotConverged);
DEBLUR_ERROR_TYPE(WrongVariant);

// param-select
DEBLUR_ERROR_TYPE(BadGrid);
DEBLUR_ERROR_TYPE(TooFewPoints);
DEBLUR_ERROR_TYPE(FlatCurve);
DEBLUR_ERROR_TYPE(NotBracketed);

// multilevel
DEBLUR_ERROR_TYPE(OddDimension);
DEBLUR_ERROR_TYPE(NotPowerOfTwo);
DEBLUR_ERROR_TYPE(TooDeep);

#undef DEBLUR_ERROR_TYPE

} // namespace deblur

#endif
