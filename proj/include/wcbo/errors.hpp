#pragma once

#include <stdexcept>
#include <string>

namespace wcbo {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define WCBO_DEFINE_ERROR(Name)            \
    class Name : public Error {            \
    public:                                \
        using Error::Error;                \
    }

WCBO_DEFINE_ERROR(DimensionError);
WCBO_DEFINE_ERROR(UnsupportedParameter);
WCBO_DEFINE_ERROR(IllConditioned);
WCBO_DEFINE_ERROR(NormBudgetExceeded);
WCBO_DEFINE_ERROR(RejectionBudgetExhausted);
WCBO_DEFINE_ERROR(SizeOverflow);
WCBO_DEFINE_ERROR(PolicyViolation);
WCBO_DEFINE_ERROR(TargetDegenerate);
WCBO_DEFINE_ERROR(OutOfRegime);
WCBO_DEFINE_ERROR(ConfigError);

#undef WCBO_DEFINE_ERROR

}  // namespace wcbo
