#pragma once

#include <stdexcept>
#include <string>

namespace glspec {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define GLSPEC_ERROR(name)                   \
    class name : public Error {              \
    public:                                  \
        using Error::Error;                  \
    };

GLSPEC_ERROR(DomainError)
GLSPEC_ERROR(ParseError)
GLSPEC_ERROR(ConvergenceError)
GLSPEC_ERROR(QuadratureError)
GLSPEC_ERROR(UnboundedContourError)
GLSPEC_ERROR(UnsupportedModelError)
GLSPEC_ERROR(SmoothnessError)
GLSPEC_ERROR(SupportError)
GLSPEC_ERROR(MembershipWarning)
GLSPEC_ERROR(DivergenceDetected)
GLSPEC_ERROR(TimeBelowThreshold)
GLSPEC_ERROR(ClassError)
GLSPEC_ERROR(UnsupportedJumpsError)
GLSPEC_ERROR(ConfigError)
GLSPEC_ERROR(HorizonError)

#undef GLSPEC_ERROR

} // namespace glspec
