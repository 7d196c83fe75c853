#pragma once

#include <stdexcept>
#include <string>

namespace glgp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define GLGP_DEFINE_ERROR(Name)                                  \
    class Name : public Error {                                  \
    public:                                                      \
        explicit Name(const std::string& what) : Error(what) {}  \
    }

GLGP_DEFINE_ERROR(InvalidParams);
GLGP_DEFINE_ERROR(LinearityViolation);
GLGP_DEFINE_ERROR(NotAClique);
GLGP_DEFINE_ERROR(NotAvailable);
GLGP_DEFINE_ERROR(PreconditionViolated);
GLGP_DEFINE_ERROR(InvalidAnchor);
GLGP_DEFINE_ERROR(Terminated);
GLGP_DEFINE_ERROR(ConsistencyFailure);
GLGP_DEFINE_ERROR(OutOfDomain);
GLGP_DEFINE_ERROR(LengthMismatch);
GLGP_DEFINE_ERROR(BudgetExceeded);
GLGP_DEFINE_ERROR(InsufficientData);
GLGP_DEFINE_ERROR(IoError);
GLGP_DEFINE_ERROR(ParseError);

#undef GLGP_DEFINE_ERROR

} // namespace glgp
