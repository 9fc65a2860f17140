#pragma once

#include <stdexcept>
#include <string>

namespace dampkit {

enum class ErrorCode {
    InvalidArgument = 1,
    DimensionMismatch,
    NotDiagonalizable,
    SingularMap,
    ContourFailure,
    PreconditionViolated,
    UnknownModel,
    Io,
};

const char* error_code_name(ErrorCode code);

// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

#define DAMPKIT_DEFINE_ERROR(Name)                                              \
    class Name : public Error {                                                 \
    public:                                                                     \
        explicit Name(const std::string& message)                              \
            : Error(ErrorCode::Name, message) {}                               \
    }

DAMPKIT_DEFINE_ERROR(InvalidArgument);
DAMPKIT_DEFINE_ERROR(DimensionMismatch);
DAMPKIT_DEFINE_ERROR(NotDiagonalizable);
DAMPKIT_DEFINE_ERROR(SingularMap);
DAMPKIT_DEFINE_ERROR(ContourFailure);
DAMPKIT_DEFINE_ERROR(PreconditionViolated);
DAMPKIT_DEFINE_ERROR(UnknownModel);

#undef DAMPKIT_DEFINE_ERROR

class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error(ErrorCode::Io, message) {}
};

} // namespace dampkit
