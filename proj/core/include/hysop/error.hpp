#pragma once

#include <stdexcept>
#include <string>

namespace hysop {

// Every library failure carries a short machine-readable code next to the
// human message; the CLI prints both on one line.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define HYSOP_DEFINE_ERROR(Name, tag)                                         \
    class Name : public Error {                                               \
    public:                                                                   \
        explicit Name(const std::string& message) : Error(tag, message) {}    \
    }

HYSOP_DEFINE_ERROR(DomainError, "domain");
HYSOP_DEFINE_ERROR(SaturationError, "saturation");
HYSOP_DEFINE_ERROR(RangeError, "range");
HYSOP_DEFINE_ERROR(ConvergenceError, "convergence");
HYSOP_DEFINE_ERROR(ParameterError, "parameter");
HYSOP_DEFINE_ERROR(ShapeError, "shape");
HYSOP_DEFINE_ERROR(TapeError, "tape");
HYSOP_DEFINE_ERROR(NumericError, "numeric");
HYSOP_DEFINE_ERROR(FormatError, "format");
HYSOP_DEFINE_ERROR(IoError, "io");
HYSOP_DEFINE_ERROR(TrainingError, "training");

#undef HYSOP_DEFINE_ERROR

}  // namespace hysop
