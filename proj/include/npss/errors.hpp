#pragma once

#include <stdexcept>
#include <string>

namespace npss {

// Base of every error raised by the library. `kind()` is the stable,
// machine-readable name used in CLI error documents.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define NPSS_DEFINE_ERROR(Name)                                              \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& what) : Error(#Name, what) {}       \
    }

NPSS_DEFINE_ERROR(ParseError);
NPSS_DEFINE_ERROR(ValidationError);
NPSS_DEFINE_ERROR(IoError);
NPSS_DEFINE_ERROR(ShapeError);
NPSS_DEFINE_ERROR(EmptySourceError);
NPSS_DEFINE_ERROR(DomainError);
NPSS_DEFINE_ERROR(IndexError);
NPSS_DEFINE_ERROR(EmptyTestError);
NPSS_DEFINE_ERROR(LabelMismatchError);

#undef NPSS_DEFINE_ERROR

}  // namespace npss
