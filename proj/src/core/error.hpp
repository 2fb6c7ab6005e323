#pragma once

#include <stdexcept>
#include <string>

namespace illumest {

enum class ErrorCode {
    InvalidParam,
    Decode,
    Io,
    EmptySet,
    Degenerate,
    DegenerateReference,
    SizeMismatch,
    TooLarge,
    NonUniformWeights,
    TooSmall,
    TooFewPoints,
    ZeroVector,
    DimensionMismatch,
    Internal,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the core carries one of the codes above; the C API
// maps them 1:1 onto its status enum.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), m_code(code) {}

    ErrorCode code() const noexcept { return m_code; }

private:
    ErrorCode m_code;
};

} // namespace illumest
