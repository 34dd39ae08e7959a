#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fairplay {

// Numeric values are shared with the C API status codes in fairplay.h.
enum class ErrorCode : int {
    InvalidArgument = 1,
    PriceOutOfBounds = 2,
    BracketExhausted = 3,
    NonpositivePrice = 4,
    DomainError = 5,
    DegenerateLoss = 6,
    EmptyDomain = 7,
    ExpiredContract = 8,
    NoLossEvents = 9,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace fairplay
