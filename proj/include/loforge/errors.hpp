#pragma once

#include <stdexcept>
#include <string>

namespace loforge {

/// A computation would exceed a configured size cap (enumeration, window, group order).
class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The operation is mathematically undefined for the given group kind (e.g. order of Z).
class unsupported_operation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Precondition failures of divide_progression, distinguished by reason.
class divide_error : public std::invalid_argument {
public:
    enum class Reason { not_symmetric, not_two_proper, zero_missing, containment_failed };

    divide_error(Reason reason, const std::string& what)
        : std::invalid_argument(what), reason_(reason) {}

    Reason reason() const noexcept { return reason_; }

private:
    Reason reason_;
};

}  // namespace loforge
