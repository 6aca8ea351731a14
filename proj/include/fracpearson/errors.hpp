#pragma once

#include <stdexcept>
#include <string>

namespace fracpearson {

struct DomainError : std::invalid_argument {
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

struct NonConvergence : std::runtime_error {
    explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

struct InversionUnstable : std::runtime_error {
    explicit InversionUnstable(const std::string& what) : std::runtime_error(what) {}
};

struct QuadratureFailure : std::runtime_error {
    explicit QuadratureFailure(const std::string& what) : std::runtime_error(what) {}
};

struct HorizonTooShort : std::runtime_error {
    explicit HorizonTooShort(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateVariance : std::runtime_error {
    explicit DegenerateVariance(const std::string& what) : std::runtime_error(what) {}
};

struct UnsupportedClass : std::runtime_error {
    explicit UnsupportedClass(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fracpearson
