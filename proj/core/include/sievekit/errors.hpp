#pragma once

#include <stdexcept>
#include <string>

namespace sievekit {

// Thrown when an operation would exceed a declared enumeration/memory budget.
struct budget_error : std::runtime_error {
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an input violates a documented precondition.
struct precondition_error : std::invalid_argument {
    explicit precondition_error(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace sievekit
