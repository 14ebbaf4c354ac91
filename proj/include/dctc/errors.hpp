#pragma once

#include <stdexcept>
#include <string>

namespace dctc {

// Scenario content fails validation (bad weights, missing fields, ...).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A configured resource guard tripped (atom cap, dimension cap, step budget).
struct ResourceLimitError : std::runtime_error {
    explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace dctc
