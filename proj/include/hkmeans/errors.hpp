#pragma once

#include <stdexcept>
#include <string>

namespace hkm {

/// Caller violated a precondition (bad arguments, malformed input file, ...).
/// The CLI maps this to exit code 2.
struct usage_error : std::runtime_error {
    explicit usage_error(const std::string& what) : std::runtime_error(what) {}
};

/// A configured budget (recursion cap, enumeration budget) was exceeded.
/// Never downgraded to a truncated result; the CLI maps this to exit code 3.
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hkm
