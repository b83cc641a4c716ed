#pragma once

#include <stdexcept>
#include <string>

namespace tfc {

/// Bad input (unsupported cell, parse error, shape mismatch, ...).
class user_error : public std::runtime_error {
public:
  explicit user_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A numerical check failed (schedule verification, symmetry assertion, ...).
class verify_error : public std::runtime_error {
public:
  explicit verify_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace tfc
