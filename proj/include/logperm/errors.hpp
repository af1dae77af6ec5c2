#pragma once

#include <stdexcept>
#include <string>

namespace logperm {

/// Thrown when an iterative numerical procedure fails to reach its target
/// (no saddle bracket, ill-conditioned fit, truncation bound not met, ...).
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace logperm
