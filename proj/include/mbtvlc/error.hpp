// Copyright (C) 2026 The mbtvlc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace mbtvlc {

// Precondition or schema violation on user-supplied configuration.
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// A well-formed request that the physics cannot satisfy (unreachable BER,
// no visible transmitter, degenerate statistics).
class PhysicsError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Allocation ran out of transmitter branches or channels.
class CapacityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message)
{
    if (!condition) {
        throw ConfigError(message);
    }
}

}  // namespace mbtvlc
