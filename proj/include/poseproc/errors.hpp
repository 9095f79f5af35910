// Copyright (C) 2026 The poseproc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace poseproc {

/// Input maps whose dimensions or channel counts do not fit together.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A file failed to parse. `field()` names the header field or JSON key at fault.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class InvalidState : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Architecture description whose layers do not chain. `layer()` names the offender.
class InvalidArchitecture : public std::runtime_error {
public:
    InvalidArchitecture(std::string layer, const std::string& message)
        : std::runtime_error("layer '" + layer + "': " + message), layer_(std::move(layer)) {}

    const std::string& layer() const noexcept { return layer_; }

private:
    std::string layer_;
};

class PlacementInfeasible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Naive and optimized decodes disagreed; the message carries the diff.
class GateFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace poseproc
