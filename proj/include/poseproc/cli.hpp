// Copyright (C) 2026 The poseproc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace poseproc::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1, ///< I/O and other unexpected errors
    kParseError = 2,
    kDimensionError = 3,
    kPlacementInfeasible = 4,
    kGateFailure = 5,
};

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace poseproc::cli
