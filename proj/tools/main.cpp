// Copyright (C) 2026 The poseproc Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "poseproc/cli.hpp"

int main(int argc, char** argv)
{
    return poseproc::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
