// Copyright (C) 2026 The poseproc Authors
// SPDX-License-Identifier: Apache-2.0

#include "poseproc/skeleton_model.hpp"

namespace poseproc {

namespace {

constexpr std::array<std::string_view, kNumKeypointKinds> kNames = {
    "nose",   "neck",   "r_shoulder", "r_elbow", "r_wrist", "l_shoulder", "l_elbow", "l_wrist", "r_hip",
    "r_knee", "r_ankle", "l_hip",     "l_knee",  "l_ankle", "r_eye",      "l_eye",   "r_ear",   "l_ear",
};

using K = KeypointKind;

// Pairs and PAF channel assignment follow the COCO OpenPose model output layout.
constexpr std::array<LimbType, kNumLimbTypes> kLimbs = {{
    {0, K::neck, K::r_shoulder, 12, 13},
    {1, K::neck, K::l_shoulder, 20, 21},
    {2, K::r_shoulder, K::r_elbow, 14, 15},
    {3, K::r_elbow, K::r_wrist, 16, 17},
    {4, K::l_shoulder, K::l_elbow, 22, 23},
    {5, K::l_elbow, K::l_wrist, 24, 25},
    {6, K::neck, K::r_hip, 0, 1},
    {7, K::r_hip, K::r_knee, 2, 3},
    {8, K::r_knee, K::r_ankle, 4, 5},
    {9, K::neck, K::l_hip, 6, 7},
    {10, K::l_hip, K::l_knee, 8, 9},
    {11, K::l_knee, K::l_ankle, 10, 11},
    {12, K::neck, K::nose, 28, 29},
    {13, K::nose, K::r_eye, 30, 31},
    {14, K::r_eye, K::r_ear, 34, 35},
    {15, K::nose, K::l_eye, 32, 33},
    {16, K::l_eye, K::l_ear, 36, 37},
    {17, K::r_shoulder, K::r_ear, 18, 19},
    {18, K::l_shoulder, K::l_ear, 26, 27},
}};

} // namespace

std::string_view keypoint_name(KeypointKind kind) noexcept
{
    return kNames[to_index(kind)];
}

std::optional<KeypointKind> keypoint_from_name(std::string_view name) noexcept
{
    for (int i = 0; i < kNumKeypointKinds; ++i) {
        if (kNames[i] == name)
            return static_cast<KeypointKind>(i);
    }
    return std::nullopt;
}

std::span<const LimbType, kNumLimbTypes> limb_types() noexcept
{
    return kLimbs;
}

} // namespace poseproc
