// Copyright (C) 2026 The poseproc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>

namespace poseproc {

inline constexpr int kNumKeypointKinds = 18;
inline constexpr int kNumLimbTypes = 19;
inline constexpr int kHeatmapChannels = kNumKeypointKinds + 1; // + background
inline constexpr int kPafChannels = 2 * kNumLimbTypes;
inline constexpr int kBackgroundChannel = kNumKeypointKinds;

// COCO-18 keypoint order.
enum class KeypointKind : int {
    nose,
    neck,
    r_shoulder,
    r_elbow,
    r_wrist,
    l_shoulder,
    l_elbow,
    l_wrist,
    r_hip,
    r_knee,
    r_ankle,
    l_hip,
    l_knee,
    l_ankle,
    r_eye,
    l_eye,
    r_ear,
    l_ear,
};

constexpr int to_index(KeypointKind kind) noexcept { return static_cast<int>(kind); }

std::string_view keypoint_name(KeypointKind kind) noexcept;
std::optional<KeypointKind> keypoint_from_name(std::string_view name) noexcept;

struct LimbType {
    int id;
    KeypointKind from;
    KeypointKind to;
    int paf_x_channel;
    int paf_y_channel;
};

/// The 19 limb types, in grouping order. The last two (shoulder-ear) close loops
/// over the 17-limb tree.
std::span<const LimbType, kNumLimbTypes> limb_types() noexcept;

} // namespace poseproc
