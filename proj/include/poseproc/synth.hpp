// Copyright (C) 2026 The poseproc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "poseproc/skeleton_model.hpp"
#include "poseproc/tensor.hpp"

namespace poseproc {

/// Ground-truth person in feature-map pixels; an empty slot is an invisible keypoint.
struct GroundTruthPerson {
    std::array<std::optional<Point2>, kNumKeypointKinds> keypoints;

    int visible_count() const noexcept;

    friend bool operator==(const GroundTruthPerson&, const GroundTruthPerson&) = default;
};

struct RenderConfig {
    double sigma = 2.0;
    double limb_width = 1.5;
    int map_height = 32;
    int map_width = 57;
    std::uint64_t seed = 0;
    /// Minimum distance between same-kind keypoints of two different persons.
    double min_separation = 16.0;
    /// Scene generation only: every person has all 18 keypoints visible.
    bool full_body = false;

    void validate() const;

    friend bool operator==(const RenderConfig&, const RenderConfig&) = default;
};

/// Channel k is the pixel-wise max over persons of a unit Gaussian at keypoint k;
/// channel 18 is 1 - max of channels 0..17.
FeatureMaps render_heatmaps(std::span<const GroundTruthPerson> persons, const RenderConfig& cfg);

/// Unit limb direction on every pixel within `limb_width` of the limb segment whose
/// projection falls on the segment. Overlapping limbs of one type are averaged.
FeatureMaps render_pafs(std::span<const GroundTruthPerson> persons, const RenderConfig& cfg);

struct Scene {
    std::vector<GroundTruthPerson> persons;
    FeatureMaps heatmaps;
    FeatureMaps pafs;
};

/// Random scene, deterministic in cfg.seed. Persons are small stick figures at integer
/// map positions, at least 2 px inside the map, each showing a connected subset of
/// 3..clamp(60 / num_persons, 3, 18) keypoints (all 18 with cfg.full_body). Throws PlacementInfeasible when
/// rejection sampling exceeds 10000 attempts.
Scene generate_scene(int num_persons, const RenderConfig& cfg);

/// Smallest distance between same-kind keypoints of two different persons;
/// +infinity when no kind is shared.
double min_same_kind_distance(std::span<const GroundTruthPerson> persons);

} // namespace poseproc
