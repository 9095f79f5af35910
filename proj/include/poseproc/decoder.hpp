// Copyright (C) 2026 The poseproc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "poseproc/skeleton_model.hpp"
#include "poseproc/tensor.hpp"

namespace poseproc {

/// Heatmap peak. Coordinates are in the pixel space of the map it was extracted from
/// until `decode` maps them to the original image.
struct Keypoint {
    KeypointKind kind = KeypointKind::nose;
    double x = 0.0;
    double y = 0.0;
    float score = 0.0f;
    int id = -1;

    friend bool operator==(const Keypoint&, const Keypoint&) = default;
};

/// Scored pairing of two keypoints for one limb type.
struct LimbConnection {
    int limb = 0;
    int from_kp = -1;
    int to_kp = -1;
    double affinity = 0.0;
    double valid_ratio = 0.0;

    friend bool operator==(const LimbConnection&, const LimbConnection&) = default;
};

struct PoseSkeleton {
    std::array<std::optional<Keypoint>, kNumKeypointKinds> slots;
    int num_keypoints = 0;
    /// (sum of keypoint scores + sum of connection affinities) / num_keypoints
    double score = 0.0;

    friend bool operator==(const PoseSkeleton&, const PoseSkeleton&) = default;
};

struct DecoderConfig {
    int upsample_factor = 4;
    float peak_threshold = 0.1f;
    int paf_sample_count = 10;
    double paf_alignment_threshold = 0.05;
    double min_valid_ratio = 0.8;
    int min_keypoints = 3;
    double min_skeleton_score = 0.2;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;

    friend bool operator==(const DecoderConfig&, const DecoderConfig&) = default;
};

using KeypointsByKind = std::array<std::vector<Keypoint>, kNumKeypointKinds>;
using CandidatesByLimb = std::array<std::vector<LimbConnection>, kNumLimbTypes>;

/// Peaks of the 18 keypoint channels (the background channel is skipped).
///
/// A pixel is a peak when it exceeds the threshold, is strictly greater than the
/// neighbors that precede it in row-major order and not smaller than those that
/// follow it, so a plateau yields only its first pixel. Positions get a 1-D quadratic
/// refinement per axis, clamped to +-0.5 px. Each kind is sorted by descending score
/// and ids are numbered kind-major in that order.
KeypointsByKind extract_keypoints(const FeatureMaps& heatmaps, const DecoderConfig& cfg, int threads = 1);

/// Same contract as extract_keypoints, written as a plain bounds-checked scan over
/// every pixel. This is what the naive pipeline runs.
KeypointsByKind extract_keypoints_reference(const FeatureMaps& heatmaps, const DecoderConfig& cfg);

/// PAF line integral between `a` and `b`, sampled at `paf_sample_count` evenly spaced
/// points including both endpoints, nearest-neighbor lookup (floor(v + 0.5)).
LimbConnection score_connection(const FeatureMaps& pafs, const LimbType& limb, const Keypoint& a, const Keypoint& b,
                                const DecoderConfig& cfg);

/// All cross-product candidates per limb type, scored.
CandidatesByLimb score_candidates(const FeatureMaps& pafs, const KeypointsByKind& keypoints, const DecoderConfig& cfg,
                                  int threads = 1);

/// Greedy per-limb matching: drop weak candidates, then take candidates by descending
/// affinity as long as neither endpoint is already matched for that limb type.
std::vector<LimbConnection> group_limbs(std::span<const std::vector<LimbConnection>> candidates,
                                        const DecoderConfig& cfg);

/// Merge accepted connections into person instances, in limb-id order.
std::vector<PoseSkeleton> assemble_skeletons(std::span<const LimbConnection> accepted,
                                             const KeypointsByKind& keypoints, const DecoderConfig& cfg);

enum class PipelineMode {
    naive,     ///< resize to the original image size, reference extraction, fresh buffers per frame
    optimized, ///< resize by cfg.upsample_factor into reused buffers, parallel extraction
};

/// Post-processing for one stream of frames, split into the stages the benchmark times.
class PosePipeline {
public:
    explicit PosePipeline(DecoderConfig cfg, PipelineMode mode = PipelineMode::optimized, int threads = 1);

    /// Validates the inputs and upsamples them. Throws DimensionError on mismatch.
    void resize(const FeatureMaps& heatmaps, const FeatureMaps& pafs, const InputGeometry& geometry);
    void extract();
    /// Scoring, grouping and assembly; coordinates are returned in original-image pixels.
    std::vector<PoseSkeleton> group();

    std::vector<PoseSkeleton> run(const FeatureMaps& heatmaps, const FeatureMaps& pafs, const InputGeometry& geometry);

    const DecoderConfig& config() const noexcept { return cfg_; }
    PipelineMode mode() const noexcept { return mode_; }
    const FeatureMaps& upsampled_heatmaps() const noexcept { return heatmaps_; }
    const FeatureMaps& upsampled_pafs() const noexcept { return pafs_; }
    const KeypointsByKind& keypoints() const noexcept { return keypoints_; }

private:
    Point2 to_original(const Keypoint& kp) const noexcept;

    DecoderConfig cfg_;
    PipelineMode mode_;
    int threads_;
    InputGeometry geometry_;
    FeatureMaps heatmaps_;
    FeatureMaps pafs_;
    KeypointsByKind keypoints_;
};

/// Full pipeline at cfg.upsample_factor. Inputs are the stride-sized network outputs.
std::vector<PoseSkeleton> decode(const FeatureMaps& heatmaps, const FeatureMaps& pafs, const InputGeometry& geometry,
                                 const DecoderConfig& cfg, int threads = 1);

/// Full pipeline with the maps resized to the original image size.
std::vector<PoseSkeleton> decode_full_resolution(const FeatureMaps& heatmaps, const FeatureMaps& pafs,
                                                 const InputGeometry& geometry, const DecoderConfig& cfg);

/// Compares two decode results as sets: same count, and a one-to-one pairing with
/// equal filled slots and every coordinate within `tolerance` pixels.
/// Returns a human-readable diff, or nullopt when they match.
std::optional<std::string> diff_skeleton_sets(std::span<const PoseSkeleton> a, std::span<const PoseSkeleton> b,
                                              double tolerance);

} // namespace poseproc
