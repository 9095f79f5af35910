// Copyright (C) 2026 The poseproc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "poseproc/decoder.hpp"
#include "poseproc/synth.hpp"
#include "poseproc/tensor.hpp"

namespace poseproc::io {

// Tensor container, all integers little-endian:
//   0  char[4] magic "PTNS"
//   4  u16     version (1)
//   6  u32     height
//   10 u32     width
//   14 u32     channels
//   18 u8      dtype (1 = f32)
//   19 u32     reserved, must be 0
//   23 f32[channels][height][width] payload
inline constexpr std::array<char, 4> kTensorMagic = {'P', 'T', 'N', 'S'};
inline constexpr std::uint16_t kTensorVersion = 1;
inline constexpr std::uint8_t kDtypeFloat32 = 1;
inline constexpr std::size_t kTensorHeaderSize = 23;

std::vector<std::uint8_t> encode_tensor(const FeatureMaps& maps);
/// Throws ParseError with field "magic", "version", "height", "width", "channels",
/// "dtype", "reserved", "header" (file shorter than a header), "payload" (truncated)
/// or "trailing" (bytes past the payload).
FeatureMaps decode_tensor(std::span<const std::uint8_t> bytes);

void write_tensor(const FeatureMaps& maps, const std::filesystem::path& path);
FeatureMaps read_tensor(const std::filesystem::path& path);

inline constexpr int kPoseSchemaVersion = 1;

struct PoseKeypoint {
    KeypointKind kind = KeypointKind::nose;
    double x = 0.0;
    double y = 0.0;
    double score = 0.0;

    friend bool operator==(const PoseKeypoint&, const PoseKeypoint&) = default;
};

struct PoseRecord {
    double score = 0.0;
    std::array<std::optional<PoseKeypoint>, kNumKeypointKinds> keypoints;

    friend bool operator==(const PoseRecord&, const PoseRecord&) = default;
};

/// Decoded poses of one frame, coordinates in original-image pixels.
struct PoseDocument {
    int schema_version = kPoseSchemaVersion;
    InputGeometry geometry;
    std::vector<PoseRecord> skeletons;

    friend bool operator==(const PoseDocument&, const PoseDocument&) = default;
};

PoseDocument make_pose_document(const InputGeometry& geometry, std::span<const PoseSkeleton> skeletons);

/// Canonical JSON: sorted keys, two-space indent, trailing newline.
std::string format_poses(const PoseDocument& doc);
/// Strict: unknown or missing keys, wrong types and a schema mismatch all throw
/// ParseError naming the JSON path.
PoseDocument parse_poses(const std::string& text);

void write_poses(const PoseDocument& doc, const std::filesystem::path& path);
PoseDocument read_poses(const std::filesystem::path& path);

inline constexpr int kSceneSchemaVersion = 1;

/// Ground truth of a synthetic fixture.
struct SceneTruth {
    RenderConfig render;
    int num_persons = 0;
    int original_height = 0;
    int original_width = 0;
    std::vector<GroundTruthPerson> persons;

    friend bool operator==(const SceneTruth&, const SceneTruth&) = default;
};

std::string format_scene_truth(const SceneTruth& truth);
SceneTruth parse_scene_truth(const std::string& text);

struct Fixture {
    FeatureMaps heatmaps;
    FeatureMaps pafs;
    SceneTruth truth;
};

inline constexpr const char* kHeatmapsFile = "heatmaps.ptns";
inline constexpr const char* kPafsFile = "pafs.ptns";
inline constexpr const char* kTruthFile = "truth.json";

/// Writes heatmaps.ptns, pafs.ptns and truth.json into `dir`, creating it if needed.
void write_fixture(const std::filesystem::path& dir, const Fixture& fixture);
Fixture read_fixture(const std::filesystem::path& dir);

/// Whole file as bytes / text. Throws std::runtime_error when it cannot be opened.
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

} // namespace poseproc::io
