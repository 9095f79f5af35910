// Copyright (C) 2026 The poseproc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "poseproc/decoder.hpp"
#include "poseproc/tensor.hpp"

namespace poseproc::bench {

inline constexpr int kMinFrames = 30;
inline constexpr int kWarmupFrames = 5;

/// Per-frame medians, in nanoseconds. Stage times are measured inside one pipeline
/// run, not in isolation.
struct StageTimings {
    std::int64_t resize_ns = 0;
    std::int64_t extract_ns = 0;
    std::int64_t group_ns = 0;
    std::int64_t total_ns = 0;
    int frames = 0;
    std::uint64_t config_digest = 0;

    friend bool operator==(const StageTimings&, const StageTimings&) = default;
};

struct StageFps {
    double resize = 0.0;
    double extract = 0.0;
    double group = 0.0;
    double total = 0.0;

    friend bool operator==(const StageFps&, const StageFps&) = default;
};

struct BenchReport {
    std::string scenario;
    std::string mode;
    int threads = 1;
    int upsample_factor = 0;
    int skeletons = 0;
    StageTimings timings;
    StageFps fps;
    std::string machine;
    std::string method;

    friend bool operator==(const BenchReport&, const BenchReport&) = default;
};

struct Scenario {
    std::string label;
    FeatureMaps heatmaps;
    FeatureMaps pafs;
    InputGeometry geometry;
};

/// 20 persons on 57x32 maps of a 456x256 input.
Scenario canonical_scenario();
/// Same layout with no persons.
Scenario empty_scenario();
/// A fixture directory written by the synth command.
Scenario load_scenario(const std::filesystem::path& dir);

/// Lower median (element (n - 1) / 2 of the sorted values). Throws on empty input.
std::int64_t median_ns(std::span<const std::int64_t> samples);

/// FNV-1a 64 over the decoder settings and the input dimensions.
std::uint64_t config_digest(const DecoderConfig& cfg, const Scenario& scenario);

std::string machine_descriptor();

std::string mode_name(PipelineMode mode);

struct BenchOptions {
    int frames = kMinFrames;
    int warmup = kWarmupFrames;
    int threads = 1;
};

/// Correctness gate: decodes the scenario in both modes and throws GateFailure with
/// the diff when the skeleton sets differ. Coordinates may differ by one optimized
/// upsampled pixel, expressed in original-image pixels.
void check_gate(const Scenario& scenario, const DecoderConfig& cfg, int threads = 1);

/// Runs the gate, then times `frames` runs after `warmup` untimed ones.
/// Throws std::invalid_argument when frames < kMinFrames.
BenchReport run_benchmark(const Scenario& scenario, PipelineMode mode, const DecoderConfig& cfg,
                          const BenchOptions& options = {});

/// 3 significant digits in fixed notation: 1543.2 -> "1540", 1.5432 -> "1.54".
std::string format_sig3(double value);

std::string format_report_text(const BenchReport& report);
std::string format_report_json(const BenchReport& report);
/// Throws ParseError on malformed input.
BenchReport parse_report_json(const std::string& text);

} // namespace poseproc::bench
