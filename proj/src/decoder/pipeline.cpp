// Copyright (C) 2026 The poseproc Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "poseproc/decoder.hpp"
#include "poseproc/errors.hpp"

namespace poseproc {

void DecoderConfig::validate() const
{
    auto fail = [](const std::string& what) { throw std::invalid_argument("decoder config: " + what); };
    if (upsample_factor < 1)
        fail("upsample_factor must be >= 1");
    if (!(peak_threshold >= 0.0f) || !std::isfinite(peak_threshold))
        fail("peak_threshold must be finite and >= 0");
    if (paf_sample_count < 2)
        fail("paf_sample_count must be >= 2");
    if (!(paf_alignment_threshold >= -1.0 && paf_alignment_threshold <= 1.0))
        fail("paf_alignment_threshold must lie in [-1, 1]");
    if (!(min_valid_ratio >= 0.0 && min_valid_ratio <= 1.0))
        fail("min_valid_ratio must lie in [0, 1]");
    if (min_keypoints < 1 || min_keypoints > kNumKeypointKinds)
        fail("min_keypoints must lie in [1, 18]");
    if (!std::isfinite(min_skeleton_score))
        fail("min_skeleton_score must be finite");
}

PosePipeline::PosePipeline(DecoderConfig cfg, PipelineMode mode, int threads)
    : cfg_(cfg), mode_(mode), threads_(mode == PipelineMode::naive ? 1 : threads)
{
    cfg_.validate();
}

void PosePipeline::resize(const FeatureMaps& heatmaps, const FeatureMaps& pafs, const InputGeometry& geometry)
{
    if (heatmaps.channels() != kHeatmapChannels)
        throw DimensionError("heatmaps must have 19 channels, got " + std::to_string(heatmaps.channels()));
    if (pafs.channels() != kPafChannels)
        throw DimensionError("pafs must have 38 channels, got " + std::to_string(pafs.channels()));
    if (heatmaps.height() != pafs.height() || heatmaps.width() != pafs.width())
        throw DimensionError("heatmap resolution " + std::to_string(heatmaps.height()) + "x" +
                             std::to_string(heatmaps.width()) + " differs from paf resolution " +
                             std::to_string(pafs.height()) + "x" + std::to_string(pafs.width()));
    if (heatmaps.height() != geometry.feature_height() || heatmaps.width() != geometry.feature_width())
        throw DimensionError("maps are " + std::to_string(heatmaps.height()) + "x" + std::to_string(heatmaps.width()) +
                             " but the input geometry implies " + std::to_string(geometry.feature_height()) + "x" +
                             std::to_string(geometry.feature_width()));
    geometry_ = geometry;

    if (mode_ == PipelineMode::optimized) {
        resize_bilinear(heatmaps, cfg_.upsample_factor, heatmaps_, threads_);
        resize_bilinear(pafs, cfg_.upsample_factor, pafs_, threads_);
    } else {
        const SourceWindow window = geometry.original_window();
        heatmaps_ = resize_bilinear_to(heatmaps, geometry.original_height, geometry.original_width, window);
        pafs_ = resize_bilinear_to(pafs, geometry.original_height, geometry.original_width, window);
    }
}

void PosePipeline::extract()
{
    if (heatmaps_.empty())
        throw InvalidState("extract() called before resize()");
    if (mode_ == PipelineMode::optimized)
        keypoints_ = extract_keypoints(heatmaps_, cfg_, threads_);
    else
        keypoints_ = extract_keypoints_reference(heatmaps_, cfg_);
}

Point2 PosePipeline::to_original(const Keypoint& kp) const noexcept
{
    if (mode_ == PipelineMode::naive)
        return {kp.x, kp.y};
    return geometry_.feature_to_original(downsample_coordinate({kp.x, kp.y}, cfg_.upsample_factor));
}

std::vector<PoseSkeleton> PosePipeline::group()
{
    if (pafs_.empty())
        throw InvalidState("group() called before resize()");
    const CandidatesByLimb candidates = score_candidates(pafs_, keypoints_, cfg_, threads_);
    const std::vector<LimbConnection> accepted = group_limbs(candidates, cfg_);
    std::vector<PoseSkeleton> skeletons = assemble_skeletons(accepted, keypoints_, cfg_);
    for (PoseSkeleton& s : skeletons) {
        for (auto& slot : s.slots) {
            if (!slot)
                continue;
            const Point2 p = to_original(*slot);
            slot->x = p.x;
            slot->y = p.y;
        }
    }
    return skeletons;
}

std::vector<PoseSkeleton> PosePipeline::run(const FeatureMaps& heatmaps, const FeatureMaps& pafs,
                                            const InputGeometry& geometry)
{
    resize(heatmaps, pafs, geometry);
    extract();
    return group();
}

std::vector<PoseSkeleton> decode(const FeatureMaps& heatmaps, const FeatureMaps& pafs, const InputGeometry& geometry,
                                 const DecoderConfig& cfg, int threads)
{
    PosePipeline pipeline(cfg, PipelineMode::optimized, threads);
    return pipeline.run(heatmaps, pafs, geometry);
}

std::vector<PoseSkeleton> decode_full_resolution(const FeatureMaps& heatmaps, const FeatureMaps& pafs,
                                                 const InputGeometry& geometry, const DecoderConfig& cfg)
{
    PosePipeline pipeline(cfg, PipelineMode::naive);
    return pipeline.run(heatmaps, pafs, geometry);
}

namespace {

bool same_pose(const PoseSkeleton& a, const PoseSkeleton& b, double tolerance)
{
    for (int k = 0; k < kNumKeypointKinds; ++k) {
        const auto& pa = a.slots[k];
        const auto& pb = b.slots[k];
        if (pa.has_value() != pb.has_value())
            return false;
        if (pa && (std::abs(pa->x - pb->x) > tolerance || std::abs(pa->y - pb->y) > tolerance))
            return false;
    }
    return true;
}

std::string describe(const PoseSkeleton& s)
{
    std::ostringstream out;
    out << "{score " << s.score << ":";
    for (const auto& slot : s.slots) {
        if (slot)
            out << ' ' << keypoint_name(slot->kind) << "(" << slot->x << "," << slot->y << ")";
    }
    out << '}';
    return out.str();
}

} // namespace

std::optional<std::string> diff_skeleton_sets(std::span<const PoseSkeleton> a, std::span<const PoseSkeleton> b,
                                              double tolerance)
{
    std::ostringstream diff;
    bool differs = false;
    if (a.size() != b.size()) {
        diff << "skeleton count " << a.size() << " vs " << b.size() << "\n";
        differs = true;
    }
    std::vector<bool> taken(b.size(), false);
    for (const PoseSkeleton& s : a) {
        bool found = false;
        for (std::size_t j = 0; j < b.size() && !found; ++j) {
            if (!taken[j] && same_pose(s, b[j], tolerance)) {
                taken[j] = true;
                found = true;
            }
        }
        if (!found) {
            diff << "only in first: " << describe(s) << "\n";
            differs = true;
        }
    }
    for (std::size_t j = 0; j < b.size(); ++j) {
        if (!taken[j]) {
            diff << "only in second: " << describe(b[j]) << "\n";
            differs = true;
        }
    }
    if (!differs)
        return std::nullopt;
    return diff.str();
}

} // namespace poseproc
