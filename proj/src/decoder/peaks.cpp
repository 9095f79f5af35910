// Copyright (C) 2026 The poseproc Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <stdexcept>
#include <string>

#include "poseproc/decoder.hpp"
#include "poseproc/errors.hpp"
#include "poseproc/parallel.hpp"

namespace poseproc {

namespace {

void check_heatmaps(const FeatureMaps& heatmaps)
{
    if (heatmaps.channels() != kHeatmapChannels)
        throw DimensionError("heatmaps must have " + std::to_string(kHeatmapChannels) + " channels, got " +
                             std::to_string(heatmaps.channels()));
}

// Vertex of the parabola through (-1, l), (0, c), (1, r).
double quadratic_offset(float l, float c, float r) noexcept
{
    const double curvature = static_cast<double>(l) - 2.0 * c + r;
    if (curvature >= 0.0)
        return 0.0;
    return std::clamp(0.5 * (static_cast<double>(l) - r) / curvature, -0.5, 0.5);
}

Keypoint make_keypoint(std::span<const float> plane, int width, int height, int x, int y, KeypointKind kind)
{
    const float* row = plane.data() + static_cast<std::size_t>(y) * width;
    const float v = row[x];
    double dx = 0.0;
    double dy = 0.0;
    if (x > 0 && x < width - 1)
        dx = quadratic_offset(row[x - 1], v, row[x + 1]);
    if (y > 0 && y < height - 1)
        dy = quadratic_offset(row[x - width], v, row[x + width]);
    return Keypoint{kind, x + dx, y + dy, v, -1};
}

void sort_by_score(std::vector<Keypoint>& peaks)
{
    // Peaks arrive in scan order; stability keeps that order among equal scores.
    std::stable_sort(peaks.begin(), peaks.end(),
                     [](const Keypoint& a, const Keypoint& b) { return a.score > b.score; });
}

void assign_ids(KeypointsByKind& keypoints)
{
    int next = 0;
    for (auto& kind : keypoints) {
        for (auto& kp : kind)
            kp.id = next++;
    }
}

void find_peaks(std::span<const float> plane, int width, int height, float threshold, KeypointKind kind,
                std::vector<Keypoint>& peaks)
{
    peaks.clear();
    for (int y = 0; y < height; ++y) {
        const float* row = plane.data() + static_cast<std::size_t>(y) * width;
        const float* up = y > 0 ? row - width : nullptr;
        const float* down = y < height - 1 ? row + width : nullptr;
        for (int x = 0; x < width; ++x) {
            const float v = row[x];
            if (!(v > threshold))
                continue;
            const bool has_left = x > 0;
            const bool has_right = x < width - 1;
            // Neighbors earlier in scan order must be strictly lower.
            if (has_left && !(v > row[x - 1]))
                continue;
            if (up) {
                if (!(v > up[x]) || (has_left && !(v > up[x - 1])) || (has_right && !(v > up[x + 1])))
                    continue;
            }
            // Later neighbors may tie.
            if (has_right && v < row[x + 1])
                continue;
            if (down) {
                if (v < down[x] || (has_left && v < down[x - 1]) || (has_right && v < down[x + 1]))
                    continue;
            }
            peaks.push_back(make_keypoint(plane, width, height, x, y, kind));
        }
    }
    sort_by_score(peaks);
}

} // namespace

KeypointsByKind extract_keypoints(const FeatureMaps& heatmaps, const DecoderConfig& cfg, int threads)
{
    check_heatmaps(heatmaps);
    KeypointsByKind result;
    parallel_for(kNumKeypointKinds, threads, [&](int k) {
        find_peaks(heatmaps.plane(k), heatmaps.width(), heatmaps.height(), cfg.peak_threshold,
                   static_cast<KeypointKind>(k), result[k]);
    });
    assign_ids(result);
    return result;
}

KeypointsByKind extract_keypoints_reference(const FeatureMaps& heatmaps, const DecoderConfig& cfg)
{
    check_heatmaps(heatmaps);
    const int width = heatmaps.width();
    const int height = heatmaps.height();

    KeypointsByKind result;
    for (int k = 0; k < kNumKeypointKinds; ++k) {
        std::vector<Keypoint> peaks;
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                const float v = heatmaps.at(k, y, x);
                bool is_peak = v > cfg.peak_threshold;
                for (int dy = -1; dy <= 1 && is_peak; ++dy) {
                    for (int dx = -1; dx <= 1 && is_peak; ++dx) {
                        if (dx == 0 && dy == 0)
                            continue;
                        const int nx = x + dx;
                        const int ny = y + dy;
                        if (nx < 0 || ny < 0 || nx >= width || ny >= height)
                            continue;
                        const float n = heatmaps.at(k, ny, nx);
                        const bool earlier = dy < 0 || (dy == 0 && dx < 0);
                        is_peak = earlier ? v > n : v >= n;
                    }
                }
                if (is_peak)
                    peaks.push_back(make_keypoint(heatmaps.plane(k), width, height, x, y, static_cast<KeypointKind>(k)));
            }
        }
        sort_by_score(peaks);
        result[k] = std::move(peaks);
    }
    assign_ids(result);
    return result;
}

} // namespace poseproc
