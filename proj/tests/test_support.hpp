// Copyright (C) 2026 The poseproc Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference implementations used as test oracles. None of these share
// code with the library.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <random>
#include <unistd.h>
#include <string>
#include <vector>

#include "poseproc/decoder.hpp"
#include "poseproc/tensor.hpp"

namespace poseproc::testing {

/// Bilinear sample at fractional source coordinate (sy, sx) after clamping.
inline double bilinear_sample(const FeatureMaps& m, int c, double sy, double sx)
{
    sy = std::min(std::max(sy, 0.0), m.height() - 1.0);
    sx = std::min(std::max(sx, 0.0), m.width() - 1.0);
    const int y0 = static_cast<int>(sy);
    const int x0 = static_cast<int>(sx);
    const int y1 = std::min(y0 + 1, m.height() - 1);
    const int x1 = std::min(x0 + 1, m.width() - 1);
    const double fy = sy - y0;
    const double fx = sx - x0;
    return m.at(c, y0, x0) * (1 - fy) * (1 - fx) + m.at(c, y0, x1) * (1 - fy) * fx +
           m.at(c, y1, x0) * fy * (1 - fx) + m.at(c, y1, x1) * fy * fx;
}

/// Upsampled value at output pixel (y, x) for an integer factor, half-pixel centers.
inline double upsampled_value(const FeatureMaps& m, int c, int factor, int y, int x)
{
    return bilinear_sample(m, c, (y + 0.5) / factor - 0.5, (x + 0.5) / factor - 0.5);
}

inline FeatureMaps random_maps(int h, int w, int c, std::uint32_t seed, float lo = 0.0f, float hi = 1.0f)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<float> dist(lo, hi);
    FeatureMaps m(h, w, c);
    for (float& v : m.values())
        v = dist(rng);
    return m;
}

/// Peak rule stated directly: above threshold, strictly above every 8-neighbor that
/// comes earlier in row-major order, not below any that comes later.
inline std::vector<std::pair<int, int>> local_maxima(const FeatureMaps& m, int c, float threshold)
{
    std::vector<std::pair<int, int>> out;
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            const float v = m.at(c, y, x);
            if (!(v > threshold))
                continue;
            bool ok = true;
            for (int ny = y - 1; ny <= y + 1; ++ny) {
                for (int nx = x - 1; nx <= x + 1; ++nx) {
                    if ((ny == y && nx == x) || ny < 0 || nx < 0 || ny >= m.height() || nx >= m.width())
                        continue;
                    const long here = static_cast<long>(y) * m.width() + x;
                    const long there = static_cast<long>(ny) * m.width() + nx;
                    const float n = m.at(c, ny, nx);
                    if (there < here ? !(v > n) : v < n)
                        ok = false;
                }
            }
            if (ok)
                out.emplace_back(y, x);
        }
    }
    return out;
}

/// Greedy matching by repeated selection of the single best admissible candidate.
inline std::vector<LimbConnection> greedy_oracle(const std::vector<std::vector<LimbConnection>>& candidates,
                                                 const DecoderConfig& cfg)
{
    std::vector<LimbConnection> out;
    for (const auto& list : candidates) {
        std::vector<bool> done(list.size(), false);
        std::vector<int> used_from, used_to;
        auto used = [](const std::vector<int>& v, int id) { return std::count(v.begin(), v.end(), id) > 0; };
        while (true) {
            int best = -1;
            for (std::size_t i = 0; i < list.size(); ++i) {
                const LimbConnection& c = list[i];
                if (done[i] || c.valid_ratio < cfg.min_valid_ratio || c.affinity <= 0.0)
                    continue;
                if (used(used_from, c.from_kp) || used(used_to, c.to_kp))
                    continue;
                if (best < 0) {
                    best = static_cast<int>(i);
                    continue;
                }
                const LimbConnection& b = list[best];
                const bool better = c.affinity > b.affinity ||
                                    (c.affinity == b.affinity &&
                                     (c.from_kp < b.from_kp || (c.from_kp == b.from_kp && c.to_kp < b.to_kp)));
                if (better)
                    best = static_cast<int>(i);
            }
            if (best < 0)
                break;
            done[best] = true;
            used_from.push_back(list[best].from_kp);
            used_to.push_back(list[best].to_kp);
            out.push_back(list[best]);
        }
    }
    return out;
}

/// Random grouping instance: per limb type up to `max_side` keypoints per side, with
/// affinities drawn from a small set so ties occur.
inline std::vector<std::vector<LimbConnection>> random_candidates(std::mt19937& rng, int max_side)
{
    std::vector<std::vector<LimbConnection>> all(kNumLimbTypes);
    std::uniform_int_distribution<int> side(0, max_side);
    std::uniform_int_distribution<int> level(-4, 10);
    std::uniform_int_distribution<int> ratio(5, 10);
    int next_id = 0;
    for (int l = 0; l < kNumLimbTypes; ++l) {
        const int n_from = side(rng);
        const int n_to = side(rng);
        const int from_base = next_id;
        next_id += n_from;
        const int to_base = next_id;
        next_id += n_to;
        for (int i = 0; i < n_from; ++i) {
            for (int j = 0; j < n_to; ++j)
                all[l].push_back({l, from_base + i, to_base + j, level(rng) / 10.0, ratio(rng) / 10.0});
        }
        std::shuffle(all[l].begin(), all[l].end(), rng);
    }
    return all;
}

/// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir()
    {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("poseproc_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

} // namespace poseproc::testing
