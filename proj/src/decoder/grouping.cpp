// Copyright (C) 2026 The poseproc Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "poseproc/decoder.hpp"
#include "poseproc/errors.hpp"
#include "poseproc/parallel.hpp"

namespace poseproc {

namespace {

void check_pafs(const FeatureMaps& pafs)
{
    if (pafs.channels() != kPafChannels)
        throw DimensionError("pafs must have " + std::to_string(kPafChannels) + " channels, got " +
                             std::to_string(pafs.channels()));
}

int nearest_index(double v, int size) noexcept
{
    const double r = std::floor(v + 0.5);
    if (r < 0.0)
        return 0;
    if (r > size - 1)
        return size - 1;
    return static_cast<int>(r);
}

LimbConnection score_unchecked(const FeatureMaps& pafs, const LimbType& limb, const Keypoint& a, const Keypoint& b,
                               const DecoderConfig& cfg)
{
    LimbConnection conn{limb.id, a.id, b.id, 0.0, 0.0};
    const double vx = b.x - a.x;
    const double vy = b.y - a.y;
    const double norm = std::sqrt(vx * vx + vy * vy);
    if (norm == 0.0)
        return conn;

    const double dx = vx / norm;
    const double dy = vy / norm;
    const std::span<const float> field_x = pafs.plane(limb.paf_x_channel);
    const std::span<const float> field_y = pafs.plane(limb.paf_y_channel);
    const int width = pafs.width();
    const int height = pafs.height();
    const int samples = cfg.paf_sample_count;

    double sum = 0.0;
    int aligned = 0;
    for (int i = 0; i < samples; ++i) {
        const double t = static_cast<double>(i) / (samples - 1);
        const int px = nearest_index(a.x + t * vx, width);
        const int py = nearest_index(a.y + t * vy, height);
        const std::size_t idx = static_cast<std::size_t>(py) * width + px;
        const double s = field_x[idx] * dx + field_y[idx] * dy;
        sum += s;
        if (s > cfg.paf_alignment_threshold)
            ++aligned;
    }
    conn.affinity = sum / samples;
    conn.valid_ratio = static_cast<double>(aligned) / samples;
    return conn;
}

} // namespace

LimbConnection score_connection(const FeatureMaps& pafs, const LimbType& limb, const Keypoint& a, const Keypoint& b,
                                const DecoderConfig& cfg)
{
    check_pafs(pafs);
    if (a.kind != limb.from || b.kind != limb.to)
        throw std::invalid_argument("keypoint kinds do not match limb " + std::to_string(limb.id));
    return score_unchecked(pafs, limb, a, b, cfg);
}

CandidatesByLimb score_candidates(const FeatureMaps& pafs, const KeypointsByKind& keypoints, const DecoderConfig& cfg,
                                  int threads)
{
    check_pafs(pafs);
    CandidatesByLimb result;
    const auto limbs = limb_types();
    parallel_for(kNumLimbTypes, threads, [&](int l) {
        const LimbType& limb = limbs[l];
        const auto& from = keypoints[to_index(limb.from)];
        const auto& to = keypoints[to_index(limb.to)];
        auto& out = result[l];
        out.clear();
        out.reserve(from.size() * to.size());
        for (const Keypoint& a : from) {
            for (const Keypoint& b : to)
                out.push_back(score_unchecked(pafs, limb, a, b, cfg));
        }
    });
    return result;
}

std::vector<LimbConnection> group_limbs(std::span<const std::vector<LimbConnection>> candidates,
                                        const DecoderConfig& cfg)
{
    std::vector<LimbConnection> accepted;
    std::vector<LimbConnection> kept;
    std::vector<int> used_from;
    std::vector<int> used_to;
    for (const auto& list : candidates) {
        kept.clear();
        for (const LimbConnection& c : list) {
            if (c.valid_ratio >= cfg.min_valid_ratio && c.affinity > 0.0)
                kept.push_back(c);
        }
        std::sort(kept.begin(), kept.end(), [](const LimbConnection& a, const LimbConnection& b) {
            if (a.affinity != b.affinity)
                return a.affinity > b.affinity;
            if (a.from_kp != b.from_kp)
                return a.from_kp < b.from_kp;
            return a.to_kp < b.to_kp;
        });

        used_from.clear();
        used_to.clear();
        for (const LimbConnection& c : kept) {
            if (std::find(used_from.begin(), used_from.end(), c.from_kp) != used_from.end() ||
                std::find(used_to.begin(), used_to.end(), c.to_kp) != used_to.end())
                continue;
            used_from.push_back(c.from_kp);
            used_to.push_back(c.to_kp);
            accepted.push_back(c);
        }
    }
    return accepted;
}

namespace {

struct PartialSkeleton {
    std::array<int, kNumKeypointKinds> slots;
    int count = 0;
    double total = 0.0;
    bool alive = true;

    PartialSkeleton() { slots.fill(-1); }
};

} // namespace

std::vector<PoseSkeleton> assemble_skeletons(std::span<const LimbConnection> accepted,
                                             const KeypointsByKind& keypoints, const DecoderConfig& cfg)
{
    std::unordered_map<int, const Keypoint*> by_id;
    for (const auto& kind : keypoints) {
        for (const Keypoint& kp : kind)
            by_id.emplace(kp.id, &kp);
    }
    auto lookup = [&](int id) -> const Keypoint& {
        const auto it = by_id.find(id);
        if (it == by_id.end())
            throw std::invalid_argument("connection references unknown keypoint id " + std::to_string(id));
        return *it->second;
    };

    std::vector<LimbConnection> ordered(accepted.begin(), accepted.end());
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const LimbConnection& a, const LimbConnection& b) { return a.limb < b.limb; });

    std::vector<PartialSkeleton> skeletons;
    std::unordered_map<int, int> owner;
    auto owner_of = [&](int id) {
        const auto it = owner.find(id);
        return it == owner.end() ? -1 : it->second;
    };
    auto attach = [&](int s, const Keypoint& kp) {
        skeletons[s].slots[to_index(kp.kind)] = kp.id;
        skeletons[s].count += 1;
        skeletons[s].total += kp.score;
        owner[kp.id] = s;
    };

    for (const LimbConnection& c : ordered) {
        const Keypoint& a = lookup(c.from_kp);
        const Keypoint& b = lookup(c.to_kp);
        const int sa = owner_of(a.id);
        const int sb = owner_of(b.id);

        if (sa < 0 && sb < 0) {
            skeletons.emplace_back();
            const int s = static_cast<int>(skeletons.size()) - 1;
            attach(s, a);
            attach(s, b);
            skeletons[s].total += c.affinity;
        } else if (sa >= 0 && sb < 0) {
            if (skeletons[sa].slots[to_index(b.kind)] >= 0)
                continue;
            attach(sa, b);
            skeletons[sa].total += c.affinity;
        } else if (sa < 0 && sb >= 0) {
            if (skeletons[sb].slots[to_index(a.kind)] >= 0)
                continue;
            attach(sb, a);
            skeletons[sb].total += c.affinity;
        } else if (sa == sb) {
            skeletons[sa].total += c.affinity;
        } else {
            PartialSkeleton& keep = skeletons[std::min(sa, sb)];
            PartialSkeleton& gone = skeletons[std::max(sa, sb)];
            bool conflict = false;
            for (int k = 0; k < kNumKeypointKinds; ++k)
                conflict = conflict || (keep.slots[k] >= 0 && gone.slots[k] >= 0);
            if (conflict)
                continue;
            const int keep_index = std::min(sa, sb);
            for (int k = 0; k < kNumKeypointKinds; ++k) {
                if (gone.slots[k] >= 0) {
                    keep.slots[k] = gone.slots[k];
                    owner[gone.slots[k]] = keep_index;
                }
            }
            keep.count += gone.count;
            keep.total += gone.total + c.affinity;
            gone.alive = false;
        }
    }

    std::vector<PoseSkeleton> result;
    for (const PartialSkeleton& s : skeletons) {
        if (!s.alive || s.count < cfg.min_keypoints)
            continue;
        const double score = s.total / s.count;
        if (score < cfg.min_skeleton_score)
            continue;
        PoseSkeleton out;
        out.num_keypoints = s.count;
        out.score = score;
        for (int k = 0; k < kNumKeypointKinds; ++k) {
            if (s.slots[k] >= 0)
                out.slots[k] = lookup(s.slots[k]);
        }
        result.push_back(out);
    }
    std::stable_sort(result.begin(), result.end(),
                     [](const PoseSkeleton& a, const PoseSkeleton& b) { return a.score > b.score; });
    return result;
}

} // namespace poseproc
