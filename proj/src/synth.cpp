// Copyright (C) 2026 The poseproc Authors
// SPDX-License-Identifier: Apache-2.0

#include "poseproc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "poseproc/errors.hpp"

namespace poseproc {

namespace {

constexpr int kMaxPlacementAttempts = 10000;
constexpr int kBorderMargin = 2;
// Visible keypoints per scene, spread over the persons. A 57x32 map fits roughly nine
// same-kind keypoints 16 px apart, so 18 kinds cannot carry much more than this.
constexpr int kSceneKeypointBudget = 60;

// Stick figure around the neck at (0, 0), y pointing down.
constexpr std::array<std::array<int, 2>, kNumKeypointKinds> kTemplate = {{
    {0, -2},  // nose
    {0, 0},   // neck
    {-2, 0},  // r_shoulder
    {-3, 2},  // r_elbow
    {-3, 4},  // r_wrist
    {2, 0},   // l_shoulder
    {3, 2},   // l_elbow
    {3, 4},   // l_wrist
    {-1, 4},  // r_hip
    {-1, 6},  // r_knee
    {-1, 8},  // r_ankle
    {1, 4},   // l_hip
    {1, 6},   // l_knee
    {1, 8},   // l_ankle
    {-1, -3}, // r_eye
    {1, -3},  // l_eye
    {-2, -2}, // r_ear
    {2, -2},  // l_ear
}};

// Extremities get per-person positional jitter.
constexpr std::array<KeypointKind, 10> kJittered = {
    KeypointKind::r_elbow, KeypointKind::r_wrist, KeypointKind::l_elbow, KeypointKind::l_wrist,
    KeypointKind::r_knee,  KeypointKind::r_ankle, KeypointKind::l_knee,  KeypointKind::l_ankle,
    KeypointKind::r_ear,   KeypointKind::l_ear,
};

// std::uniform_int_distribution is implementation-defined; this keeps scenes
// identical across standard libraries.
int uniform_int(std::mt19937_64& rng, int lo, int hi)
{
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(rng() % span);
}

double distance(Point2 a, Point2 b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

std::array<bool, kNumKeypointKinds> sample_visibility(std::mt19937_64& rng, bool full_body, int max_visible)
{
    std::array<bool, kNumKeypointKinds> visible{};
    if (full_body) {
        visible.fill(true);
        return visible;
    }
    const int target = uniform_int(rng, 3, max_visible);
    visible[uniform_int(rng, 0, kNumKeypointKinds - 1)] = true;
    int count = 1;
    std::vector<int> frontier;
    while (count < target) {
        frontier.clear();
        for (const LimbType& limb : limb_types()) {
            const int f = to_index(limb.from);
            const int t = to_index(limb.to);
            if (visible[f] != visible[t]) {
                const int candidate = visible[f] ? t : f;
                if (std::find(frontier.begin(), frontier.end(), candidate) == frontier.end())
                    frontier.push_back(candidate);
            }
        }
        std::sort(frontier.begin(), frontier.end());
        visible[frontier[uniform_int(rng, 0, static_cast<int>(frontier.size()) - 1)]] = true;
        ++count;
    }
    return visible;
}

std::optional<GroundTruthPerson> sample_person(std::mt19937_64& rng, const RenderConfig& cfg, int max_visible)
{
    const double scale = uniform_int(rng, 0, 1) == 0 ? 1.0 : 1.5;
    std::array<std::array<int, 2>, kNumKeypointKinds> offsets{};
    for (int k = 0; k < kNumKeypointKinds; ++k) {
        offsets[k][0] = static_cast<int>(std::lround(kTemplate[k][0] * scale));
        offsets[k][1] = static_cast<int>(std::lround(kTemplate[k][1] * scale));
    }
    for (KeypointKind kind : kJittered) {
        offsets[to_index(kind)][0] += uniform_int(rng, -1, 1);
        offsets[to_index(kind)][1] += uniform_int(rng, -1, 1);
    }
    const std::array<bool, kNumKeypointKinds> visible = sample_visibility(rng, cfg.full_body, max_visible);
    const int anchor_x = uniform_int(rng, -6, cfg.map_width + 5);
    const int anchor_y = uniform_int(rng, -12, cfg.map_height + 5);

    // Jitter must not collapse a limb to zero length.
    for (const LimbType& limb : limb_types()) {
        if (offsets[to_index(limb.from)] == offsets[to_index(limb.to)])
            return std::nullopt;
    }

    GroundTruthPerson person;
    for (int k = 0; k < kNumKeypointKinds; ++k) {
        if (!visible[k])
            continue;
        const int x = anchor_x + offsets[k][0];
        const int y = anchor_y + offsets[k][1];
        if (x < kBorderMargin || y < kBorderMargin || x > cfg.map_width - 1 - kBorderMargin ||
            y > cfg.map_height - 1 - kBorderMargin)
            return std::nullopt;
        person.keypoints[k] = Point2{static_cast<double>(x), static_cast<double>(y)};
    }
    return person;
}

bool separated(const GroundTruthPerson& a, const GroundTruthPerson& b, double min_separation)
{
    for (int k = 0; k < kNumKeypointKinds; ++k) {
        if (a.keypoints[k] && b.keypoints[k] && distance(*a.keypoints[k], *b.keypoints[k]) < min_separation)
            return false;
    }
    return true;
}

} // namespace

int GroundTruthPerson::visible_count() const noexcept
{
    return static_cast<int>(std::count_if(keypoints.begin(), keypoints.end(), [](const auto& p) { return p.has_value(); }));
}

void RenderConfig::validate() const
{
    if (!(sigma > 0.0))
        throw std::invalid_argument("render config: sigma must be > 0");
    if (!(limb_width > 0.0))
        throw std::invalid_argument("render config: limb_width must be > 0");
    if (map_height < 1 || map_width < 1)
        throw std::invalid_argument("render config: map dimensions must be positive");
    if (!(min_separation >= 0.0))
        throw std::invalid_argument("render config: min_separation must be >= 0");
}

FeatureMaps render_heatmaps(std::span<const GroundTruthPerson> persons, const RenderConfig& cfg)
{
    cfg.validate();
    const int h = cfg.map_height;
    const int w = cfg.map_width;
    FeatureMaps maps(h, w, kHeatmapChannels);
    const double inv_two_sigma_sq = 1.0 / (2.0 * cfg.sigma * cfg.sigma);

    for (const GroundTruthPerson& person : persons) {
        for (int k = 0; k < kNumKeypointKinds; ++k) {
            if (!person.keypoints[k])
                continue;
            const Point2 c = *person.keypoints[k];
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < w; ++x) {
                    const double d2 = (x - c.x) * (x - c.x) + (y - c.y) * (y - c.y);
                    const float v = static_cast<float>(std::exp(-d2 * inv_two_sigma_sq));
                    float& cell = maps.at(k, y, x);
                    cell = std::max(cell, v);
                }
            }
        }
    }

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            float top = 0.0f;
            for (int k = 0; k < kNumKeypointKinds; ++k)
                top = std::max(top, maps.at(k, y, x));
            maps.at(kBackgroundChannel, y, x) = 1.0f - top;
        }
    }
    return maps;
}

FeatureMaps render_pafs(std::span<const GroundTruthPerson> persons, const RenderConfig& cfg)
{
    cfg.validate();
    const int h = cfg.map_height;
    const int w = cfg.map_width;
    FeatureMaps maps(h, w, kPafChannels);
    std::vector<double> sum_x(static_cast<std::size_t>(h) * w);
    std::vector<double> sum_y(sum_x.size());
    std::vector<int> hits(sum_x.size());

    for (const LimbType& limb : limb_types()) {
        std::fill(sum_x.begin(), sum_x.end(), 0.0);
        std::fill(sum_y.begin(), sum_y.end(), 0.0);
        std::fill(hits.begin(), hits.end(), 0);
        bool any = false;

        for (const GroundTruthPerson& person : persons) {
            const auto& from = person.keypoints[to_index(limb.from)];
            const auto& to = person.keypoints[to_index(limb.to)];
            if (!from || !to)
                continue;
            const double vx = to->x - from->x;
            const double vy = to->y - from->y;
            const double length = std::hypot(vx, vy);
            if (length == 0.0)
                continue;
            const double dx = vx / length;
            const double dy = vy / length;
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < w; ++x) {
                    const double px = x - from->x;
                    const double py = y - from->y;
                    const double along = px * dx + py * dy;
                    const double across = std::abs(px * dy - py * dx);
                    if (along < 0.0 || along > length || across > cfg.limb_width)
                        continue;
                    const std::size_t i = static_cast<std::size_t>(y) * w + x;
                    sum_x[i] += dx;
                    sum_y[i] += dy;
                    hits[i] += 1;
                    any = true;
                }
            }
        }
        if (!any)
            continue;

        const std::span<float> out_x = maps.plane(limb.paf_x_channel);
        const std::span<float> out_y = maps.plane(limb.paf_y_channel);
        for (std::size_t i = 0; i < hits.size(); ++i) {
            if (hits[i] == 0)
                continue;
            out_x[i] = static_cast<float>(sum_x[i] / hits[i]);
            out_y[i] = static_cast<float>(sum_y[i] / hits[i]);
        }
    }
    return maps;
}

Scene generate_scene(int num_persons, const RenderConfig& cfg)
{
    if (num_persons < 0)
        throw std::invalid_argument("num_persons must be >= 0");
    cfg.validate();

    std::mt19937_64 rng(cfg.seed);
    const int max_visible = std::clamp(kSceneKeypointBudget / std::max(num_persons, 1), 3, kNumKeypointKinds);
    Scene scene;
    int attempts = 0;
    while (static_cast<int>(scene.persons.size()) < num_persons) {
        if (attempts++ >= kMaxPlacementAttempts)
            throw PlacementInfeasible("placed " + std::to_string(scene.persons.size()) + " of " +
                                      std::to_string(num_persons) + " persons on a " + std::to_string(cfg.map_height) +
                                      "x" + std::to_string(cfg.map_width) + " map with separation " +
                                      std::to_string(cfg.min_separation) + " px after " +
                                      std::to_string(kMaxPlacementAttempts) + " attempts");
        std::optional<GroundTruthPerson> candidate = sample_person(rng, cfg, max_visible);
        if (!candidate)
            continue;
        const bool fits = std::all_of(scene.persons.begin(), scene.persons.end(), [&](const GroundTruthPerson& other) {
            return separated(*candidate, other, cfg.min_separation);
        });
        if (fits)
            scene.persons.push_back(*candidate);
    }

    scene.heatmaps = render_heatmaps(scene.persons, cfg);
    scene.pafs = render_pafs(scene.persons, cfg);
    return scene;
}

double min_same_kind_distance(std::span<const GroundTruthPerson> persons)
{
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < persons.size(); ++i) {
        for (std::size_t j = i + 1; j < persons.size(); ++j) {
            for (int k = 0; k < kNumKeypointKinds; ++k) {
                const auto& a = persons[i].keypoints[k];
                const auto& b = persons[j].keypoints[k];
                if (a && b)
                    best = std::min(best, distance(*a, *b));
            }
        }
    }
    return best;
}

} // namespace poseproc
