// Copyright (C) 2026 The poseproc Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <queue>

#include "poseproc/errors.hpp"
#include "poseproc/synth.hpp"

namespace poseproc {
namespace {

GroundTruthPerson with_points(std::initializer_list<std::pair<KeypointKind, Point2>> points)
{
    GroundTruthPerson p;
    for (const auto& [kind, pt] : points)
        p.keypoints[to_index(kind)] = pt;
    return p;
}

const LimbType& limb_between(KeypointKind a, KeypointKind b)
{
    for (const LimbType& l : limb_types()) {
        if (l.from == a && l.to == b)
            return l;
    }
    throw std::logic_error("no such limb");
}

TEST(RenderHeatmaps, NoPersonsIsBackgroundOnly)
{
    const FeatureMaps m = render_heatmaps({}, RenderConfig{});
    ASSERT_EQ(m.channels(), kHeatmapChannels);
    for (int k = 0; k < kNumKeypointKinds; ++k) {
        for (float v : m.plane(k))
            ASSERT_EQ(v, 0.0f);
    }
    for (float v : m.plane(kBackgroundChannel))
        ASSERT_EQ(v, 1.0f);
}

TEST(RenderHeatmaps, GaussianValues)
{
    const std::vector<GroundTruthPerson> persons = {with_points({{KeypointKind::nose, {20, 14}}})};
    const FeatureMaps m = render_heatmaps(persons, RenderConfig{});
    EXPECT_FLOAT_EQ(m.at(0, 14, 20), 1.0f);
    // exp(-1 / (2 * 2^2)) = exp(-0.125)
    EXPECT_NEAR(m.at(0, 14, 19), 0.8825, 1e-4);
    EXPECT_NEAR(m.at(0, 16, 22), std::exp(-8.0 / 8.0), 1e-6);
    EXPECT_NEAR(m.at(kBackgroundChannel, 14, 19), 1.0 - std::exp(-0.125), 1e-6);
}

TEST(RenderHeatmaps, OverlapTakesMaxNotSum)
{
    const std::vector<GroundTruthPerson> persons = {with_points({{KeypointKind::neck, {10, 10}}}),
                                                    with_points({{KeypointKind::neck, {11, 10}}})};
    const FeatureMaps m = render_heatmaps(persons, RenderConfig{});
    for (float v : m.values()) {
        ASSERT_LE(v, 1.0f);
        ASSERT_GE(v, 0.0f);
    }
    EXPECT_FLOAT_EQ(m.at(1, 10, 10), 1.0f);
    EXPECT_FLOAT_EQ(m.at(1, 10, 11), 1.0f);
}

TEST(RenderPafs, NoPersonsIsZero)
{
    const FeatureMaps m = render_pafs({}, RenderConfig{});
    ASSERT_EQ(m.channels(), kPafChannels);
    for (float v : m.values())
        ASSERT_EQ(v, 0.0f);
}

TEST(RenderPafs, HorizontalLimbBand)
{
    const LimbType& l = limb_between(KeypointKind::neck, KeypointKind::nose);
    const std::vector<GroundTruthPerson> persons = {
        with_points({{KeypointKind::neck, {5, 10}}, {KeypointKind::nose, {25, 10}}})};
    const FeatureMaps m = render_pafs(persons, RenderConfig{});
    EXPECT_FLOAT_EQ(m.at(l.paf_x_channel, 10, 15), 1.0f);
    EXPECT_FLOAT_EQ(m.at(l.paf_y_channel, 10, 15), 0.0f);
    EXPECT_FLOAT_EQ(m.at(l.paf_x_channel, 11, 15), 1.0f); // distance 1 <= 1.5
    EXPECT_FLOAT_EQ(m.at(l.paf_x_channel, 13, 15), 0.0f); // distance 3
    EXPECT_FLOAT_EQ(m.at(l.paf_x_channel, 10, 4), 0.0f);  // projection before the segment
    EXPECT_FLOAT_EQ(m.at(l.paf_x_channel, 10, 26), 0.0f); // projection past the segment
    EXPECT_FLOAT_EQ(m.at(l.paf_x_channel, 10, 25), 1.0f);
}

TEST(RenderPafs, OpposedOverlapAveragesToZero)
{
    const LimbType& l = limb_between(KeypointKind::neck, KeypointKind::nose);
    const std::vector<GroundTruthPerson> persons = {
        with_points({{KeypointKind::neck, {5, 10}}, {KeypointKind::nose, {15, 10}}}),
        with_points({{KeypointKind::neck, {25, 10}}, {KeypointKind::nose, {15, 10}}}),
    };
    const FeatureMaps m = render_pafs(persons, RenderConfig{});
    EXPECT_FLOAT_EQ(m.at(l.paf_x_channel, 10, 15), 0.0f);
    EXPECT_FLOAT_EQ(m.at(l.paf_x_channel, 10, 10), 1.0f);
    EXPECT_FLOAT_EQ(m.at(l.paf_x_channel, 10, 20), -1.0f);
}

TEST(RenderPafs, SkipsLimbsWithMissingEndpoint)
{
    const std::vector<GroundTruthPerson> persons = {with_points({{KeypointKind::neck, {5, 10}}})};
    const FeatureMaps m = render_pafs(persons, RenderConfig{});
    for (float v : m.values())
        ASSERT_EQ(v, 0.0f);
}

TEST(RenderConfig, Validation)
{
    RenderConfig cfg;
    cfg.sigma = 0.0;
    EXPECT_THROW(render_heatmaps({}, cfg), std::invalid_argument);
    cfg = {};
    cfg.limb_width = -1.0;
    EXPECT_THROW(render_pafs({}, cfg), std::invalid_argument);
    cfg = {};
    cfg.map_width = 0;
    EXPECT_THROW(generate_scene(1, cfg), std::invalid_argument);
}

TEST(GenerateScene, ZeroPersons)
{
    const Scene s = generate_scene(0, RenderConfig{});
    EXPECT_TRUE(s.persons.empty());
    EXPECT_EQ(s.heatmaps, render_heatmaps({}, RenderConfig{}));
    EXPECT_EQ(s.pafs, render_pafs({}, RenderConfig{}));
    EXPECT_THROW(generate_scene(-1, RenderConfig{}), std::invalid_argument);
}

TEST(GenerateScene, DeterministicInSeed)
{
    RenderConfig cfg;
    cfg.seed = 7;
    const Scene a = generate_scene(3, cfg);
    const Scene b = generate_scene(3, cfg);
    EXPECT_EQ(a.persons, b.persons);
    EXPECT_EQ(a.heatmaps, b.heatmaps);
    EXPECT_EQ(a.pafs, b.pafs);
    cfg.seed = 8;
    EXPECT_NE(generate_scene(3, cfg).persons, a.persons);
}

bool connected(const GroundTruthPerson& p)
{
    int start = -1;
    for (int k = 0; k < kNumKeypointKinds && start < 0; ++k) {
        if (p.keypoints[k])
            start = k;
    }
    if (start < 0)
        return false;
    std::vector<bool> seen(kNumKeypointKinds, false);
    std::queue<int> todo;
    todo.push(start);
    seen[start] = true;
    int reached = 1;
    while (!todo.empty()) {
        const int k = todo.front();
        todo.pop();
        for (const LimbType& l : limb_types()) {
            for (auto [a, b] : {std::pair{l.from, l.to}, std::pair{l.to, l.from}}) {
                if (to_index(a) == k && p.keypoints[to_index(b)] && !seen[to_index(b)]) {
                    seen[to_index(b)] = true;
                    ++reached;
                    todo.push(to_index(b));
                }
            }
        }
    }
    return reached == p.visible_count();
}

class DenseScenes : public ::testing::TestWithParam<int> {};

TEST_P(DenseScenes, PersonsAreValidAndSeparated)
{
    const int n = GetParam();
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        RenderConfig cfg;
        cfg.seed = seed;
        const Scene s = generate_scene(n, cfg);
        ASSERT_EQ(static_cast<int>(s.persons.size()), n);
        for (const GroundTruthPerson& p : s.persons) {
            EXPECT_GE(p.visible_count(), 3);
            EXPECT_TRUE(connected(p));
            for (const auto& kp : p.keypoints) {
                if (!kp)
                    continue;
                EXPECT_GE(kp->x, 0.0);
                EXPECT_GE(kp->y, 0.0);
                EXPECT_LE(kp->x, cfg.map_width - 1.0);
                EXPECT_LE(kp->y, cfg.map_height - 1.0);
            }
        }
        // Post-check every same-kind pair directly.
        for (std::size_t i = 0; i < s.persons.size(); ++i) {
            for (std::size_t j = i + 1; j < s.persons.size(); ++j) {
                for (int k = 0; k < kNumKeypointKinds; ++k) {
                    const auto& a = s.persons[i].keypoints[k];
                    const auto& b = s.persons[j].keypoints[k];
                    if (a && b)
                        EXPECT_GE(std::hypot(a->x - b->x, a->y - b->y), cfg.min_separation);
                }
            }
        }
        EXPECT_GE(min_same_kind_distance(s.persons), cfg.min_separation);
    }
}

INSTANTIATE_TEST_SUITE_P(Counts, DenseScenes, ::testing::Values(1, 5, 12, 20));

TEST(GenerateScene, RenderedFieldsAreBounded)
{
    RenderConfig cfg;
    cfg.seed = 4;
    const Scene s = generate_scene(20, cfg);
    for (float v : s.heatmaps.values()) {
        ASSERT_GE(v, 0.0f);
        ASSERT_LE(v, 1.0f);
    }
    for (int c = 0; c < kPafChannels; c += 2) {
        for (std::size_t i = 0; i < s.pafs.plane_size(); ++i) {
            const double x = s.pafs.plane(c)[i];
            const double y = s.pafs.plane(c + 1)[i];
            ASSERT_LE(std::hypot(x, y), 1.0 + 1e-6);
        }
    }
}

TEST(GenerateScene, FullBodyShowsAllKeypoints)
{
    RenderConfig cfg;
    cfg.full_body = true;
    cfg.seed = 2;
    const Scene s = generate_scene(3, cfg);
    for (const auto& p : s.persons)
        EXPECT_EQ(p.visible_count(), kNumKeypointKinds);
}

TEST(GenerateScene, InfeasibleCrowdThrows)
{
    RenderConfig cfg;
    cfg.full_body = true;
    EXPECT_THROW(generate_scene(20, cfg), PlacementInfeasible);
    RenderConfig tiny;
    tiny.map_height = 4;
    tiny.map_width = 4;
    EXPECT_THROW(generate_scene(2, tiny), PlacementInfeasible);
}

TEST(MinSameKindDistance, Basics)
{
    EXPECT_TRUE(std::isinf(min_same_kind_distance({})));
    const std::vector<GroundTruthPerson> persons = {
        with_points({{KeypointKind::nose, {0, 0}}, {KeypointKind::neck, {0, 2}}}),
        with_points({{KeypointKind::nose, {3, 4}}, {KeypointKind::r_hip, {0, 2}}}),
    };
    EXPECT_DOUBLE_EQ(min_same_kind_distance(persons), 5.0);
}

} // namespace
} // namespace poseproc
