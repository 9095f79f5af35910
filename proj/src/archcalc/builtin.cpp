// Copyright (C) 2026 The poseproc Authors
// SPDX-License-Identifier: Apache-2.0

#include "poseproc/archcalc.hpp"

namespace poseproc::arch {

namespace {

constexpr int kHeatmaps = 19;
constexpr int kPafs = 38;
constexpr int kStageChannels = 128;
constexpr int kStageInput = kStageChannels + kHeatmaps + kPafs;

void add_dw_separable(std::vector<LayerSpec>& layers, const std::string& name, int in, int out, int stride = 1,
                      int dilation = 1)
{
    layers.push_back(depthwise(name + "/dw", in, 3, stride, dilation));
    layers.push_back(pointwise(name + "/sep", in, out));
}

LayerGroup vgg19_to_conv4_2()
{
    LayerGroup g{"backbone", {}, 1, {}, {}};
    auto& l = g.layers;
    l.push_back(conv("conv1_1", 3, 64, 3));
    l.push_back(conv("conv1_2", 64, 64, 3));
    l.push_back(pool("pool1", 64));
    l.push_back(conv("conv2_1", 64, 128, 3));
    l.push_back(conv("conv2_2", 128, 128, 3));
    l.push_back(pool("pool2", 128));
    l.push_back(conv("conv3_1", 128, 256, 3));
    l.push_back(conv("conv3_2", 256, 256, 3));
    l.push_back(conv("conv3_3", 256, 256, 3));
    l.push_back(conv("conv3_4", 256, 256, 3));
    l.push_back(pool("pool3", 256));
    l.push_back(conv("conv4_1", 256, 512, 3));
    l.push_back(conv("conv4_2", 512, 512, 3));
    return g;
}

// MobileNet v1 with the stride of conv4_2/dw removed, up to and including `last_block`
// (3 = conv4_1, 9 = conv5_5, 10 = conv5_6). Blocks after the removed stride keep
// their receptive field through dilation 2 on conv5_1/dw.
LayerGroup mobilenet_v1(int last_block, bool dilated)
{
    struct Block {
        const char* name;
        int in;
        int out;
        int stride;
    };
    static constexpr Block kBlocks[] = {
        {"conv2_1", 32, 64, 1},    {"conv2_2", 64, 128, 2},   {"conv3_1", 128, 128, 1}, {"conv3_2", 128, 256, 2},
        {"conv4_1", 256, 256, 1},  {"conv4_2", 256, 512, 2},  {"conv5_1", 512, 512, 1}, {"conv5_2", 512, 512, 1},
        {"conv5_3", 512, 512, 1},  {"conv5_4", 512, 512, 1},  {"conv5_5", 512, 512, 1}, {"conv5_6", 512, 1024, 2},
    };

    LayerGroup g{"backbone", {}, 1, {}, {}};
    g.layers.push_back(conv("conv1", 3, 32, 3, 2));
    for (int i = 0; i <= last_block + 1 && i < static_cast<int>(std::size(kBlocks)); ++i) {
        const Block& b = kBlocks[i];
        int stride = b.stride;
        int dilation = 1;
        if (dilated && i >= 5) {
            if (stride == 2)
                stride = 1;
            if (std::string(b.name) == "conv5_1" || std::string(b.name) == "conv5_6")
                dilation = 2;
        }
        add_dw_separable(g.layers, b.name, b.in, b.out, stride, dilation);
    }
    return g;
}

// Inverted residual bottlenecks of MobileNet v2 up to conv6_3 (the third 160-channel
// block), with the two stride-2 stages past stride 8 turned into dilated ones.
LayerGroup dilated_mobilenet_v2_to_conv6_3()
{
    struct Stage {
        int expansion;
        int out;
        int repeats;
        int stride;
        const char* name;
    };
    static constexpr Stage kStages[] = {
        {1, 16, 1, 1, "conv2"},  {6, 24, 2, 2, "conv3"},  {6, 32, 3, 2, "conv4"},
        {6, 64, 4, 2, "conv4_4"}, {6, 96, 3, 1, "conv5"}, {6, 160, 3, 2, "conv6"},
    };

    LayerGroup g{"backbone", {}, 1, {}, {}};
    g.layers.push_back(conv("conv1", 3, 32, 3, 2));
    int channels = 32;
    int dilation = 1;
    int stage_index = 0;
    for (const Stage& s : kStages) {
        for (int r = 0; r < s.repeats; ++r) {
            int stride = r == 0 ? s.stride : 1;
            if (stride == 2 && stage_index >= 3) {
                stride = 1;
                dilation *= 2;
            }
            const std::string name = std::string(s.name) + "_" + std::to_string(r + 1);
            const int hidden = channels * s.expansion;
            if (s.expansion != 1)
                g.layers.push_back(pointwise(name + "/expand", channels, hidden));
            g.layers.push_back(depthwise(name + "/dw", hidden, 3, stride, dilation));
            g.layers.push_back(pointwise(name + "/linear", hidden, s.out));
            if (stride == 1 && channels == s.out)
                g.layers.push_back(residual_add(name + "/add", s.out));
            channels = s.out;
        }
        ++stage_index;
    }
    return g;
}

LayerGroup openpose_conv4_3(int in_channels)
{
    return {"conv4_3", {conv("conv4_3_CPM", in_channels, 256, 3)}, 1, {}, {}};
}

LayerGroup openpose_conv4_4()
{
    return {"conv4_4", {conv("conv4_4_CPM", 256, kStageChannels, 3)}, 1, {}, {}};
}

LayerGroup openpose_initial_stage()
{
    LayerGroup g{"initial_stage", {}, 2, {}, {}};
    for (int i = 1; i <= 3; ++i)
        g.layers.push_back(conv("conv5_" + std::to_string(i), kStageChannels, kStageChannels, 3));
    g.layers.push_back(conv("conv5_4", kStageChannels, 512, 1));
    g.heads.push_back({conv("conv5_5_pafs", 512, kPafs, 1)});
    g.heads.push_back({conv("conv5_5_heatmaps", 512, kHeatmaps, 1)});
    return g;
}

LayerGroup openpose_refinement_stage(int stage)
{
    const std::string prefix = "Mconv";
    const std::string suffix = "_stage" + std::to_string(stage + 1);
    LayerGroup g{"refinement_stage_" + std::to_string(stage), {}, 2, {}, "conv4_4"};
    g.layers.push_back(concat("concat" + suffix, kStageChannels, kStageInput));
    g.layers.push_back(conv(prefix + "1" + suffix, kStageInput, kStageChannels, 7));
    for (int i = 2; i <= 5; ++i)
        g.layers.push_back(conv(prefix + std::to_string(i) + suffix, kStageChannels, kStageChannels, 7));
    g.layers.push_back(conv(prefix + "6" + suffix, kStageChannels, kStageChannels, 1));
    g.heads.push_back({conv(prefix + "7" + suffix + "_pafs", kStageChannels, kPafs, 1)});
    g.heads.push_back({conv(prefix + "7" + suffix + "_heatmaps", kStageChannels, kHeatmaps, 1)});
    return g;
}

void append_original_stages(ArchSpec& spec, int backbone_channels, int refinement_stages)
{
    spec.groups.push_back(openpose_conv4_3(backbone_channels));
    spec.groups.push_back(openpose_conv4_4());
    spec.groups.push_back(openpose_initial_stage());
    for (int s = 1; s <= refinement_stages; ++s)
        spec.groups.push_back(openpose_refinement_stage(s));
}

} // namespace

std::vector<LayerSpec> conv7x7_replacement_block(const std::string& prefix, int in_channels, int channels)
{
    return {
        conv(prefix + "/initial", in_channels, channels, 1),
        conv(prefix + "/trunk_0", channels, channels, 3),
        conv(prefix + "/trunk_1", channels, channels, 3, 1, 2),
        residual_add(prefix + "/add", channels),
    };
}

ArchSpec builtin_baseline_openpose(int input_h, int input_w)
{
    ArchSpec spec{"baseline_openpose", input_h, input_w, 3, {}, {}};
    spec.groups.push_back(vgg19_to_conv4_2());
    append_original_stages(spec, 512, 5);
    return spec;
}

ArchSpec builtin_lightweight(int input_h, int input_w)
{
    ArchSpec spec{"lightweight_openpose", input_h, input_w, 3, {}, {}};
    spec.groups.push_back(mobilenet_v1(9, true));

    LayerGroup conv4_3{"conv4_3", {}, 1, {}, {}};
    add_dw_separable(conv4_3.layers, "conv4_3_0", 512, kStageChannels);
    add_dw_separable(conv4_3.layers, "conv4_3_1", kStageChannels, kStageChannels);
    add_dw_separable(conv4_3.layers, "conv4_3_2", kStageChannels, kStageChannels);
    spec.groups.push_back(conv4_3);

    spec.groups.push_back({"conv4_4", {conv("conv4_4", kStageChannels, kStageChannels, 3)}, 1, {}, {}});

    LayerGroup initial{"initial_stage", {}, 1, {}, {}};
    for (int i = 0; i < 3; ++i)
        initial.layers.push_back(conv("initial/trunk_" + std::to_string(i), kStageChannels, kStageChannels, 3));
    initial.heads.push_back({conv("initial/heatmaps_0", kStageChannels, 512, 1), conv("initial/heatmaps_1", 512, kHeatmaps, 1)});
    initial.heads.push_back({conv("initial/pafs_0", kStageChannels, 512, 1), conv("initial/pafs_1", 512, kPafs, 1)});
    spec.groups.push_back(initial);

    LayerGroup refinement{"refinement_stage_1", {}, 1, {}, "conv4_4"};
    refinement.layers.push_back(concat("refinement/concat", kStageChannels, kStageInput));
    for (int b = 0; b < 5; ++b) {
        const int in = b == 0 ? kStageInput : kStageChannels;
        for (LayerSpec& l : conv7x7_replacement_block("refinement/block_" + std::to_string(b), in, kStageChannels))
            refinement.layers.push_back(std::move(l));
    }
    refinement.heads.push_back(
        {conv("refinement/heatmaps_0", kStageChannels, kStageChannels, 1), conv("refinement/heatmaps_1", kStageChannels, kHeatmaps, 1)});
    refinement.heads.push_back(
        {conv("refinement/pafs_0", kStageChannels, kStageChannels, 1), conv("refinement/pafs_1", kStageChannels, kPafs, 1)});
    spec.groups.push_back(refinement);

    spec.notes.push_back("conv4_3 is modeled as three depthwise-separable convolutions (512->128, 128->128, "
                         "128->128), about 0.22 GFLOPs at 368x368; the reference figure for this row is 0.3.");
    return spec;
}

std::vector<ArchSpec> builtin_backbone_variants(int input_h, int input_w)
{
    const std::string note = "Backbone study: each backbone feeds the original conv4_3/conv4_4, initial stage and "
                             "first refinement stage; compare totals by ordering only.";
    std::vector<ArchSpec> variants;

    ArchSpec v1_conv4_1{"mobilenet_v1_conv4_1", input_h, input_w, 3, {}, {note}};
    v1_conv4_1.groups.push_back(mobilenet_v1(3, false));
    append_original_stages(v1_conv4_1, 256, 1);
    variants.push_back(std::move(v1_conv4_1));

    ArchSpec v1_conv5_5{"dilated_mobilenet_v1_conv5_5", input_h, input_w, 3, {}, {note}};
    v1_conv5_5.groups.push_back(mobilenet_v1(9, true));
    append_original_stages(v1_conv5_5, 512, 1);
    variants.push_back(std::move(v1_conv5_5));

    ArchSpec v1_conv5_6{"dilated_mobilenet_v1_conv5_6", input_h, input_w, 3, {}, {note}};
    v1_conv5_6.groups.push_back(mobilenet_v1(10, true));
    append_original_stages(v1_conv5_6, 1024, 1);
    variants.push_back(std::move(v1_conv5_6));

    ArchSpec v2_conv6_3{"dilated_mobilenet_v2_conv6_3", input_h, input_w, 3, {}, {note}};
    v2_conv6_3.groups.push_back(dilated_mobilenet_v2_to_conv6_3());
    append_original_stages(v2_conv6_3, 160, 1);
    variants.push_back(std::move(v2_conv6_3));

    return variants;
}

} // namespace poseproc::arch
