// Copyright (C) 2026 The poseproc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace poseproc::arch {

enum class LayerKind { conv, depthwise_conv, pointwise_conv, pool, concat, residual_add };

std::string_view layer_kind_name(LayerKind kind) noexcept;

/// One layer of a network description. Convolutions use "same" padding
/// (dilation * (kernel - 1) / 2); pools use none.
struct LayerSpec {
    std::string name;
    LayerKind kind = LayerKind::conv;
    int in_channels = 0;
    int out_channels = 0;
    int kernel = 1;
    int stride = 1;
    int dilation = 1;
    /// Zero until resolved by evaluate().
    int input_h = 0;
    int input_w = 0;

    bool resolved() const noexcept { return input_h > 0 && input_w > 0; }
    int output_h() const noexcept;
    int output_w() const noexcept;
    /// Weights plus biases.
    std::int64_t parameters() const noexcept;
};

LayerSpec conv(std::string name, int in_channels, int out_channels, int kernel, int stride = 1, int dilation = 1);
LayerSpec depthwise(std::string name, int channels, int kernel = 3, int stride = 1, int dilation = 1);
LayerSpec pointwise(std::string name, int in_channels, int out_channels);
LayerSpec pool(std::string name, int channels, int kernel = 2, int stride = 2);
LayerSpec concat(std::string name, int in_channels, int out_channels);
LayerSpec residual_add(std::string name, int channels);

/// Multiply-accumulates of one layer, one MAC counted as one FLOP.
/// Throws InvalidState when the spatial dims are unresolved.
std::int64_t layer_flops(const LayerSpec& layer);

/// A named row of the complexity table. The trunk runs `branches` times in parallel;
/// each head is a separate path fed by the trunk output and runs once.
struct LayerGroup {
    std::string name;
    std::vector<LayerSpec> layers;
    int branches = 1;
    std::vector<std::vector<LayerSpec>> heads;
    /// Group whose output feeds this one; empty means the previous group
    /// (or the network input for the first group).
    std::string input_from;
};

struct ArchSpec {
    std::string name;
    int input_height = 0;
    int input_width = 0;
    int input_channels = 3;
    std::vector<LayerGroup> groups;
    std::vector<std::string> notes;
};

struct LayerReport {
    std::string group;
    LayerSpec layer; ///< resolved
    int multiplicity = 1;
    std::int64_t flops = 0; ///< all copies
    std::int64_t params = 0;
};

struct GroupReport {
    std::string name;
    std::int64_t flops = 0;
    std::int64_t params = 0;
    double gflops = 0.0;
    double cumulative_gflops = 0.0;
};

struct ComplexityReport {
    std::string arch;
    int input_height = 0;
    int input_width = 0;
    std::vector<GroupReport> groups;
    std::vector<LayerReport> layers;
    std::int64_t total_flops = 0;
    std::int64_t total_params = 0;
    std::vector<std::string> notes;

    double total_gflops() const noexcept { return static_cast<double>(total_flops) * 1e-9; }
    double total_mparams() const noexcept { return static_cast<double>(total_params) * 1e-6; }
    const GroupReport* find(std::string_view group) const noexcept;
};

/// Resolves spatial dims group by group and counts FLOPs and parameters.
/// Throws InvalidArchitecture naming the first layer that does not chain.
ComplexityReport evaluate(const ArchSpec& arch);

/// VGG-19 to conv4_2, conv4_3/conv4_4, initial stage and five refinement stages, two
/// branches per stage.
ArchSpec builtin_baseline_openpose(int input_h = 368, int input_w = 368);

/// Dilated MobileNet v1 to conv5_5, depthwise-separable conv4_3, single-branch initial
/// stage and one refinement stage built from five residual 1x1/3x3/3x3-dilated blocks.
ArchSpec builtin_lightweight(int input_h = 368, int input_w = 368);

/// Backbone study: MobileNet v1 to conv4_1, dilated MobileNet v1 to conv5_5 and to
/// conv5_6, dilated MobileNet v2 to conv6_3; each followed by the original conv4_3,
/// conv4_4, initial and first refinement stage.
std::vector<ArchSpec> builtin_backbone_variants(int input_h = 368, int input_w = 368);

/// The residual block that replaces a 7x7 convolution: 1x1, 3x3, 3x3 with dilation 2,
/// plus the residual add.
std::vector<LayerSpec> conv7x7_replacement_block(const std::string& prefix, int in_channels, int channels);

std::string format_report_text(const ComplexityReport& report);
std::string format_report_json(const ComplexityReport& report);

} // namespace poseproc::arch
