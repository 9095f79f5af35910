// Copyright (C) 2026 The poseproc Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <map>
#include <sstream>

#include "json.hpp"
#include "poseproc/archcalc.hpp"
#include "poseproc/errors.hpp"

namespace poseproc::arch {

std::string_view layer_kind_name(LayerKind kind) noexcept
{
    switch (kind) {
    case LayerKind::conv:
        return "conv";
    case LayerKind::depthwise_conv:
        return "depthwise_conv";
    case LayerKind::pointwise_conv:
        return "pointwise_conv";
    case LayerKind::pool:
        return "pool";
    case LayerKind::concat:
        return "concat";
    case LayerKind::residual_add:
        return "residual_add";
    }
    return "unknown";
}

namespace {

int output_extent(const LayerSpec& l, int in) noexcept
{
    switch (l.kind) {
    case LayerKind::pool:
        // integer division truncates toward zero, so a too-small input must be caught first
        return in < l.kernel ? 0 : (in - l.kernel) / l.stride + 1;
    case LayerKind::concat:
    case LayerKind::residual_add:
        return in;
    default: {
        const int pad = l.dilation * (l.kernel - 1) / 2;
        const int span = in + 2 * pad - l.dilation * (l.kernel - 1) - 1;
        return span < 0 ? 0 : span / l.stride + 1;
    }
    }
}

} // namespace

int LayerSpec::output_h() const noexcept
{
    return output_extent(*this, input_h);
}

int LayerSpec::output_w() const noexcept
{
    return output_extent(*this, input_w);
}

std::int64_t LayerSpec::parameters() const noexcept
{
    const std::int64_t k2 = static_cast<std::int64_t>(kernel) * kernel;
    switch (kind) {
    case LayerKind::conv:
        return static_cast<std::int64_t>(out_channels) * in_channels * k2 + out_channels;
    case LayerKind::depthwise_conv:
        return static_cast<std::int64_t>(out_channels) * k2 + out_channels;
    case LayerKind::pointwise_conv:
        return static_cast<std::int64_t>(out_channels) * in_channels + out_channels;
    default:
        return 0;
    }
}

LayerSpec conv(std::string name, int in_channels, int out_channels, int kernel, int stride, int dilation)
{
    return {std::move(name), LayerKind::conv, in_channels, out_channels, kernel, stride, dilation};
}

LayerSpec depthwise(std::string name, int channels, int kernel, int stride, int dilation)
{
    return {std::move(name), LayerKind::depthwise_conv, channels, channels, kernel, stride, dilation};
}

LayerSpec pointwise(std::string name, int in_channels, int out_channels)
{
    return {std::move(name), LayerKind::pointwise_conv, in_channels, out_channels, 1, 1, 1};
}

LayerSpec pool(std::string name, int channels, int kernel, int stride)
{
    return {std::move(name), LayerKind::pool, channels, channels, kernel, stride, 1};
}

LayerSpec concat(std::string name, int in_channels, int out_channels)
{
    return {std::move(name), LayerKind::concat, in_channels, out_channels, 1, 1, 1};
}

LayerSpec residual_add(std::string name, int channels)
{
    return {std::move(name), LayerKind::residual_add, channels, channels, 1, 1, 1};
}

std::int64_t layer_flops(const LayerSpec& l)
{
    if (!l.resolved())
        throw InvalidState("layer '" + l.name + "' has unresolved spatial dims");
    const std::int64_t out_px = static_cast<std::int64_t>(l.output_h()) * l.output_w();
    const std::int64_t k2 = static_cast<std::int64_t>(l.kernel) * l.kernel;
    switch (l.kind) {
    case LayerKind::conv:
        return out_px * l.out_channels * l.in_channels * k2;
    case LayerKind::depthwise_conv:
        return out_px * l.out_channels * k2;
    case LayerKind::pointwise_conv:
        return out_px * l.out_channels * l.in_channels;
    default:
        return 0;
    }
}

namespace {

struct Shape {
    int h = 0;
    int w = 0;
    int c = 0;
};

void check_layer(const LayerSpec& l, const Shape& in)
{
    if (l.kernel < 1 || l.stride < 1 || l.dilation < 1)
        throw InvalidArchitecture(l.name, "kernel, stride and dilation must be >= 1");
    if (l.in_channels < 1 || l.out_channels < 1)
        throw InvalidArchitecture(l.name, "channel counts must be >= 1");
    if (l.in_channels != in.c)
        throw InvalidArchitecture(l.name, "expects " + std::to_string(l.in_channels) + " input channels, receives " +
                                              std::to_string(in.c));
    if ((l.kind == LayerKind::depthwise_conv || l.kind == LayerKind::pool || l.kind == LayerKind::residual_add) &&
        l.in_channels != l.out_channels)
        throw InvalidArchitecture(l.name, std::string(layer_kind_name(l.kind)) + " requires in_channels == out_channels");
    if (l.kind == LayerKind::pointwise_conv && l.kernel != 1)
        throw InvalidArchitecture(l.name, "pointwise convolution requires a 1x1 kernel");
    if (l.kind == LayerKind::concat && l.out_channels < l.in_channels)
        throw InvalidArchitecture(l.name, "concat cannot reduce channels");
}

// Resolves one chain of layers starting at `in`; appends to the report and returns the output shape.
Shape run_chain(const std::vector<LayerSpec>& layers, Shape shape, const std::string& group, int multiplicity,
                ComplexityReport& report, GroupReport& totals)
{
    for (const LayerSpec& spec : layers) {
        check_layer(spec, shape);
        LayerSpec resolved = spec;
        resolved.input_h = shape.h;
        resolved.input_w = shape.w;
        const int out_h = resolved.output_h();
        const int out_w = resolved.output_w();
        if (out_h < 1 || out_w < 1)
            throw InvalidArchitecture(spec.name, "input " + std::to_string(shape.h) + "x" + std::to_string(shape.w) +
                                                     " is too small");

        LayerReport row{group, resolved, multiplicity, layer_flops(resolved) * multiplicity,
                        resolved.parameters() * multiplicity};
        totals.flops += row.flops;
        totals.params += row.params;
        report.layers.push_back(std::move(row));
        shape = {out_h, out_w, spec.out_channels};
    }
    return shape;
}

} // namespace

const GroupReport* ComplexityReport::find(std::string_view group) const noexcept
{
    for (const GroupReport& g : groups) {
        if (g.name == group)
            return &g;
    }
    return nullptr;
}

ComplexityReport evaluate(const ArchSpec& arch)
{
    ComplexityReport report;
    report.arch = arch.name;
    report.input_height = arch.input_height;
    report.input_width = arch.input_width;
    report.notes = arch.notes;

    std::map<std::string, Shape> outputs;
    Shape current{arch.input_height, arch.input_width, arch.input_channels};
    std::int64_t cumulative = 0;

    for (const LayerGroup& group : arch.groups) {
        if (outputs.count(group.name))
            throw InvalidArchitecture(group.name, "duplicate group name");
        if (group.branches < 1)
            throw InvalidArchitecture(group.name, "branch count must be >= 1");

        Shape in = current;
        if (!group.input_from.empty()) {
            const auto it = outputs.find(group.input_from);
            if (it == outputs.end())
                throw InvalidArchitecture(group.name, "reads from unknown group '" + group.input_from + "'");
            in = it->second;
        }
        if (in.h < 1 || in.w < 1)
            throw InvalidArchitecture(group.name, "input spatial dims must be positive");

        GroupReport totals;
        totals.name = group.name;
        const Shape out = run_chain(group.layers, in, group.name, group.branches, report, totals);
        for (const auto& head : group.heads)
            run_chain(head, out, group.name, 1, report, totals);

        cumulative += totals.flops;
        totals.gflops = static_cast<double>(totals.flops) * 1e-9;
        totals.cumulative_gflops = static_cast<double>(cumulative) * 1e-9;
        report.total_flops += totals.flops;
        report.total_params += totals.params;
        report.groups.push_back(std::move(totals));

        outputs[group.name] = out;
        current = out;
    }
    return report;
}

namespace {

std::string fixed(double v, int decimals)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

} // namespace

std::string format_report_text(const ComplexityReport& report)
{
    std::ostringstream out;
    out << "Architecture: " << report.arch << "  input " << report.input_height << "x" << report.input_width << "\n";
    char line[160];
    std::snprintf(line, sizeof(line), "%-22s %10s %14s %12s\n", "Group", "GFLOPs", "GFLOPs total", "Params (M)");
    out << line;
    for (const GroupReport& g : report.groups) {
        std::snprintf(line, sizeof(line), "%-22s %10s %14s %12s\n", g.name.c_str(), fixed(g.gflops, 3).c_str(),
                      fixed(g.cumulative_gflops, 3).c_str(), fixed(static_cast<double>(g.params) * 1e-6, 3).c_str());
        out << line;
    }
    std::snprintf(line, sizeof(line), "%-22s %10s %14s %12s\n", "Total", "", fixed(report.total_gflops(), 3).c_str(),
                  fixed(report.total_mparams(), 3).c_str());
    out << line;
    for (const std::string& note : report.notes)
        out << "Note: " << note << "\n";
    return out.str();
}

std::string format_report_json(const ComplexityReport& report)
{
    nlohmann::json groups = nlohmann::json::array();
    for (const GroupReport& g : report.groups) {
        groups.push_back({{"name", g.name},
                          {"flops", g.flops},
                          {"gflops", g.gflops},
                          {"cumulative_gflops", g.cumulative_gflops},
                          {"params", g.params}});
    }
    const nlohmann::json doc = {
        {"arch", report.arch},
        {"input", {{"height", report.input_height}, {"width", report.input_width}}},
        {"groups", groups},
        {"total_flops", report.total_flops},
        {"total_gflops", report.total_gflops()},
        {"total_params", report.total_params},
        {"notes", report.notes},
    };
    return doc.dump(2);
}

} // namespace poseproc::arch
