// Copyright (C) 2026 The poseproc Authors
// SPDX-License-Identifier: Apache-2.0

#include "poseproc/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "poseproc/parallel.hpp"

namespace poseproc {

namespace {

void check_dims(int height, int width, int channels)
{
    if (height < 1 || width < 1 || channels < 1)
        throw std::invalid_argument("feature maps need positive dimensions, got " + std::to_string(height) + "x" +
                                    std::to_string(width) + "x" + std::to_string(channels));
}

// Source sample taps for one output axis.
struct AxisTap {
    int lo;
    int hi;
    float weight; // weight of `hi`
};

std::vector<AxisTap> axis_taps(int out_size, int in_size, double scale)
{
    std::vector<AxisTap> taps(out_size);
    for (int i = 0; i < out_size; ++i) {
        double src = (i + 0.5) * scale - 0.5;
        src = std::clamp(src, 0.0, static_cast<double>(in_size - 1));
        const int lo = static_cast<int>(src);
        const int hi = std::min(lo + 1, in_size - 1);
        taps[i] = {lo, hi, static_cast<float>(src - lo)};
    }
    return taps;
}

} // namespace

FeatureMaps::FeatureMaps(int height, int width, int channels)
{
    check_dims(height, width, channels);
    height_ = height;
    width_ = width;
    channels_ = channels;
    data_.assign(static_cast<std::size_t>(height) * width * channels, 0.0f);
}

FeatureMaps::FeatureMaps(int height, int width, int channels, std::vector<float> data)
{
    check_dims(height, width, channels);
    if (data.size() != static_cast<std::size_t>(height) * width * channels)
        throw std::invalid_argument("feature map data length " + std::to_string(data.size()) +
                                    " does not match dimensions");
    height_ = height;
    width_ = width;
    channels_ = channels;
    data_ = std::move(data);
}

std::span<float> FeatureMaps::plane(int channel)
{
    return std::span<float>(data_).subspan(channel * plane_size(), plane_size());
}

std::span<const float> FeatureMaps::plane(int channel) const
{
    return std::span<const float>(data_).subspan(channel * plane_size(), plane_size());
}

void FeatureMaps::reset(int height, int width, int channels)
{
    check_dims(height, width, channels);
    height_ = height;
    width_ = width;
    channels_ = channels;
    data_.assign(static_cast<std::size_t>(height) * width * channels, 0.0f);
}

bool FeatureMaps::all_finite() const noexcept
{
    return std::all_of(data_.begin(), data_.end(), [](float v) { return std::isfinite(v); });
}

void resize_bilinear(const FeatureMaps& maps, int factor, FeatureMaps& out, int threads)
{
    if (factor < 1)
        throw std::invalid_argument("upsample factor must be >= 1, got " + std::to_string(factor));
    if (maps.empty())
        throw std::invalid_argument("cannot resize empty feature maps");

    const int in_h = maps.height();
    const int in_w = maps.width();
    const int out_h = in_h * factor;
    const int out_w = in_w * factor;
    if (out.height() != out_h || out.width() != out_w || out.channels() != maps.channels())
        out.reset(out_h, out_w, maps.channels());

    if (factor == 1) {
        std::copy(maps.values().begin(), maps.values().end(), out.values().begin());
        return;
    }

    const double scale = 1.0 / factor;
    const std::vector<AxisTap> xs = axis_taps(out_w, in_w, scale);
    const std::vector<AxisTap> ys = axis_taps(out_h, in_h, scale);

    parallel_for(maps.channels(), threads, [&](int c) {
        const std::span<const float> src = maps.plane(c);
        const std::span<float> dst = out.plane(c);

        // Horizontal pass over every source row, then one vertical lerp per output row.
        // Each worker owns its scratch rows.
        std::vector<float> rows(static_cast<std::size_t>(in_h) * out_w);
        for (int r = 0; r < in_h; ++r) {
            const float* s = src.data() + static_cast<std::size_t>(r) * in_w;
            float* d = rows.data() + static_cast<std::size_t>(r) * out_w;
            for (int x = 0; x < out_w; ++x) {
                const AxisTap& t = xs[x];
                d[x] = (1.0f - t.weight) * s[t.lo] + t.weight * s[t.hi];
            }
        }
        for (int y = 0; y < out_h; ++y) {
            const AxisTap& t = ys[y];
            const float* top = rows.data() + static_cast<std::size_t>(t.lo) * out_w;
            const float* bottom = rows.data() + static_cast<std::size_t>(t.hi) * out_w;
            float* d = dst.data() + static_cast<std::size_t>(y) * out_w;
            const float wb = t.weight;
            const float wt = 1.0f - wb;
            for (int x = 0; x < out_w; ++x)
                d[x] = wt * top[x] + wb * bottom[x];
        }
    });
}

FeatureMaps resize_bilinear(const FeatureMaps& maps, int factor, int threads)
{
    FeatureMaps out;
    resize_bilinear(maps, factor, out, threads);
    return out;
}

FeatureMaps resize_bilinear_to(const FeatureMaps& maps, int out_height, int out_width, SourceWindow window)
{
    if (out_height < 1 || out_width < 1)
        throw std::invalid_argument("resize target must be positive");
    if (!(window.height > 0.0) || !(window.width > 0.0))
        throw std::invalid_argument("resize source window must be positive");
    if (maps.empty())
        throw std::invalid_argument("cannot resize empty feature maps");

    const int in_h = maps.height();
    const int in_w = maps.width();
    const double scale_y = window.height / out_height;
    const double scale_x = window.width / out_width;

    FeatureMaps out(out_height, out_width, maps.channels());
    for (int c = 0; c < maps.channels(); ++c) {
        for (int y = 0; y < out_height; ++y) {
            for (int x = 0; x < out_width; ++x) {
                double sy = std::clamp((y + 0.5) * scale_y - 0.5, 0.0, static_cast<double>(in_h - 1));
                double sx = std::clamp((x + 0.5) * scale_x - 0.5, 0.0, static_cast<double>(in_w - 1));
                const int y0 = static_cast<int>(std::floor(sy));
                const int x0 = static_cast<int>(std::floor(sx));
                const int y1 = std::min(y0 + 1, in_h - 1);
                const int x1 = std::min(x0 + 1, in_w - 1);
                const double wy = sy - y0;
                const double wx = sx - x0;
                const double top = (1.0 - wx) * maps.at(c, y0, x0) + wx * maps.at(c, y0, x1);
                const double bottom = (1.0 - wx) * maps.at(c, y1, x0) + wx * maps.at(c, y1, x1);
                out.at(c, y, x) = static_cast<float>((1.0 - wy) * top + wy * bottom);
            }
        }
    }
    return out;
}

FeatureMaps resize_bilinear_to(const FeatureMaps& maps, int out_height, int out_width)
{
    return resize_bilinear_to(maps, out_height, out_width,
                              SourceWindow{static_cast<double>(maps.height()), static_cast<double>(maps.width())});
}

double InputGeometry::scale() const noexcept
{
    return static_cast<double>(net_input_height - pad.top - pad.bottom) / original_height;
}

Point2 InputGeometry::net_to_original(Point2 p) const noexcept
{
    const double s = scale();
    return {(p.x - pad.left + 0.5) / s - 0.5, (p.y - pad.top + 0.5) / s - 0.5};
}

Point2 InputGeometry::original_to_net(Point2 p) const noexcept
{
    const double s = scale();
    return {(p.x + 0.5) * s - 0.5 + pad.left, (p.y + 0.5) * s - 0.5 + pad.top};
}

Point2 InputGeometry::feature_to_original(Point2 p) const noexcept
{
    return net_to_original(upsample_coordinate(p, stride));
}

Point2 InputGeometry::original_to_feature(Point2 p) const noexcept
{
    return downsample_coordinate(original_to_net(p), stride);
}

SourceWindow InputGeometry::original_window() const noexcept
{
    const double s = scale();
    return {original_height * s / stride, original_width * s / stride};
}

InputGeometry compute_input_geometry(int original_height, int original_width, int target_height, int stride)
{
    if (original_height < 1 || original_width < 1 || target_height < 1 || stride < 1)
        throw std::invalid_argument("input geometry needs positive sizes");

    const long scaled_width =
        std::lround(static_cast<double>(original_width) * target_height / static_cast<double>(original_height));
    const int scaled_w = std::max(1, static_cast<int>(scaled_width));
    auto round_up = [stride](int v) { return (v + stride - 1) / stride * stride; };

    InputGeometry g;
    g.original_height = original_height;
    g.original_width = original_width;
    g.stride = stride;
    g.net_input_height = round_up(target_height);
    g.net_input_width = round_up(scaled_w);
    g.pad.bottom = g.net_input_height - target_height;
    g.pad.right = g.net_input_width - scaled_w;
    return g;
}

} // namespace poseproc
