// Copyright (C) 2026 The poseproc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace poseproc {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

/// Dense multi-channel 2-D maps. Storage is channel-major, row-major inside a plane,
/// so one channel is a contiguous `height * width` run of floats.
///
/// A default-constructed object is empty (all dimensions zero) and only serves as a
/// reusable buffer; every other constructor requires positive dimensions.
class FeatureMaps {
public:
    FeatureMaps() = default;
    FeatureMaps(int height, int width, int channels);
    FeatureMaps(int height, int width, int channels, std::vector<float> data);

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    int channels() const noexcept { return channels_; }
    bool empty() const noexcept { return data_.empty(); }
    std::size_t plane_size() const noexcept { return static_cast<std::size_t>(height_) * width_; }

    std::span<float> plane(int channel);
    std::span<const float> plane(int channel) const;

    float at(int channel, int y, int x) const { return data_[index(channel, y, x)]; }
    float& at(int channel, int y, int x) { return data_[index(channel, y, x)]; }

    std::span<const float> values() const noexcept { return data_; }
    std::span<float> values() noexcept { return data_; }

    /// Re-dimension in place, keeping the allocation when it is large enough.
    /// Contents are zero-filled.
    void reset(int height, int width, int channels);

    bool all_finite() const noexcept;

    friend bool operator==(const FeatureMaps&, const FeatureMaps&) = default;

private:
    std::size_t index(int channel, int y, int x) const noexcept
    {
        return (static_cast<std::size_t>(channel) * height_ + y) * width_ + x;
    }

    int height_ = 0;
    int width_ = 0;
    int channels_ = 0;
    std::vector<float> data_;
};

/// Bilinear upsampling by an integer factor with half-pixel centers: output sample i
/// reads source coordinate (i + 0.5) / factor - 0.5, clamped to the source extent.
/// Separable implementation; `threads` > 1 splits work across channels and does not
/// change the result.
FeatureMaps resize_bilinear(const FeatureMaps& maps, int factor, int threads = 1);

/// Same as above, writing into `out` and reusing its storage.
void resize_bilinear(const FeatureMaps& maps, int factor, FeatureMaps& out, int threads = 1);

/// Extent of the source area, measured from the top-left corner in source pixels,
/// that an arbitrary-size resize maps onto its output.
struct SourceWindow {
    double height = 0.0;
    double width = 0.0;
};

/// General bilinear resize onto an `out_height` x `out_width` grid covering `window`.
/// Straightforward per-pixel evaluation in double precision; used by the
/// resize-to-original-image path.
FeatureMaps resize_bilinear_to(const FeatureMaps& maps, int out_height, int out_width, SourceWindow window);
FeatureMaps resize_bilinear_to(const FeatureMaps& maps, int out_height, int out_width);

struct EdgePadding {
    int top = 0;
    int left = 0;
    int bottom = 0;
    int right = 0;

    friend bool operator==(const EdgePadding&, const EdgePadding&) = default;
};

/// Network input sizing for one frame: the image is scaled to the target height with
/// its aspect ratio preserved and padded on the bottom/right to a multiple of the stride.
struct InputGeometry {
    int net_input_height = 0;
    int net_input_width = 0;
    int original_height = 0;
    int original_width = 0;
    int stride = 8;
    EdgePadding pad;

    int feature_height() const noexcept { return net_input_height / stride; }
    int feature_width() const noexcept { return net_input_width / stride; }

    /// Uniform image scale, net input height (before padding) over original height.
    double scale() const noexcept;

    Point2 net_to_original(Point2 p) const noexcept;
    Point2 original_to_net(Point2 p) const noexcept;
    Point2 feature_to_original(Point2 p) const noexcept;
    Point2 original_to_feature(Point2 p) const noexcept;

    /// Source window, in feature-map pixels, that covers the original image.
    SourceWindow original_window() const noexcept;

    friend bool operator==(const InputGeometry&, const InputGeometry&) = default;
};

InputGeometry compute_input_geometry(int original_height, int original_width, int target_height, int stride = 8);

/// Map a coordinate in a map upsampled by `factor` back to the map it was upsampled from.
inline Point2 downsample_coordinate(Point2 p, int factor) noexcept
{
    return {(p.x + 0.5) / factor - 0.5, (p.y + 0.5) / factor - 0.5};
}

inline Point2 upsample_coordinate(Point2 p, int factor) noexcept
{
    return {(p.x + 0.5) * factor - 0.5, (p.y + 0.5) * factor - 0.5};
}

} // namespace poseproc
