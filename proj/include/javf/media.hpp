#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace javf {

// Grayscale pixels, row-major so that raw frame dumps map directly onto the
// matrix storage.
using PixelMatrix =
    Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Frame {
    PixelMatrix pixels;          // rows = height, cols = width
    std::int64_t timestamp_ms = 0;
};

struct FrameSequence {
    std::vector<Frame> frames;
    double fps = 0.0;
};

struct PcmAudio {
    std::vector<std::int16_t> samples; // mono
    std::uint32_t sample_rate = 0;
};

} // namespace javf
