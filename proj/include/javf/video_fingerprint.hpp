#pragma once

#include <cstdint>
#include <vector>

#include "javf/media.hpp"

namespace javf::fp {

struct VideoFingerprint {
    std::vector<std::uint8_t> bits; // packed MSB-first, width_bits/8 bytes
    std::size_t width_bits = 0;
    std::uint32_t frame_id = 0;
    std::int64_t timestamp_ms = 0;
};

// Geometry of the per-frame binary fingerprint. Every fingerprint in one
// database must be produced with one params value; seed fixed per database.
struct VideoFingerprintParams {
    std::size_t k_side = 32;     // rescale target, must be a multiple of 4
    std::size_t n_pairs = 1024;  // block-pair comparison bits
    std::size_t m_pixels = 256;  // random pixel/threshold bits
    std::uint64_t seed = 0;
};

void validate(const VideoFingerprintParams& params); // throws ConfigError

// Bilinear rescale with pixel-center sample mapping; exposed for testing.
Eigen::MatrixXd rescale_bilinear(const PixelMatrix& src, std::size_t side);

// Fingerprint of one frame:
//   1. rescale to k_side x k_side,
//   2. n_pairs bits comparing mean intensities of two 4x4 blocks; the pairs
//      are drawn without replacement from all unordered block pairs by a
//      generator seeded with params.seed (same pairs for every frame),
//   3. m_pixels bits comparing a drawn pixel against a drawn threshold.
VideoFingerprint video_fingerprint(const Frame& frame, const VideoFingerprintParams& params);

std::size_t hamming(const VideoFingerprint& a, const VideoFingerprint& b);

inline bool get_bit(const std::vector<std::uint8_t>& bits, std::size_t i) {
    return (bits[i / 8] >> (7 - i % 8)) & 1u;
}

inline void set_bit(std::vector<std::uint8_t>& bits, std::size_t i, bool v) {
    const std::uint8_t mask = static_cast<std::uint8_t>(1u << (7 - i % 8));
    if (v)
        bits[i / 8] |= mask;
    else
        bits[i / 8] &= static_cast<std::uint8_t>(~mask);
}

// Raw-buffer Hamming distance, shared with containers that store packed bits
// without the VideoFingerprint wrapper.
std::size_t hamming_bytes(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b);

} // namespace javf::fp
