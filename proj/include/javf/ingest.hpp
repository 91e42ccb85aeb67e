#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "javf/media.hpp"

namespace javf::ingest {

// Cluster-structured synthetic point cloud. Tight clusters (small spread)
// model redundant media; diffuse clouds model fast-changing media.
struct SyntheticCloudSpec {
    std::size_t n_points = 0;
    std::size_t width_bits = 64;  // fingerprint width of the generated points
    std::size_t n_clusters = 1;
    double spread = 0.0;          // max Hamming distance of a point from its cluster center
    std::uint64_t seed = 0;
};

struct SyntheticCloud {
    std::vector<std::vector<std::uint8_t>> points; // packed bit strings, MSB-first
    std::vector<std::uint32_t> labels;             // cluster id per point
    std::size_t width_bits = 0;
};

// Synthetic audio-segment cloud: each point is a multiset of hash keys.
struct SyntheticSegmentCloudSpec {
    std::size_t n_points = 0;
    std::size_t units_per_segment = 8;
    std::uint32_t key_space = 4096; // keys drawn from [0, key_space)
    std::size_t n_clusters = 1;
    double spread = 0.0;            // max fraction of a segment's keys resampled
    std::uint64_t seed = 0;
};

struct SyntheticSegmentCloud {
    std::vector<std::vector<std::uint32_t>> segments; // keys per segment
    std::vector<std::uint32_t> labels;
    std::size_t units_per_segment = 0;
};

// Synthetic media for end-to-end runs: scene-structured frames and a
// tone-structured audio wave, both deterministic in the seed.
struct SyntheticMediaSpec {
    std::size_t n_frames = 200;
    std::size_t frame_width = 64;
    std::size_t frame_height = 48;
    std::size_t n_scenes = 8;
    int pixel_noise = 12;           // per-pixel uniform jitter within a scene
    std::int64_t frame_interval_ms = 40;
    double audio_seconds = 60.0;
    std::uint32_t audio_rate = 8000;
    std::size_t tones_per_scene = 3;
    std::uint64_t seed = 0;
};

PcmAudio read_wav(const std::filesystem::path& path);
FrameSequence read_frames(const std::filesystem::path& dir, std::int64_t frame_interval_ms);

SyntheticCloud synth_points(const SyntheticCloudSpec& spec);
SyntheticSegmentCloud synth_segment_points(const SyntheticSegmentCloudSpec& spec);
FrameSequence synth_frames(const SyntheticMediaSpec& spec);
PcmAudio synth_audio(const SyntheticMediaSpec& spec);

} // namespace javf::ingest
