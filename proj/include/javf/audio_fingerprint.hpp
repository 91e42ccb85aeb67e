#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "javf/media.hpp"

namespace javf::fp {

// One spectrogram landmark pair. The key packs the anchor bin, the paired
// bin and their frame offset as F1:10 | F2:10 | dt:12 = 32 bits.
struct AudioHashUnit {
    std::uint32_t key = 0;
    std::int64_t timestamp_ms = 0; // anchor time
    std::uint32_t title_id = 0;
};

struct AudioSegment {
    std::vector<AudioHashUnit> units; // exactly units_per_segment entries
    std::uint32_t segment_id = 0;
    std::int64_t t_begin_ms = 0; // first unit's anchor
    std::int64_t t_end_ms = 0;   // last unit's anchor
};

struct AudioFingerprintParams {
    std::size_t window = 1024; // power of two, at most 2048 (10-bit bin keys)
    std::size_t hop = 512;     // <= window
    std::size_t nms_dt = 3;    // suppression radius, time frames
    std::size_t nms_df = 5;    // suppression radius, frequency bins
    double peak_floor = 0.0;   // minimum magnitude for a peak
    std::size_t fanout = 3;    // pairs emitted per anchor
    std::size_t dt_min = 1;    // pair accepted iff dt_min < dt <= dt_max (frames)
    std::size_t dt_max = 64;   // at most 4095 (12-bit key field)
    std::size_t units_per_segment = 8;
};

void validate(const AudioFingerprintParams& params); // throws ConfigError

struct SpectrogramPeak {
    std::size_t t = 0; // frame index
    std::size_t f = 0; // bin index
};

inline std::uint32_t pack_key(std::uint32_t f1, std::uint32_t f2, std::uint32_t dt) {
    return (f1 << 22) | (f2 << 12) | dt;
}

// rows = frames, cols = window/2 bins; Hann-windowed FFT magnitudes.
Eigen::MatrixXd spectrogram(const PcmAudio& audio, std::size_t window, std::size_t hop);

// Local maxima of the grid. A cell survives iff its magnitude is >= floor,
// no cell in the (2*nms_dt+1) x (2*nms_df+1) rectangle exceeds it, at least
// one cell in the rectangle is strictly below it (so plateaus yield nothing),
// and no already-kept equal peak shares its rectangle (lexicographically
// earliest of a tie survives). Output sorted by (t, f).
std::vector<SpectrogramPeak> peak_pick(const Eigen::MatrixXd& grid, std::size_t nms_dt,
                                       std::size_t nms_df, double floor);

// Each anchor pairs with up to `fanout` later peaks at frame offset
// dt_min < dt <= dt_max. ms_per_frame converts anchor frames to timestamps.
std::vector<AudioHashUnit> pair_peaks(const std::vector<SpectrogramPeak>& peaks,
                                      std::size_t fanout, std::size_t dt_min, std::size_t dt_max,
                                      double ms_per_frame, std::uint32_t title_id);

// Consecutive groups of exactly units_per_segment units; remainder dropped.
std::vector<AudioSegment> segment_audio(const std::vector<AudioHashUnit>& units,
                                        std::size_t units_per_segment);

// 1 - |multiset key intersection| / units_per_segment, in [0, 1].
double segment_distance(const AudioSegment& a, const AudioSegment& b);

// Full pipeline: spectrogram -> peaks -> hash units -> segments.
std::vector<AudioSegment> audio_fingerprint(const PcmAudio& audio,
                                            const AudioFingerprintParams& params,
                                            std::uint32_t title_id);

} // namespace javf::fp
