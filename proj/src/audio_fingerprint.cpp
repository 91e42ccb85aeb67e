#include "javf/audio_fingerprint.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <unsupported/Eigen/FFT>

#include "javf/errors.hpp"

namespace javf::fp {

void validate(const AudioFingerprintParams& params) {
    if (params.window < 4 || (params.window & (params.window - 1)) != 0)
        throw ConfigError("window must be a power of two, at least 4");
    if (params.window > 2048)
        throw ConfigError("window above 2048 overflows the 10-bit bin fields");
    if (params.hop == 0 || params.hop > params.window)
        throw ConfigError("hop must lie in [1, window]");
    if (params.nms_dt == 0 || params.nms_df == 0)
        throw ConfigError("suppression radii must be positive");
    if (params.peak_floor < 0) throw ConfigError("peak floor must be non-negative");
    if (params.fanout == 0) throw ConfigError("fanout must be positive");
    if (params.dt_max > 4095)
        throw ConfigError("frame offsets above 4095 overflow the 12-bit key field");
    if (params.dt_min >= params.dt_max)
        throw ConfigError("offset window is empty");
    if (params.units_per_segment == 0) throw ConfigError("units per segment must be positive");
}

Eigen::MatrixXd spectrogram(const PcmAudio& audio, std::size_t window, std::size_t hop) {
    if (window < 4 || (window & (window - 1)) != 0)
        throw ConfigError("window must be a power of two, at least 4");
    if (hop == 0 || hop > window) throw ConfigError("hop must lie in [1, window]");
    if (audio.samples.size() < window)
        throw EmptyInput("audio shorter than one analysis window");

    const std::size_t n_frames = (audio.samples.size() - window) / hop + 1;
    const std::size_t n_bins = window / 2;

    std::vector<double> hann(window);
    for (std::size_t i = 0; i < window; ++i)
        hann[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                        static_cast<double>(window)));

    Eigen::FFT<double> fft;
    Eigen::MatrixXd grid(n_frames, n_bins);
    std::vector<double> buf(window);
    std::vector<std::complex<double>> spec;
    for (std::size_t t = 0; t < n_frames; ++t) {
        const std::size_t base = t * hop;
        for (std::size_t i = 0; i < window; ++i)
            buf[i] = hann[i] * (static_cast<double>(audio.samples[base + i]) / 32768.0);
        fft.fwd(spec, buf);
        for (std::size_t f = 0; f < n_bins; ++f)
            grid(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(f)) = std::abs(spec[f]);
    }
    return grid;
}

std::vector<SpectrogramPeak> peak_pick(const Eigen::MatrixXd& grid, std::size_t nms_dt,
                                       std::size_t nms_df, double floor) {
    if (grid.size() == 0) throw EmptyInput("cannot pick peaks of an empty grid");
    const auto nt = grid.rows(), nf = grid.cols();
    const auto rdt = static_cast<Eigen::Index>(nms_dt);
    const auto rdf = static_cast<Eigen::Index>(nms_df);

    std::vector<SpectrogramPeak> kept;
    for (Eigen::Index t = 0; t < nt; ++t) {
        for (Eigen::Index f = 0; f < nf; ++f) {
            const double v = grid(t, f);
            if (v < floor) continue;
            bool dominated = false, has_below = false;
            const Eigen::Index t0 = std::max<Eigen::Index>(0, t - rdt);
            const Eigen::Index t1 = std::min<Eigen::Index>(nt - 1, t + rdt);
            const Eigen::Index f0 = std::max<Eigen::Index>(0, f - rdf);
            const Eigen::Index f1 = std::min<Eigen::Index>(nf - 1, f + rdf);
            for (Eigen::Index tt = t0; tt <= t1 && !dominated; ++tt)
                for (Eigen::Index ff = f0; ff <= f1; ++ff) {
                    const double u = grid(tt, ff);
                    if (u > v) {
                        dominated = true;
                        break;
                    }
                    if (u < v) has_below = true;
                }
            if (dominated || !has_below) continue; // plateaus produce nothing

            // A same-valued maximum already kept in this rectangle wins the
            // tie by being lexicographically earlier.
            bool suppressed = false;
            for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
                if (static_cast<Eigen::Index>(it->t) < t - rdt) break;
                const auto df = static_cast<Eigen::Index>(it->f) - f;
                if (df <= rdf && df >= -rdf) {
                    suppressed = true;
                    break;
                }
            }
            if (!suppressed)
                kept.push_back({static_cast<std::size_t>(t), static_cast<std::size_t>(f)});
        }
    }
    return kept;
}

std::vector<AudioHashUnit> pair_peaks(const std::vector<SpectrogramPeak>& peaks,
                                      std::size_t fanout, std::size_t dt_min, std::size_t dt_max,
                                      double ms_per_frame, std::uint32_t title_id) {
    std::vector<AudioHashUnit> units;
    for (std::size_t i = 0; i < peaks.size(); ++i) {
        std::size_t emitted = 0;
        for (std::size_t j = i + 1; j < peaks.size() && emitted < fanout; ++j) {
            const std::size_t dt = peaks[j].t - peaks[i].t;
            if (dt > dt_max) break; // peaks are time-sorted
            if (dt <= dt_min) continue;
            AudioHashUnit unit;
            unit.key = pack_key(static_cast<std::uint32_t>(peaks[i].f),
                                static_cast<std::uint32_t>(peaks[j].f),
                                static_cast<std::uint32_t>(dt));
            unit.timestamp_ms =
                static_cast<std::int64_t>(std::llround(static_cast<double>(peaks[i].t) * ms_per_frame));
            unit.title_id = title_id;
            units.push_back(unit);
            ++emitted;
        }
    }
    return units;
}

std::vector<AudioSegment> segment_audio(const std::vector<AudioHashUnit>& units,
                                        std::size_t units_per_segment) {
    if (units_per_segment == 0) throw ConfigError("units per segment must be positive");
    const std::size_t n_segments = units.size() / units_per_segment; // remainder dropped
    std::vector<AudioSegment> segments(n_segments);
    for (std::size_t s = 0; s < n_segments; ++s) {
        auto& seg = segments[s];
        seg.segment_id = static_cast<std::uint32_t>(s);
        seg.units.assign(units.begin() + static_cast<std::ptrdiff_t>(s * units_per_segment),
                         units.begin() + static_cast<std::ptrdiff_t>((s + 1) * units_per_segment));
        seg.t_begin_ms = seg.units.front().timestamp_ms;
        seg.t_end_ms = seg.units.back().timestamp_ms;
    }
    return segments;
}

double segment_distance(const AudioSegment& a, const AudioSegment& b) {
    if (a.units.size() != b.units.size())
        throw IncompatibleFingerprints("segment unit counts differ");
    if (a.units.empty()) return 0.0;
    std::vector<std::uint32_t> ka(a.units.size()), kb(b.units.size());
    for (std::size_t i = 0; i < a.units.size(); ++i) ka[i] = a.units[i].key;
    for (std::size_t i = 0; i < b.units.size(); ++i) kb[i] = b.units[i].key;
    std::sort(ka.begin(), ka.end());
    std::sort(kb.begin(), kb.end());
    std::size_t shared = 0, i = 0, j = 0;
    while (i < ka.size() && j < kb.size()) {
        if (ka[i] < kb[j])
            ++i;
        else if (kb[j] < ka[i])
            ++j;
        else {
            ++shared;
            ++i;
            ++j;
        }
    }
    return 1.0 - static_cast<double>(shared) / static_cast<double>(a.units.size());
}

std::vector<AudioSegment> audio_fingerprint(const PcmAudio& audio,
                                            const AudioFingerprintParams& params,
                                            std::uint32_t title_id) {
    validate(params);
    if (audio.sample_rate == 0) throw ConfigError("audio sample rate must be positive");
    const Eigen::MatrixXd grid = spectrogram(audio, params.window, params.hop);
    const auto peaks = peak_pick(grid, params.nms_dt, params.nms_df, params.peak_floor);
    const double ms_per_frame =
        1000.0 * static_cast<double>(params.hop) / static_cast<double>(audio.sample_rate);
    const auto units =
        pair_peaks(peaks, params.fanout, params.dt_min, params.dt_max, ms_per_frame, title_id);
    return segment_audio(units, params.units_per_segment);
}

} // namespace javf::fp
