#include "javf/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "javf/errors.hpp"
#include "javf/rng.hpp"

namespace javf::ingest {

namespace {

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed on " + path.string());
    return data;
}

std::uint32_t read_u32le(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16le(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

} // namespace

PcmAudio read_wav(const std::filesystem::path& path) {
    const auto data = slurp(path);
    if (data.size() < 12 || std::memcmp(data.data(), "RIFF", 4) != 0 ||
        std::memcmp(data.data() + 8, "WAVE", 4) != 0)
        throw ParseError(path.string() + ": not a RIFF/WAVE file");

    bool have_fmt = false;
    std::uint16_t audio_format = 0, channels = 0, bits = 0;
    std::uint32_t sample_rate = 0;
    const std::uint8_t* pcm = nullptr;
    std::size_t pcm_len = 0;

    std::size_t pos = 12;
    while (pos + 8 <= data.size()) {
        const char* tag = reinterpret_cast<const char*>(data.data() + pos);
        const std::uint32_t len = read_u32le(data.data() + pos + 4);
        pos += 8;
        if (len > data.size() - pos) throw ParseError(path.string() + ": truncated chunk");
        if (std::memcmp(tag, "fmt ", 4) == 0) {
            if (len < 16) throw ParseError(path.string() + ": short fmt chunk");
            audio_format = read_u16le(data.data() + pos);
            channels = read_u16le(data.data() + pos + 2);
            sample_rate = read_u32le(data.data() + pos + 4);
            bits = read_u16le(data.data() + pos + 14);
            have_fmt = true;
        } else if (std::memcmp(tag, "data", 4) == 0) {
            pcm = data.data() + pos;
            pcm_len = len;
        }
        pos += len + (len & 1); // chunks are word-aligned
    }
    if (!have_fmt || pcm == nullptr) throw ParseError(path.string() + ": missing fmt or data chunk");
    if (audio_format != 1 || bits != 16)
        throw UnsupportedFormat(path.string() + ": only 16-bit PCM is supported");
    if (channels != 1 && channels != 2)
        throw UnsupportedFormat(path.string() + ": only mono or stereo is supported");
    if (sample_rate == 0) throw ParseError(path.string() + ": zero sample rate");
    const std::size_t frame_bytes = 2u * channels;
    if (pcm_len % frame_bytes != 0) throw ParseError(path.string() + ": ragged data chunk");
    const std::size_t n = pcm_len / frame_bytes;
    if (n == 0) throw EmptyInput(path.string() + ": no samples");

    PcmAudio out;
    out.sample_rate = sample_rate;
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::int16_t l = static_cast<std::int16_t>(read_u16le(pcm + i * frame_bytes));
        if (channels == 1) {
            out.samples[i] = l;
        } else {
            const std::int16_t r = static_cast<std::int16_t>(read_u16le(pcm + i * frame_bytes + 2));
            const int sum = int(l) + int(r);
            // mean with halves rounded away from zero
            out.samples[i] = static_cast<std::int16_t>(sum >= 0 ? (sum + 1) / 2 : (sum - 1) / 2);
        }
    }
    return out;
}

namespace {

// PGM header fields are separated by whitespace; '#' starts a comment that
// runs to end of line.
std::size_t next_pgm_token(const std::vector<std::uint8_t>& data, std::size_t pos,
                           std::string& token) {
    token.clear();
    while (pos < data.size()) {
        const char c = static_cast<char>(data[pos]);
        if (c == '#') {
            while (pos < data.size() && data[pos] != '\n') ++pos;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++pos;
        } else {
            break;
        }
    }
    while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos])) &&
           data[pos] != '#')
        token.push_back(static_cast<char>(data[pos++]));
    return pos;
}

Frame read_pgm(const std::filesystem::path& path) {
    const auto data = slurp(path);
    std::string tok;
    std::size_t pos = next_pgm_token(data, 0, tok);
    if (tok != "P5") throw UnsupportedFormat(path.string() + ": not a binary PGM (P5) file");
    pos = next_pgm_token(data, pos, tok);
    const long w = tok.empty() ? -1 : std::strtol(tok.c_str(), nullptr, 10);
    pos = next_pgm_token(data, pos, tok);
    const long h = tok.empty() ? -1 : std::strtol(tok.c_str(), nullptr, 10);
    pos = next_pgm_token(data, pos, tok);
    const long maxval = tok.empty() ? -1 : std::strtol(tok.c_str(), nullptr, 10);
    if (w <= 0 || h <= 0) throw ParseError(path.string() + ": bad PGM dimensions");
    if (maxval != 255) throw UnsupportedFormat(path.string() + ": PGM maxval must be 255");
    ++pos; // single whitespace byte after maxval
    const std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    if (pos + need > data.size()) throw ParseError(path.string() + ": truncated PGM payload");

    Frame frame;
    frame.pixels.resize(h, w);
    std::memcpy(frame.pixels.data(), data.data() + pos, need);
    return frame;
}

} // namespace

FrameSequence read_frames(const std::filesystem::path& dir, std::int64_t frame_interval_ms) {
    if (frame_interval_ms <= 0) throw ConfigError("frame interval must be positive");
    std::error_code ec;
    std::filesystem::directory_iterator it(dir, ec);
    if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());

    std::vector<std::filesystem::path> files;
    for (const auto& entry : it)
        if (entry.is_regular_file() && entry.path().extension() == ".pgm")
            files.push_back(entry.path());
    if (files.empty()) throw EmptyInput("no .pgm files in " + dir.string());
    std::sort(files.begin(), files.end());

    FrameSequence seq;
    seq.fps = 1000.0 / static_cast<double>(frame_interval_ms);
    seq.frames.reserve(files.size());
    for (std::size_t i = 0; i < files.size(); ++i) {
        Frame f = read_pgm(files[i]);
        f.timestamp_ms = static_cast<std::int64_t>(i) * frame_interval_ms;
        seq.frames.push_back(std::move(f));
    }
    return seq;
}

namespace {

// n_take distinct values from [0, n) in draw order.
std::vector<std::size_t> draw_without_replacement(Xoshiro256ss& rng, std::size_t n,
                                                  std::size_t n_take,
                                                  std::vector<std::size_t>& scratch) {
    scratch.resize(n);
    for (std::size_t i = 0; i < n; ++i) scratch[i] = i;
    std::vector<std::size_t> out(n_take);
    for (std::size_t t = 0; t < n_take; ++t) {
        const std::size_t j = t + static_cast<std::size_t>(rng.bounded(n - t));
        std::swap(scratch[t], scratch[j]);
        out[t] = scratch[t];
    }
    return out;
}

} // namespace

SyntheticCloud synth_points(const SyntheticCloudSpec& spec) {
    if (spec.n_points == 0) throw ConfigError("synthetic cloud needs at least one point");
    if (spec.n_clusters == 0) throw ConfigError("synthetic cloud needs at least one cluster");
    if (spec.width_bits == 0) throw ConfigError("synthetic cloud needs a positive bit width");
    if (spec.spread < 0) throw ConfigError("spread must be non-negative");
    if (spec.width_bits < 63 && spec.n_clusters > (std::uint64_t(1) << spec.width_bits))
        throw ConfigError("more clusters than distinct points of this width");

    Xoshiro256ss rng(spec.seed);
    const std::size_t bytes = (spec.width_bits + 7) / 8;

    // Distinct cluster centers, bit by bit.
    std::vector<std::vector<std::uint8_t>> centers;
    centers.reserve(spec.n_clusters);
    while (centers.size() < spec.n_clusters) {
        std::vector<std::uint8_t> c(bytes, 0);
        for (std::size_t b = 0; b < spec.width_bits; ++b)
            if (rng.bounded(2)) c[b / 8] |= static_cast<std::uint8_t>(1u << (7 - b % 8));
        if (std::find(centers.begin(), centers.end(), c) == centers.end())
            centers.push_back(std::move(c));
    }

    const std::size_t max_flips =
        std::min<std::size_t>(static_cast<std::size_t>(spec.spread), spec.width_bits);
    SyntheticCloud cloud;
    cloud.width_bits = spec.width_bits;
    cloud.points.reserve(spec.n_points);
    cloud.labels.reserve(spec.n_points);
    std::vector<std::size_t> scratch;
    for (std::size_t i = 0; i < spec.n_points; ++i) {
        const std::uint32_t label = static_cast<std::uint32_t>(i % spec.n_clusters);
        std::vector<std::uint8_t> p = centers[label];
        const std::size_t n_flips =
            max_flips == 0 ? 0 : static_cast<std::size_t>(rng.bounded(max_flips + 1));
        for (std::size_t b : draw_without_replacement(rng, spec.width_bits, n_flips, scratch))
            p[b / 8] ^= static_cast<std::uint8_t>(1u << (7 - b % 8));
        cloud.points.push_back(std::move(p));
        cloud.labels.push_back(label);
    }
    return cloud;
}

SyntheticSegmentCloud synth_segment_points(const SyntheticSegmentCloudSpec& spec) {
    if (spec.n_points == 0) throw ConfigError("synthetic segment cloud needs at least one point");
    if (spec.n_clusters == 0) throw ConfigError("synthetic segment cloud needs at least one cluster");
    if (spec.units_per_segment == 0) throw ConfigError("units per segment must be positive");
    if (spec.key_space == 0) throw ConfigError("key space must be positive");
    if (spec.spread < 0 || spec.spread > 1) throw ConfigError("segment spread must lie in [0, 1]");

    Xoshiro256ss rng(spec.seed);
    const std::size_t u = spec.units_per_segment;

    std::vector<std::vector<std::uint32_t>> centers;
    std::vector<std::vector<std::uint32_t>> center_keys_sorted; // for distinctness checks
    centers.reserve(spec.n_clusters);
    while (centers.size() < spec.n_clusters) {
        std::vector<std::uint32_t> c(u);
        for (auto& k : c) k = static_cast<std::uint32_t>(rng.bounded(spec.key_space));
        std::vector<std::uint32_t> sorted = c;
        std::sort(sorted.begin(), sorted.end());
        if (std::find(center_keys_sorted.begin(), center_keys_sorted.end(), sorted) ==
            center_keys_sorted.end()) {
            centers.push_back(std::move(c));
            center_keys_sorted.push_back(std::move(sorted));
        }
    }

    const std::size_t max_repl = static_cast<std::size_t>(spec.spread * static_cast<double>(u));
    SyntheticSegmentCloud cloud;
    cloud.units_per_segment = u;
    cloud.segments.reserve(spec.n_points);
    cloud.labels.reserve(spec.n_points);
    std::vector<std::size_t> scratch;
    for (std::size_t i = 0; i < spec.n_points; ++i) {
        const std::uint32_t label = static_cast<std::uint32_t>(i % spec.n_clusters);
        std::vector<std::uint32_t> keys = centers[label];
        const std::size_t n_repl =
            max_repl == 0 ? 0 : static_cast<std::size_t>(rng.bounded(max_repl + 1));
        for (std::size_t slot : draw_without_replacement(rng, u, n_repl, scratch))
            keys[slot] = static_cast<std::uint32_t>(rng.bounded(spec.key_space));
        cloud.segments.push_back(std::move(keys));
        cloud.labels.push_back(label);
    }
    return cloud;
}

FrameSequence synth_frames(const SyntheticMediaSpec& spec) {
    if (spec.n_frames == 0 || spec.frame_width == 0 || spec.frame_height == 0 ||
        spec.n_scenes == 0)
        throw ConfigError("synthetic media needs positive frame counts and dimensions");
    if (spec.pixel_noise < 0 || spec.pixel_noise > 255)
        throw ConfigError("pixel noise must lie in [0, 255]");
    if (spec.frame_interval_ms <= 0) throw ConfigError("frame interval must be positive");

    Xoshiro256ss rng(spec.seed);
    const auto h = static_cast<Eigen::Index>(spec.frame_height);
    const auto w = static_cast<Eigen::Index>(spec.frame_width);

    std::vector<PixelMatrix> scenes(spec.n_scenes);
    for (auto& s : scenes) {
        s.resize(h, w);
        for (Eigen::Index r = 0; r < h; ++r)
            for (Eigen::Index c = 0; c < w; ++c)
                s(r, c) = static_cast<std::uint8_t>(rng.bounded(256));
    }

    FrameSequence seq;
    seq.fps = 1000.0 / static_cast<double>(spec.frame_interval_ms);
    seq.frames.reserve(spec.n_frames);
    for (std::size_t i = 0; i < spec.n_frames; ++i) {
        const std::size_t scene = i * spec.n_scenes / spec.n_frames; // contiguous scene blocks
        Frame f;
        f.timestamp_ms = static_cast<std::int64_t>(i) * spec.frame_interval_ms;
        f.pixels = scenes[scene];
        if (spec.pixel_noise > 0) {
            const std::uint64_t span = 2ull * spec.pixel_noise + 1;
            for (Eigen::Index r = 0; r < h; ++r)
                for (Eigen::Index c = 0; c < w; ++c) {
                    const int delta = static_cast<int>(rng.bounded(span)) - spec.pixel_noise;
                    f.pixels(r, c) = static_cast<std::uint8_t>(
                        std::clamp(int(f.pixels(r, c)) + delta, 0, 255));
                }
        }
        seq.frames.push_back(std::move(f));
    }
    return seq;
}

PcmAudio synth_audio(const SyntheticMediaSpec& spec) {
    if (spec.audio_seconds <= 0 || spec.audio_rate == 0 || spec.tones_per_scene == 0 ||
        spec.n_scenes == 0)
        throw ConfigError("synthetic audio needs positive duration, rate and tone counts");

    Xoshiro256ss rng(spec.seed + 1); // offset so frame and audio draws stay independent
    const std::size_t n = static_cast<std::size_t>(spec.audio_seconds * spec.audio_rate);
    if (n == 0) throw ConfigError("synthetic audio too short for one sample");

    // Per scene, a chord of tones away from DC and Nyquist.
    const double lo = 100.0, hi = 0.45 * spec.audio_rate;
    std::vector<std::vector<double>> freqs(spec.n_scenes);
    for (auto& chord : freqs) {
        chord.resize(spec.tones_per_scene);
        for (auto& f : chord) f = lo + rng.uniform01() * (hi - lo);
    }

    PcmAudio out;
    out.sample_rate = spec.audio_rate;
    out.samples.resize(n);
    const double amp = 0.9 / static_cast<double>(spec.tones_per_scene);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t scene = i * spec.n_scenes / n;
        double v = 0.0;
        for (const double f : freqs[scene])
            v += amp * std::sin(2.0 * std::numbers::pi * f * static_cast<double>(i) /
                                static_cast<double>(spec.audio_rate));
        out.samples[i] = static_cast<std::int16_t>(std::lround(32767.0 * std::clamp(v, -1.0, 1.0)));
    }
    return out;
}

} // namespace javf::ingest
