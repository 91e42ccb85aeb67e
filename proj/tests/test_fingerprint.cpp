#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "javf/audio_fingerprint.hpp"
#include "javf/errors.hpp"
#include "javf/ingest.hpp"
#include "javf/rng.hpp"
#include "javf/video_fingerprint.hpp"

using namespace javf;

namespace {

PixelMatrix random_pixels(Eigen::Index h, Eigen::Index w, std::uint64_t seed) {
    Xoshiro256ss rng(seed);
    PixelMatrix m(h, w);
    for (Eigen::Index r = 0; r < h; ++r)
        for (Eigen::Index c = 0; c < w; ++c) m(r, c) = static_cast<std::uint8_t>(rng.bounded(256));
    return m;
}

// Reference fingerprint, written from the algorithm description with its own
// rescale, block means, pair table and bit packing. The stream generator is
// the library one; it is pinned against an independent copy in the rng tests.
std::vector<std::uint8_t> ref_fingerprint(const PixelMatrix& src,
                                          const fp::VideoFingerprintParams& p) {
    const std::size_t k = p.k_side;
    const auto h = static_cast<std::size_t>(src.rows());
    const auto w = static_cast<std::size_t>(src.cols());
    std::vector<std::vector<double>> img(k, std::vector<double>(k));
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < k; ++c) {
            double y = (double(r) + 0.5) * double(h) / double(k) - 0.5;
            double x = (double(c) + 0.5) * double(w) / double(k) - 0.5;
            y = std::clamp(y, 0.0, double(h - 1));
            x = std::clamp(x, 0.0, double(w - 1));
            const std::size_t y0 = std::size_t(y), x0 = std::size_t(x);
            const std::size_t y1 = std::min(y0 + 1, h - 1), x1 = std::min(x0 + 1, w - 1);
            const double fy = y - double(y0), fx = x - double(x0);
            img[r][c] = (1 - fy) * ((1 - fx) * src(y0, x0) + fx * src(y0, x1)) +
                        fy * ((1 - fx) * src(y1, x0) + fx * src(y1, x1));
        }

    const std::size_t nb = k / 4;
    std::vector<double> mean(nb * nb, 0.0);
    for (std::size_t br = 0; br < nb; ++br)
        for (std::size_t bc = 0; bc < nb; ++bc) {
            double s = 0;
            for (std::size_t r = 0; r < 4; ++r)
                for (std::size_t c = 0; c < 4; ++c) s += img[br * 4 + r][bc * 4 + c];
            mean[br * nb + bc] = s / 16.0;
        }

    // explicit lexicographic table of unordered block pairs
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < nb * nb; ++a)
        for (std::size_t b = a + 1; b < nb * nb; ++b) pairs.emplace_back(a, b);

    Xoshiro256ss rng(p.seed);
    std::vector<bool> bits;
    std::vector<std::size_t> deck(pairs.size());
    for (std::size_t i = 0; i < deck.size(); ++i) deck[i] = i;
    for (std::size_t t = 0; t < p.n_pairs; ++t) {
        const std::size_t j = t + std::size_t(rng.bounded(deck.size() - t));
        std::swap(deck[t], deck[j]);
        const auto [a, b] = pairs[deck[t]];
        bits.push_back(mean[a] > mean[b]);
    }
    for (std::size_t t = 0; t < p.m_pixels; ++t) {
        const std::size_t idx = std::size_t(rng.bounded(k * k));
        const double thr = double(rng.bounded(256));
        bits.push_back(img[idx / k][idx % k] > thr);
    }

    std::vector<std::uint8_t> packed(bits.size() / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) packed[i / 8] |= std::uint8_t(0x80u >> (i % 8));
    return packed;
}

} // namespace

TEST_CASE("rescale_bilinear: same-size rescale is the identity") {
    const PixelMatrix src = random_pixels(16, 16, 1);
    const Eigen::MatrixXd out = fp::rescale_bilinear(src, 16);
    for (Eigen::Index r = 0; r < 16; ++r)
        for (Eigen::Index c = 0; c < 16; ++c)
            CHECK(out(r, c) == doctest::Approx(double(src(r, c))));
}

TEST_CASE("rescale_bilinear: constant image stays constant at any size") {
    PixelMatrix src(7, 13);
    src.setConstant(77);
    for (std::size_t side : {4u, 8u, 32u}) {
        const Eigen::MatrixXd out = fp::rescale_bilinear(src, side);
        for (Eigen::Index r = 0; r < Eigen::Index(side); ++r)
            for (Eigen::Index c = 0; c < Eigen::Index(side); ++c)
                CHECK(out(r, c) == doctest::Approx(77.0));
    }
}

TEST_CASE("rescale_bilinear: hand-computed 2x2 -> 4x4 cells") {
    PixelMatrix src(2, 2);
    src(0, 0) = 0;
    src(0, 1) = 100;
    src(1, 0) = 50;
    src(1, 1) = 150;
    const Eigen::MatrixXd out = fp::rescale_bilinear(src, 4);
    CHECK(out(0, 0) == doctest::Approx(0.0));    // clamped corner
    CHECK(out(0, 3) == doctest::Approx(100.0));
    CHECK(out(3, 0) == doctest::Approx(50.0));
    CHECK(out(3, 3) == doctest::Approx(150.0));
    // interior: source coordinate (0.25, 0.25)
    CHECK(out(1, 1) == doctest::Approx(0.75 * 25.0 + 0.25 * 75.0));
}

TEST_CASE("video_fingerprint matches an independent pipeline reimplementation") {
    fp::VideoFingerprintParams p;
    p.k_side = 16;
    p.n_pairs = 96;
    p.m_pixels = 32;
    p.seed = 123;
    for (std::uint64_t fseed : {2ULL, 3ULL, 4ULL, 5ULL, 6ULL}) {
        Frame frame;
        frame.pixels = random_pixels(37, 61, fseed);
        frame.timestamp_ms = 17;
        const fp::VideoFingerprint got = fp::video_fingerprint(frame, p);
        CHECK(got.width_bits == 128);
        CHECK(got.timestamp_ms == 17);
        CHECK(got.bits == ref_fingerprint(frame.pixels, p));
    }
}

TEST_CASE("video_fingerprint: deterministic in frame and params, moved by the seed") {
    Frame frame;
    frame.pixels = random_pixels(48, 64, 9);
    fp::VideoFingerprintParams p;
    p.k_side = 16;
    p.n_pairs = 96;
    p.m_pixels = 32;
    p.seed = 1;
    const auto a = fp::video_fingerprint(frame, p);
    CHECK(a.bits == fp::video_fingerprint(frame, p).bits);
    p.seed = 2;
    CHECK(a.bits != fp::video_fingerprint(frame, p).bits);
}

TEST_CASE("video_fingerprint: uniform frame has all pair bits zero") {
    Frame frame;
    frame.pixels.resize(10, 10);
    frame.pixels.setConstant(128);
    fp::VideoFingerprintParams p;
    p.k_side = 16;
    p.n_pairs = 120; // all block pairs, no pixel bits
    p.m_pixels = 0;
    p.seed = 4;
    const auto v = fp::video_fingerprint(frame, p);
    CHECK(std::all_of(v.bits.begin(), v.bits.end(), [](std::uint8_t b) { return b == 0; }));
}

TEST_CASE("video_fingerprint: default geometry costs 160 bytes") {
    Frame frame;
    frame.pixels = random_pixels(48, 64, 21);
    const auto v = fp::video_fingerprint(frame, fp::VideoFingerprintParams{});
    CHECK(v.width_bits == 1280);
    CHECK(v.bits.size() == 160);
}

TEST_CASE("video params validation") {
    fp::VideoFingerprintParams p;
    p.k_side = 5;
    CHECK_THROWS_AS(fp::validate(p), ConfigError);
    p.k_side = 0;
    CHECK_THROWS_AS(fp::validate(p), ConfigError);
    p = {};
    p.n_pairs = 0;
    CHECK_THROWS_AS(fp::validate(p), ConfigError);
    p = {};
    p.k_side = 8;
    p.n_pairs = 7; // only 6 distinct pairs of 4 blocks
    p.m_pixels = 1;
    CHECK_THROWS_AS(fp::validate(p), ConfigError);
    p = {};
    p.m_pixels = 255; // width not a whole byte count
    CHECK_THROWS_AS(fp::validate(p), ConfigError);
    Frame empty;
    CHECK_THROWS_AS(fp::video_fingerprint(empty, fp::VideoFingerprintParams{}), EmptyInput);
}

TEST_CASE("bit packing is MSB-first") {
    std::vector<std::uint8_t> bits(2, 0);
    fp::set_bit(bits, 0, true);
    CHECK(bits[0] == 0x80);
    fp::set_bit(bits, 7, true);
    CHECK(bits[0] == 0x81);
    fp::set_bit(bits, 8, true);
    CHECK(bits[1] == 0x80);
    CHECK(fp::get_bit(bits, 0));
    CHECK(!fp::get_bit(bits, 1));
    fp::set_bit(bits, 0, false);
    CHECK(bits[0] == 0x01);
}

TEST_CASE("hamming agrees with a bit-loop oracle and is a metric") {
    Xoshiro256ss rng(31);
    auto random_fp = [&](std::size_t width) {
        fp::VideoFingerprint v;
        v.width_bits = width;
        v.bits.resize(width / 8);
        for (auto& b : v.bits) b = static_cast<std::uint8_t>(rng.bounded(256));
        return v;
    };
    for (int it = 0; it < 20; ++it) {
        const auto a = random_fp(64), b = random_fp(64), c = random_fp(64);
        std::size_t expect = 0;
        for (std::size_t i = 0; i < 64; ++i)
            expect += fp::get_bit(a.bits, i) != fp::get_bit(b.bits, i);
        CHECK(fp::hamming(a, b) == expect);
        CHECK(fp::hamming(a, b) == fp::hamming(b, a));
        CHECK(fp::hamming(a, a) == 0);
        CHECK(fp::hamming(a, c) <= fp::hamming(a, b) + fp::hamming(b, c));
    }
    const auto a = random_fp(64);
    const auto wide = random_fp(128);
    CHECK_THROWS_AS(fp::hamming(a, wide), IncompatibleFingerprints);
    CHECK_THROWS_AS(fp::hamming_bytes(a.bits, wide.bits), IncompatibleFingerprints);
}

namespace {

std::vector<double> dft_mags(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<double> mags(n);
    for (std::size_t k = 0; k < n; ++k) {
        double re = 0, im = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ang = -2.0 * std::numbers::pi * double(k) * double(i) / double(n);
            re += x[i] * std::cos(ang);
            im += x[i] * std::sin(ang);
        }
        mags[k] = std::hypot(re, im);
    }
    return mags;
}

std::vector<double> hann_frame(const PcmAudio& a, std::size_t window, std::size_t base) {
    std::vector<double> buf(window);
    for (std::size_t i = 0; i < window; ++i)
        buf[i] = 0.5 *
                 (1.0 - std::cos(2.0 * std::numbers::pi * double(i) / double(window))) *
                 (double(a.samples[base + i]) / 32768.0);
    return buf;
}

} // namespace

TEST_CASE("spectrogram: frame count arithmetic and zero signal") {
    PcmAudio a;
    a.sample_rate = 8000;
    a.samples.assign(40, 0);
    const Eigen::MatrixXd g = fp::spectrogram(a, 16, 4);
    CHECK(g.rows() == 7); // (40 - 16) / 4 + 1
    CHECK(g.cols() == 8);
    CHECK(g.maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("spectrogram: pure 1 kHz tone at 8 kHz concentrates in bin 32") {
    PcmAudio a;
    a.sample_rate = 8000;
    a.samples.resize(1024);
    for (std::size_t k = 0; k < a.samples.size(); ++k)
        a.samples[k] = static_cast<std::int16_t>(
            std::llround(20000.0 * std::sin(2.0 * std::numbers::pi * 1000.0 * double(k) / 8000.0)));
    const Eigen::MatrixXd g = fp::spectrogram(a, 256, 256);
    REQUIRE(g.rows() == 4);
    for (Eigen::Index t = 0; t < g.rows(); ++t) {
        Eigen::Index argmax = 0;
        g.row(t).maxCoeff(&argmax);
        CHECK(argmax == 32); // 1000 / 8000 * 256
    }
}

TEST_CASE("spectrogram magnitudes match a naive DFT oracle") {
    Xoshiro256ss rng(77);
    PcmAudio a;
    a.sample_rate = 8000;
    a.samples.resize(128);
    for (auto& s : a.samples) s = static_cast<std::int16_t>(static_cast<int>(rng.bounded(65536)) - 32768);

    const std::size_t window = 32, hop = 16;
    const Eigen::MatrixXd g = fp::spectrogram(a, window, hop);
    REQUIRE(g.rows() == 7);
    REQUIRE(g.cols() == 16);
    for (Eigen::Index t = 0; t < g.rows(); ++t) {
        const auto mags = dft_mags(hann_frame(a, window, std::size_t(t) * hop));
        for (Eigen::Index f = 0; f < g.cols(); ++f)
            CHECK(g(t, f) == doctest::Approx(mags[std::size_t(f)]).epsilon(1e-9));
    }
}

TEST_CASE("spectrogram: per-frame energy obeys the transform identity") {
    Xoshiro256ss rng(78);
    PcmAudio a;
    a.sample_rate = 8000;
    a.samples.resize(96);
    for (auto& s : a.samples) s = static_cast<std::int16_t>(static_cast<int>(rng.bounded(65536)) - 32768);

    const std::size_t window = 32, hop = 32;
    const Eigen::MatrixXd g = fp::spectrogram(a, window, hop);
    for (Eigen::Index t = 0; t < g.rows(); ++t) {
        const auto buf = hann_frame(a, window, std::size_t(t) * hop);
        double time_energy = 0;
        for (double v : buf) time_energy += v * v;
        // the grid stops below the Nyquist bin; take that one bin from the oracle
        const double nyq = dft_mags(buf)[window / 2];
        double spectral = g(t, 0) * g(t, 0) + nyq * nyq;
        for (Eigen::Index f = 1; f < g.cols(); ++f) spectral += 2.0 * g(t, f) * g(t, f);
        spectral /= double(window);
        CHECK(spectral == doctest::Approx(time_energy).epsilon(1e-6));
    }
}

TEST_CASE("spectrogram: input shorter than one window is empty input") {
    PcmAudio a;
    a.sample_rate = 8000;
    a.samples.assign(15, 100);
    CHECK_THROWS_AS(fp::spectrogram(a, 16, 8), EmptyInput);
}

namespace {

Eigen::MatrixXd column_grid(const std::vector<double>& over_t) {
    Eigen::MatrixXd g(Eigen::Index(over_t.size()), 1);
    for (std::size_t i = 0; i < over_t.size(); ++i) g(Eigen::Index(i), 0) = over_t[i];
    return g;
}

} // namespace

TEST_CASE("peak_pick: hand-traced ridge and plateau cases") {
    // interior plateau cell has no strictly smaller neighbour, ends survive
    auto peaks = fp::peak_pick(column_grid({0, 5, 5, 5, 0}), 1, 1, 0.0);
    REQUIRE(peaks.size() == 2);
    CHECK(peaks[0].t == 1);
    CHECK(peaks[1].t == 3);

    // two-cell tie: lexicographically earlier one survives suppression
    peaks = fp::peak_pick(column_grid({0, 5, 5, 0}), 1, 1, 0.0);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].t == 1);

    // constant grid: no strict maxima anywhere
    Eigen::MatrixXd flat(4, 6);
    flat.setConstant(3.0);
    CHECK(fp::peak_pick(flat, 1, 1, 0.0).empty());

    // lone spike, and the floor silencing it
    peaks = fp::peak_pick(column_grid({0, 0, 9, 0, 0}), 1, 1, 0.0);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].t == 2);
    CHECK(fp::peak_pick(column_grid({0, 0, 9, 0, 0}), 1, 1, 10.0).empty());
}

TEST_CASE("peak_pick: 2-D separation and suppression rectangles") {
    Eigen::MatrixXd g(5, 9);
    g.setZero();
    g(1, 1) = 4.0;
    g(1, 7) = 4.0; // beyond nms_df = 3 of the first: both survive
    g(3, 4) = 2.0;
    const auto peaks = fp::peak_pick(g, 1, 3, 0.0);
    REQUIRE(peaks.size() == 3);
    CHECK(peaks[0].t == 1);
    CHECK(peaks[0].f == 1);
    CHECK(peaks[1].t == 1);
    CHECK(peaks[1].f == 7);
    CHECK(peaks[2].t == 3);
    CHECK(peaks[2].f == 4);

    // pull the twins inside one rectangle: the earlier column wins
    Eigen::MatrixXd h(5, 9);
    h.setZero();
    h(1, 1) = 4.0;
    h(1, 3) = 4.0;
    const auto tied = fp::peak_pick(h, 1, 3, 0.0);
    REQUIRE(tied.size() == 1);
    CHECK(tied[0].f == 1);
}

TEST_CASE("pair_peaks: fanout and offset window on three aligned peaks") {
    const std::vector<fp::SpectrogramPeak> peaks = {{0, 100}, {1, 100}, {2, 100}};
    auto units = fp::pair_peaks(peaks, 2, 0, 2, 10.0, 5);
    REQUIRE(units.size() == 3); // (0,1), (0,2), (1,2)
    CHECK(units[0].key == fp::pack_key(100, 100, 1));
    CHECK(units[1].key == fp::pack_key(100, 100, 2));
    CHECK(units[2].key == fp::pack_key(100, 100, 1));
    CHECK(units[0].timestamp_ms == 0);
    CHECK(units[2].timestamp_ms == 10);
    CHECK(units[0].title_id == 5);

    units = fp::pair_peaks(peaks, 1, 0, 2, 10.0, 5);
    REQUIRE(units.size() == 2); // (0,1), (1,2)
    CHECK(units[0].key == fp::pack_key(100, 100, 1));
    CHECK(units[1].key == fp::pack_key(100, 100, 1));
}

TEST_CASE("pair_peaks: offsets at or below dt_min are skipped, not terminal") {
    const std::vector<fp::SpectrogramPeak> peaks = {{0, 10}, {0, 20}, {5, 30}};
    const auto units = fp::pair_peaks(peaks, 1, 1, 10, 64.0, 0);
    REQUIRE(units.size() == 2); // dt = 0 continues past, dt = 5 pairs
    CHECK(units[0].key == fp::pack_key(10, 30, 5));
    CHECK(units[1].key == fp::pack_key(20, 30, 5));
    CHECK(units[0].timestamp_ms == 0);

    // past dt_max the scan stops: nothing pairs across a 20-frame gap, and
    // the one in-window pair behind the gap still comes through
    const std::vector<fp::SpectrogramPeak> far = {{0, 10}, {20, 30}, {22, 40}};
    const auto far_units = fp::pair_peaks(far, 3, 1, 10, 64.0, 0);
    REQUIRE(far_units.size() == 1);
    CHECK(far_units[0].key == fp::pack_key(30, 40, 2));
}

TEST_CASE("pack_key packs F1:10 F2:10 dt:12") {
    CHECK(fp::pack_key(1, 2, 3) == ((1u << 22) | (2u << 12) | 3u));
    CHECK(fp::pack_key(0, 0, 0) == 0);
    CHECK(fp::pack_key(1023, 1023, 4095) == 0xFFFFFFFFu);
}

TEST_CASE("segment_audio: fixed-size groups, remainder dropped") {
    std::vector<fp::AudioHashUnit> units(10);
    for (std::size_t i = 0; i < 10; ++i) {
        units[i].key = static_cast<std::uint32_t>(i);
        units[i].timestamp_ms = std::int64_t(i) * 100;
    }
    const auto segs = fp::segment_audio(units, 3);
    REQUIRE(segs.size() == 3);
    for (std::size_t s = 0; s < 3; ++s) {
        CHECK(segs[s].segment_id == s);
        REQUIRE(segs[s].units.size() == 3);
        CHECK(segs[s].units[0].key == s * 3);
        CHECK(segs[s].t_begin_ms == std::int64_t(s) * 300);
        CHECK(segs[s].t_end_ms == std::int64_t(s) * 300 + 200);
    }
    CHECK(fp::segment_audio(std::vector<fp::AudioHashUnit>(2), 3).empty());
}

namespace {

fp::AudioSegment seg_of(const std::vector<std::uint32_t>& keys) {
    fp::AudioSegment s;
    for (std::uint32_t k : keys) {
        fp::AudioHashUnit u;
        u.key = k;
        s.units.push_back(u);
    }
    return s;
}

} // namespace

TEST_CASE("segment_distance: multiset overlap cases") {
    CHECK(fp::segment_distance(seg_of({1, 2, 3, 4}), seg_of({1, 2, 3, 4})) == doctest::Approx(0.0));
    CHECK(fp::segment_distance(seg_of({1, 2, 3, 4}), seg_of({5, 6, 7, 8})) == doctest::Approx(1.0));
    CHECK(fp::segment_distance(seg_of({1, 2, 3, 4}), seg_of({4, 5, 6, 7})) == doctest::Approx(0.75));
    // duplicates count with multiplicity
    CHECK(fp::segment_distance(seg_of({1, 1, 2, 8}), seg_of({1, 1, 1, 3})) == doctest::Approx(0.5));
    CHECK(fp::segment_distance(seg_of({7, 7}), seg_of({7, 9})) == doctest::Approx(0.5));
    CHECK_THROWS_AS(fp::segment_distance(seg_of({1}), seg_of({1, 2})), IncompatibleFingerprints);
}

TEST_CASE("segment_distance: symmetric and triangular on random segments") {
    Xoshiro256ss rng(55);
    auto random_seg = [&] {
        std::vector<std::uint32_t> keys(8);
        for (auto& k : keys) k = static_cast<std::uint32_t>(rng.bounded(12)); // many collisions
        return seg_of(keys);
    };
    for (int it = 0; it < 200; ++it) {
        const auto a = random_seg(), b = random_seg(), c = random_seg();
        const double ab = fp::segment_distance(a, b);
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
        CHECK(ab == doctest::Approx(fp::segment_distance(b, a)));
        CHECK(fp::segment_distance(a, a) == doctest::Approx(0.0));
        CHECK(fp::segment_distance(a, c) <=
              ab + fp::segment_distance(b, c) + 1e-12);
    }
}

TEST_CASE("audio params validation") {
    fp::AudioFingerprintParams p;
    CHECK_NOTHROW(fp::validate(p));
    p.window = 3000;
    CHECK_THROWS_AS(fp::validate(p), ConfigError); // not a power of two
    p.window = 4096;
    CHECK_THROWS_AS(fp::validate(p), ConfigError); // bin field overflow
    p = {};
    p.hop = 0;
    CHECK_THROWS_AS(fp::validate(p), ConfigError);
    p = {};
    p.hop = p.window + 1;
    CHECK_THROWS_AS(fp::validate(p), ConfigError);
    p = {};
    p.nms_dt = 0;
    CHECK_THROWS_AS(fp::validate(p), ConfigError);
    p = {};
    p.peak_floor = -1.0;
    CHECK_THROWS_AS(fp::validate(p), ConfigError);
    p = {};
    p.fanout = 0;
    CHECK_THROWS_AS(fp::validate(p), ConfigError);
    p = {};
    p.dt_max = 4096;
    CHECK_THROWS_AS(fp::validate(p), ConfigError);
    p = {};
    p.dt_min = p.dt_max;
    CHECK_THROWS_AS(fp::validate(p), ConfigError);
    p = {};
    p.units_per_segment = 0;
    CHECK_THROWS_AS(fp::validate(p), ConfigError);
}

TEST_CASE("audio_fingerprint: end-to-end shape and determinism") {
    ingest::SyntheticMediaSpec spec;
    spec.audio_seconds = 8.0;
    spec.audio_rate = 8000;
    spec.n_scenes = 4;
    spec.tones_per_scene = 3;
    spec.seed = 2;
    const PcmAudio a = ingest::synth_audio(spec);

    fp::AudioFingerprintParams p;
    p.window = 512;
    p.hop = 256;
    p.units_per_segment = 8;
    const auto segs = fp::audio_fingerprint(a, p, 3);
    REQUIRE(!segs.empty());
    for (std::size_t s = 0; s < segs.size(); ++s) {
        CHECK(segs[s].units.size() == 8);
        CHECK(segs[s].segment_id == s);
        CHECK(segs[s].t_begin_ms <= segs[s].t_end_ms);
        for (const auto& u : segs[s].units) CHECK(u.title_id == 3);
    }
    const auto again = fp::audio_fingerprint(a, p, 3);
    REQUIRE(again.size() == segs.size());
    for (std::size_t s = 0; s < segs.size(); ++s)
        CHECK(fp::segment_distance(segs[s], again[s]) == doctest::Approx(0.0));
}
