#include "javf/video_fingerprint.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "javf/errors.hpp"
#include "javf/rng.hpp"

namespace javf::fp {

void validate(const VideoFingerprintParams& params) {
    if (params.k_side < 4 || params.k_side % 4 != 0)
        throw ConfigError("fingerprint side must be a positive multiple of 4");
    const std::size_t n_blocks = (params.k_side / 4) * (params.k_side / 4);
    const std::size_t total_pairs = n_blocks * (n_blocks - 1) / 2;
    if (params.n_pairs == 0 || params.n_pairs > total_pairs)
        throw ConfigError("pair count must lie in [1, all distinct block pairs]");
    if ((params.n_pairs + params.m_pixels) % 8 != 0)
        throw ConfigError("fingerprint width must be a whole number of bytes");
}

Eigen::MatrixXd rescale_bilinear(const PixelMatrix& src, std::size_t side) {
    const auto h = src.rows(), w = src.cols();
    Eigen::MatrixXd out(side, side);
    for (std::size_t r = 0; r < side; ++r) {
        // pixel-center mapping: destination center lands on source coordinates
        double y = (static_cast<double>(r) + 0.5) * static_cast<double>(h) /
                       static_cast<double>(side) -
                   0.5;
        y = std::clamp(y, 0.0, static_cast<double>(h - 1));
        const auto y0 = static_cast<Eigen::Index>(y);
        const auto y1 = std::min<Eigen::Index>(y0 + 1, h - 1);
        const double fy = y - static_cast<double>(y0);
        for (std::size_t c = 0; c < side; ++c) {
            double x = (static_cast<double>(c) + 0.5) * static_cast<double>(w) /
                           static_cast<double>(side) -
                       0.5;
            x = std::clamp(x, 0.0, static_cast<double>(w - 1));
            const auto x0 = static_cast<Eigen::Index>(x);
            const auto x1 = std::min<Eigen::Index>(x0 + 1, w - 1);
            const double fx = x - static_cast<double>(x0);
            const double top = (1.0 - fx) * src(y0, x0) + fx * src(y0, x1);
            const double bot = (1.0 - fx) * src(y1, x0) + fx * src(y1, x1);
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                (1.0 - fy) * top + fy * bot;
        }
    }
    return out;
}

namespace {

// Unordered block pairs enumerated lexicographically: index p maps to the
// p-th pair (a, b) with a < b.
std::pair<std::size_t, std::size_t> decode_pair(std::size_t p, std::size_t n_blocks) {
    std::size_t a = 0;
    while (p >= n_blocks - 1 - a) {
        p -= n_blocks - 1 - a;
        ++a;
    }
    return {a, a + 1 + p};
}

} // namespace

VideoFingerprint video_fingerprint(const Frame& frame, const VideoFingerprintParams& params) {
    validate(params);
    if (frame.pixels.size() == 0) throw EmptyInput("cannot fingerprint an empty frame");

    const std::size_t k = params.k_side;
    const Eigen::MatrixXd img = rescale_bilinear(frame.pixels, k);

    const std::size_t nb_side = k / 4;
    const std::size_t n_blocks = nb_side * nb_side;
    std::vector<double> block_mean(n_blocks);
    for (std::size_t br = 0; br < nb_side; ++br)
        for (std::size_t bc = 0; bc < nb_side; ++bc)
            block_mean[br * nb_side + bc] =
                img.block(static_cast<Eigen::Index>(br * 4), static_cast<Eigen::Index>(bc * 4), 4, 4)
                    .mean();

    // One generator per call, seeded from params alone: every frame of a
    // database sees the same pair and pixel draws, which is what makes the
    // bit positions comparable across frames.
    Xoshiro256ss rng(params.seed);
    const std::size_t width = params.n_pairs + params.m_pixels;
    VideoFingerprint out;
    out.width_bits = width;
    out.frame_id = 0;
    out.timestamp_ms = frame.timestamp_ms;
    out.bits.assign(width / 8, 0);

    const std::size_t total_pairs = n_blocks * (n_blocks - 1) / 2;
    std::vector<std::size_t> deck(total_pairs);
    for (std::size_t i = 0; i < total_pairs; ++i) deck[i] = i;
    for (std::size_t t = 0; t < params.n_pairs; ++t) {
        const std::size_t j = t + static_cast<std::size_t>(rng.bounded(total_pairs - t));
        std::swap(deck[t], deck[j]);
        const auto [a, b] = decode_pair(deck[t], n_blocks);
        set_bit(out.bits, t, block_mean[a] > block_mean[b]);
    }

    for (std::size_t t = 0; t < params.m_pixels; ++t) {
        const std::size_t idx = static_cast<std::size_t>(rng.bounded(k * k));
        const auto threshold = static_cast<double>(rng.bounded(256));
        const double v = img(static_cast<Eigen::Index>(idx / k), static_cast<Eigen::Index>(idx % k));
        set_bit(out.bits, params.n_pairs + t, v > threshold);
    }
    return out;
}

std::size_t hamming_bytes(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
    if (a.size() != b.size())
        throw IncompatibleFingerprints("fingerprint widths differ");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(a[i] ^ b[i])));
    return d;
}

std::size_t hamming(const VideoFingerprint& a, const VideoFingerprint& b) {
    if (a.width_bits != b.width_bits)
        throw IncompatibleFingerprints("fingerprint widths differ");
    return hamming_bytes(a.bits, b.bits);
}

} // namespace javf::fp
