#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "javf/allocator.hpp"
#include "javf/audio_fingerprint.hpp"
#include "javf/coverage.hpp"
#include "javf/retrieval.hpp"
#include "javf/video_fingerprint.hpp"

namespace javf::io {

// Fingerprint container: magic "JAVF", version u16, modality u8, record
// width u16 (bytes), record count u64, then packed records; little-endian.
// Video records are the packed bit strings; audio records are the
// units-per-segment hash keys as u32 each. Record ids are ordinal, and unit
// timestamps/titles are not stored (the record width is exactly the byte
// cost each record is charged at), so loads reconstruct them as zeros.
inline constexpr std::uint16_t kJavfVersion = 1;

void write_javf_video(const std::filesystem::path& path,
                      const std::vector<fp::VideoFingerprint>& records);
std::vector<fp::VideoFingerprint> read_javf_video(const std::filesystem::path& path);

void write_javf_audio(const std::filesystem::path& path,
                      const std::vector<fp::AudioSegment>& records);
std::vector<fp::AudioSegment> read_javf_audio(const std::filesystem::path& path);

// Database container: 64-byte header (magic "JAVD", version, tolerance,
// thresholds, counts, costs, byte size), then exactly byte_size bytes of
// fingerprint payload (video then audio records), then variable-size
// metadata: representative corpus indices, cover sets, and the audio hash
// index with sorted keys. Little-endian throughout.
inline constexpr std::uint16_t kJavdVersion = 1;
inline constexpr std::size_t kJavdHeaderBytes = 64;

void write_javd(const std::filesystem::path& path, const retr::RepresentativeDatabase& db);
retr::RepresentativeDatabase read_javd(const std::filesystem::path& path);

// Coverage curve CSV: one comment line `# n=.. r=.. K=.. mode=..` holding the
// parameters, a `i,f` header, then integer rows — lossless round-trip.
void write_curve_csv(const std::filesystem::path& path, const cover::CoverageCurve& curve);
cover::CoverageCurve read_curve_csv(const std::filesystem::path& path);

void write_series_csv(const std::filesystem::path& path,
                      const std::vector<alloc::SeriesRow>& rows);
std::vector<alloc::SeriesRow> read_series_csv(const std::filesystem::path& path);

void write_query_log_csv(const std::filesystem::path& path,
                         const std::vector<retr::QueryLogRow>& rows);

// All CSV writers stage to <path>.tmp and rename, and validate their schema
// (column order, required monotonicity) before the file appears.

// Same staged rename for free-form text outputs.
void write_text(const std::filesystem::path& path, const std::string& text);

std::string format_double(double v); // shortest round-trippable decimal form

} // namespace javf::io
