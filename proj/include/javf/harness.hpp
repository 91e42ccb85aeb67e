#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "javf/allocator.hpp"
#include "javf/audio_fingerprint.hpp"
#include "javf/config.hpp"
#include "javf/coverage.hpp"
#include "javf/ingest.hpp"
#include "javf/video_fingerprint.hpp"

namespace javf::harness {

struct DatasetConfig {
    enum class Type { files, synthetic_media, synthetic_points } type = Type::synthetic_media;
    // files
    std::filesystem::path wav;
    std::filesystem::path frames_dir;
    std::int64_t frame_interval_ms = 40;
    // synthetic_media
    ingest::SyntheticMediaSpec media;
    // synthetic_points
    ingest::SyntheticCloudSpec video_cloud;
    ingest::SyntheticSegmentCloudSpec audio_cloud;
};

struct CoverageConfig {
    double r_video = 128.0;
    double r_audio = 0.5;
    std::size_t k_tolerance = 8;
    cover::CoverMode mode = cover::CoverMode::strict;
};

struct AllocateConfig {
    double alpha = 0.5;
    std::vector<alloc::AllocMethod> methods = {
        alloc::AllocMethod::arbitrary, alloc::AllocMethod::audio_first, alloc::AllocMethod::greedy,
        alloc::AllocMethod::dp, alloc::AllocMethod::lagrangian};
    std::size_t budget_count = 40;
};

struct SweepConfig {
    std::vector<double> alphas;
    std::vector<double> threshold_scales;
};

struct EvaluateConfig {
    bool nearest = true;
    bool probe_all = true;
    std::vector<double> summary_levels = {0.70, 0.75, 0.80, 0.85, 0.90, 0.95};
};

struct ExperimentConfig {
    std::uint64_t seed = 0;
    DatasetConfig dataset;
    fp::VideoFingerprintParams video_fp;
    fp::AudioFingerprintParams audio_fp;
    CoverageConfig coverage;
    AllocateConfig allocate;
    SweepConfig sweep;
    EvaluateConfig evaluate;
    std::filesystem::path out_dir = "out";
};

ExperimentConfig load_experiment_config(const std::filesystem::path& path,
                                        std::optional<std::uint64_t> seed_override,
                                        std::optional<std::filesystem::path> out_override);

// Stage outputs, all under out_dir:
//   fingerprint: video.javf, audio.javf
//   curves:      curve_video.csv, curve_audio.csv
//   allocate:    series_<method>.csv, trace_greedy.txt, lambda_star.csv
//   sweep:       sweep_alpha<v>_<method>.csv, sweep_threshold<s>_<method>.csv
//   evaluate:    accuracy.csv, query_log_<mode>.csv, summary_table.csv
void cmd_fingerprint(const ExperimentConfig& cfg);
void cmd_curves(const ExperimentConfig& cfg);
void cmd_allocate(const ExperimentConfig& cfg);
void cmd_sweep(const ExperimentConfig& cfg);
void cmd_evaluate(const ExperimentConfig& cfg);
void cmd_report(const ExperimentConfig& cfg);

// Byte budget at which a series first reaches the coverage level, by linear
// interpolation along the (budget, coverage) polyline; empty when the series
// never gets there.
std::optional<double> rate_at_coverage(const std::vector<alloc::SeriesRow>& series, double level);

} // namespace javf::harness
