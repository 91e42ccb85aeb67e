#include "javf/harness.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>

#include "javf/errors.hpp"
#include "javf/format.hpp"
#include "javf/retrieval.hpp"
#include "javf/rng.hpp"

namespace javf::harness {

namespace fs = std::filesystem;

namespace {

alloc::AllocMethod parse_method(const std::string& name) {
    if (name == "arbitrary") return alloc::AllocMethod::arbitrary;
    if (name == "audio_first") return alloc::AllocMethod::audio_first;
    if (name == "greedy") return alloc::AllocMethod::greedy;
    if (name == "dp") return alloc::AllocMethod::dp;
    if (name == "lagrangian") return alloc::AllocMethod::lagrangian;
    throw ConfigError("[allocate] methods: unknown method '" + name + "'");
}

void check_sections(const cfg::ConfigTree& tree) {
    static const std::vector<std::string> known = {"run",      "dataset", "fingerprint",
                                                   "audio",    "coverage", "allocate",
                                                   "sweep",    "evaluate", "output"};
    for (const auto& name : tree.section_names())
        if (std::find(known.begin(), known.end(), name) == known.end())
            throw ConfigError("unknown section [" + name + "]");
}

} // namespace

ExperimentConfig load_experiment_config(const std::filesystem::path& path,
                                        std::optional<std::uint64_t> seed_override,
                                        std::optional<std::filesystem::path> out_override) {
    const cfg::ConfigTree tree = cfg::parse_config_file(path);
    check_sections(tree);
    tree.reject_unknown("run", {"seed"});
    tree.reject_unknown("dataset",
                        {"type", "wav", "frames_dir", "frame_interval_ms", "n_frames",
                         "frame_width", "frame_height", "n_scenes", "pixel_noise",
                         "audio_seconds", "audio_rate", "tones_per_scene", "video_points",
                         "video_width_bits", "video_clusters", "video_spread", "audio_points",
                         "audio_units", "audio_key_space", "audio_clusters", "audio_spread"});
    tree.reject_unknown("fingerprint", {"k_side", "n_pairs", "m_pixels"});
    tree.reject_unknown("audio", {"window", "hop", "nms_dt", "nms_df", "peak_floor", "fanout",
                                  "dt_min", "dt_max", "units_per_segment"});
    tree.reject_unknown("coverage", {"r_video", "r_audio", "k_tolerance", "mode"});
    tree.reject_unknown("allocate", {"alpha", "methods", "budget_count"});
    tree.reject_unknown("sweep", {"alphas", "threshold_scales"});
    tree.reject_unknown("evaluate", {"nearest", "probe_all", "summary_levels"});
    tree.reject_unknown("output", {"dir"});

    ExperimentConfig out;
    out.seed = seed_override ? *seed_override : tree.get_u64("run", "seed", 0);

    DatasetConfig& ds = out.dataset;
    const std::string type = tree.get_string("dataset", "type", "synthetic_media");
    if (type == "files")
        ds.type = DatasetConfig::Type::files;
    else if (type == "synthetic_media")
        ds.type = DatasetConfig::Type::synthetic_media;
    else if (type == "synthetic_points")
        ds.type = DatasetConfig::Type::synthetic_points;
    else
        throw ConfigError("[dataset] type: unknown type '" + type + "'");

    ds.wav = tree.get_string("dataset", "wav", "");
    ds.frames_dir = tree.get_string("dataset", "frames_dir", "");
    ds.frame_interval_ms = tree.get_i64("dataset", "frame_interval_ms", ds.frame_interval_ms);
    if (ds.frame_interval_ms <= 0) throw ConfigError("[dataset] frame_interval_ms must be > 0");
    if (ds.type == DatasetConfig::Type::files &&
        (ds.wav.empty() || ds.frames_dir.empty()))
        throw ConfigError("[dataset] type \"files\" needs both wav and frames_dir");

    ingest::SyntheticMediaSpec& media = ds.media;
    media.n_frames = tree.get_u64("dataset", "n_frames", media.n_frames);
    media.frame_width = tree.get_u64("dataset", "frame_width", media.frame_width);
    media.frame_height = tree.get_u64("dataset", "frame_height", media.frame_height);
    media.n_scenes = tree.get_u64("dataset", "n_scenes", media.n_scenes);
    media.pixel_noise = static_cast<int>(tree.get_i64("dataset", "pixel_noise", media.pixel_noise));
    media.frame_interval_ms = ds.frame_interval_ms;
    media.audio_seconds = tree.get_double("dataset", "audio_seconds", media.audio_seconds);
    media.audio_rate =
        static_cast<std::uint32_t>(tree.get_u64("dataset", "audio_rate", media.audio_rate));
    media.tones_per_scene = tree.get_u64("dataset", "tones_per_scene", media.tones_per_scene);
    if (media.pixel_noise < 0) throw ConfigError("[dataset] pixel_noise must be >= 0");

    ingest::SyntheticCloudSpec& vc = ds.video_cloud;
    vc.n_points = tree.get_u64("dataset", "video_points", 200);
    vc.width_bits = tree.get_u64("dataset", "video_width_bits", vc.width_bits);
    vc.n_clusters = tree.get_u64("dataset", "video_clusters", vc.n_clusters);
    vc.spread = tree.get_double("dataset", "video_spread", vc.spread);
    if (vc.width_bits == 0 || vc.width_bits % 8 != 0)
        throw ConfigError("[dataset] video_width_bits must be a positive multiple of 8");

    ingest::SyntheticSegmentCloudSpec& ac = ds.audio_cloud;
    ac.n_points = tree.get_u64("dataset", "audio_points", 100);
    ac.units_per_segment = tree.get_u64("dataset", "audio_units", ac.units_per_segment);
    ac.key_space =
        static_cast<std::uint32_t>(tree.get_u64("dataset", "audio_key_space", ac.key_space));
    ac.n_clusters = tree.get_u64("dataset", "audio_clusters", ac.n_clusters);
    ac.spread = tree.get_double("dataset", "audio_spread", ac.spread);
    if (ac.units_per_segment == 0) throw ConfigError("[dataset] audio_units must be >= 1");

    fp::VideoFingerprintParams& vfp = out.video_fp;
    vfp.k_side = tree.get_u64("fingerprint", "k_side", vfp.k_side);
    vfp.n_pairs = tree.get_u64("fingerprint", "n_pairs", vfp.n_pairs);
    vfp.m_pixels = tree.get_u64("fingerprint", "m_pixels", vfp.m_pixels);
    fp::validate(vfp);

    fp::AudioFingerprintParams& afp = out.audio_fp;
    afp.window = tree.get_u64("audio", "window", afp.window);
    afp.hop = tree.get_u64("audio", "hop", afp.hop);
    afp.nms_dt = tree.get_u64("audio", "nms_dt", afp.nms_dt);
    afp.nms_df = tree.get_u64("audio", "nms_df", afp.nms_df);
    afp.peak_floor = tree.get_double("audio", "peak_floor", afp.peak_floor);
    afp.fanout = tree.get_u64("audio", "fanout", afp.fanout);
    afp.dt_min = tree.get_u64("audio", "dt_min", afp.dt_min);
    afp.dt_max = tree.get_u64("audio", "dt_max", afp.dt_max);
    afp.units_per_segment = tree.get_u64("audio", "units_per_segment", afp.units_per_segment);
    fp::validate(afp);

    CoverageConfig& cov = out.coverage;
    cov.r_video = tree.get_double("coverage", "r_video", cov.r_video);
    cov.r_audio = tree.get_double("coverage", "r_audio", cov.r_audio);
    cov.k_tolerance = tree.get_u64("coverage", "k_tolerance", cov.k_tolerance); // 0 = uncapped
    const std::string mode = tree.get_string("coverage", "mode", "strict");
    if (mode == "strict")
        cov.mode = cover::CoverMode::strict;
    else if (mode == "expanded")
        cov.mode = cover::CoverMode::expanded;
    else
        throw ConfigError("[coverage] mode: expected strict or expanded, got '" + mode + "'");
    if (cov.r_video < 0 || cov.r_audio < 0)
        throw ConfigError("[coverage] thresholds must be >= 0");

    AllocateConfig& al = out.allocate;
    al.alpha = tree.get_double("allocate", "alpha", al.alpha);
    if (al.alpha < 0 || al.alpha > 1) throw ConfigError("[allocate] alpha must be in [0, 1]");
    al.budget_count = tree.get_u64("allocate", "budget_count", al.budget_count);
    if (al.budget_count == 0) throw ConfigError("[allocate] budget_count must be >= 1");
    if (tree.has("allocate", "methods")) {
        al.methods.clear();
        for (const auto& name : tree.get_string_list("allocate", "methods", {})) {
            const alloc::AllocMethod m = parse_method(name);
            if (std::find(al.methods.begin(), al.methods.end(), m) != al.methods.end())
                throw ConfigError("[allocate] methods: '" + name + "' listed twice");
            al.methods.push_back(m);
        }
        if (al.methods.empty()) throw ConfigError("[allocate] methods must not be empty");
    }

    out.sweep.alphas = tree.get_double_list("sweep", "alphas", {});
    out.sweep.threshold_scales = tree.get_double_list("sweep", "threshold_scales", {});
    for (const double a : out.sweep.alphas)
        if (a < 0 || a > 1) throw ConfigError("[sweep] alphas must be in [0, 1]");
    for (const double s : out.sweep.threshold_scales)
        if (s < 0) throw ConfigError("[sweep] threshold_scales must be >= 0");

    EvaluateConfig& ev = out.evaluate;
    ev.nearest = tree.get_bool("evaluate", "nearest", ev.nearest);
    ev.probe_all = tree.get_bool("evaluate", "probe_all", ev.probe_all);
    ev.summary_levels = tree.get_double_list("evaluate", "summary_levels", ev.summary_levels);
    for (const double lv : ev.summary_levels)
        if (lv <= 0 || lv > 1) throw ConfigError("[evaluate] summary_levels must be in (0, 1]");

    out.out_dir = out_override ? *out_override : fs::path(tree.get_string("output", "dir", "out"));

    // One master seed drives every stage; stage seeds are fixed draws from it
    // so the corpus and the fingerprint geometry decorrelate.
    std::uint64_t sm = out.seed;
    const std::uint64_t dataset_seed = splitmix64_next(sm);
    out.video_fp.seed = splitmix64_next(sm);
    const std::uint64_t audio_cloud_seed = splitmix64_next(sm);
    ds.media.seed = dataset_seed;
    ds.video_cloud.seed = dataset_seed;
    ds.audio_cloud.seed = audio_cloud_seed;
    return out;
}

namespace {

struct Corpus {
    std::vector<fp::VideoFingerprint> video;
    std::vector<fp::AudioSegment> audio;
};

Corpus make_corpus(const ExperimentConfig& cfg) {
    Corpus corpus;
    switch (cfg.dataset.type) {
        case DatasetConfig::Type::synthetic_points: {
            const ingest::SyntheticCloud vc = ingest::synth_points(cfg.dataset.video_cloud);
            corpus.video.resize(vc.points.size());
            for (std::size_t i = 0; i < vc.points.size(); ++i) {
                corpus.video[i].bits = vc.points[i];
                corpus.video[i].width_bits = vc.width_bits;
                corpus.video[i].frame_id = static_cast<std::uint32_t>(i);
            }
            const ingest::SyntheticSegmentCloud ac =
                ingest::synth_segment_points(cfg.dataset.audio_cloud);
            corpus.audio.resize(ac.segments.size());
            for (std::size_t i = 0; i < ac.segments.size(); ++i) {
                corpus.audio[i].segment_id = static_cast<std::uint32_t>(i);
                for (const std::uint32_t key : ac.segments[i])
                    corpus.audio[i].units.push_back({key, 0, 0});
            }
            return corpus;
        }
        case DatasetConfig::Type::files: {
            const FrameSequence frames =
                ingest::read_frames(cfg.dataset.frames_dir, cfg.dataset.frame_interval_ms);
            for (const Frame& f : frames.frames)
                corpus.video.push_back(fp::video_fingerprint(f, cfg.video_fp));
            corpus.audio = fp::audio_fingerprint(ingest::read_wav(cfg.dataset.wav), cfg.audio_fp, 0);
            return corpus;
        }
        case DatasetConfig::Type::synthetic_media: {
            const FrameSequence frames = ingest::synth_frames(cfg.dataset.media);
            for (const Frame& f : frames.frames)
                corpus.video.push_back(fp::video_fingerprint(f, cfg.video_fp));
            corpus.audio =
                fp::audio_fingerprint(ingest::synth_audio(cfg.dataset.media), cfg.audio_fp, 0);
            return corpus;
        }
    }
    throw ConfigError("unhandled dataset type");
}

// Later stages reuse the fingerprint stage's outputs when they are present,
// so the pipeline can run stage by stage; otherwise they compute and persist
// them, so each subcommand also works standalone.
Corpus load_stage_corpus(const ExperimentConfig& cfg) {
    const fs::path video_path = cfg.out_dir / "video.javf";
    const fs::path audio_path = cfg.out_dir / "audio.javf";
    if (fs::exists(video_path) && fs::exists(audio_path))
        return {io::read_javf_video(video_path), io::read_javf_audio(audio_path)};
    Corpus corpus = make_corpus(cfg);
    fs::create_directories(cfg.out_dir);
    io::write_javf_video(video_path, corpus.video);
    io::write_javf_audio(audio_path, corpus.audio);
    return corpus;
}

cover::PointSet video_point_set(const std::vector<fp::VideoFingerprint>& corpus) {
    cover::PointSet ps;
    ps.n = corpus.size();
    ps.modality = cover::Modality::video;
    ps.distance = [&corpus](std::size_t i, std::size_t j) {
        return static_cast<double>(fp::hamming_bytes(corpus[i].bits, corpus[j].bits));
    };
    return ps;
}

cover::PointSet audio_point_set(const std::vector<fp::AudioSegment>& corpus) {
    cover::PointSet ps;
    ps.n = corpus.size();
    ps.modality = cover::Modality::audio;
    ps.distance = [&corpus](std::size_t i, std::size_t j) {
        return fp::segment_distance(corpus[i], corpus[j]);
    };
    return ps;
}

std::uint64_t video_cost_bytes(const ExperimentConfig& cfg) {
    if (cfg.dataset.type == DatasetConfig::Type::synthetic_points)
        return cfg.dataset.video_cloud.width_bits / 8;
    return (cfg.video_fp.n_pairs + cfg.video_fp.m_pixels) / 8;
}

std::uint64_t audio_cost_bytes(const ExperimentConfig& cfg) {
    if (cfg.dataset.type == DatasetConfig::Type::synthetic_points)
        return cfg.dataset.audio_cloud.units_per_segment * 4;
    return cfg.audio_fp.units_per_segment * 4;
}

std::size_t cap_of(const ExperimentConfig& cfg) {
    return cfg.coverage.k_tolerance == 0 ? cover::kNoCap : cfg.coverage.k_tolerance;
}

struct StageCurves {
    cover::CoverageCurve video;
    cover::CoverageCurve audio;
};

StageCurves compute_curves(const Corpus& corpus, const ExperimentConfig& cfg, double r_video,
                           double r_audio, cover::CoverMode mode) {
    const cover::PointSet vps = video_point_set(corpus.video);
    const cover::PointSet aps = audio_point_set(corpus.audio);
    return {cover::coverage_curve(vps, r_video, cap_of(cfg), vps.n, mode),
            cover::coverage_curve(aps, r_audio, cap_of(cfg), aps.n, mode)};
}

alloc::CurvePair normalized_pair(const StageCurves& curves) {
    return {cover::normalized(curves.video), cover::normalized(curves.audio)};
}

alloc::RateModel rate_model(const ExperimentConfig& cfg, const alloc::CurvePair& pair) {
    alloc::RateModel rm;
    rm.video_cost = video_cost_bytes(cfg);
    rm.audio_cost = audio_cost_bytes(cfg);
    rm.video_avail = pair.video.size() - 1;
    rm.audio_avail = pair.audio.size() - 1;
    rm.budget = rm.video_cost * rm.video_avail + rm.audio_cost * rm.audio_avail;
    return rm;
}

// A series per configured method over one budget grid, written as
// <prefix><method>.csv. Returns the rows keyed by method name.
std::map<std::string, std::vector<alloc::SeriesRow>> write_series_family(
    const ExperimentConfig& cfg, const alloc::CurvePair& pair, double alpha, double threshold,
    const std::string& prefix) {
    alloc::RateModel rm = rate_model(cfg, pair);
    const std::vector<std::uint64_t> budgets =
        alloc::budget_grid(rm.budget, cfg.allocate.budget_count);
    std::map<std::string, std::vector<alloc::SeriesRow>> family;
    for (const alloc::AllocMethod m : cfg.allocate.methods) {
        std::vector<alloc::SeriesRow> rows;
        if (m == alloc::AllocMethod::dp) {
            try {
                rows = alloc::rate_coverage_series(m, pair, rm, alpha, budgets, threshold);
            } catch (const UseLagrangianMode& e) {
                std::cerr << "note: " << e.what() << "; dp series computed in lagrangian mode\n";
                rows = alloc::rate_coverage_series(alloc::AllocMethod::lagrangian, pair, rm, alpha,
                                                   budgets, threshold);
                for (auto& r : rows) r.method = "dp"; // stands in for the exact answer
            }
        } else {
            rows = alloc::rate_coverage_series(m, pair, rm, alpha, budgets, threshold);
        }
        io::write_series_csv(cfg.out_dir / (prefix + alloc::method_name(m) + ".csv"), rows);
        family[alloc::method_name(m)] = std::move(rows);
    }
    return family;
}

std::string mode_name(retr::QueryMode mode) {
    return mode == retr::QueryMode::nearest ? "nearest" : "probe_all";
}

} // namespace

void cmd_fingerprint(const ExperimentConfig& cfg) {
    const Corpus corpus = make_corpus(cfg);
    fs::create_directories(cfg.out_dir);
    io::write_javf_video(cfg.out_dir / "video.javf", corpus.video);
    io::write_javf_audio(cfg.out_dir / "audio.javf", corpus.audio);
    std::cout << "video.javf: " << corpus.video.size() << " records x " << video_cost_bytes(cfg)
              << " bytes\n"
              << "audio.javf: " << corpus.audio.size() << " records x " << audio_cost_bytes(cfg)
              << " bytes\n";
}

void cmd_curves(const ExperimentConfig& cfg) {
    const Corpus corpus = load_stage_corpus(cfg);
    const StageCurves curves = compute_curves(corpus, cfg, cfg.coverage.r_video,
                                              cfg.coverage.r_audio, cfg.coverage.mode);
    io::write_curve_csv(cfg.out_dir / "curve_video.csv", curves.video);
    io::write_curve_csv(cfg.out_dir / "curve_audio.csv", curves.audio);
    std::cout << "curve_video.csv: n=" << curves.video.n
              << " full coverage at " << curves.video.f.size() - 1 << " picks or fewer\n"
              << "curve_audio.csv: n=" << curves.audio.n << "\n";
}

namespace {

StageCurves load_stage_curves(const ExperimentConfig& cfg) {
    const fs::path video_path = cfg.out_dir / "curve_video.csv";
    const fs::path audio_path = cfg.out_dir / "curve_audio.csv";
    if (fs::exists(video_path) && fs::exists(audio_path))
        return {io::read_curve_csv(video_path), io::read_curve_csv(audio_path)};
    const Corpus corpus = load_stage_corpus(cfg);
    const StageCurves curves = compute_curves(corpus, cfg, cfg.coverage.r_video,
                                              cfg.coverage.r_audio, cfg.coverage.mode);
    io::write_curve_csv(video_path, curves.video);
    io::write_curve_csv(audio_path, curves.audio);
    return curves;
}

} // namespace

void cmd_allocate(const ExperimentConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    const StageCurves curves = load_stage_curves(cfg);
    const alloc::CurvePair pair = normalized_pair(curves);
    write_series_family(cfg, pair, cfg.allocate.alpha, cfg.coverage.r_video, "series_");

    const alloc::RateModel rm = rate_model(cfg, pair);
    const std::vector<std::uint64_t> budgets =
        alloc::budget_grid(rm.budget, cfg.allocate.budget_count);

    const bool has_greedy = std::find(cfg.allocate.methods.begin(), cfg.allocate.methods.end(),
                                      alloc::AllocMethod::greedy) != cfg.allocate.methods.end();
    if (has_greedy) {
        // Trace of the full-budget greedy run, one picked modality per line.
        std::string text;
        for (const char c : alloc::greedy_allocate(pair, rm, cfg.allocate.alpha).trace) {
            text += c;
            text += '\n';
        }
        io::write_text(cfg.out_dir / "trace_greedy.txt", text);
    }
    const bool has_lagrangian =
        std::find(cfg.allocate.methods.begin(), cfg.allocate.methods.end(),
                  alloc::AllocMethod::lagrangian) != cfg.allocate.methods.end();
    if (has_lagrangian) {
        std::string text = "budget_bytes,lambda_star\n";
        for (const std::uint64_t b : budgets) {
            alloc::RateModel at = rm;
            at.budget = b;
            const auto res = alloc::lagrangian_allocate(pair, at, cfg.allocate.alpha);
            text += std::to_string(b) + "," +
                    (res.lambda_star ? io::format_double(*res.lambda_star) : "") + "\n";
        }
        io::write_text(cfg.out_dir / "lambda_star.csv", text);
    }
    std::cout << "series written for " << cfg.allocate.methods.size() << " methods over "
              << budgets.size() << " budgets (total " << rm.budget << " bytes)\n";
}

void cmd_sweep(const ExperimentConfig& cfg) {
    if (cfg.sweep.alphas.empty() && cfg.sweep.threshold_scales.empty())
        throw ConfigError("[sweep] needs alphas and/or threshold_scales");
    fs::create_directories(cfg.out_dir);

    if (!cfg.sweep.alphas.empty()) {
        const StageCurves curves = load_stage_curves(cfg);
        const alloc::CurvePair pair = normalized_pair(curves);
        for (const double a : cfg.sweep.alphas)
            write_series_family(cfg, pair, a, cfg.coverage.r_video,
                                "sweep_alpha" + io::format_double(a) + "_");
    }
    if (!cfg.sweep.threshold_scales.empty()) {
        const Corpus corpus = load_stage_corpus(cfg);
        for (const double s : cfg.sweep.threshold_scales) {
            const StageCurves curves =
                compute_curves(corpus, cfg, cfg.coverage.r_video * s, cfg.coverage.r_audio * s,
                               cfg.coverage.mode);
            write_series_family(cfg, normalized_pair(curves), cfg.allocate.alpha,
                                cfg.coverage.r_video * s,
                                "sweep_threshold" + io::format_double(s) + "_");
        }
    }
    std::cout << "sweep series written for " << cfg.sweep.alphas.size() << " alphas and "
              << cfg.sweep.threshold_scales.size() << " threshold scales\n";
}

void cmd_evaluate(const ExperimentConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    const Corpus corpus = load_stage_corpus(cfg);

    // Retrieval correctness is defined against radius-r cover sets, so this
    // stage always marks strictly, whatever the curve stage was told.
    const std::size_t cap = cap_of(cfg);
    const cover::PointSet vps = video_point_set(corpus.video);
    const cover::PointSet aps = audio_point_set(corpus.audio);
    const cover::GreedyCoverResult video_run = cover::greedy_cover(
        vps, cover::build_neighborhoods(vps, cfg.coverage.r_video), vps.n, cap,
        cover::CoverMode::strict);
    const cover::GreedyCoverResult audio_run = cover::greedy_cover(
        aps, cover::build_neighborhoods(aps, cfg.coverage.r_audio), aps.n, cap,
        cover::CoverMode::strict);
    if (cfg.evaluate.probe_all && cfg.coverage.r_audio >= 1.0)
        std::cerr << "note: r_audio >= 1 admits representatives the key index cannot reach; "
                     "probe_all accuracy may fall below coverage\n";

    const StageCurves curves{video_run.curve, audio_run.curve};
    const alloc::CurvePair pair = normalized_pair(curves);
    alloc::RateModel rm = rate_model(cfg, pair);
    const std::vector<std::uint64_t> budgets =
        alloc::budget_grid(rm.budget, cfg.allocate.budget_count);

    std::vector<alloc::SeriesRow> chosen_rows;
    std::string db_method = "dp";
    try {
        chosen_rows = alloc::rate_coverage_series(alloc::AllocMethod::dp, pair, rm,
                                                  cfg.allocate.alpha, budgets,
                                                  cfg.coverage.r_video);
    } catch (const UseLagrangianMode& e) {
        std::cerr << "note: " << e.what() << "; evaluating the lagrangian allocation instead\n";
        db_method = "lagrangian";
        chosen_rows = alloc::rate_coverage_series(alloc::AllocMethod::lagrangian, pair, rm,
                                                  cfg.allocate.alpha, budgets,
                                                  cfg.coverage.r_video);
    }

    std::vector<retr::QueryMode> modes;
    if (cfg.evaluate.nearest) modes.push_back(retr::QueryMode::nearest);
    if (cfg.evaluate.probe_all) modes.push_back(retr::QueryMode::probe_all);

    std::string accuracy =
        "budget_bytes,n_video,n_audio,fused_coverage,mode,video_accuracy,audio_accuracy,"
        "fused_accuracy,video_coverage,audio_coverage\n";
    for (const alloc::SeriesRow& row : chosen_rows) {
        alloc::AllocationResult chosen;
        chosen.n_video = row.n_video;
        chosen.n_audio = row.n_audio;
        chosen.rate = rm.video_cost * row.n_video + rm.audio_cost * row.n_audio;
        chosen.fused_coverage = row.coverage;
        chosen.method = db_method;
        alloc::RateModel at = rm;
        at.budget = row.budget;
        const retr::RepresentativeDatabase db =
            retr::build_database(chosen, video_run.reps, audio_run.reps, corpus.video,
                                 corpus.audio, at, cap, cfg.coverage.r_video,
                                 cfg.coverage.r_audio);
        for (const retr::QueryMode mode : modes) {
            const retr::AccuracyReport rep =
                retr::evaluate_accuracy(db, corpus.video, corpus.audio, cfg.allocate.alpha, mode);
            accuracy += std::to_string(row.budget) + "," + std::to_string(row.n_video) + "," +
                        std::to_string(row.n_audio) + "," + io::format_double(row.coverage) +
                        "," + mode_name(mode) + "," + io::format_double(rep.video.accuracy) +
                        "," + io::format_double(rep.audio.accuracy) + "," +
                        io::format_double(rep.fused_accuracy) + "," +
                        io::format_double(rep.video.coverage) + "," +
                        io::format_double(rep.audio.coverage) + "\n";
            if (row.budget == budgets.back())
                io::write_query_log_csv(cfg.out_dir / ("query_log_" + mode_name(mode) + ".csv"),
                                        rep.log);
        }
        if (row.budget == budgets.back()) io::write_javd(cfg.out_dir / "database.javd", db);
    }
    io::write_text(cfg.out_dir / "accuracy.csv", accuracy);

    // Table of rates read off each method's series at fixed coverage levels,
    // with the exact method as the baseline.
    std::map<std::string, std::vector<alloc::SeriesRow>> family;
    for (const alloc::AllocMethod m :
         {alloc::AllocMethod::arbitrary, alloc::AllocMethod::audio_first,
          alloc::AllocMethod::greedy}) {
        alloc::RateModel at = rm; // series mutates only its local budget copy
        family[alloc::method_name(m)] = alloc::rate_coverage_series(
            m, pair, at, cfg.allocate.alpha, budgets, cfg.coverage.r_video);
    }
    family["dp"] = chosen_rows;
    std::string table = "level,method,rate_method,rate_dp,saving_pct\n";
    for (const double level : cfg.evaluate.summary_levels) {
        const std::optional<double> rate_dp = rate_at_coverage(chosen_rows, level);
        for (const auto& [name, rows] : family) {
            const std::optional<double> rate_m = rate_at_coverage(rows, level);
            table += io::format_double(level) + "," + name + ",";
            table += rate_m ? io::format_double(*rate_m) : "unreachable";
            table += ",";
            table += rate_dp ? io::format_double(*rate_dp) : "unreachable";
            table += ",";
            if (rate_m && rate_dp && *rate_m > 0)
                table += io::format_double((*rate_m - *rate_dp) / *rate_m * 100.0);
            else
                table += "unreachable";
            table += "\n";
        }
    }
    io::write_text(cfg.out_dir / "summary_table.csv", table);
    std::cout << "accuracy.csv: " << chosen_rows.size() << " budgets x " << modes.size()
              << " modes (" << db_method << " allocation)\n";
}

void cmd_report(const ExperimentConfig& cfg) {
    bool anything = false;
    for (const auto& name : {"curve_video.csv", "curve_audio.csv"}) {
        const fs::path path = cfg.out_dir / name;
        if (!fs::exists(path)) continue;
        anything = true;
        const cover::CoverageCurve curve = io::read_curve_csv(path);
        std::size_t full_at = curve.f.size() - 1;
        while (full_at > 0 && curve.f[full_at - 1] == curve.f.back()) --full_at;
        std::cout << name << ": n=" << curve.n << " r=" << io::format_double(curve.r)
                  << " covered=" << curve.f.back() << " at " << full_at << " picks\n";
    }
    std::cout << "\nrate to reach coverage level (alpha=" << io::format_double(cfg.allocate.alpha)
              << "):\nmethod";
    for (const double level : cfg.evaluate.summary_levels)
        std::cout << "," << io::format_double(level);
    std::cout << "\n";
    for (const alloc::AllocMethod m : cfg.allocate.methods) {
        const fs::path path = cfg.out_dir / (std::string("series_") + alloc::method_name(m) +
                                             ".csv");
        if (!fs::exists(path)) continue;
        anything = true;
        const auto rows = io::read_series_csv(path);
        std::cout << alloc::method_name(m);
        for (const double level : cfg.evaluate.summary_levels) {
            const auto rate = rate_at_coverage(rows, level);
            std::cout << "," << (rate ? io::format_double(*rate) : "unreachable");
        }
        std::cout << "\n";
    }
    for (const auto& name : {"accuracy.csv", "summary_table.csv"}) {
        const fs::path path = cfg.out_dir / name;
        if (!fs::exists(path)) continue;
        anything = true;
        std::ifstream in(path);
        std::cout << "\n" << name << ":\n" << in.rdbuf();
    }
    if (!anything) throw IoError("nothing to report under " + cfg.out_dir.string() +
                                 "; run the pipeline stages first");
}

std::optional<double> rate_at_coverage(const std::vector<alloc::SeriesRow>& series, double level) {
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series[i].coverage < level) continue;
        if (i == 0) return static_cast<double>(series[i].budget);
        const double c0 = series[i - 1].coverage, c1 = series[i].coverage;
        const double b0 = static_cast<double>(series[i - 1].budget);
        const double b1 = static_cast<double>(series[i].budget);
        return b0 + (level - c0) / (c1 - c0) * (b1 - b0);
    }
    return std::nullopt;
}

} // namespace javf::harness
