#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "javf/allocator.hpp"
#include "javf/audio_fingerprint.hpp"
#include "javf/coverage.hpp"
#include "javf/video_fingerprint.hpp"

namespace javf::retr {

struct AudioIndexEntry {
    std::uint32_t rep_id = 0;
    std::int64_t timestamp_ms = 0;
    std::uint32_t title_id = 0;
};

struct RepresentativeDatabase {
    std::vector<fp::VideoFingerprint> video_reps;
    std::vector<std::uint32_t> video_rep_points; // corpus index of each rep
    std::vector<std::vector<std::uint32_t>> video_cover;

    std::vector<fp::AudioSegment> audio_reps;
    std::vector<std::uint32_t> audio_rep_points;
    std::vector<std::vector<std::uint32_t>> audio_cover;

    // key -> units of representatives holding that key; ordered map so the
    // serialized index is canonical.
    std::map<std::uint32_t, std::vector<AudioIndexEntry>> audio_index;

    std::size_t k_tolerance = 0;
    double r_video = 0.0;
    double r_audio = 0.0;
    std::uint64_t video_cost = 0;
    std::uint64_t audio_cost = 0;
    std::uint64_t byte_size = 0; // video_cost*|video_reps| + audio_cost*|audio_reps|
};

// nearest: the single closest representative and its cover set — the
// narrated behaviour. probe_all: every representative within the threshold —
// the behaviour the correctness definition is stated against.
enum class QueryMode : std::uint8_t { nearest = 0, probe_all = 1 };

struct Candidate {
    std::uint32_t rep_id = 0;
    double distance = 0.0;
};

struct QueryResult {
    std::vector<Candidate> candidates;                   // ascending (distance, rep_id)
    std::vector<std::vector<std::uint32_t>> cover_sets;  // parallel to candidates
};

// Representatives come in as prefixes of greedy covering runs; corpus
// fingerprints provide the payloads. Throws InconsistentAllocation when the
// runs are shorter than the allocation asks for.
RepresentativeDatabase build_database(const alloc::AllocationResult& chosen,
                                      const cover::RepresentativeSet& video_run,
                                      const cover::RepresentativeSet& audio_run,
                                      const std::vector<fp::VideoFingerprint>& video_corpus,
                                      const std::vector<fp::AudioSegment>& audio_corpus,
                                      const alloc::RateModel& rm, std::size_t k_tolerance,
                                      double r_video, double r_audio);

QueryResult query_video(const RepresentativeDatabase& db, const fp::VideoFingerprint& q,
                        QueryMode mode);

// Candidates are gathered through the hash index (representatives sharing at
// least one key), then ranked by segment distance.
QueryResult query_audio(const RepresentativeDatabase& db, const fp::AudioSegment& q,
                        QueryMode mode);

struct QueryLogRow {
    std::size_t query_id = 0;
    cover::Modality modality = cover::Modality::video;
    std::int64_t returned_rep = -1; // top candidate, -1 when none
    double distance = -1.0;
    bool correct = false;
};

struct ModalityAccuracy {
    std::size_t t_queries = 0;
    double accuracy = 0.0; // mean of per-query correctness
    double coverage = 0.0; // covered fraction of the queried corpus
};

struct AccuracyReport {
    ModalityAccuracy video;
    ModalityAccuracy audio;
    double fused_accuracy = 0.0;
    double fused_coverage = 0.0;
    std::vector<QueryLogRow> log;
};

// Queries every corpus point against the database of its modality; a query
// is correct iff its own index appears in a returned cover set. An empty
// modality scores zero instead of erroring so zero-budget rows evaluate.
AccuracyReport evaluate_accuracy(const RepresentativeDatabase& db,
                                 const std::vector<fp::VideoFingerprint>& video_corpus,
                                 const std::vector<fp::AudioSegment>& audio_corpus, double alpha,
                                 QueryMode mode);

} // namespace javf::retr
