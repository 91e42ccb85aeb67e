#include "javf/retrieval.hpp"

#include <algorithm>

#include "javf/errors.hpp"

namespace javf::retr {

RepresentativeDatabase build_database(const alloc::AllocationResult& chosen,
                                      const cover::RepresentativeSet& video_run,
                                      const cover::RepresentativeSet& audio_run,
                                      const std::vector<fp::VideoFingerprint>& video_corpus,
                                      const std::vector<fp::AudioSegment>& audio_corpus,
                                      const alloc::RateModel& rm, std::size_t k_tolerance,
                                      double r_video, double r_audio) {
    if (chosen.n_video > video_run.reps.size() || chosen.n_audio > audio_run.reps.size())
        throw InconsistentAllocation("covering runs are shorter than the chosen counts");
    if (chosen.rate != rm.video_cost * chosen.n_video + rm.audio_cost * chosen.n_audio)
        throw InconsistentAllocation("allocation rate does not match its counts");

    RepresentativeDatabase db;
    db.k_tolerance = k_tolerance;
    db.r_video = r_video;
    db.r_audio = r_audio;
    db.video_cost = rm.video_cost;
    db.audio_cost = rm.audio_cost;

    for (std::size_t t = 0; t < chosen.n_video; ++t) {
        const std::uint32_t point = video_run.reps[t];
        if (point >= video_corpus.size())
            throw InconsistentAllocation("video representative outside the corpus");
        if (video_run.cover_sets[t].size() > k_tolerance)
            throw InconsistentAllocation("video cover set larger than the tolerance");
        db.video_reps.push_back(video_corpus[point]);
        db.video_rep_points.push_back(point);
        db.video_cover.push_back(video_run.cover_sets[t]);
        if (db.video_reps.back().bits.size() != rm.video_cost)
            throw InconsistentAllocation("video fingerprint width differs from its byte cost");
    }
    for (std::size_t t = 0; t < chosen.n_audio; ++t) {
        const std::uint32_t point = audio_run.reps[t];
        if (point >= audio_corpus.size())
            throw InconsistentAllocation("audio representative outside the corpus");
        if (audio_run.cover_sets[t].size() > k_tolerance)
            throw InconsistentAllocation("audio cover set larger than the tolerance");
        const auto& seg = audio_corpus[point];
        if (seg.units.size() * 4 != rm.audio_cost)
            throw InconsistentAllocation("audio segment size differs from its byte cost");
        db.audio_reps.push_back(seg);
        db.audio_rep_points.push_back(point);
        db.audio_cover.push_back(audio_run.cover_sets[t]);
        for (const auto& unit : seg.units)
            db.audio_index[unit.key].push_back(
                {static_cast<std::uint32_t>(t), unit.timestamp_ms, unit.title_id});
    }
    db.byte_size = rm.video_cost * db.video_reps.size() + rm.audio_cost * db.audio_reps.size();
    return db;
}

namespace {

QueryResult rank(const RepresentativeDatabase& db, std::vector<Candidate> scored, QueryMode mode,
                 double threshold, bool audio) {
    std::sort(scored.begin(), scored.end(), [](const Candidate& a, const Candidate& b) {
        return a.distance != b.distance ? a.distance < b.distance : a.rep_id < b.rep_id;
    });
    QueryResult out;
    for (const Candidate& c : scored) {
        if (mode == QueryMode::probe_all && c.distance > threshold) break;
        out.candidates.push_back(c);
        out.cover_sets.push_back(audio ? db.audio_cover[c.rep_id] : db.video_cover[c.rep_id]);
        if (mode == QueryMode::nearest) break;
    }
    return out;
}

} // namespace

QueryResult query_video(const RepresentativeDatabase& db, const fp::VideoFingerprint& q,
                        QueryMode mode) {
    if (db.video_reps.empty()) throw EmptyDatabase("no video representatives");
    std::vector<Candidate> scored;
    scored.reserve(db.video_reps.size());
    for (std::size_t t = 0; t < db.video_reps.size(); ++t)
        scored.push_back({static_cast<std::uint32_t>(t),
                          static_cast<double>(fp::hamming(q, db.video_reps[t]))});
    return rank(db, std::move(scored), mode, db.r_video, false);
}

QueryResult query_audio(const RepresentativeDatabase& db, const fp::AudioSegment& q,
                        QueryMode mode) {
    if (db.audio_reps.empty()) throw EmptyDatabase("no audio representatives");
    if (!db.audio_reps.front().units.empty() &&
        q.units.size() != db.audio_reps.front().units.size())
        throw IncompatibleFingerprints("query unit count differs from the database");

    std::vector<char> seen(db.audio_reps.size(), 0);
    std::vector<Candidate> scored;
    for (const auto& unit : q.units) {
        const auto it = db.audio_index.find(unit.key);
        if (it == db.audio_index.end()) continue;
        for (const auto& entry : it->second)
            if (!seen[entry.rep_id]) {
                seen[entry.rep_id] = 1;
                scored.push_back({entry.rep_id,
                                  fp::segment_distance(q, db.audio_reps[entry.rep_id])});
            }
    }
    return rank(db, std::move(scored), mode, db.r_audio, true);
}

namespace {

bool in_any_cover_set(const QueryResult& qr, std::size_t point) {
    for (const auto& cs : qr.cover_sets)
        if (std::binary_search(cs.begin(), cs.end(), static_cast<std::uint32_t>(point)))
            return true;
    return false;
}

} // namespace

AccuracyReport evaluate_accuracy(const RepresentativeDatabase& db,
                                 const std::vector<fp::VideoFingerprint>& video_corpus,
                                 const std::vector<fp::AudioSegment>& audio_corpus, double alpha,
                                 QueryMode mode) {
    AccuracyReport rep;

    std::size_t covered_v = 0;
    for (const auto& cs : db.video_cover) covered_v += cs.size();
    std::size_t covered_a = 0;
    for (const auto& cs : db.audio_cover) covered_a += cs.size();

    std::size_t correct_v = 0;
    for (std::size_t q = 0; q < video_corpus.size(); ++q) {
        QueryLogRow row;
        row.query_id = q;
        row.modality = cover::Modality::video;
        if (!db.video_reps.empty()) {
            const QueryResult qr = query_video(db, video_corpus[q], mode);
            if (!qr.candidates.empty()) {
                row.returned_rep = qr.candidates.front().rep_id;
                row.distance = qr.candidates.front().distance;
            }
            row.correct = in_any_cover_set(qr, q);
        }
        correct_v += row.correct ? 1 : 0;
        rep.log.push_back(row);
    }
    std::size_t correct_a = 0;
    for (std::size_t q = 0; q < audio_corpus.size(); ++q) {
        QueryLogRow row;
        row.query_id = q;
        row.modality = cover::Modality::audio;
        if (!db.audio_reps.empty()) {
            const QueryResult qr = query_audio(db, audio_corpus[q], mode);
            if (!qr.candidates.empty()) {
                row.returned_rep = qr.candidates.front().rep_id;
                row.distance = qr.candidates.front().distance;
            }
            row.correct = in_any_cover_set(qr, q);
        }
        correct_a += row.correct ? 1 : 0;
        rep.log.push_back(row);
    }

    rep.video.t_queries = video_corpus.size();
    rep.video.accuracy = video_corpus.empty()
                             ? 0.0
                             : static_cast<double>(correct_v) / static_cast<double>(video_corpus.size());
    rep.video.coverage = video_corpus.empty()
                             ? 0.0
                             : static_cast<double>(covered_v) / static_cast<double>(video_corpus.size());
    rep.audio.t_queries = audio_corpus.size();
    rep.audio.accuracy = audio_corpus.empty()
                             ? 0.0
                             : static_cast<double>(correct_a) / static_cast<double>(audio_corpus.size());
    rep.audio.coverage = audio_corpus.empty()
                             ? 0.0
                             : static_cast<double>(covered_a) / static_cast<double>(audio_corpus.size());
    rep.fused_accuracy = alloc::fused(alpha, rep.video.accuracy, rep.audio.accuracy);
    rep.fused_coverage = alloc::fused(alpha, rep.video.coverage, rep.audio.coverage);
    return rep;
}

} // namespace javf::retr
