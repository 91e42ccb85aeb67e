#include "javf/format.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "javf/errors.hpp"

namespace javf::io {

namespace {

// --- little-endian buffer primitives -------------------------------------

void put_u16(std::vector<std::uint8_t>& b, std::uint16_t v) {
    b.push_back(static_cast<std::uint8_t>(v));
    b.push_back(static_cast<std::uint8_t>(v >> 8));
}
void put_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_u64(std::vector<std::uint8_t>& b, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_i64(std::vector<std::uint8_t>& b, std::int64_t v) {
    put_u64(b, static_cast<std::uint64_t>(v));
}
void put_f64(std::vector<std::uint8_t>& b, double v) { put_u64(b, std::bit_cast<std::uint64_t>(v)); }

struct Reader {
    const std::uint8_t* p;
    std::size_t left;
    std::string origin;

    void need(std::size_t n) const {
        if (n > left) throw ParseError(origin + ": unexpected end of file");
    }
    void skip(std::size_t n) {
        need(n);
        p += n;
        left -= n;
    }
    const std::uint8_t* bytes(std::size_t n) {
        need(n);
        const std::uint8_t* q = p;
        p += n;
        left -= n;
        return q;
    }
    std::uint16_t u16() {
        const auto* q = bytes(2);
        return static_cast<std::uint16_t>(q[0] | (q[1] << 8));
    }
    std::uint32_t u32() {
        const auto* q = bytes(4);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | q[i];
        return v;
    }
    std::uint64_t u64() {
        const auto* q = bytes(8);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | q[i];
        return v;
    }
    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
    double f64() { return std::bit_cast<double>(u64()); }
};

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed on " + path.string());
    return data;
}

// Stage-and-rename so consumers never observe a half-written file.
void atomic_write(const std::filesystem::path& path, const void* data, std::size_t len) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot create " + tmp.string());
        out.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
        if (!out) throw IoError("write failed on " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move " + tmp.string() + " into place: " + ec.message());
}

void atomic_write(const std::filesystem::path& path, const std::vector<std::uint8_t>& data) {
    atomic_write(path, data.data(), data.size());
}

} // namespace

void write_text(const std::filesystem::path& path, const std::string& text) {
    atomic_write(path, text.data(), text.size());
}

namespace {

constexpr std::uint8_t kModalityVideo = 0;
constexpr std::uint8_t kModalityAudio = 1;

std::vector<std::uint8_t> javf_header(std::uint8_t modality, std::uint16_t record_width,
                                      std::uint64_t count) {
    std::vector<std::uint8_t> buf;
    buf.insert(buf.end(), {'J', 'A', 'V', 'F'});
    put_u16(buf, kJavfVersion);
    buf.push_back(modality);
    put_u16(buf, record_width);
    put_u64(buf, count);
    return buf;
}

Reader open_javf(const std::vector<std::uint8_t>& data, const std::filesystem::path& path,
                 std::uint8_t want_modality, std::uint16_t& width, std::uint64_t& count) {
    Reader rd{data.data(), data.size(), path.string()};
    const auto* magic = rd.bytes(4);
    if (std::memcmp(magic, "JAVF", 4) != 0) throw ParseError(path.string() + ": bad magic");
    if (rd.u16() != kJavfVersion) throw ParseError(path.string() + ": unsupported version");
    const std::uint8_t modality = rd.bytes(1)[0];
    if (modality != want_modality) throw ParseError(path.string() + ": wrong modality");
    width = rd.u16();
    count = rd.u64();
    if (width == 0 && count != 0) throw ParseError(path.string() + ": zero-width records");
    if (width != 0 && (rd.left % width != 0 || count != rd.left / width))
        throw ParseError(path.string() + ": payload length does not match the header");
    if (width == 0 && rd.left != 0) throw ParseError(path.string() + ": trailing bytes");
    return rd;
}

} // namespace

void write_javf_video(const std::filesystem::path& path,
                      const std::vector<fp::VideoFingerprint>& records) {
    std::size_t width = records.empty() ? 0 : records.front().bits.size();
    for (const auto& r : records)
        if (r.bits.size() != width)
            throw IncompatibleFingerprints("mixed fingerprint widths in one file");
    auto buf = javf_header(kModalityVideo, static_cast<std::uint16_t>(width), records.size());
    for (const auto& r : records) buf.insert(buf.end(), r.bits.begin(), r.bits.end());
    atomic_write(path, buf);
}

std::vector<fp::VideoFingerprint> read_javf_video(const std::filesystem::path& path) {
    const auto data = slurp(path);
    std::uint16_t width = 0;
    std::uint64_t count = 0;
    Reader rd = open_javf(data, path, kModalityVideo, width, count);
    std::vector<fp::VideoFingerprint> out(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto* bytes = rd.bytes(width);
        out[i].bits.assign(bytes, bytes + width);
        out[i].width_bits = static_cast<std::size_t>(width) * 8;
        out[i].frame_id = static_cast<std::uint32_t>(i); // ordinal; ids are not stored
        out[i].timestamp_ms = 0;
    }
    return out;
}

void write_javf_audio(const std::filesystem::path& path,
                      const std::vector<fp::AudioSegment>& records) {
    const std::size_t units = records.empty() ? 0 : records.front().units.size();
    for (const auto& r : records)
        if (r.units.size() != units)
            throw IncompatibleFingerprints("mixed segment sizes in one file");
    auto buf = javf_header(kModalityAudio, static_cast<std::uint16_t>(units * 4), records.size());
    for (const auto& r : records)
        for (const auto& unit : r.units) put_u32(buf, unit.key);
    atomic_write(path, buf);
}

std::vector<fp::AudioSegment> read_javf_audio(const std::filesystem::path& path) {
    const auto data = slurp(path);
    std::uint16_t width = 0;
    std::uint64_t count = 0;
    Reader rd = open_javf(data, path, kModalityAudio, width, count);
    if (width % 4 != 0) throw ParseError(path.string() + ": audio record width not key-aligned");
    const std::size_t units = width / 4;
    std::vector<fp::AudioSegment> out(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        out[i].segment_id = static_cast<std::uint32_t>(i);
        out[i].units.resize(units);
        for (auto& unit : out[i].units) unit.key = rd.u32(); // timestamps are not stored
    }
    return out;
}

void write_javd(const std::filesystem::path& path, const retr::RepresentativeDatabase& db) {
    std::vector<std::uint8_t> buf;
    buf.insert(buf.end(), {'J', 'A', 'V', 'D'});
    put_u16(buf, kJavdVersion);
    put_u16(buf, 0);
    // 0 encodes an uncapped tolerance (a cap of 0 could never cover anything)
    put_u32(buf, db.k_tolerance == cover::kNoCap ? 0
                                                 : static_cast<std::uint32_t>(db.k_tolerance));
    put_u32(buf, 0);
    put_f64(buf, db.r_video);
    put_f64(buf, db.r_audio);
    put_u32(buf, static_cast<std::uint32_t>(db.video_reps.size()));
    put_u32(buf, static_cast<std::uint32_t>(db.audio_reps.size()));
    put_u32(buf, static_cast<std::uint32_t>(db.video_cost));
    put_u32(buf, static_cast<std::uint32_t>(db.audio_cost));
    put_u64(buf, db.byte_size);
    put_u64(buf, 0);
    if (buf.size() != kJavdHeaderBytes) throw std::logic_error("database header size drifted");

    // fingerprint payload: exactly byte_size bytes
    for (const auto& r : db.video_reps) {
        if (r.bits.size() != db.video_cost)
            throw IncompatibleFingerprints("video record width differs from its byte cost");
        buf.insert(buf.end(), r.bits.begin(), r.bits.end());
    }
    for (const auto& r : db.audio_reps) {
        if (r.units.size() * 4 != db.audio_cost)
            throw IncompatibleFingerprints("audio record width differs from its byte cost");
        for (const auto& unit : r.units) put_u32(buf, unit.key);
    }
    if (buf.size() != kJavdHeaderBytes + db.byte_size)
        throw std::logic_error("database payload size drifted");

    const auto put_cover = [&buf](const std::vector<std::vector<std::uint32_t>>& sets) {
        for (const auto& cs : sets) {
            put_u32(buf, static_cast<std::uint32_t>(cs.size()));
            for (const std::uint32_t v : cs) put_u32(buf, v);
        }
    };
    for (const std::uint32_t v : db.video_rep_points) put_u32(buf, v);
    put_cover(db.video_cover);
    for (const std::uint32_t v : db.audio_rep_points) put_u32(buf, v);
    put_cover(db.audio_cover);

    put_u64(buf, db.audio_index.size());
    for (const auto& [key, entries] : db.audio_index) {
        put_u32(buf, key);
        put_u32(buf, static_cast<std::uint32_t>(entries.size()));
        for (const auto& e : entries) {
            put_u32(buf, e.rep_id);
            put_i64(buf, e.timestamp_ms);
            put_u32(buf, e.title_id);
        }
    }
    atomic_write(path, buf);
}

retr::RepresentativeDatabase read_javd(const std::filesystem::path& path) {
    const auto data = slurp(path);
    Reader rd{data.data(), data.size(), path.string()};
    const auto* magic = rd.bytes(4);
    if (std::memcmp(magic, "JAVD", 4) != 0) throw ParseError(path.string() + ": bad magic");
    if (rd.u16() != kJavdVersion) throw ParseError(path.string() + ": unsupported version");
    rd.u16();
    retr::RepresentativeDatabase db;
    const std::uint32_t cap = rd.u32();
    db.k_tolerance = cap == 0 ? cover::kNoCap : cap;
    rd.u32();
    db.r_video = rd.f64();
    db.r_audio = rd.f64();
    const std::uint32_t n_video = rd.u32();
    const std::uint32_t n_audio = rd.u32();
    db.video_cost = rd.u32();
    db.audio_cost = rd.u32();
    db.byte_size = rd.u64();
    rd.u64();
    if (db.byte_size != db.video_cost * std::uint64_t(n_video) + db.audio_cost * std::uint64_t(n_audio))
        throw ParseError(path.string() + ": byte size does not match the counts");

    db.video_reps.resize(n_video);
    for (auto& r : db.video_reps) {
        const auto* bytes = rd.bytes(db.video_cost);
        r.bits.assign(bytes, bytes + db.video_cost);
        r.width_bits = static_cast<std::size_t>(db.video_cost) * 8;
    }
    if (db.audio_cost % 4 != 0) throw ParseError(path.string() + ": audio cost not key-aligned");
    db.audio_reps.resize(n_audio);
    for (auto& r : db.audio_reps) {
        r.units.resize(db.audio_cost / 4);
        for (auto& unit : r.units) unit.key = rd.u32();
    }

    const auto get_cover = [&rd](std::size_t n) {
        std::vector<std::vector<std::uint32_t>> sets(n);
        for (auto& cs : sets) {
            cs.resize(rd.u32());
            for (auto& v : cs) v = rd.u32();
        }
        return sets;
    };
    db.video_rep_points.resize(n_video);
    for (auto& v : db.video_rep_points) v = rd.u32();
    db.video_cover = get_cover(n_video);
    db.audio_rep_points.resize(n_audio);
    for (auto& v : db.audio_rep_points) v = rd.u32();
    db.audio_cover = get_cover(n_audio);
    for (std::uint32_t t = 0; t < n_video; ++t) {
        db.video_reps[t].frame_id = db.video_rep_points[t];
    }
    for (std::uint32_t t = 0; t < n_audio; ++t) {
        db.audio_reps[t].segment_id = db.audio_rep_points[t];
    }

    const std::uint64_t n_keys = rd.u64();
    for (std::uint64_t k = 0; k < n_keys; ++k) {
        const std::uint32_t key = rd.u32();
        const std::uint32_t n_entries = rd.u32();
        auto& entries = db.audio_index[key];
        entries.resize(n_entries);
        for (auto& e : entries) {
            e.rep_id = rd.u32();
            e.timestamp_ms = rd.i64();
            e.title_id = rd.u32();
        }
    }
    if (rd.left != 0) throw ParseError(path.string() + ": trailing bytes");
    return db;
}

std::string format_double(double v) {
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

void write_curve_csv(const std::filesystem::path& path, const cover::CoverageCurve& curve) {
    if (curve.f.empty() || curve.f.front() != 0)
        throw std::logic_error("curve must start at zero");
    for (std::size_t i = 1; i < curve.f.size(); ++i)
        if (curve.f[i] < curve.f[i - 1]) throw std::logic_error("curve must be non-decreasing");

    std::string text = "# n=" + std::to_string(curve.n) + " r=" + format_double(curve.r) +
                       " K=" + (curve.k_cap == cover::kNoCap ? "inf" : std::to_string(curve.k_cap)) +
                       " mode=" + (curve.mode == cover::CoverMode::strict ? "strict" : "expanded") +
                       "\ni,f\n";
    for (std::size_t i = 0; i < curve.f.size(); ++i)
        text += std::to_string(i) + "," + std::to_string(curve.f[i]) + "\n";
    write_text(path, text);
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        parts.push_back(line.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return parts;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    if (in.bad()) throw IoError("read failed on " + path.string());
    return lines;
}

double parse_double(const std::string& s, const std::string& where) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw ParseError(where + ": bad number '" + s + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& s, const std::string& where) {
    char* end = nullptr;
    const std::uint64_t v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size() || s[0] == '-')
        throw ParseError(where + ": bad count '" + s + "'");
    return v;
}

} // namespace

cover::CoverageCurve read_curve_csv(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    if (lines.size() < 3 || lines[0].rfind("# ", 0) != 0 || lines[1] != "i,f")
        throw ParseError(path.string() + ": not a coverage curve file");

    cover::CoverageCurve curve;
    for (const auto& token : split(lines[0].substr(2), ' ')) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) throw ParseError(path.string() + ": bad parameter line");
        const std::string key = token.substr(0, eq), val = token.substr(eq + 1);
        if (key == "n")
            curve.n = parse_u64(val, path.string());
        else if (key == "r")
            curve.r = parse_double(val, path.string());
        else if (key == "K")
            curve.k_cap = val == "inf" ? cover::kNoCap : parse_u64(val, path.string());
        else if (key == "mode")
            curve.mode = val == "strict" ? cover::CoverMode::strict : cover::CoverMode::expanded;
        else
            throw ParseError(path.string() + ": unknown parameter '" + key + "'");
    }
    for (std::size_t ln = 2; ln < lines.size(); ++ln) {
        if (lines[ln].empty()) continue;
        const auto parts = split(lines[ln], ',');
        if (parts.size() != 2) throw ParseError(path.string() + ": ragged row");
        if (parse_u64(parts[0], path.string()) != curve.f.size())
            throw ParseError(path.string() + ": row indices must count up from 0");
        curve.f.push_back(parse_u64(parts[1], path.string()));
    }
    if (curve.f.empty()) throw ParseError(path.string() + ": no rows");
    return curve;
}

void write_series_csv(const std::filesystem::path& path,
                      const std::vector<alloc::SeriesRow>& rows) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].budget < rows[i - 1].budget)
            throw std::logic_error("series budgets must be ascending");
        if (rows[i].method == "dp" && rows[i - 1].method == "dp" &&
            rows[i].coverage < rows[i - 1].coverage)
            throw std::logic_error("dp coverage must be non-decreasing in the budget");
    }
    std::string text = "budget_bytes,coverage,n_video,n_audio,method,alpha,threshold\n";
    for (const auto& r : rows)
        text += std::to_string(r.budget) + "," + format_double(r.coverage) + "," +
                std::to_string(r.n_video) + "," + std::to_string(r.n_audio) + "," + r.method +
                "," + format_double(r.alpha) + "," + format_double(r.threshold) + "\n";
    write_text(path, text);
}

std::vector<alloc::SeriesRow> read_series_csv(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    if (lines.empty() || lines[0] != "budget_bytes,coverage,n_video,n_audio,method,alpha,threshold")
        throw ParseError(path.string() + ": not a rate-coverage series file");
    std::vector<alloc::SeriesRow> rows;
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        if (lines[ln].empty()) continue;
        const auto parts = split(lines[ln], ',');
        if (parts.size() != 7) throw ParseError(path.string() + ": ragged row");
        alloc::SeriesRow r;
        r.budget = parse_u64(parts[0], path.string());
        r.coverage = parse_double(parts[1], path.string());
        r.n_video = parse_u64(parts[2], path.string());
        r.n_audio = parse_u64(parts[3], path.string());
        r.method = parts[4];
        r.alpha = parse_double(parts[5], path.string());
        r.threshold = parse_double(parts[6], path.string());
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_query_log_csv(const std::filesystem::path& path,
                         const std::vector<retr::QueryLogRow>& rows) {
    std::string text = "query_id,modality,returned_rep,distance,correct\n";
    for (const auto& r : rows)
        text += std::to_string(r.query_id) + "," +
                (r.modality == cover::Modality::video ? "video" : "audio") + "," +
                std::to_string(r.returned_rep) + "," + format_double(r.distance) + "," +
                (r.correct ? "1" : "0") + "\n";
    write_text(path, text);
}

} // namespace javf::io
