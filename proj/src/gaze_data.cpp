#include "gazent/gaze_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <tuple>

#include "gazent/format_util.hpp"

namespace gazent {

namespace {

constexpr const char* kFixationHeader = "subject_id\tpage_id\tstart_ms\tduration_ms\tx\ty";
constexpr const char* kRatingsHeader = "subject_id,page_id,verdict";

std::vector<std::string> splitOn(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = line.find(sep, pos);
        if (next == std::string::npos) {
            fields.push_back(line.substr(pos));
            break;
        }
        fields.push_back(line.substr(pos, next - pos));
        pos = next + 1;
    }
    return fields;
}

double parseNumberField(const std::string& field, const char* name, long line) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last || field.empty())
        throw ParseError(line, std::string("non-numeric ") + name + ": '" + field + "'");
    if (!std::isfinite(value))
        throw ParseError(line, std::string(name) + " is not finite");
    return value;
}

// Strips one trailing '\r' so CRLF input parses; canonical output is LF.
void stripCr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool isOffScreen(const Fixation& f, ScreenFormat screen) {
    return f.x_px < 0.0 || f.x_px > screen.width_px - 1 || f.y_px < 0.0 ||
           f.y_px > screen.height_px - 1;
}

} // namespace

Dataset::Dataset(ScreenFormat screen, std::vector<Recording> recordings)
    : screen_(screen), recordings_(std::move(recordings)) {
    if (screen_.width_px <= 0 || screen_.height_px <= 0)
        throw ValidationError("screen dimensions must be positive");

    std::sort(recordings_.begin(), recordings_.end(), [](const Recording& a, const Recording& b) {
        return std::tie(a.subject_id, a.page_id) < std::tie(b.subject_id, b.page_id);
    });

    std::set<std::string> pages;
    std::set<std::string> subjects;
    for (std::size_t i = 0; i < recordings_.size(); ++i) {
        Recording& rec = recordings_[i];
        if (rec.subject_id.empty() || rec.page_id.empty())
            throw ValidationError("recording with empty subject_id or page_id");
        if (i > 0 && recordings_[i - 1].subject_id == rec.subject_id &&
            recordings_[i - 1].page_id == rec.page_id)
            throw ValidationError("duplicate recording for subject '" + rec.subject_id +
                                  "' page '" + rec.page_id + "'");
        std::stable_sort(rec.fixations.begin(), rec.fixations.end(),
                         [](const Fixation& a, const Fixation& b) { return a.start_ms < b.start_ms; });
        for (std::size_t k = 0; k < rec.fixations.size(); ++k) {
            const Fixation& f = rec.fixations[k];
            if (!std::isfinite(f.x_px) || !std::isfinite(f.y_px) || !std::isfinite(f.start_ms) ||
                !std::isfinite(f.duration_ms))
                throw ValidationError("non-finite fixation field in subject '" + rec.subject_id +
                                      "' page '" + rec.page_id + "'");
            if (f.duration_ms <= 0.0)
                throw ValidationError("non-positive duration_ms (" + toShortest(f.duration_ms) +
                                      ") in subject '" + rec.subject_id + "' page '" + rec.page_id +
                                      "'");
            if (f.start_ms < 0.0)
                throw ValidationError("negative start_ms in subject '" + rec.subject_id +
                                      "' page '" + rec.page_id + "'");
            if (k > 0 && rec.fixations[k - 1].start_ms == f.start_ms)
                throw ValidationError("duplicate fixation start " + toShortest(f.start_ms) +
                                      " ms for subject '" + rec.subject_id + "' page '" +
                                      rec.page_id + "'");
            if (isOffScreen(f, screen_)) ++off_screen_count_;
        }
        pages.insert(rec.page_id);
        subjects.insert(rec.subject_id);
    }
    page_ids_.assign(pages.begin(), pages.end());
    subject_ids_.assign(subjects.begin(), subjects.end());
}

std::vector<const Recording*> Dataset::pageRecordings(const std::string& page_id) const {
    std::vector<const Recording*> out;
    for (const Recording& rec : recordings_)
        if (rec.page_id == page_id) out.push_back(&rec);
    return out;
}

bool Dataset::operator==(const Dataset& other) const {
    return screen_.width_px == other.screen_.width_px &&
           screen_.height_px == other.screen_.height_px && recordings_ == other.recordings_;
}

Dataset parseFixationTable(std::istream& in, ScreenFormat screen) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, "empty input, expected header");
    stripCr(line);
    if (line != kFixationHeader)
        throw ParseError(1, std::string("bad header, expected '") + kFixationHeader + "'");

    // (subject, page) -> fixations, in first-appearance order.
    std::vector<Recording> recordings;
    std::map<std::pair<std::string, std::string>, std::size_t> index;

    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        stripCr(line);
        if (line.empty()) continue;
        const auto fields = splitOn(line, '\t');
        if (fields.size() != 6)
            throw ParseError(line_no, "expected 6 tab-separated fields, got " +
                                          std::to_string(fields.size()));
        if (fields[0].empty() || fields[1].empty())
            throw ParseError(line_no, "empty subject_id or page_id");
        Fixation f;
        f.start_ms = parseNumberField(fields[2], "start_ms", line_no);
        f.duration_ms = parseNumberField(fields[3], "duration_ms", line_no);
        f.x_px = parseNumberField(fields[4], "x", line_no);
        f.y_px = parseNumberField(fields[5], "y", line_no);
        if (f.duration_ms <= 0.0)
            throw ValidationError("line " + std::to_string(line_no) +
                                  ": non-positive duration_ms (" + fields[3] + ")");
        if (f.start_ms < 0.0)
            throw ValidationError("line " + std::to_string(line_no) + ": negative start_ms (" +
                                  fields[2] + ")");

        const auto key = std::make_pair(fields[0], fields[1]);
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, recordings.size()).first;
            recordings.push_back(Recording{fields[0], fields[1], {}});
        }
        recordings[it->second].fixations.push_back(f);
    }
    // Dataset construction sorts fixations and rejects duplicate starts.
    return Dataset(screen, std::move(recordings));
}

void serializeFixationTable(const Dataset& dataset, std::ostream& out) {
    out << kFixationHeader << '\n';
    for (const Recording& rec : dataset.recordings())
        for (const Fixation& f : rec.fixations)
            out << rec.subject_id << '\t' << rec.page_id << '\t' << toShortest(f.start_ms) << '\t'
                << toShortest(f.duration_ms) << '\t' << toShortest(f.x_px) << '\t'
                << toShortest(f.y_px) << '\n';
}

RatingTable parseRatingsCsv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, "empty input, expected header");
    stripCr(line);
    if (line != kRatingsHeader)
        throw ParseError(1, std::string("bad header, expected '") + kRatingsHeader + "'");

    std::map<std::pair<std::string, std::string>, Verdict> judgments;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        stripCr(line);
        if (line.empty()) continue;
        const auto fields = splitOn(line, ',');
        if (fields.size() != 3)
            throw ParseError(line_no, "expected 3 comma-separated fields, got " +
                                          std::to_string(fields.size()));
        if (fields[0].empty() || fields[1].empty())
            throw ParseError(line_no, "empty subject_id or page_id");
        Verdict v;
        if (fields[2] == "good")
            v = Verdict::Good;
        else if (fields[2] == "bad")
            v = Verdict::Bad;
        else
            throw ParseError(line_no, "verdict must be 'good' or 'bad', got '" + fields[2] + "'");
        const auto key = std::make_pair(fields[0], fields[1]);
        if (!judgments.emplace(key, v).second)
            throw ValidationError("line " + std::to_string(line_no) +
                                  ": duplicate judgment for subject '" + fields[0] + "' page '" +
                                  fields[1] + "'");
    }
    return RatingTable(std::move(judgments));
}

void serializeRatingsCsv(const RatingTable& table, std::ostream& out) {
    out << kRatingsHeader << '\n';
    for (const auto& [key, verdict] : table.judgments())
        out << key.first << ',' << key.second << ','
            << (verdict == Verdict::Good ? "good" : "bad") << '\n';
}

std::map<std::string, PageScore> aggregateScores(const RatingTable& table) {
    std::map<std::string, PageScore> scores;
    for (const auto& [key, verdict] : table.judgments()) {
        PageScore& s = scores[key.second];
        ++s.n_judgments;
        if (verdict == Verdict::Good) ++s.n_good;
    }
    for (auto& [page, s] : scores) {
        s.score = static_cast<double>(s.n_good) / static_cast<double>(s.n_judgments);
        // Exact midpoint test on integer counts, not on the float quotient.
        if (2 * s.n_good > s.n_judgments)
            s.cls = PageClass::Good;
        else if (2 * s.n_good < s.n_judgments)
            s.cls = PageClass::Bad;
        else
            s.cls = PageClass::Unclassified;
    }
    return scores;
}

Recording sliceRecording(const Recording& recording, double t_ms) {
    if (!(t_ms >= 0.0)) throw ValidationError("slice time must be >= 0");
    Recording out{recording.subject_id, recording.page_id, {}};
    for (const Fixation& f : recording.fixations) {
        if (f.start_ms >= t_ms) break; // fixations are time-sorted
        Fixation clipped = f;
        clipped.duration_ms = std::min(f.duration_ms, t_ms - f.start_ms);
        out.fixations.push_back(clipped);
    }
    return out;
}

Dataset sliceDataset(const Dataset& dataset, double t_ms) {
    std::vector<Recording> sliced;
    sliced.reserve(dataset.recordings().size());
    for (const Recording& rec : dataset.recordings()) sliced.push_back(sliceRecording(rec, t_ms));
    return Dataset(dataset.screen(), std::move(sliced));
}

} // namespace gazent
