#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gazent/errors.hpp"

namespace gazent {

/// One detected gaze event. Times are milliseconds from stimulus onset,
/// positions are screen pixels (fractional values allowed).
struct Fixation {
    double start_ms = 0.0;
    double duration_ms = 0.0;
    double x_px = 0.0;
    double y_px = 0.0;

    bool operator==(const Fixation&) const = default;
};

/// One subject's ordered fixation sequence on one page.
struct Recording {
    std::string subject_id;
    std::string page_id;
    std::vector<Fixation> fixations; // sorted by start_ms, strictly ascending

    bool operator==(const Recording&) const = default;
};

/// Screen geometry used to validate and rasterize fixation coordinates.
struct ScreenFormat {
    int width_px = 1280;
    int height_px = 800;
};

/// A validated collection of recordings sharing one screen geometry.
/// Recordings are kept sorted by (subject_id, page_id); each fixation list is
/// sorted by start time with strictly ascending starts. Construction rejects
/// non-finite coordinates, non-positive durations, negative start times and
/// duplicate (subject, page) pairs. Off-screen fixations are retained and
/// counted, not dropped.
class Dataset {
public:
    Dataset(ScreenFormat screen, std::vector<Recording> recordings);

    int screenWidth() const noexcept { return screen_.width_px; }
    int screenHeight() const noexcept { return screen_.height_px; }
    ScreenFormat screen() const noexcept { return screen_; }

    const std::vector<Recording>& recordings() const noexcept { return recordings_; }
    const std::vector<std::string>& pageIds() const noexcept { return page_ids_; }
    const std::vector<std::string>& subjectIds() const noexcept { return subject_ids_; }

    /// Recordings of one page, ordered by subject_id. Unknown page -> empty.
    std::vector<const Recording*> pageRecordings(const std::string& page_id) const;

    /// Fixations whose coordinates fall outside [0, w-1] x [0, h-1].
    long offScreenCount() const noexcept { return off_screen_count_; }

    bool operator==(const Dataset& other) const;

private:
    ScreenFormat screen_;
    std::vector<Recording> recordings_;
    std::vector<std::string> page_ids_;
    std::vector<std::string> subject_ids_;
    long off_screen_count_ = 0;
};

enum class Verdict { Good, Bad };

enum class PageClass { Good, Bad, Unclassified };

/// Majority score of one page: fraction of "good" verdicts.
struct PageScore {
    double score = 0.0;
    int n_good = 0;
    int n_judgments = 0;
    PageClass cls = PageClass::Unclassified;
};

/// Binary aesthetic judgments, one per (subject, page).
class RatingTable {
public:
    RatingTable() = default;
    explicit RatingTable(std::map<std::pair<std::string, std::string>, Verdict> judgments)
        : judgments_(std::move(judgments)) {}

    const std::map<std::pair<std::string, std::string>, Verdict>& judgments() const noexcept {
        return judgments_;
    }

    bool operator==(const RatingTable&) const = default;

private:
    std::map<std::pair<std::string, std::string>, Verdict> judgments_;
};

/// Parses the canonical fixation TSV. The stream must begin with the exact
/// header "subject_id\tpage_id\tstart_ms\tduration_ms\tx\ty". Rows are grouped
/// into recordings by (subject, page) and time-sorted. Duplicate
/// (subject, page, start_ms) triples and non-positive durations are rejected.
Dataset parseFixationTable(std::istream& in, ScreenFormat screen);

/// Canonical serialization: header, then rows ordered by (subject, page,
/// start). Numbers use shortest round-trip formatting, so
/// parseFixationTable(serializeFixationTable(d)) == d.
void serializeFixationTable(const Dataset& dataset, std::ostream& out);

/// Parses the ratings CSV with header "subject_id,page_id,verdict",
/// verdict in {good, bad}. Duplicate (subject, page) -> validation error.
RatingTable parseRatingsCsv(std::istream& in);

void serializeRatingsCsv(const RatingTable& table, std::ostream& out);

/// Per-page good-fraction and derived class. score > 0.5 -> Good,
/// score < 0.5 -> Bad, exactly 0.5 -> Unclassified (decided exactly via
/// integer counts, not float comparison).
std::map<std::string, PageScore> aggregateScores(const RatingTable& table);

/// Fixations accumulated during [0, t): keeps fixations with start_ms < t_ms,
/// clipping each duration to min(duration_ms, t_ms - start_ms).
Recording sliceRecording(const Recording& recording, double t_ms);

/// sliceRecording applied to every recording; empty recordings are kept so
/// per-page subject sets remain visible to downstream exclusion logic.
Dataset sliceDataset(const Dataset& dataset, double t_ms);

} // namespace gazent
