#include "gazent/report.hpp"

#include <algorithm>
#include <cmath>

#include "gazent/format_util.hpp"
#include "gazent/parallel.hpp"

namespace gazent {

std::string serializeDescriptiveCsv(const MetricsReport& report) {
    const auto cell = [](const std::optional<double>& v) {
        return v ? toSig12(*v) : std::string("nan");
    };
    std::string out =
        "page_id,number_of_fixations,mean_of_duration,std_of_duration,mean_of_saccade_length,"
        "std_of_saccade_length,number_of_AOIs,mean_of_AOI_fixNum,std_of_AOI_fixNum\n";
    for (const PageReport& pr : report.pages) {
        const DescriptiveIndices& d = pr.descriptive;
        out += pr.page_id + ',' + std::to_string(d.fix_num) + ',' + cell(d.dur_mean_ms) + ',' +
               cell(d.dur_std_ms) + ',' + cell(d.sacc_len_mean_px) + ',' +
               cell(d.sacc_len_std_px) + ',' + std::to_string(d.aoi_num) + ',' +
               cell(d.aoi_fixnum_mean) + ',' + cell(d.aoi_fixnum_std) + '\n';
    }
    return out;
}

std::string fnv1a64Digest(std::string_view bytes) {
    std::uint64_t hash = 0xCBF29CE484222325ull;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001B3ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

namespace {

std::optional<double> guardedPearson(const std::vector<double>& xs,
                                     const std::vector<double>& ys) {
    if (xs.size() < 3) return std::nullopt;
    try {
        return pearsonR(xs, ys);
    } catch (const ComputeError&) {
        return std::nullopt;
    }
}

std::optional<AnovaEntry> guardedAnova(const std::vector<double>& good,
                                       const std::vector<double>& bad) {
    if (good.size() < 2 || bad.size() < 2) return std::nullopt;
    try {
        AnovaEntry entry;
        entry.result = oneWayAnova(good, bad);
        entry.n_good = static_cast<int>(good.size());
        entry.n_bad = static_cast<int>(bad.size());
        return entry;
    } catch (const ComputeError&) {
        return std::nullopt;
    }
}

} // namespace

MetricsReport buildMetricsReport(const Dataset& dataset, const RatingTable& ratings,
                                 const ReportConfig& config) {
    config.kernel.validate();
    if (!(config.aoi_radius_px > 0.0)) throw ValidationError("aoi_radius_px must be > 0");

    std::optional<Dataset> sliced;
    if (config.slice_ms) sliced = sliceDataset(dataset, *config.slice_ms);
    const Dataset& working = sliced ? *sliced : dataset;

    const auto scores = aggregateScores(ratings);
    for (const std::string& page : working.pageIds())
        if (scores.find(page) == scores.end())
            throw ValidationError("page '" + page + "' has no ratings");

    MetricsReport report;
    report.screen = working.screen();
    report.config = config;
    report.dataset.n_pages = static_cast<int>(working.pageIds().size());
    report.dataset.n_subjects = static_cast<int>(working.subjectIds().size());
    report.dataset.n_recordings = static_cast<int>(working.recordings().size());
    report.dataset.n_off_screen_fixations = working.offScreenCount();

    const std::vector<std::string>& pages = working.pageIds();
    report.pages.resize(pages.size());
    parallelFor(config.threads, pages.size(), [&](std::size_t pi) {
        const std::string& page = pages[pi];
        const auto recs = working.pageRecordings(page);

        PageReport pr;
        pr.page_id = page;
        pr.score = scores.at(page);
        pr.vaes = pageVaeSummary(recs, config.kernel, working.screenWidth(),
                                 working.screenHeight());

        const auto pooled = pooledTimeOrdered(recs);
        const AoiSet aois = clusterAoi(pooled, config.aoi_radius_px);
        if (aois.size() >= 2) {
            std::vector<AoiSequence> sequences;
            sequences.reserve(recs.size());
            for (const Recording* rec : recs) sequences.push_back(aoiSequence(*rec, aois));
            try {
                const TransitionModel model =
                    estimateTransitionModel(sequences, aois.size(), config.prior_mode);
                PageMarkov markov;
                markov.entropy = markovEntropy(model);
                markov.n_aois = aois.size();
                markov.n_transitions = static_cast<int>(model.source_counts.sum());
                pr.markov = markov;
            } catch (const ComputeError&) {
                // No inter-AOI transitions on this page; the metric is undefined.
            }
        }
        pr.descriptive = descriptiveIndices(recs, aois);
        report.pages[pi] = std::move(pr);
    });

    // Correlation block over pages, in kCorrelationVariables order.
    std::array<std::vector<double>, 5> columns;
    std::vector<double> markov_by_class[2]; // good, bad
    std::array<std::vector<double>, 5> columns_by_class[2];
    for (const PageReport& pr : report.pages) {
        const std::array<double, 5> row = {pr.score.score, static_cast<double>(pr.descriptive.fix_num),
                                           pr.vaes.vae_bits, pr.vaes.bvae_bits, pr.vaes.rvae};
        for (std::size_t v = 0; v < 5; ++v) columns[v].push_back(row[v]);
        if (pr.score.cls == PageClass::Unclassified) continue;
        const int cls = pr.score.cls == PageClass::Good ? 0 : 1;
        for (std::size_t v = 0; v < 5; ++v) columns_by_class[cls][v].push_back(row[v]);
        if (pr.markov) markov_by_class[cls].push_back(pr.markov->entropy.h_relative);
    }
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j)
            report.correlations[i][j] = guardedPearson(columns[i], columns[j]);

    report.anova_fix_num = guardedAnova(columns_by_class[0][1], columns_by_class[1][1]);
    report.anova_vae = guardedAnova(columns_by_class[0][2], columns_by_class[1][2]);
    report.anova_bvae = guardedAnova(columns_by_class[0][3], columns_by_class[1][3]);
    report.anova_rvae = guardedAnova(columns_by_class[0][4], columns_by_class[1][4]);
    report.anova_markov_h_relative = guardedAnova(markov_by_class[0], markov_by_class[1]);
    return report;
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

namespace {

// Minimal JSON emitter with deterministic formatting: callers emit keys in
// sorted order, floats use 12 significant digits.
class JsonWriter {
public:
    std::string take() { return std::move(out_); }

    void beginObject() {
        valuePrefix();
        out_ += '{';
        fresh_.push_back(true);
    }
    void endObject() {
        out_ += '}';
        fresh_.pop_back();
    }
    void beginArray() {
        valuePrefix();
        out_ += '[';
        fresh_.push_back(true);
    }
    void endArray() {
        out_ += ']';
        fresh_.pop_back();
    }
    void key(std::string_view k) {
        valuePrefix();
        quote(k);
        out_ += ':';
        after_key_ = true;
    }
    void string(std::string_view v) {
        valuePrefix();
        quote(v);
    }
    void number(double v) {
        if (std::isnan(v) || std::isinf(v))
            throw ComputeError("attempted to serialize a non-finite number");
        valuePrefix();
        out_ += toSig12(v);
    }
    void integer(long long v) {
        valuePrefix();
        out_ += std::to_string(v);
    }
    void unsignedInteger(unsigned long long v) {
        valuePrefix();
        out_ += std::to_string(v);
    }
    void boolean(bool v) {
        valuePrefix();
        out_ += v ? "true" : "false";
    }
    void null() {
        valuePrefix();
        out_ += "null";
    }
    void optionalNumber(const std::optional<double>& v) {
        if (v)
            number(*v);
        else
            null();
    }

private:
    void valuePrefix() {
        if (after_key_) {
            after_key_ = false;
            return;
        }
        if (!fresh_.empty()) {
            if (!fresh_.back()) out_ += ',';
            fresh_.back() = false;
        }
    }
    void quote(std::string_view s) {
        out_ += '"';
        for (char c : s) {
            switch (c) {
                case '"': out_ += "\\\""; break;
                case '\\': out_ += "\\\\"; break;
                case '\n': out_ += "\\n"; break;
                case '\r': out_ += "\\r"; break;
                case '\t': out_ += "\\t"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                        out_ += buf;
                    } else {
                        out_ += c;
                    }
            }
        }
        out_ += '"';
    }

    std::string out_;
    std::vector<bool> fresh_;
    bool after_key_ = false;
};

const char* className(PageClass cls) {
    switch (cls) {
        case PageClass::Good: return "good";
        case PageClass::Bad: return "bad";
        default: return "unclassified";
    }
}

void writeAnova(JsonWriter& w, const std::optional<AnovaEntry>& entry) {
    if (!entry) {
        w.null();
        return;
    }
    const AnovaResult& r = entry->result;
    w.beginObject();
    w.key("df_between");
    w.integer(r.df_between);
    w.key("df_error");
    w.integer(r.df_error);
    w.key("f");
    w.number(r.f);
    w.key("ms_between");
    w.number(r.ms_between);
    w.key("ms_error");
    w.number(r.ms_error);
    w.key("n_bad");
    w.integer(entry->n_bad);
    w.key("n_good");
    w.integer(entry->n_good);
    w.key("p");
    w.number(r.p);
    w.key("ss_between");
    w.number(r.ss_between);
    w.key("ss_error");
    w.number(r.ss_error);
    w.key("ss_total");
    w.number(r.ss_total);
    w.endObject();
}

} // namespace

std::string serializeReportJson(const MetricsReport& report) {
    JsonWriter w;
    w.beginObject();

    w.key("anova");
    w.beginObject();
    w.key("bvae");
    writeAnova(w, report.anova_bvae);
    w.key("fix_num");
    writeAnova(w, report.anova_fix_num);
    w.key("markov_h_relative");
    writeAnova(w, report.anova_markov_h_relative);
    w.key("rvae");
    writeAnova(w, report.anova_rvae);
    w.key("vae");
    writeAnova(w, report.anova_vae);
    w.endObject();

    w.key("config");
    w.beginObject();
    w.key("aoi_radius_px");
    w.number(report.config.aoi_radius_px);
    w.key("fixations_digest");
    w.string(report.config.fixations_digest);
    w.key("prior_mode");
    w.string(report.config.prior_mode == PriorMode::TransitionSources ? "transition_sources"
                                                                      : "occurrences");
    w.key("ratings_digest");
    w.string(report.config.ratings_digest);
    w.key("screen_height_px");
    w.integer(report.screen.height_px);
    w.key("screen_width_px");
    w.integer(report.screen.width_px);
    w.key("seed");
    w.unsignedInteger(report.config.seed);
    w.key("sigma_px");
    w.number(report.config.kernel.sigma_px);
    w.key("slice_ms");
    w.optionalNumber(report.config.slice_ms);
    w.key("truncation_radius");
    w.number(report.config.kernel.truncation_radius);
    w.endObject();

    w.key("correlations");
    w.beginObject();
    w.key("matrix");
    w.beginArray();
    for (const auto& row : report.correlations) {
        w.beginArray();
        for (const auto& cell : row) w.optionalNumber(cell);
        w.endArray();
    }
    w.endArray();
    w.key("variables");
    w.beginArray();
    for (const char* name : kCorrelationVariables) w.string(name);
    w.endArray();
    w.endObject();

    w.key("dataset");
    w.beginObject();
    w.key("n_off_screen_fixations");
    w.integer(report.dataset.n_off_screen_fixations);
    w.key("n_pages");
    w.integer(report.dataset.n_pages);
    w.key("n_recordings");
    w.integer(report.dataset.n_recordings);
    w.key("n_subjects");
    w.integer(report.dataset.n_subjects);
    w.endObject();

    w.key("pages");
    w.beginArray();
    for (const PageReport& pr : report.pages) {
        w.beginObject();
        w.key("bvae_bits");
        w.number(pr.vaes.bvae_bits);
        w.key("class");
        w.string(className(pr.score.cls));

        w.key("descriptive");
        w.beginObject();
        w.key("aoi_fixnum_mean");
        w.optionalNumber(pr.descriptive.aoi_fixnum_mean);
        w.key("aoi_fixnum_std");
        w.optionalNumber(pr.descriptive.aoi_fixnum_std);
        w.key("aoi_num");
        w.integer(pr.descriptive.aoi_num);
        w.key("dur_mean_ms");
        w.optionalNumber(pr.descriptive.dur_mean_ms);
        w.key("dur_std_ms");
        w.optionalNumber(pr.descriptive.dur_std_ms);
        w.key("fix_num");
        w.integer(pr.descriptive.fix_num);
        w.key("sacc_len_mean_px");
        w.optionalNumber(pr.descriptive.sacc_len_mean_px);
        w.key("sacc_len_std_px");
        w.optionalNumber(pr.descriptive.sacc_len_std_px);
        w.endObject();

        w.key("excluded_subjects");
        w.beginArray();
        for (const std::string& s : pr.vaes.excluded_subjects) w.string(s);
        w.endArray();
        w.key("included_subjects");
        w.beginArray();
        for (const std::string& s : pr.vaes.included_subjects) w.string(s);
        w.endArray();
        w.key("individual_vae_bits");
        w.beginArray();
        for (double v : pr.vaes.individual_vae_bits) w.number(v);
        w.endArray();

        w.key("markov");
        if (pr.markov) {
            w.beginObject();
            w.key("h_bits");
            w.number(pr.markov->entropy.h_bits);
            w.key("h_max_bits");
            w.number(pr.markov->entropy.h_max_bits);
            w.key("h_relative");
            w.number(pr.markov->entropy.h_relative);
            w.key("n_aois");
            w.integer(pr.markov->n_aois);
            w.key("n_transitions");
            w.integer(pr.markov->n_transitions);
            w.endObject();
        } else {
            w.null();
        }

        w.key("n_judgments");
        w.integer(pr.score.n_judgments);
        w.key("page_id");
        w.string(pr.page_id);
        w.key("rvae");
        w.number(pr.vaes.rvae);
        w.key("score");
        w.number(pr.score.score);
        w.key("vae_bits");
        w.number(pr.vaes.vae_bits);
        w.endObject();
    }
    w.endArray();

    w.endObject();
    std::string out = w.take();
    out += '\n';
    return out;
}

} // namespace gazent
