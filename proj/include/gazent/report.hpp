#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gazent/aoi_transitions.hpp"
#include "gazent/attention_map.hpp"
#include "gazent/descriptive_metrics.hpp"
#include "gazent/gaze_data.hpp"
#include "gazent/stat_inference.hpp"

namespace gazent {

struct ReportConfig {
    KernelConfig kernel;
    double aoi_radius_px = 80.0;
    std::uint64_t seed = 0;
    std::optional<double> slice_ms;
    PriorMode prior_mode = PriorMode::TransitionSources;
    int threads = 1; // affects wall time only, never output bytes
    std::string fixations_digest;
    std::string ratings_digest;
};

struct PageMarkov {
    MarkovEntropy entropy;
    int n_aois = 0;
    int n_transitions = 0;
};

struct PageReport {
    std::string page_id;
    PageScore score;
    PageVaeSummary vaes;
    std::optional<PageMarkov> markov; // absent when the page has < 2 AOIs or no transitions
    DescriptiveIndices descriptive;
};

struct AnovaEntry {
    AnovaResult result;
    int n_good = 0;
    int n_bad = 0;
};

/// The five correlated variables, in matrix order.
inline constexpr std::array<const char*, 5> kCorrelationVariables = {
    "score", "fix_num", "vae", "bvae", "rvae"};

struct DatasetSummary {
    int n_pages = 0;
    int n_subjects = 0;
    int n_recordings = 0;
    long n_off_screen_fixations = 0; // retained, flagged at parse time
};

struct MetricsReport {
    ScreenFormat screen;
    ReportConfig config;
    DatasetSummary dataset; // of the (possibly sliced) data the metrics saw
    std::vector<PageReport> pages; // sorted by page_id, every dataset page exactly once
    // Pairwise Pearson r over pages; absent where undefined (n < 3 pages or
    // zero variance).
    std::array<std::array<std::optional<double>, 5>, 5> correlations;
    // Two-class (good vs bad) ANOVA per metric; unclassified pages excluded.
    // Absent when either class has < 2 pages or the pooled variance is 0.
    std::optional<AnovaEntry> anova_fix_num;
    std::optional<AnovaEntry> anova_vae;
    std::optional<AnovaEntry> anova_bvae;
    std::optional<AnovaEntry> anova_rvae;
    std::optional<AnovaEntry> anova_markov_h_relative; // over pages where defined
};

/// Runs the full per-page pipeline (optionally time-sliced) and the
/// inference layer. Every dataset page must be present in the ratings;
/// a missing page is a validation error naming it.
MetricsReport buildMetricsReport(const Dataset& dataset, const RatingTable& ratings,
                                 const ReportConfig& config);

/// Deterministic JSON: keys sorted, floats at 12 significant digits,
/// undefined statistics as null.
std::string serializeReportJson(const MetricsReport& report);

/// Per-page CSV of the eight descriptive indices, one row per page;
/// absent statistics serialize as "nan".
std::string serializeDescriptiveCsv(const MetricsReport& report);

/// 64-bit FNV-1a over raw bytes, rendered as "fnv1a64:<16 hex digits>".
std::string fnv1a64Digest(std::string_view bytes);

} // namespace gazent
