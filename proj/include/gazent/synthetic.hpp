#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gazent/gaze_data.hpp"

namespace gazent {

/// One attractor of synthetic attention.
struct Hotspot {
    double center_x = 0.0;
    double center_y = 0.0;
    double spread_px = 0.0; // per-axis Gaussian std dev, > 0
    double weight = 1.0;    // attractiveness, > 0
};

/// Recipe for one synthetic page: fixations land on the hotspot mixture with
/// probability (1 - noise_level) and uniformly over the screen otherwise.
/// Durations are log-normal (median duration_median_ms, log-space sigma
/// duration_sigma_log).
struct SyntheticPageSpec {
    std::string page_id;
    std::vector<Hotspot> hotspots;
    double noise_level = 0.0; // in [0, 1]
    int fixations_per_subject = 12;
    double duration_median_ms = 250.0;
    double duration_sigma_log = 0.5;
    Verdict declared_class = Verdict::Good;

    void validate() const;
};

/// Deterministic synthetic dataset: per (page, subject) an independent RNG
/// stream is derived from (seed, page index, subject index), so generation
/// order and parallelism cannot change the output. Subjects are named
/// s01..sNN. Requires n_subjects >= 2 and at least one page spec; a page with
/// no hotspots and noise_level < 1 is an error.
Dataset generateDataset(std::span<const SyntheticPageSpec> pages, int n_subjects,
                        ScreenFormat screen, std::uint64_t seed);

/// Ratings in which every subject votes each page's declared class.
RatingTable ratingsFor(std::span<const SyntheticPageSpec> pages, int n_subjects);

/// Untruncated reference: accumulates the duration-weighted Gaussian kernel
/// of every fixation over every grid cell by direct per-cell evaluation, then
/// takes the Shannon entropy. Intentionally slow; this is the ground truth
/// the truncated builder is checked against.
double oracleFullGridEntropyBits(std::span<const Fixation> fixations, double sigma_px,
                                 int width, int height);

/// The standard benchmark scenario: pages_per_level pages at each noise level,
/// hotspot geometry drawn from `seed`. Levels <= 0.45 are declared Good, the
/// rest Bad. Page ids are p00, p01, ... in level order.
std::vector<SyntheticPageSpec> makeNoiseLadder(std::span<const double> noise_levels,
                                               int pages_per_level, ScreenFormat screen,
                                               std::uint64_t seed);

} // namespace gazent
