#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gazent/attention_map.hpp"
#include "gazent/gaze_data.hpp"

namespace gazent {

/// Product-moment correlation. Requires equal lengths >= 3 and nonzero
/// variance in both variables (zero variance is an error, never silently 0).
double pearsonR(std::span<const double> xs, std::span<const double> ys);

struct AnovaResult {
    double ss_between = 0.0;
    double ss_error = 0.0;
    double ss_total = 0.0;
    int df_between = 0;
    int df_error = 0;
    double ms_between = 0.0;
    double ms_error = 0.0;
    double f = 0.0;
    double p = 1.0;
};

/// Two-class one-way ANOVA. Each group needs >= 2 values and the pooled
/// within-group variance must be positive. p is the exact F upper tail.
AnovaResult oneWayAnova(std::span<const double> group_a, std::span<const double> group_b);

/// Regularized incomplete beta I_x(a, b) via the Lentz continued fraction,
/// absolute accuracy ~1e-14.
double regularizedIncompleteBeta(double a, double b, double x);

/// P(F > f) for the F distribution with (df1, df2) degrees of freedom.
double fDistributionSf(double f, double df1, double df2);

enum class SweepAxis { TimeMs, SigmaPx, SubjectCount };

/// One evaluated sweep position. r values are NaN when the correlation is
/// undefined at that point (fewer than 3 pages or zero variance); n_pages is
/// the page count used (mean across repetitions for subject sweeps).
struct SweepPoint {
    double axis_value = 0.0;
    double r_vae = 0.0;
    double r_rvae = 0.0;
    double n_pages = 0.0;
};

/// Per-page metric trajectory along the sweep axis (time sweeps only);
/// NaN marks points where the page was dropped.
struct PageCurve {
    std::string page_id;
    std::vector<double> vae_bits;
    std::vector<double> rvae;
};

struct SweepCurve {
    SweepAxis axis = SweepAxis::TimeMs;
    std::vector<SweepPoint> points;
    std::vector<PageCurve> page_curves;                  // time sweeps only
    std::vector<std::vector<std::string>> dropped_pages; // per point, time sweeps only
};

/// Correlation-vs-time: for each t the recordings are sliced to [0, t),
/// per-page VAE/rVAE recomputed, and correlated with the page scores. Pages
/// with fewer than two contributing subjects at a t are dropped there and
/// recorded. The t grid must be strictly ascending and non-negative.
SweepCurve sweepTime(const Dataset& dataset, const RatingTable& ratings,
                     const KernelConfig& kernel, std::span<const double> t_grid_ms,
                     int threads = 1);

/// Correlation-vs-subject-count: for each size, the mean r over `repetitions`
/// subject subsets drawn without replacement from a generator seeded
/// deterministically per (size, repetition). Sizes must be ascending within
/// [2, n_subjects]. Identical (inputs, seed) give identical curves.
SweepCurve sweepSubjects(const Dataset& dataset, const RatingTable& ratings,
                         const KernelConfig& kernel, std::span<const int> sizes,
                         int repetitions, std::uint64_t seed, int threads = 1);

/// Correlation-vs-sigma: maps and correlations recomputed per sigma value.
/// Duplicate grid entries are evaluated independently (and identically).
SweepCurve sweepSigma(const Dataset& dataset, const RatingTable& ratings,
                      std::span<const double> sigma_grid_px, double truncation_radius,
                      int threads = 1);

/// CSV "axis_value,r_vae,r_rvae,n_pages"; floats use 12 significant digits,
/// undefined correlations serialize as "nan".
void writeSweepCsv(const SweepCurve& curve, std::ostream& out);

/// Companion CSV for time sweeps: "page_id,axis_value,vae_bits,rvae".
void writePageCurvesCsv(const SweepCurve& curve, std::ostream& out);

} // namespace gazent
