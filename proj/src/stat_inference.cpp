#include "gazent/stat_inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include "gazent/format_util.hpp"
#include "gazent/parallel.hpp"
#include "gazent/rng.hpp"

namespace gazent {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Lentz continued fraction for the incomplete beta function.
double betaContinuedFraction(double a, double b, double x) {
    constexpr int kMaxIter = 500;
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw ComputeError("incomplete beta continued fraction did not converge");
}

double sum(std::span<const double> values) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
}

} // namespace

double pearsonR(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw ValidationError("pearsonR: length mismatch");
    const std::size_t n = xs.size();
    if (n < 3) throw ValidationError("pearsonR: need at least 3 pairs");
    const double mean_x = sum(xs) / static_cast<double>(n);
    const double mean_y = sum(ys) / static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mean_x;
        const double dy = ys[i] - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0))
        throw ComputeError("pearsonR: a variable has zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double regularizedIncompleteBeta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw ValidationError("incomplete beta requires positive parameters");
    if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("incomplete beta requires x in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betaContinuedFraction(a, b, x) / a;
    return 1.0 - front * betaContinuedFraction(b, a, 1.0 - x) / b;
}

double fDistributionSf(double f, double df1, double df2) {
    if (!(df1 > 0.0) || !(df2 > 0.0))
        throw ValidationError("F distribution requires positive degrees of freedom");
    if (!(f >= 0.0)) return 1.0;
    // Upper tail directly through the complement argument: avoids the
    // cancellation of 1 - CDF for large f.
    return regularizedIncompleteBeta(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * f));
}

AnovaResult oneWayAnova(std::span<const double> group_a, std::span<const double> group_b) {
    if (group_a.size() < 2 || group_b.size() < 2)
        throw ValidationError("oneWayAnova: each group needs at least 2 values");
    const double na = static_cast<double>(group_a.size());
    const double nb = static_cast<double>(group_b.size());
    const double mean_a = sum(group_a) / na;
    const double mean_b = sum(group_b) / nb;
    const double grand = (sum(group_a) + sum(group_b)) / (na + nb);

    AnovaResult r;
    for (double v : group_a) r.ss_error += (v - mean_a) * (v - mean_a);
    for (double v : group_b) r.ss_error += (v - mean_b) * (v - mean_b);
    r.ss_between = na * (mean_a - grand) * (mean_a - grand) +
                   nb * (mean_b - grand) * (mean_b - grand);
    for (double v : group_a) r.ss_total += (v - grand) * (v - grand);
    for (double v : group_b) r.ss_total += (v - grand) * (v - grand);
    r.df_between = 1;
    r.df_error = static_cast<int>(na + nb) - 2;
    r.ms_between = r.ss_between / r.df_between;
    r.ms_error = r.ss_error / r.df_error;
    if (!(r.ms_error > 0.0))
        throw ComputeError("oneWayAnova: pooled within-group variance is zero");
    r.f = r.ms_between / r.ms_error;
    r.p = fDistributionSf(r.f, r.df_between, r.df_error);
    return r;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

namespace {

// Pearson r or NaN when undefined at this point (too few pages, zero variance).
double guardedPearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() < 3) return kNaN;
    try {
        return pearsonR(xs, ys);
    } catch (const ComputeError&) {
        return kNaN;
    }
}

std::map<std::string, double> pageScores(const Dataset& dataset, const RatingTable& ratings) {
    const auto aggregated = aggregateScores(ratings);
    std::map<std::string, double> scores;
    for (const std::string& page : dataset.pageIds()) {
        const auto it = aggregated.find(page);
        if (it == aggregated.end())
            throw ValidationError("page '" + page + "' has no ratings");
        scores[page] = it->second.score;
    }
    return scores;
}

struct PageEval {
    double vae_bits = kNaN;
    double rvae = kNaN;
    bool ok = false;
};

PageEval evalRecordings(const std::vector<const Recording*>& recs, const KernelConfig& kernel,
                        int width, int height) {
    PageEval out;
    try {
        const PageVaeSummary s = pageVaeSummary(recs, kernel, width, height);
        out.vae_bits = s.vae_bits;
        out.rvae = s.rvae;
        out.ok = true;
    } catch (const ComputeError&) {
        // Degenerate page at this sweep point (fewer than 2 usable subjects);
        // the caller records the drop.
    }
    return out;
}

SweepPoint correlatePoint(double axis_value, const std::vector<std::string>& pages,
                          const std::map<std::string, double>& scores,
                          const std::vector<PageEval>& evals) {
    std::vector<double> s, v, r;
    for (std::size_t i = 0; i < pages.size(); ++i) {
        if (!evals[i].ok) continue;
        s.push_back(scores.at(pages[i]));
        v.push_back(evals[i].vae_bits);
        r.push_back(evals[i].rvae);
    }
    SweepPoint point;
    point.axis_value = axis_value;
    point.r_vae = guardedPearson(v, s);
    point.r_rvae = guardedPearson(r, s);
    point.n_pages = static_cast<double>(s.size());
    return point;
}

} // namespace

SweepCurve sweepTime(const Dataset& dataset, const RatingTable& ratings,
                     const KernelConfig& kernel, std::span<const double> t_grid_ms, int threads) {
    kernel.validate();
    if (t_grid_ms.empty()) throw ValidationError("sweepTime: empty t grid");
    for (std::size_t i = 0; i < t_grid_ms.size(); ++i) {
        if (!(t_grid_ms[i] >= 0.0)) throw ValidationError("sweepTime: t must be >= 0");
        if (i > 0 && !(t_grid_ms[i] > t_grid_ms[i - 1]))
            throw ValidationError("sweepTime: t grid must be strictly ascending");
    }
    const auto scores = pageScores(dataset, ratings);
    const std::vector<std::string>& pages = dataset.pageIds();
    std::vector<std::vector<const Recording*>> page_recs;
    page_recs.reserve(pages.size());
    for (const std::string& page : pages) page_recs.push_back(dataset.pageRecordings(page));

    const std::size_t nt = t_grid_ms.size();
    const std::size_t np = pages.size();
    std::vector<PageEval> evals(nt * np);
    parallelFor(threads, nt * np, [&](std::size_t task) {
        const std::size_t ti = task / np;
        const std::size_t pi = task % np;
        std::vector<Recording> sliced;
        sliced.reserve(page_recs[pi].size());
        for (const Recording* rec : page_recs[pi])
            sliced.push_back(sliceRecording(*rec, t_grid_ms[ti]));
        std::vector<const Recording*> ptrs;
        ptrs.reserve(sliced.size());
        for (const Recording& rec : sliced) ptrs.push_back(&rec);
        evals[task] = evalRecordings(ptrs, kernel, dataset.screenWidth(), dataset.screenHeight());
    });

    SweepCurve curve;
    curve.axis = SweepAxis::TimeMs;
    curve.page_curves.resize(np);
    for (std::size_t pi = 0; pi < np; ++pi) curve.page_curves[pi].page_id = pages[pi];
    for (std::size_t ti = 0; ti < nt; ++ti) {
        std::vector<PageEval> at_t(evals.begin() + static_cast<std::ptrdiff_t>(ti * np),
                                   evals.begin() + static_cast<std::ptrdiff_t>((ti + 1) * np));
        curve.points.push_back(correlatePoint(t_grid_ms[ti], pages, scores, at_t));
        std::vector<std::string> dropped;
        for (std::size_t pi = 0; pi < np; ++pi) {
            curve.page_curves[pi].vae_bits.push_back(at_t[pi].vae_bits);
            curve.page_curves[pi].rvae.push_back(at_t[pi].rvae);
            if (!at_t[pi].ok) dropped.push_back(pages[pi]);
        }
        curve.dropped_pages.push_back(std::move(dropped));
    }
    return curve;
}

SweepCurve sweepSubjects(const Dataset& dataset, const RatingTable& ratings,
                         const KernelConfig& kernel, std::span<const int> sizes, int repetitions,
                         std::uint64_t seed, int threads) {
    kernel.validate();
    if (sizes.empty()) throw ValidationError("sweepSubjects: empty size list");
    if (repetitions < 1) throw ValidationError("sweepSubjects: repetitions must be >= 1");
    const int n_subjects = static_cast<int>(dataset.subjectIds().size());
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < 2 || sizes[i] > n_subjects)
            throw ValidationError("sweepSubjects: size " + std::to_string(sizes[i]) +
                                  " outside [2, " + std::to_string(n_subjects) + "]");
        if (i > 0 && !(sizes[i] > sizes[i - 1]))
            throw ValidationError("sweepSubjects: sizes must be strictly ascending");
    }
    const auto scores = pageScores(dataset, ratings);
    const std::vector<std::string>& pages = dataset.pageIds();
    const std::vector<std::string>& subjects = dataset.subjectIds();
    const int width = dataset.screenWidth();
    const int height = dataset.screenHeight();

    // Individual VAEs depend only on (page, subject), so they are computed
    // once here and reused by every sampled subset; the pooled map is rebuilt
    // per subset. Values match a direct pageVaeSummary bit for bit.
    struct Contribution {
        const Recording* rec = nullptr;
        int subject_index = -1;
        double individual_vae_bits = 0.0;
    };
    std::vector<std::vector<Contribution>> usable(pages.size()); // subject-sorted per page
    parallelFor(threads, pages.size(), [&](std::size_t pi) {
        for (const Recording* rec : dataset.pageRecordings(pages[pi])) {
            bool has_mass = false;
            for (const Fixation& f : rec->fixations)
                if (kernelTouchesGrid(f, kernel, width, height)) {
                    has_mass = true;
                    break;
                }
            if (!has_mass) continue;
            Contribution c;
            c.rec = rec;
            c.subject_index = static_cast<int>(
                std::lower_bound(subjects.begin(), subjects.end(), rec->subject_id) -
                subjects.begin());
            c.individual_vae_bits = vae(buildAttentionMap(rec->fixations, kernel, width, height));
            usable[pi].push_back(c);
        }
    });

    struct RepResult {
        double r_vae = kNaN;
        double r_rvae = kNaN;
        double n_pages = 0.0;
    };
    const std::size_t n_sizes = sizes.size();
    const std::size_t n_reps = static_cast<std::size_t>(repetitions);
    std::vector<RepResult> reps(n_sizes * n_reps);
    parallelFor(threads, n_sizes * n_reps, [&](std::size_t task) {
        const std::size_t si = task / n_reps;
        const std::size_t ri = task % n_reps;
        std::mt19937_64 gen(deriveSeed(seed, static_cast<std::uint64_t>(sizes[si]),
                                       static_cast<std::uint64_t>(ri)));
        const std::vector<int> chosen =
            sampleWithoutReplacement(n_subjects, sizes[si], gen); // ascending = subject order
        std::vector<char> in_subset(static_cast<std::size_t>(n_subjects), 0);
        for (int idx : chosen) in_subset[static_cast<std::size_t>(idx)] = 1;

        std::vector<PageEval> evals(pages.size());
        for (std::size_t pi = 0; pi < pages.size(); ++pi) {
            std::vector<const Contribution*> included;
            for (const Contribution& c : usable[pi])
                if (in_subset[static_cast<std::size_t>(c.subject_index)])
                    included.push_back(&c);
            if (included.size() < 2) continue; // page dropped for this subset
            std::vector<Fixation> pooled;
            double individual_sum = 0.0;
            for (const Contribution* c : included) {
                pooled.insert(pooled.end(), c->rec->fixations.begin(), c->rec->fixations.end());
                individual_sum += c->individual_vae_bits;
            }
            const double vae_bits = vae(buildAttentionMap(pooled, kernel, width, height));
            const double bvae = individual_sum / static_cast<double>(included.size());
            if (!(bvae > 0.0)) continue;
            evals[pi] = PageEval{vae_bits, vae_bits / bvae, true};
        }
        const SweepPoint point =
            correlatePoint(static_cast<double>(sizes[si]), pages, scores, evals);
        reps[task] = RepResult{point.r_vae, point.r_rvae, point.n_pages};
    });

    // Mean over repetitions, skipping undefined ones; identical repetitions
    // collapse to their common value so a full-subject sweep reproduces the
    // direct pipeline exactly.
    const auto meanOf = [](std::vector<double> values) {
        if (values.empty()) return kNaN;
        const bool all_equal =
            std::all_of(values.begin(), values.end(), [&](double v) { return v == values[0]; });
        if (all_equal) return values[0];
        double s = 0.0;
        for (double v : values) s += v;
        return s / static_cast<double>(values.size());
    };

    SweepCurve curve;
    curve.axis = SweepAxis::SubjectCount;
    for (std::size_t si = 0; si < n_sizes; ++si) {
        std::vector<double> r_vae, r_rvae, n_used;
        for (std::size_t ri = 0; ri < n_reps; ++ri) {
            const RepResult& rep = reps[si * n_reps + ri];
            if (!std::isnan(rep.r_vae)) r_vae.push_back(rep.r_vae);
            if (!std::isnan(rep.r_rvae)) r_rvae.push_back(rep.r_rvae);
            n_used.push_back(rep.n_pages);
        }
        SweepPoint point;
        point.axis_value = static_cast<double>(sizes[si]);
        point.r_vae = meanOf(std::move(r_vae));
        point.r_rvae = meanOf(std::move(r_rvae));
        point.n_pages = meanOf(std::move(n_used));
        curve.points.push_back(point);
    }
    return curve;
}

SweepCurve sweepSigma(const Dataset& dataset, const RatingTable& ratings,
                      std::span<const double> sigma_grid_px, double truncation_radius,
                      int threads) {
    if (sigma_grid_px.empty()) throw ValidationError("sweepSigma: empty sigma grid");
    for (double s : sigma_grid_px)
        if (!(s > 0.0)) throw ValidationError("sweepSigma: sigma must be > 0");
    const auto scores = pageScores(dataset, ratings);
    const std::vector<std::string>& pages = dataset.pageIds();
    std::vector<std::vector<const Recording*>> page_recs;
    page_recs.reserve(pages.size());
    for (const std::string& page : pages) page_recs.push_back(dataset.pageRecordings(page));

    const std::size_t ns = sigma_grid_px.size();
    const std::size_t np = pages.size();
    std::vector<PageEval> evals(ns * np);
    parallelFor(threads, ns * np, [&](std::size_t task) {
        const std::size_t si = task / np;
        const std::size_t pi = task % np;
        const KernelConfig kernel{sigma_grid_px[si], truncation_radius};
        kernel.validate();
        evals[task] =
            evalRecordings(page_recs[pi], kernel, dataset.screenWidth(), dataset.screenHeight());
    });

    SweepCurve curve;
    curve.axis = SweepAxis::SigmaPx;
    for (std::size_t si = 0; si < ns; ++si) {
        std::vector<PageEval> at_sigma(evals.begin() + static_cast<std::ptrdiff_t>(si * np),
                                       evals.begin() + static_cast<std::ptrdiff_t>((si + 1) * np));
        curve.points.push_back(correlatePoint(sigma_grid_px[si], pages, scores, at_sigma));
    }
    return curve;
}

namespace {

std::string csvNumber(double v) { return std::isnan(v) ? "nan" : toSig12(v); }

} // namespace

void writeSweepCsv(const SweepCurve& curve, std::ostream& out) {
    out << "axis_value,r_vae,r_rvae,n_pages\n";
    for (const SweepPoint& p : curve.points)
        out << csvNumber(p.axis_value) << ',' << csvNumber(p.r_vae) << ',' << csvNumber(p.r_rvae)
            << ',' << csvNumber(p.n_pages) << '\n';
}

void writePageCurvesCsv(const SweepCurve& curve, std::ostream& out) {
    out << "page_id,axis_value,vae_bits,rvae\n";
    for (const PageCurve& pc : curve.page_curves)
        for (std::size_t i = 0; i < pc.vae_bits.size(); ++i)
            out << pc.page_id << ',' << csvNumber(curve.points[i].axis_value) << ','
                << csvNumber(pc.vae_bits[i]) << ',' << csvNumber(pc.rvae[i]) << '\n';
}

} // namespace gazent
