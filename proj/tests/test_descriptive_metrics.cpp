#include "gazent/descriptive_metrics.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "gazent/rng.hpp"
#include "support/oracles.hpp"

using namespace gazent;

namespace {

Recording randomRecording(const std::string& subject, int count, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    Recording rec{subject, "p1", {}};
    double t = 0.0;
    for (int i = 0; i < count; ++i) {
        Fixation f;
        f.start_ms = t;
        f.duration_ms = 80.0 + 500.0 * uniformDouble(gen);
        f.x_px = 1280.0 * uniformDouble(gen);
        f.y_px = 800.0 * uniformDouble(gen);
        rec.fixations.push_back(f);
        t += f.duration_ms + 25.0;
    }
    return rec;
}

} // namespace

TEST_CASE("saccade lengths are consecutive Euclidean distances") {
    Recording rec{"s1", "p1", {{0, 100, 0, 0}, {200, 100, 3, 4}}};
    CHECK(saccadeLengths(rec) == std::vector<double>{5.0});

    Recording single{"s1", "p1", {{0, 100, 10, 10}}};
    CHECK(saccadeLengths(single).empty());
    CHECK(saccadeLengths(Recording{"s1", "p1", {}}).empty());
}

TEST_CASE("random saccades match a direct pairwise recomputation") {
    const Recording rec = randomRecording("s1", 10, 91);
    const auto lens = saccadeLengths(rec);
    REQUIRE(lens.size() == 9);
    for (std::size_t k = 0; k < lens.size(); ++k) {
        const double dx = rec.fixations[k + 1].x_px - rec.fixations[k].x_px;
        const double dy = rec.fixations[k + 1].y_px - rec.fixations[k].y_px;
        CHECK(std::abs(lens[k] - std::sqrt(dx * dx + dy * dy)) < 1e-12);
    }
}

TEST_CASE("constant durations give zero std") {
    Recording rec{"s1", "p1",
                  {{0, 200, 10, 10}, {300, 200, 400, 300}, {600, 200, 800, 500}}};
    const AoiSet aois = clusterAoi(rec.fixations, 80.0);
    const DescriptiveIndices d = descriptiveIndices({&rec}, aois);
    CHECK(d.fix_num == 3);
    CHECK(*d.dur_mean_ms == doctest::Approx(200.0));
    CHECK(*d.dur_std_ms == doctest::Approx(0.0));
}

TEST_CASE("fix_num pools across recordings") {
    const Recording a = randomRecording("s1", 3, 1);
    const Recording b = randomRecording("s2", 4, 2);
    const auto pooled = pooledTimeOrdered({&a, &b});
    const AoiSet aois = clusterAoi(pooled, 80.0);
    const DescriptiveIndices d = descriptiveIndices({&a, &b}, aois);
    CHECK(d.fix_num == 7);
}

TEST_CASE("all eight indices match the two-pass oracle on random data") {
    std::vector<Recording> recs;
    for (int s = 0; s < 6; ++s)
        recs.push_back(randomRecording("s" + std::to_string(s + 1), 8 + s, 100 + s));
    std::vector<const Recording*> ptrs;
    for (const Recording& r : recs) ptrs.push_back(&r);
    const auto pooled = pooledTimeOrdered(ptrs);
    const AoiSet aois = clusterAoi(pooled, 80.0);
    const DescriptiveIndices d = descriptiveIndices(ptrs, aois);

    std::vector<double> durations, saccades, aoi_counts;
    long fix_num = 0;
    for (const Recording& r : recs) {
        fix_num += static_cast<long>(r.fixations.size());
        for (const Fixation& f : r.fixations) durations.push_back(f.duration_ms);
        for (std::size_t k = 0; k + 1 < r.fixations.size(); ++k)
            saccades.push_back(std::hypot(r.fixations[k + 1].x_px - r.fixations[k].x_px,
                                          r.fixations[k + 1].y_px - r.fixations[k].y_px));
    }
    for (const Aoi& aoi : aois.aois) aoi_counts.push_back(aoi.fixation_count);

    CHECK(d.fix_num == fix_num);
    const auto [dur_mean, dur_std] = oracles::twoPassMeanStd(durations);
    CHECK(std::abs(*d.dur_mean_ms - dur_mean) < 1e-9);
    CHECK(std::abs(*d.dur_std_ms - dur_std) < 1e-9);
    const auto [sacc_mean, sacc_std] = oracles::twoPassMeanStd(saccades);
    CHECK(std::abs(*d.sacc_len_mean_px - sacc_mean) < 1e-9);
    CHECK(std::abs(*d.sacc_len_std_px - sacc_std) < 1e-9);
    CHECK(d.aoi_num == aois.size());
    const auto [afn_mean, afn_std] = oracles::twoPassMeanStd(aoi_counts);
    CHECK(std::abs(*d.aoi_fixnum_mean - afn_mean) < 1e-9);
    CHECK(std::abs(*d.aoi_fixnum_std - afn_std) < 1e-9);

    // AOI fixation counts partition the clustered fixations.
    double aoi_total = 0.0;
    for (double c : aoi_counts) aoi_total += c;
    CHECK(aoi_total == static_cast<double>(pooled.size()));
}

TEST_CASE("indices are invariant to recording order") {
    const Recording a = randomRecording("s1", 5, 11);
    const Recording b = randomRecording("s2", 7, 12);
    const Recording c = randomRecording("s3", 6, 13);
    const AoiSet aois = clusterAoi(pooledTimeOrdered({&a, &b, &c}), 80.0);
    const DescriptiveIndices d1 = descriptiveIndices({&a, &b, &c}, aois);
    const DescriptiveIndices d2 = descriptiveIndices({&c, &a, &b}, aois);
    CHECK(d1.fix_num == d2.fix_num);
    CHECK(*d1.dur_mean_ms == doctest::Approx(*d2.dur_mean_ms).epsilon(1e-12));
    CHECK(*d1.sacc_len_std_px == doctest::Approx(*d2.sacc_len_std_px).epsilon(1e-12));
}

TEST_CASE("duration stats ignore positions; saccade stats survive translation") {
    Recording rec = randomRecording("s1", 9, 55);
    const AoiSet aois = clusterAoi(rec.fixations, 80.0);
    const DescriptiveIndices base = descriptiveIndices({&rec}, aois);

    Recording moved = rec;
    for (Fixation& f : moved.fixations) {
        f.x_px += 37.5;
        f.y_px -= 12.25;
    }
    const AoiSet moved_aois = clusterAoi(moved.fixations, 80.0);
    const DescriptiveIndices shifted = descriptiveIndices({&moved}, moved_aois);
    CHECK(*base.dur_mean_ms == *shifted.dur_mean_ms);
    CHECK(*base.dur_std_ms == *shifted.dur_std_ms);
    CHECK(*base.sacc_len_mean_px == doctest::Approx(*shifted.sacc_len_mean_px).epsilon(1e-12));
    CHECK(*base.sacc_len_std_px == doctest::Approx(*shifted.sacc_len_std_px).epsilon(1e-12));
}

TEST_CASE("small samples leave stats absent") {
    Recording one{"s1", "p1", {{0, 150, 50, 50}}};
    const AoiSet aois = clusterAoi(one.fixations, 80.0);
    const DescriptiveIndices d = descriptiveIndices({&one}, aois);
    CHECK(d.fix_num == 1);
    CHECK(d.dur_mean_ms.has_value());
    CHECK_FALSE(d.dur_std_ms.has_value());
    CHECK_FALSE(d.sacc_len_mean_px.has_value()); // no saccades at all
    CHECK_FALSE(d.sacc_len_std_px.has_value());
    CHECK(d.aoi_num == 1);
    CHECK(d.aoi_fixnum_mean.has_value());
    CHECK_FALSE(d.aoi_fixnum_std.has_value());
}
