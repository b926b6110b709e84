#include "gazent/attention_map.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "gazent/rng.hpp"
#include "gazent/synthetic.hpp"
#include "support/oracles.hpp"

using namespace gazent;

namespace {

// Frozen by an independent full-grid summation (numpy) of the discretized
// sigma=30 kernel centered at (640, 400) on a 1280x800 grid; analytically
// log2(2*pi*e*sigma^2) = 13.9079723615783.
constexpr double kSingleKernelEntropyBits = 13.907972361578;

std::vector<Fixation> randomFixations(int count, double w, double h, std::uint64_t seed,
                                      double margin = 0.0) {
    std::mt19937_64 gen(seed);
    std::vector<Fixation> out;
    double t = 0.0;
    for (int i = 0; i < count; ++i) {
        Fixation f;
        f.start_ms = t;
        f.duration_ms = 100.0 + 400.0 * uniformDouble(gen);
        f.x_px = margin + uniformDouble(gen) * (w - 2.0 * margin);
        f.y_px = margin + uniformDouble(gen) * (h - 2.0 * margin);
        out.push_back(f);
        t += f.duration_ms + 30.0;
    }
    return out;
}

} // namespace

TEST_CASE("shannon entropy of reference distributions") {
    CHECK(shannonEntropyBits(std::vector<double>{0.25, 0.25, 0.25, 0.25}) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(shannonEntropyBits(std::vector<double>{1.0, 0.0, 0.0}) == 0.0);
    CHECK(shannonEntropyBits(std::vector<double>{0.5, 0.25, 0.25}) ==
          doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("shannon entropy contract violations") {
    CHECK_THROWS_AS(shannonEntropyBits(std::vector<double>{0.5, -0.1, 0.6}), ComputeError);
    CHECK_THROWS_AS(shannonEntropyBits(std::vector<double>{0.4, 0.4}), ComputeError);
    CHECK_THROWS_AS(shannonEntropyBits(std::vector<double>{}), ComputeError);
}

TEST_CASE("uniform map reaches the log2(W*H) ceiling") {
    const int w = 1280, h = 800;
    Eigen::ArrayXXd cells =
        Eigen::ArrayXXd::Constant(h, w, 1.0 / (static_cast<double>(w) * h));
    const AttentionMap map(std::move(cells));
    CHECK(vae(map) == doctest::Approx(std::log2(1024000.0)).epsilon(1e-12));

    Eigen::ArrayXXd delta = Eigen::ArrayXXd::Zero(40, 40);
    delta(13, 29) = 1.0;
    CHECK(vae(AttentionMap(std::move(delta))) == 0.0);
}

TEST_CASE("single fixation: unit mass, argmax at the fixation") {
    const std::vector<Fixation> fix = {{0.0, 200.0, 640.0, 400.0}};
    const AttentionMap map = buildAttentionMap(fix, {30.0, 5.0}, 1280, 800);
    CHECK(map.cells().sum() == doctest::Approx(1.0).epsilon(1e-9));
    Eigen::Index max_row = 0, max_col = 0;
    map.cells().maxCoeff(&max_row, &max_col);
    CHECK(max_row == 400);
    CHECK(max_col == 640);
}

TEST_CASE("accumulation is linear in duration") {
    const std::vector<Fixation> two = {{0.0, 150.0, 300.0, 200.0}, {200.0, 150.0, 300.0, 200.0}};
    const std::vector<Fixation> one = {{0.0, 300.0, 300.0, 200.0}};
    const AttentionMap a = buildAttentionMap(two, {20.0, 5.0}, 640, 400);
    const AttentionMap b = buildAttentionMap(one, {20.0, 5.0}, 640, 400);
    CHECK(((a.cells() - b.cells()).abs().maxCoeff()) < 1e-15);
}

TEST_CASE("single central kernel matches the frozen direct-summation value") {
    const std::vector<Fixation> fix = {{0.0, 250.0, 640.0, 400.0}};
    const double bits = vae(buildAttentionMap(fix, {30.0, 8.0}, 1280, 800));
    CHECK(bits == doctest::Approx(kSingleKernelEntropyBits).epsilon(1e-9));
    CHECK(std::abs(bits - kSingleKernelEntropyBits) < 1e-6);
}

TEST_CASE("truncated build tracks the full-grid reference within 0.01 bits") {
    const auto fix = randomFixations(50, 1280.0, 800.0, 99);
    const double truncated = vae(buildAttentionMap(fix, {30.0, 5.0}, 1280, 800));
    const double full = oracleFullGridEntropyBits(fix, 30.0, 1280, 800);
    CHECK(std::abs(truncated - full) < 0.01);
}

TEST_CASE("map and entropy are translation invariant away from borders") {
    // Keep every truncation box in-grid at both positions: sigma 8 at
    // truncation 4 needs a 32 px margin.
    const auto fix = randomFixations(20, 200.0, 150.0, 3, 40.0);
    std::vector<Fixation> shifted = fix;
    for (Fixation& f : shifted) {
        f.x_px += 170.0;
        f.y_px += 120.0;
    }
    const KernelConfig kernel{8.0, 4.0};
    const double a = vae(buildAttentionMap(fix, kernel, 640, 400));
    const double b = vae(buildAttentionMap(shifted, kernel, 640, 400));
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
}

TEST_CASE("common duration scaling cancels out") {
    const auto fix = randomFixations(15, 600.0, 380.0, 17);
    std::vector<Fixation> scaled = fix;
    for (Fixation& f : scaled) f.duration_ms *= 7.5;
    const KernelConfig kernel{12.0, 5.0};
    const AttentionMap a = buildAttentionMap(fix, kernel, 640, 400);
    const AttentionMap b = buildAttentionMap(scaled, kernel, 640, 400);
    CHECK(((a.cells() - b.cells()).abs().maxCoeff()) < 1e-12);
}

TEST_CASE("error paths: empty input vs all mass off-grid") {
    CHECK_THROWS_AS(buildAttentionMap({}, {30.0, 5.0}, 640, 400), ValidationError);
    const std::vector<Fixation> far = {{0.0, 100.0, 5000.0, 5000.0}};
    CHECK_THROWS_AS(buildAttentionMap(far, {30.0, 5.0}, 640, 400), ComputeError);
}

TEST_CASE("kernel config bounds") {
    CHECK_THROWS_AS(buildAttentionMap(randomFixations(1, 100, 100, 1), {0.0, 5.0}, 100, 100),
                    ValidationError);
    CHECK_THROWS_AS(buildAttentionMap(randomFixations(1, 100, 100, 1), {30.0, 2.0}, 100, 100),
                    ValidationError);
}

TEST_CASE("identical recordings pool to the individual map, rvae == 1") {
    const auto fix = randomFixations(10, 600.0, 380.0, 31);
    Recording r1{"s1", "p1", fix};
    Recording r2{"s2", "p1", fix};
    Recording r3{"s3", "p1", fix};
    const std::vector<const Recording*> recs = {&r1, &r2, &r3};
    const PageVaeSummary s = pageVaeSummary(recs, {25.0, 5.0}, 640, 400);
    CHECK(s.rvae == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(s.vae_bits == doctest::Approx(s.bvae_bits).epsilon(1e-9));
    CHECK(s.included_subjects.size() == 3);
}

TEST_CASE("disjoint far-apart hotspots push rvae above 1") {
    // Three subjects on pairwise-disjoint spots separated far beyond sigma.
    auto spot = [](double x, double y) {
        std::vector<Fixation> fix;
        for (int i = 0; i < 6; ++i)
            fix.push_back({i * 300.0, 200.0, x + 3.0 * i, y - 2.0 * i});
        return fix;
    };
    Recording r1{"s1", "p1", spot(150.0, 150.0)};
    Recording r2{"s2", "p1", spot(1100.0, 150.0)};
    Recording r3{"s3", "p1", spot(640.0, 650.0)};
    const std::vector<const Recording*> recs = {&r1, &r2, &r3};
    const PageVaeSummary s = pageVaeSummary(recs, {30.0, 5.0}, 1280, 800);
    // Oracle side: the pooled map spreads over all three spots, so its
    // entropy must exceed every individual entropy.
    for (double individual : s.individual_vae_bits) CHECK(s.vae_bits > individual);
    CHECK(s.rvae > 1.0);
}

TEST_CASE("subjects without usable fixations are excluded, n < 2 is an error") {
    Recording good1{"s1", "p1", randomFixations(5, 600.0, 380.0, 41)};
    Recording good2{"s2", "p1", randomFixations(5, 600.0, 380.0, 42)};
    Recording off{"s3", "p1", {{0.0, 100.0, 9000.0, 9000.0}}};
    const std::vector<const Recording*> recs = {&good1, &good2, &off};
    const PageVaeSummary s = pageVaeSummary(recs, {20.0, 5.0}, 640, 400);
    CHECK(s.excluded_subjects == std::vector<std::string>{"s3"});
    CHECK(s.included_subjects.size() == 2);

    const std::vector<const Recording*> starved = {&good1, &off};
    CHECK_THROWS_AS(pageVaeSummary(starved, {20.0, 5.0}, 640, 400), ComputeError);
}

TEST_CASE("entropy never exceeds the grid ceiling on random maps") {
    std::mt19937_64 gen(2024);
    for (int trial = 0; trial < 25; ++trial) {
        const int w = 64 + static_cast<int>(uniformIndex(gen, 200));
        const int h = 48 + static_cast<int>(uniformIndex(gen, 160));
        const int n = 1 + static_cast<int>(uniformIndex(gen, 40));
        const double sigma = 3.0 + 20.0 * uniformDouble(gen);
        const auto fix = randomFixations(n, w, h, gen());
        const double bits = vae(buildAttentionMap(fix, {sigma, 5.0}, w, h));
        CHECK(bits >= 0.0);
        CHECK(bits <= std::log2(static_cast<double>(w) * h) + 1e-12);
    }
}

TEST_CASE("PGM export is byte-exact with the brightest pixel at the peak") {
    const std::vector<Fixation> fix = {{0.0, 200.0, 100.0, 60.0}};
    const AttentionMap map = buildAttentionMap(fix, {10.0, 5.0}, 160, 120);
    std::ostringstream a, b;
    writePgm(map, a);
    writePgm(map, b);
    const std::string bytes = a.str();
    CHECK(bytes == b.str());
    const std::string header = "P5\n160 120\n255\n";
    REQUIRE(bytes.substr(0, header.size()) == header);
    const std::size_t offset = header.size() + 60u * 160u + 100u;
    CHECK(static_cast<unsigned char>(bytes[offset]) == 255);
    CHECK(bytes.size() == header.size() + 160u * 120u);
}
