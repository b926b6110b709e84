#include "gazent/gaze_data.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <tuple>

#include "doctest.h"
#include "gazent/format_util.hpp"
#include "gazent/synthetic.hpp"

using namespace gazent;

namespace {

const char* kHeader = "subject_id\tpage_id\tstart_ms\tduration_ms\tx\ty\n";

Dataset parseText(const std::string& body, ScreenFormat screen = {1280, 800}) {
    std::istringstream in(std::string(kHeader) + body);
    return parseFixationTable(in, screen);
}

} // namespace

TEST_CASE("parse groups rows into one recording") {
    const auto ds = parseText(
        "s1\tp1\t0\t200\t100\t100\n"
        "s1\tp1\t250\t150\t300\t400\n"
        "s1\tp1\t450\t100\t500\t600\n");
    REQUIRE(ds.recordings().size() == 1);
    CHECK(ds.recordings()[0].fixations.size() == 3);
    CHECK(ds.pageIds() == std::vector<std::string>{"p1"});
    CHECK(ds.subjectIds() == std::vector<std::string>{"s1"});
    CHECK(ds.offScreenCount() == 0);
}

TEST_CASE("non-positive duration is rejected naming the duration") {
    CHECK_THROWS_WITH_AS(parseText("s1\tp1\t100\t-5\t10\t10\n"),
                         doctest::Contains("duration"), ValidationError);
    CHECK_THROWS_AS(parseText("s1\tp1\t100\t0\t10\t10\n"), ValidationError);
}

TEST_CASE("parse errors carry line numbers") {
    CHECK_THROWS_AS(parseText("s1\tp1\t100\t50\t10\n"), ParseError);        // 5 fields
    CHECK_THROWS_AS(parseText("s1\tp1\tabc\t50\t10\t10\n"), ParseError);    // non-numeric
    CHECK_THROWS_AS(parseText("s1\tp1\t1e\t50\t10\t10\n"), ParseError);     // trailing junk
    try {
        parseText("s1\tp1\t0\t50\t10\t10\ns1\tp1\tx\t50\t10\t10\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    std::istringstream bad_header("subject\tpage\tstart\tdur\tx\ty\n");
    CHECK_THROWS_AS(parseFixationTable(bad_header, {1280, 800}), ParseError);
}

TEST_CASE("duplicate (subject, page, start) is a validation error") {
    CHECK_THROWS_AS(parseText("s1\tp1\t100\t50\t10\t10\n"
                              "s1\tp1\t100\t60\t20\t20\n"),
                    ValidationError);
}

TEST_CASE("off-screen fixations are kept and counted") {
    const auto ds = parseText(
        "s1\tp1\t0\t100\t-5\t100\n"
        "s1\tp1\t200\t100\t100\t100\n"
        "s1\tp1\t400\t100\t1279.5\t100\n"); // beyond last cell center
    CHECK(ds.offScreenCount() == 2);
    CHECK(ds.recordings()[0].fixations.size() == 3);
}

TEST_CASE("shuffled multi-subject file matches sort-then-serialize oracle") {
    struct Row {
        std::string subject, page;
        double start, dur, x, y;
    };
    std::vector<Row> rows;
    std::mt19937_64 gen(7);
    for (const char* subject : {"s2", "s1"})
        for (const char* page : {"pB", "pA"})
            for (int k = 0; k < 5; ++k)
                rows.push_back(Row{subject, page, 100.0 * k + (gen() % 50), 80.0 + (gen() % 100),
                                   static_cast<double>(gen() % 1280),
                                   static_cast<double>(gen() % 800)});
    std::shuffle(rows.begin(), rows.end(), gen);

    std::string body;
    for (const Row& r : rows)
        body += r.subject + "\t" + r.page + "\t" + toShortest(r.start) + "\t" + toShortest(r.dur) +
                "\t" + toShortest(r.x) + "\t" + toShortest(r.y) + "\n";
    const auto ds = parseText(body);
    REQUIRE(ds.recordings().size() == 4);
    for (const Recording& rec : ds.recordings())
        CHECK(std::is_sorted(rec.fixations.begin(), rec.fixations.end(),
                             [](const Fixation& a, const Fixation& b) {
                                 return a.start_ms < b.start_ms;
                             }));

    // Independent oracle: sort the raw rows, then lay the file out directly.
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return std::tie(a.subject, a.page, a.start) < std::tie(b.subject, b.page, b.start);
    });
    std::string expected = kHeader;
    for (const Row& r : rows)
        expected += r.subject + "\t" + r.page + "\t" + toShortest(r.start) + "\t" +
                    toShortest(r.dur) + "\t" + toShortest(r.x) + "\t" + toShortest(r.y) + "\n";
    std::ostringstream serialized;
    serializeFixationTable(ds, serialized);
    CHECK(serialized.str() == expected);
}

TEST_CASE("round trip: parse(serialize(d)) == d on a generated dataset") {
    const auto specs = makeNoiseLadder(std::vector<double>{0.1, 0.6}, 2, {640, 400}, 11);
    const Dataset ds = generateDataset(specs, 5, {640, 400}, 22);
    std::ostringstream out;
    serializeFixationTable(ds, out);
    std::istringstream in(out.str());
    const Dataset back = parseFixationTable(in, {640, 400});
    CHECK(back == ds);
    CHECK(back.offScreenCount() == ds.offScreenCount());
}

TEST_CASE("aggregateScores fractions and classes") {
    std::map<std::pair<std::string, std::string>, Verdict> j;
    for (int i = 0; i < 30; ++i)
        j.emplace(std::make_pair("s" + std::to_string(i), "p1"),
                  i < 18 ? Verdict::Good : Verdict::Bad);
    for (int i = 0; i < 4; ++i)
        j.emplace(std::make_pair("s" + std::to_string(i), "p2"), Verdict::Bad);
    for (int i = 0; i < 30; ++i)
        j.emplace(std::make_pair("s" + std::to_string(i), "p3"),
                  i < 15 ? Verdict::Good : Verdict::Bad);
    const auto scores = aggregateScores(RatingTable(std::move(j)));
    CHECK(scores.at("p1").score == doctest::Approx(0.6));
    CHECK(scores.at("p1").cls == PageClass::Good);
    CHECK(scores.at("p2").score == 0.0);
    CHECK(scores.at("p2").cls == PageClass::Bad);
    CHECK(scores.at("p3").score == 0.5);
    CHECK(scores.at("p3").cls == PageClass::Unclassified);
}

TEST_CASE("ratings parsing rejects bad verdicts and duplicates") {
    std::istringstream ok("subject_id,page_id,verdict\ns1,p1,good\ns2,p1,bad\n");
    const auto table = parseRatingsCsv(ok);
    CHECK(table.judgments().size() == 2);

    std::istringstream bad_verdict("subject_id,page_id,verdict\ns1,p1,fine\n");
    CHECK_THROWS_AS(parseRatingsCsv(bad_verdict), ParseError);
    std::istringstream dup("subject_id,page_id,verdict\ns1,p1,good\ns1,p1,bad\n");
    CHECK_THROWS_AS(parseRatingsCsv(dup), ValidationError);
}

TEST_CASE("ratings order does not change aggregation") {
    std::istringstream a("subject_id,page_id,verdict\ns1,p1,good\ns2,p1,bad\ns3,p1,good\n");
    std::istringstream b("subject_id,page_id,verdict\ns3,p1,good\ns1,p1,good\ns2,p1,bad\n");
    CHECK(aggregateScores(parseRatingsCsv(a)).at("p1").score ==
          aggregateScores(parseRatingsCsv(b)).at("p1").score);
}

TEST_CASE("sliceRecording clips and keeps the original intact") {
    Recording rec{"s1", "p1",
                  {{0, 300, 10, 10}, {400, 200, 20, 20}, {900, 400, 30, 30}}};
    const Recording at0 = sliceRecording(rec, 0.0);
    CHECK(at0.fixations.empty());

    const Recording full = sliceRecording(rec, 5000.0);
    CHECK(full == rec);

    const Recording clipped = sliceRecording(rec, 1000.0);
    REQUIRE(clipped.fixations.size() == 3);
    CHECK(clipped.fixations[2].duration_ms == doctest::Approx(100.0));
    CHECK(rec.fixations[2].duration_ms == 400.0); // untouched

    // A fixation starting exactly at t is excluded.
    CHECK(sliceRecording(rec, 900.0).fixations.size() == 2);
}

TEST_CASE("slice is monotone in t") {
    const auto specs = makeNoiseLadder(std::vector<double>{0.3}, 1, {640, 400}, 3);
    const Dataset ds = generateDataset(specs, 3, {640, 400}, 5);
    const Recording& rec = ds.recordings().front();
    for (double t1 = 0.0; t1 <= 3000.0; t1 += 375.0) {
        const double t2 = t1 + 375.0;
        const Recording a = sliceRecording(rec, t1);
        const Recording b = sliceRecording(rec, t2);
        REQUIRE(a.fixations.size() <= b.fixations.size());
        for (std::size_t i = 0; i < a.fixations.size(); ++i) {
            CHECK(a.fixations[i].start_ms == b.fixations[i].start_ms);
            CHECK(a.fixations[i].duration_ms <= b.fixations[i].duration_ms);
        }
    }
}
