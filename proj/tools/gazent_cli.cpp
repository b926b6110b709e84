// gazent: gaze-analytics CLI.
// Commands: report | heatmap | sweep | synth | aoi.
// Exit codes: 0 success, 1 usage, 2 input validation, 3 computation error.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "gazent/aoi_transitions.hpp"
#include "gazent/attention_map.hpp"
#include "gazent/format_util.hpp"
#include "gazent/gaze_data.hpp"
#include "gazent/report.hpp"
#include "gazent/stat_inference.hpp"
#include "gazent/synthetic.hpp"

namespace {

using namespace gazent;

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void writeFile(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ComputeError("cannot write '" + path + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw ComputeError("write failed for '" + path + "'");
}

ScreenFormat parseScreen(const std::string& text) {
    const std::size_t x = text.find('x');
    if (x == std::string::npos || x == 0 || x + 1 >= text.size())
        throw ValidationError("--screen must look like 1280x800");
    try {
        return ScreenFormat{std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
    } catch (const std::exception&) {
        throw ValidationError("--screen must look like 1280x800");
    }
}

// Grid syntax: either "lo:hi:step" (inclusive of hi when the step lands on
// it) or a comma-separated list.
std::vector<double> parseGrid(const std::string& text) {
    std::vector<double> out;
    const auto parseOne = [](const std::string& s) {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    };
    try {
        if (text.find(':') != std::string::npos) {
            std::vector<std::string> parts;
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ':')) parts.push_back(item);
            if (parts.size() != 3) throw std::invalid_argument(text);
            const double lo = parseOne(parts[0]);
            const double hi = parseOne(parts[1]);
            const double step = parseOne(parts[2]);
            if (!(step > 0.0) || hi < lo) throw std::invalid_argument(text);
            for (double v = lo; v <= hi + 1e-9; v += step) out.push_back(v);
            return out;
        }
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(parseOne(item));
    } catch (const std::exception&) {
        throw ValidationError("bad grid '" + text + "': use lo:hi:step or v1,v2,...");
    }
    if (out.empty()) throw ValidationError("empty grid '" + text + "'");
    return out;
}

struct CommonOptions {
    std::string fixations_path;
    std::string ratings_path;
    std::string screen_text = "1280x800";
    double sigma = 30.0;
    double truncation = 5.0;
    double aoi_radius = 80.0;
    std::uint64_t seed = 0;
    double slice_ms = -1.0; // < 0 means "no slice"
    std::string prior_mode = "transition_sources";
    int threads = 0; // 0 -> hardware concurrency
};

int effectiveThreads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::optional<double> sliceOf(const CommonOptions& opt) {
    if (opt.slice_ms < 0.0) return std::nullopt;
    return opt.slice_ms;
}

Dataset loadDataset(const CommonOptions& opt, std::string* digest_out = nullptr) {
    const std::string bytes = readFile(opt.fixations_path);
    if (digest_out) *digest_out = fnv1a64Digest(bytes);
    std::istringstream in(bytes);
    Dataset dataset = parseFixationTable(in, parseScreen(opt.screen_text));
    if (dataset.offScreenCount() > 0)
        std::cerr << "note: " << dataset.offScreenCount()
                  << " off-screen fixation(s) retained and flagged\n";
    return dataset;
}

RatingTable loadRatings(const CommonOptions& opt, std::string* digest_out = nullptr) {
    const std::string bytes = readFile(opt.ratings_path);
    if (digest_out) *digest_out = fnv1a64Digest(bytes);
    std::istringstream in(bytes);
    return parseRatingsCsv(in);
}

// --------------------------------------------------------------------------
// report
// --------------------------------------------------------------------------

int runReport(const CommonOptions& opt, const std::string& out_path,
              const std::string& descriptive_csv_path) {
    ReportConfig cfg;
    cfg.kernel = KernelConfig{opt.sigma, opt.truncation};
    cfg.aoi_radius_px = opt.aoi_radius;
    cfg.seed = opt.seed;
    cfg.slice_ms = sliceOf(opt);
    cfg.prior_mode = opt.prior_mode == "occurrences" ? PriorMode::Occurrences
                                                     : PriorMode::TransitionSources;
    cfg.threads = effectiveThreads(opt.threads);

    const Dataset dataset = loadDataset(opt, &cfg.fixations_digest);
    const RatingTable ratings = loadRatings(opt, &cfg.ratings_digest);
    const MetricsReport report = buildMetricsReport(dataset, ratings, cfg);
    writeFile(out_path, serializeReportJson(report));
    if (!descriptive_csv_path.empty())
        writeFile(descriptive_csv_path, serializeDescriptiveCsv(report));
    return 0;
}

// --------------------------------------------------------------------------
// heatmap
// --------------------------------------------------------------------------

int runHeatmap(const CommonOptions& opt, const std::string& page, const std::string& subject,
               const std::string& out_path) {
    const Dataset dataset = loadDataset(opt);
    const auto page_recs = dataset.pageRecordings(page);
    if (page_recs.empty()) throw ValidationError("unknown page '" + page + "'");

    std::vector<Fixation> fixations;
    bool subject_seen = subject.empty();
    for (const Recording* rec : page_recs) {
        if (!subject.empty() && rec->subject_id != subject) continue;
        subject_seen = true;
        Recording sliced;
        const Recording* source = rec;
        if (const auto t = sliceOf(opt)) {
            sliced = sliceRecording(*rec, *t);
            source = &sliced;
        }
        fixations.insert(fixations.end(), source->fixations.begin(), source->fixations.end());
    }
    if (!subject_seen)
        throw ValidationError("subject '" + subject + "' has no recording on page '" + page + "'");
    if (fixations.empty())
        throw ValidationError("no fixations for page '" + page + "'" +
                              (subject.empty() ? "" : " and subject '" + subject + "'"));

    const AttentionMap map = buildAttentionMap(fixations, KernelConfig{opt.sigma, opt.truncation},
                                               dataset.screenWidth(), dataset.screenHeight());
    std::ostringstream out;
    writePgm(map, out);
    writeFile(out_path, out.str());
    return 0;
}

// --------------------------------------------------------------------------
// sweep
// --------------------------------------------------------------------------

int runSweep(const CommonOptions& opt, const std::string& kind, const std::string& points_text,
             int repetitions, const std::string& out_path, const std::string& curves_out) {
    const Dataset dataset = loadDataset(opt);
    const RatingTable ratings = loadRatings(opt);
    const KernelConfig kernel{opt.sigma, opt.truncation};
    const int threads = effectiveThreads(opt.threads);

    SweepCurve curve;
    if (kind == "time") {
        const std::vector<double> grid =
            parseGrid(points_text.empty() ? "250:3000:250" : points_text);
        curve = sweepTime(dataset, ratings, kernel, grid, threads);
    } else if (kind == "sigma") {
        const std::vector<double> grid =
            parseGrid(points_text.empty() ? "10:120:10" : points_text);
        curve = sweepSigma(dataset, ratings, grid, opt.truncation, threads);
    } else { // subjects
        std::vector<int> sizes;
        if (points_text.empty()) {
            const int n = static_cast<int>(dataset.subjectIds().size());
            for (int s = 2; s < n; ++s) sizes.push_back(s);
            if (sizes.empty()) throw ValidationError("not enough subjects to sweep");
        } else {
            for (double v : parseGrid(points_text)) {
                const int s = static_cast<int>(std::llround(v));
                if (std::abs(v - s) > 1e-9)
                    throw ValidationError("subject counts must be integers");
                sizes.push_back(s);
            }
        }
        curve = sweepSubjects(dataset, ratings, kernel, sizes, repetitions, opt.seed, threads);
    }

    std::ostringstream out;
    writeSweepCsv(curve, out);
    writeFile(out_path, out.str());
    if (!curves_out.empty()) {
        if (kind != "time")
            throw ValidationError("--curves-out is only available for time sweeps");
        std::ostringstream pages;
        writePageCurvesCsv(curve, pages);
        writeFile(curves_out, pages.str());
    }
    return 0;
}

// --------------------------------------------------------------------------
// synth
// --------------------------------------------------------------------------

struct SynthSpecFile {
    int subjects = 0;
    ScreenFormat screen{1280, 800};
    std::vector<SyntheticPageSpec> pages;
};

std::string trimmed(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<Hotspot> parseHotspots(const std::string& value, long line) {
    std::vector<Hotspot> out;
    std::stringstream groups(value);
    std::string group;
    while (std::getline(groups, group, ';')) {
        group = trimmed(group);
        if (group.empty()) continue;
        std::stringstream fields(group);
        std::string field;
        std::vector<double> numbers;
        try {
            while (std::getline(fields, field, ',')) numbers.push_back(std::stod(trimmed(field)));
        } catch (const std::exception&) {
            throw ParseError(line, "bad hotspot '" + group + "', want cx,cy,spread,weight");
        }
        if (numbers.size() != 4)
            throw ParseError(line, "hotspot '" + group + "' needs cx,cy,spread,weight");
        out.push_back(Hotspot{numbers[0], numbers[1], numbers[2], numbers[3]});
    }
    return out;
}

SynthSpecFile parseSynthSpec(const std::string& text) {
    SynthSpecFile spec;
    struct PageDefaults {
        int fixations_per_subject = 12;
        double duration_median_ms = 250.0;
        double duration_sigma_log = 0.5;
    } defaults;

    SyntheticPageSpec* current_page = nullptr;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    long line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string stripped = trimmed(raw);
        if (stripped.empty()) continue;

        if (stripped.front() == '[') {
            if (stripped.back() != ']') throw ParseError(line, "unterminated section header");
            section = stripped.substr(1, stripped.size() - 2);
            if (section == "dataset") {
                current_page = nullptr;
            } else if (section.rfind("page.", 0) == 0) {
                const std::string page_id = section.substr(5);
                if (page_id.empty()) throw ParseError(line, "empty page id in section header");
                SyntheticPageSpec page;
                page.page_id = page_id;
                page.fixations_per_subject = defaults.fixations_per_subject;
                page.duration_median_ms = defaults.duration_median_ms;
                page.duration_sigma_log = defaults.duration_sigma_log;
                page.noise_level = -1.0; // must be set explicitly
                spec.pages.push_back(std::move(page));
                current_page = &spec.pages.back();
            } else {
                throw ParseError(line, "unknown section [" + section + "]");
            }
            continue;
        }

        const auto eq = stripped.find('=');
        if (eq == std::string::npos) throw ParseError(line, "expected key = value");
        const std::string key = trimmed(stripped.substr(0, eq));
        const std::string value = trimmed(stripped.substr(eq + 1));
        if (key.empty() || value.empty()) throw ParseError(line, "expected key = value");

        const auto numeric = [&](const std::string& v) {
            try {
                std::size_t pos = 0;
                const double d = std::stod(v, &pos);
                if (pos != v.size()) throw std::invalid_argument(v);
                return d;
            } catch (const std::exception&) {
                throw ParseError(line, "field '" + key + "': bad number '" + v + "'");
            }
        };

        if (current_page == nullptr) {
            if (section.empty()) throw ParseError(line, "key outside any section");
            if (key == "subjects")
                spec.subjects = static_cast<int>(numeric(value));
            else if (key == "screen")
                spec.screen = parseScreen(value);
            else if (key == "fixations_per_subject")
                defaults.fixations_per_subject = static_cast<int>(numeric(value));
            else if (key == "duration_median_ms")
                defaults.duration_median_ms = numeric(value);
            else if (key == "duration_sigma_log")
                defaults.duration_sigma_log = numeric(value);
            else
                throw ParseError(line, "unknown [dataset] field '" + key + "'");
        } else {
            if (key == "class") {
                if (value == "good")
                    current_page->declared_class = Verdict::Good;
                else if (value == "bad")
                    current_page->declared_class = Verdict::Bad;
                else
                    throw ParseError(line,
                                     "field 'class' must be good or bad, got '" + value + "'");
            } else if (key == "noise") {
                current_page->noise_level = numeric(value);
            } else if (key == "hotspots") {
                current_page->hotspots = parseHotspots(value, line);
            } else if (key == "fixations_per_subject") {
                current_page->fixations_per_subject = static_cast<int>(numeric(value));
            } else if (key == "duration_median_ms") {
                current_page->duration_median_ms = numeric(value);
            } else if (key == "duration_sigma_log") {
                current_page->duration_sigma_log = numeric(value);
            } else {
                throw ParseError(line, "unknown page field '" + key + "'");
            }
        }
    }

    if (spec.subjects < 2)
        throw ValidationError("[dataset] subjects must be >= 2 (got " +
                              std::to_string(spec.subjects) + ")");
    if (spec.pages.empty()) throw ValidationError("spec defines no [page.*] sections");
    for (const SyntheticPageSpec& page : spec.pages) {
        if (page.noise_level < 0.0)
            throw ValidationError("page '" + page.page_id + "': field 'noise' is required");
        page.validate();
    }
    return spec;
}

int runSynth(const std::string& spec_path, std::uint64_t seed, const std::string& out_dir) {
    const SynthSpecFile spec = parseSynthSpec(readFile(spec_path));
    const Dataset dataset = generateDataset(spec.pages, spec.subjects, spec.screen, seed);
    const RatingTable ratings = ratingsFor(spec.pages, spec.subjects);

    std::filesystem::create_directories(out_dir);
    std::ostringstream fixations;
    serializeFixationTable(dataset, fixations);
    writeFile((std::filesystem::path(out_dir) / "fixations.tsv").string(), fixations.str());
    std::ostringstream ratings_out;
    serializeRatingsCsv(ratings, ratings_out);
    writeFile((std::filesystem::path(out_dir) / "ratings.csv").string(), ratings_out.str());
    return 0;
}

// --------------------------------------------------------------------------
// aoi
// --------------------------------------------------------------------------

int runAoi(const CommonOptions& opt, const std::string& page, const std::string& aoi_out,
           const std::string& seq_out) {
    const Dataset dataset = loadDataset(opt);
    auto page_recs = dataset.pageRecordings(page);
    if (page_recs.empty()) throw ValidationError("unknown page '" + page + "'");

    std::vector<Recording> sliced_store;
    if (const auto t = sliceOf(opt)) {
        sliced_store.reserve(page_recs.size());
        for (const Recording* rec : page_recs) sliced_store.push_back(sliceRecording(*rec, *t));
        page_recs.clear();
        for (const Recording& rec : sliced_store) page_recs.push_back(&rec);
    }

    const auto pooled = pooledTimeOrdered(page_recs);
    if (pooled.empty()) throw ValidationError("no fixations for page '" + page + "'");
    const AoiSet aois = clusterAoi(pooled, opt.aoi_radius);

    if (!aoi_out.empty()) {
        std::ostringstream out;
        writeAoiTsv(aois, out);
        writeFile(aoi_out, out.str());
    }
    if (!seq_out.empty()) {
        std::vector<AoiSequence> sequences;
        sequences.reserve(page_recs.size());
        for (const Recording* rec : page_recs) sequences.push_back(aoiSequence(*rec, aois));
        std::ostringstream out;
        writeSequencesTsv(sequences, out);
        writeFile(seq_out, out.str());
    }
    return 0;
}

void addCommonInputOptions(CLI::App* cmd, CommonOptions& opt, bool needs_ratings) {
    cmd->add_option("--fixations", opt.fixations_path, "Fixation TSV path")->required();
    if (needs_ratings)
        cmd->add_option("--ratings", opt.ratings_path, "Ratings CSV path")->required();
    cmd->add_option("--screen", opt.screen_text, "Screen size WxH (default 1280x800)");
    cmd->add_option("--slice-ms", opt.slice_ms,
                    "Keep only fixations accumulated before this time");
    cmd->add_option("--threads", opt.threads, "Worker threads (default: hardware)");
}

void addKernelOptions(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--sigma", opt.sigma, "Gaussian kernel sigma in px (default 30)");
    cmd->add_option("--truncation", opt.truncation,
                    "Kernel cutoff in multiples of sigma (default 5)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gaze-analytics toolkit: attention-map entropy, AOI transition entropy,\n"
                 "descriptive indices and the statistical layer that links them to page\n"
                 "ratings"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::string out_path, page, subject, points_text, curves_out, spec_path, out_dir;
    std::string aoi_out, seq_out, sweep_kind, descriptive_csv;
    int repetitions = 20;

    CLI::App* report = app.add_subcommand("report", "Full metrics report (JSON)");
    addCommonInputOptions(report, opt, true);
    addKernelOptions(report, opt);
    report->add_option("--aoi-radius", opt.aoi_radius, "AOI clustering radius px (default 80)");
    report->add_option("--seed", opt.seed, "Seed echoed into the report");
    report->add_option("--prior-mode", opt.prior_mode, "transition_sources | occurrences")
        ->check(CLI::IsMember({"transition_sources", "occurrences"}));
    report->add_option("--out", out_path, "Output JSON path")->required();
    report->add_option("--descriptive-csv", descriptive_csv,
                       "Also write the per-page descriptive indices as CSV");

    CLI::App* heatmap = app.add_subcommand("heatmap", "Attention map raster (binary PGM)");
    addCommonInputOptions(heatmap, opt, false);
    addKernelOptions(heatmap, opt);
    heatmap->add_option("--page", page, "Page id")->required();
    heatmap->add_option("--subject", subject, "Restrict to one subject (default: pooled)");
    heatmap->add_option("--out", out_path, "Output PGM path")->required();

    CLI::App* sweep = app.add_subcommand("sweep", "Correlation sweep (CSV)");
    sweep->add_option("kind", sweep_kind, "time | sigma | subjects")
        ->required()
        ->check(CLI::IsMember({"time", "sigma", "subjects"}));
    addCommonInputOptions(sweep, opt, true);
    addKernelOptions(sweep, opt);
    sweep->add_option("--points", points_text,
                      "Axis grid, lo:hi:step or v1,v2,... (kind-specific default)");
    sweep->add_option("--repetitions", repetitions,
                      "Random subsets per size, subjects sweep only (default 20)");
    sweep->add_option("--seed", opt.seed, "Subset sampling seed (subjects sweep)");
    sweep->add_option("--curves-out", curves_out, "Also write per-page curves (time sweep)");
    sweep->add_option("--out", out_path, "Output CSV path")->required();

    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
    synth->add_option("--spec", spec_path, "Page spec file")->required();
    synth->add_option("--seed", opt.seed, "Generator seed");
    synth->add_option("--out-dir", out_dir, "Directory for fixations.tsv + ratings.csv")
        ->required();

    CLI::App* aoi = app.add_subcommand("aoi", "Export AOI table and per-subject sequences (TSV)");
    addCommonInputOptions(aoi, opt, false);
    aoi->add_option("--page", page, "Page id")->required();
    aoi->add_option("--aoi-radius", opt.aoi_radius, "AOI clustering radius px (default 80)");
    aoi->add_option("--aoi-out", aoi_out, "AOI table output path");
    aoi->add_option("--seq-out", seq_out, "Sequence table output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    try {
        if (report->parsed()) return runReport(opt, out_path, descriptive_csv);
        if (heatmap->parsed()) return runHeatmap(opt, page, subject, out_path);
        if (sweep->parsed())
            return runSweep(opt, sweep_kind, points_text, repetitions, out_path, curves_out);
        if (synth->parsed()) return runSynth(spec_path, opt.seed, out_dir);
        if (aoi->parsed()) {
            if (aoi_out.empty() && seq_out.empty())
                throw ValidationError("aoi: give --aoi-out and/or --seq-out");
            return runAoi(opt, page, aoi_out, seq_out);
        }
        std::cerr << "no command\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ComputeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
