#include "gazent/synthetic.hpp"

#include <cmath>
#include <cstdio>

#include "gazent/attention_map.hpp"
#include "gazent/rng.hpp"

namespace gazent {

void SyntheticPageSpec::validate() const {
    if (page_id.empty()) throw ValidationError("synthetic page needs a page_id");
    if (!(noise_level >= 0.0 && noise_level <= 1.0))
        throw ValidationError("page '" + page_id + "': noise_level must be in [0, 1]");
    if (hotspots.empty() && noise_level < 1.0)
        throw ValidationError("page '" + page_id +
                              "': no hotspots but noise_level < 1, fixations have no target");
    for (const Hotspot& h : hotspots) {
        if (!(h.spread_px > 0.0))
            throw ValidationError("page '" + page_id + "': hotspot spread must be > 0");
        if (!(h.weight > 0.0))
            throw ValidationError("page '" + page_id + "': hotspot weight must be > 0");
    }
    if (fixations_per_subject < 1)
        throw ValidationError("page '" + page_id + "': fixations_per_subject must be >= 1");
    if (!(duration_median_ms > 0.0))
        throw ValidationError("page '" + page_id + "': duration_median_ms must be > 0");
    if (!(duration_sigma_log >= 0.0))
        throw ValidationError("page '" + page_id + "': duration_sigma_log must be >= 0");
}

namespace {

std::string subjectName(int index, int n_subjects) {
    const std::string digits = std::to_string(index + 1);
    const std::size_t width = std::to_string(n_subjects).size();
    std::string out = "s";
    if (width > digits.size()) out.append(width - digits.size(), '0');
    out += digits;
    return out;
}

int pickHotspot(const std::vector<Hotspot>& hotspots, std::mt19937_64& gen) {
    double total = 0.0;
    for (const Hotspot& h : hotspots) total += h.weight;
    const double u = uniformDouble(gen) * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < hotspots.size(); ++i) {
        acc += hotspots[i].weight;
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(hotspots.size()) - 1;
}

} // namespace

Dataset generateDataset(std::span<const SyntheticPageSpec> pages, int n_subjects,
                        ScreenFormat screen, std::uint64_t seed) {
    if (pages.empty()) throw ValidationError("generateDataset: no page specs");
    if (n_subjects < 2) throw ValidationError("generateDataset: need at least 2 subjects");
    if (screen.width_px <= 0 || screen.height_px <= 0)
        throw ValidationError("generateDataset: screen dimensions must be positive");
    for (const SyntheticPageSpec& spec : pages) spec.validate();

    std::vector<Recording> recordings;
    recordings.reserve(pages.size() * static_cast<std::size_t>(n_subjects));
    for (std::size_t pi = 0; pi < pages.size(); ++pi) {
        const SyntheticPageSpec& spec = pages[pi];
        for (int si = 0; si < n_subjects; ++si) {
            std::mt19937_64 gen(deriveSeed(seed, pi, static_cast<std::uint64_t>(si)));
            Recording rec{subjectName(si, n_subjects), spec.page_id, {}};

            // Small per-recording count jitter keeps fix_num non-degenerate.
            const int count =
                spec.fixations_per_subject +
                (spec.fixations_per_subject > 1
                     ? static_cast<int>(uniformIndex(gen, 3)) - 1
                     : 0);
            double clock_ms = 50.0 + 100.0 * uniformDouble(gen); // onset latency
            for (int k = 0; k < count; ++k) {
                Fixation f;
                f.start_ms = clock_ms;
                f.duration_ms = logNormal(gen, spec.duration_median_ms, spec.duration_sigma_log);
                if (uniformDouble(gen) < spec.noise_level || spec.hotspots.empty()) {
                    f.x_px = uniformDouble(gen) * (screen.width_px - 1);
                    f.y_px = uniformDouble(gen) * (screen.height_px - 1);
                } else {
                    const Hotspot& h = spec.hotspots[static_cast<std::size_t>(
                        pickHotspot(spec.hotspots, gen))];
                    f.x_px = h.center_x + h.spread_px * gaussian(gen);
                    f.y_px = h.center_y + h.spread_px * gaussian(gen);
                }
                rec.fixations.push_back(f);
                clock_ms += f.duration_ms + 20.0 + 40.0 * uniformDouble(gen); // saccade gap
            }
            recordings.push_back(std::move(rec));
        }
    }
    return Dataset(screen, std::move(recordings));
}

RatingTable ratingsFor(std::span<const SyntheticPageSpec> pages, int n_subjects) {
    if (n_subjects < 1) throw ValidationError("ratingsFor: need at least 1 subject");
    std::map<std::pair<std::string, std::string>, Verdict> judgments;
    for (const SyntheticPageSpec& spec : pages)
        for (int si = 0; si < n_subjects; ++si)
            judgments.emplace(std::make_pair(subjectName(si, n_subjects), spec.page_id),
                              spec.declared_class);
    return RatingTable(std::move(judgments));
}

double oracleFullGridEntropyBits(std::span<const Fixation> fixations, double sigma_px, int width,
                                 int height) {
    if (!(sigma_px > 0.0)) throw ValidationError("sigma_px must be > 0");
    if (width <= 0 || height <= 0) throw ValidationError("grid dimensions must be positive");
    if (fixations.empty())
        throw ValidationError("cannot build an attention map from no fixations");

    const double inv_two_sigma_sq = 1.0 / (2.0 * sigma_px * sigma_px);
    std::vector<double> grid(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    std::size_t idx = 0;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x, ++idx) {
            double mass = 0.0;
            for (const Fixation& f : fixations) {
                const double dx = x - f.x_px;
                const double dy = y - f.y_px;
                mass += f.duration_ms * std::exp(-(dx * dx + dy * dy) * inv_two_sigma_sq);
            }
            grid[idx] = mass;
        }
    double total = 0.0;
    for (double v : grid) total += v;
    if (!(total > 0.0))
        throw ComputeError("all fixation kernel mass falls off-grid; nothing to normalize");
    for (double& v : grid) v /= total;
    return shannonEntropyBits(std::span<const double>(grid));
}

std::vector<SyntheticPageSpec> makeNoiseLadder(std::span<const double> noise_levels,
                                               int pages_per_level, ScreenFormat screen,
                                               std::uint64_t seed) {
    if (noise_levels.empty()) throw ValidationError("makeNoiseLadder: no noise levels");
    if (pages_per_level < 1) throw ValidationError("makeNoiseLadder: pages_per_level must be >= 1");

    std::vector<SyntheticPageSpec> specs;
    int page_counter = 0;
    for (std::size_t li = 0; li < noise_levels.size(); ++li) {
        for (int k = 0; k < pages_per_level; ++k, ++page_counter) {
            std::mt19937_64 gen(deriveSeed(seed ^ 0xA5A5A5A5A5A5A5A5ull,
                                           static_cast<std::uint64_t>(page_counter), 0));
            SyntheticPageSpec spec;
            char buf[16];
            std::snprintf(buf, sizeof(buf), "p%02d", page_counter);
            spec.page_id = buf;
            spec.noise_level = noise_levels[li];
            spec.declared_class = noise_levels[li] <= 0.45 ? Verdict::Good : Verdict::Bad;
            const int n_hotspots = 2 + static_cast<int>(uniformIndex(gen, 2)); // 2..3
            const double margin_x = 0.15 * screen.width_px;
            const double margin_y = 0.15 * screen.height_px;
            for (int h = 0; h < n_hotspots; ++h) {
                Hotspot hs;
                hs.center_x = margin_x + uniformDouble(gen) * (screen.width_px - 2.0 * margin_x);
                hs.center_y = margin_y + uniformDouble(gen) * (screen.height_px - 2.0 * margin_y);
                hs.spread_px = 30.0 + 30.0 * uniformDouble(gen);
                hs.weight = 0.5 + uniformDouble(gen);
                spec.hotspots.push_back(hs);
            }
            specs.push_back(std::move(spec));
        }
    }
    return specs;
}

} // namespace gazent
