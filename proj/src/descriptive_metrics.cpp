#include "gazent/descriptive_metrics.hpp"

#include <cmath>

namespace gazent {

namespace {

struct MeanStd {
    std::optional<double> mean;
    std::optional<double> std_dev; // sample (n-1)
};

// Two-pass mean / sample standard deviation.
MeanStd meanStd(const std::vector<double>& values) {
    MeanStd out;
    const std::size_t n = values.size();
    if (n == 0) return out;
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(n);
    out.mean = mean;
    if (n >= 2) {
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        out.std_dev = std::sqrt(ss / static_cast<double>(n - 1));
    }
    return out;
}

} // namespace

std::vector<double> saccadeLengths(const Recording& recording) {
    std::vector<double> lengths;
    if (recording.fixations.size() < 2) return lengths;
    lengths.reserve(recording.fixations.size() - 1);
    for (std::size_t k = 0; k + 1 < recording.fixations.size(); ++k) {
        const Fixation& a = recording.fixations[k];
        const Fixation& b = recording.fixations[k + 1];
        lengths.push_back(std::hypot(b.x_px - a.x_px, b.y_px - a.y_px));
    }
    return lengths;
}

DescriptiveIndices descriptiveIndices(const std::vector<const Recording*>& recordings,
                                      const AoiSet& aois) {
    if (recordings.empty())
        throw ValidationError("descriptiveIndices requires at least one recording");

    DescriptiveIndices out;
    std::vector<double> durations;
    std::vector<double> saccades;
    for (const Recording* rec : recordings) {
        out.fix_num += static_cast<long>(rec->fixations.size());
        for (const Fixation& f : rec->fixations) durations.push_back(f.duration_ms);
        const auto lens = saccadeLengths(*rec);
        saccades.insert(saccades.end(), lens.begin(), lens.end());
    }

    const MeanStd dur = meanStd(durations);
    out.dur_mean_ms = dur.mean;
    out.dur_std_ms = dur.std_dev;
    const MeanStd sacc = meanStd(saccades);
    out.sacc_len_mean_px = sacc.mean;
    out.sacc_len_std_px = sacc.std_dev;

    out.aoi_num = aois.size();
    std::vector<double> counts;
    counts.reserve(aois.aois.size());
    for (const Aoi& aoi : aois.aois) counts.push_back(static_cast<double>(aoi.fixation_count));
    const MeanStd fixnum = meanStd(counts);
    out.aoi_fixnum_mean = fixnum.mean;
    out.aoi_fixnum_std = fixnum.std_dev;
    return out;
}

} // namespace gazent
