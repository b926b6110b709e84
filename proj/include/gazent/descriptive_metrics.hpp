#pragma once

#include <optional>
#include <vector>

#include "gazent/aoi_transitions.hpp"
#include "gazent/gaze_data.hpp"

namespace gazent {

/// The eight classical per-page indices. Means are absent when the underlying
/// sample is empty; standard deviations (sample, n-1) are absent below two
/// elements.
struct DescriptiveIndices {
    long fix_num = 0;
    std::optional<double> dur_mean_ms;
    std::optional<double> dur_std_ms;
    std::optional<double> sacc_len_mean_px;
    std::optional<double> sacc_len_std_px;
    int aoi_num = 0;
    std::optional<double> aoi_fixnum_mean;
    std::optional<double> aoi_fixnum_std;
};

/// Euclidean distances between consecutive fixations of one recording;
/// max(0, n-1) entries.
std::vector<double> saccadeLengths(const Recording& recording);

/// Indices over the pooled fixations and saccades of all given recordings
/// (saccades never span recording boundaries); aoi_fixnum_* are computed over
/// the AoiSet's per-AOI fixation counts.
DescriptiveIndices descriptiveIndices(const std::vector<const Recording*>& recordings,
                                      const AoiSet& aois);

} // namespace gazent
