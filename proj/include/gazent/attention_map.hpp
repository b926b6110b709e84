#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gazent/gaze_data.hpp"

namespace gazent {

/// Gaussian kernel parameters for attention-map estimation.
/// truncation_radius is the cutoff in multiples of sigma; kernel mass beyond
/// it is ignored (relative peak error at the default 5 sigma: e^-12.5).
struct KernelConfig {
    double sigma_px = 30.0;
    double truncation_radius = 5.0;

    void validate() const; // sigma_px > 0, truncation_radius >= 3
};

/// Normalized spatial probability distribution of fixations over the screen.
/// cells(y, x) holds P(x, y); the grid sums to 1 within 1e-9.
class AttentionMap {
public:
    /// Takes a non-negative grid already normalized to total mass 1.
    explicit AttentionMap(Eigen::ArrayXXd cells);

    int width() const noexcept { return static_cast<int>(cells_.cols()); }
    int height() const noexcept { return static_cast<int>(cells_.rows()); }
    const Eigen::ArrayXXd& cells() const noexcept { return cells_; }

private:
    Eigen::ArrayXXd cells_;
};

/// Shannon entropy -sum p*log2(p) in bits, with 0*log2(0) == 0.
/// Contract: entries >= 0 and sum within 1e-9 of 1; violations raise
/// ComputeError. Uses compensated summation so the result is independent of
/// chunking and accurate to ~1 ulp even for 10^6-point distributions.
double shannonEntropyBits(const Eigen::Ref<const Eigen::ArrayXd>& probabilities);
double shannonEntropyBits(std::span<const double> probabilities);

/// Duration-weighted Gaussian-mixture estimate of the fixation distribution.
/// Each fixation adds d * exp(-((x-x0)^2+(y-y0)^2)/(2 sigma^2)) to every cell
/// whose center lies within the truncation box intersected with the grid;
/// the accumulated grid is then normalized to total mass 1. Kernel mass
/// falling off-grid is lost before normalization. Cell centers are the
/// integer pixel coordinates.
///
/// Errors: empty fixation list -> ValidationError; fixations present but all
/// kernel mass off-grid -> ComputeError.
AttentionMap buildAttentionMap(std::span<const Fixation> fixations, const KernelConfig& kernel,
                               int width, int height);

/// Visual attention entropy: Shannon entropy of the flattened grid, in bits.
double vae(const AttentionMap& map);

/// True when the fixation's truncation box intersects the grid, i.e. the
/// fixation would contribute mass to a map of this size. This is the
/// "usable fixation" predicate of pageVaeSummary.
bool kernelTouchesGrid(const Fixation& fixation, const KernelConfig& kernel, int width,
                       int height);

/// Per-page VAE decomposition across subjects.
struct PageVaeSummary {
    std::string page_id;
    double vae_bits = 0.0;  // entropy of the pooled all-subject map
    double bvae_bits = 0.0; // mean of the individual entropies
    double rvae = 0.0;      // vae_bits / bvae_bits
    std::vector<std::string> included_subjects;
    std::vector<double> individual_vae_bits;      // aligned with included_subjects
    std::vector<std::string> excluded_subjects;   // subjects without usable fixations
};

/// Builds the pooled map over all usable subjects of one page plus one map
/// per subject. Subjects contributing no in-grid kernel mass are excluded
/// (reported in excluded_subjects); fewer than two usable subjects is an
/// error. All recordings must belong to one page.
PageVaeSummary pageVaeSummary(const std::vector<const Recording*>& recordings,
                              const KernelConfig& kernel, int width, int height);

/// Binary PGM ("P5", maxval 255), row-major top-to-bottom,
/// gray = floor(255 * P(x,y) / max cell P). Byte-exact for a fixed map.
void writePgm(const AttentionMap& map, std::ostream& out);

} // namespace gazent
