#include "gazent/attention_map.hpp"

#include <cmath>
#include <cstddef>
#include <ostream>

#include "gazent/format_util.hpp"

namespace gazent {

namespace {

constexpr double kMassTolerance = 1e-9;

// Compensated (Kahan) summation; order-stable and accurate to ~1 ulp.
double kahanSum(const double* values, std::size_t n) {
    double sum = 0.0;
    double carry = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double y = values[i] - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

struct KernelBox {
    int x_lo, x_hi, y_lo, y_hi;
    bool empty() const noexcept { return x_lo > x_hi || y_lo > y_hi; }
};

KernelBox truncationBox(const Fixation& f, double radius_px, int width, int height) {
    KernelBox box{};
    box.x_lo = std::max(0, static_cast<int>(std::ceil(f.x_px - radius_px)));
    box.x_hi = std::min(width - 1, static_cast<int>(std::floor(f.x_px + radius_px)));
    box.y_lo = std::max(0, static_cast<int>(std::ceil(f.y_px - radius_px)));
    box.y_hi = std::min(height - 1, static_cast<int>(std::floor(f.y_px + radius_px)));
    return box;
}

double entropyBitsChecked(const double* p, std::size_t n) {
    if (n == 0) throw ComputeError("entropy of an empty distribution");
    double min_value = p[0];
    for (std::size_t i = 1; i < n; ++i) min_value = std::min(min_value, p[i]);
    if (min_value < 0.0)
        throw ComputeError("negative probability entry (" + toShortest(min_value) + ")");
    const double total = kahanSum(p, n);
    if (std::abs(total - 1.0) > kMassTolerance)
        throw ComputeError("probabilities sum to " + toShortest(total) + ", expected 1");

    double acc = 0.0;
    double carry = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (p[i] <= 0.0) continue; // 0 * log2(0) == 0
        const double term = p[i] * std::log2(p[i]);
        const double y = term - carry;
        const double t = acc + y;
        carry = (t - acc) - y;
        acc = t;
    }
    return -acc;
}

} // namespace

void KernelConfig::validate() const {
    if (!(sigma_px > 0.0)) throw ValidationError("sigma_px must be > 0");
    if (!(truncation_radius >= 3.0)) throw ValidationError("truncation_radius must be >= 3");
}

AttentionMap::AttentionMap(Eigen::ArrayXXd cells) : cells_(std::move(cells)) {
    if (cells_.size() == 0) throw ValidationError("attention map must be non-empty");
    if ((cells_ < 0.0).any()) throw ComputeError("attention map has negative cells");
    const double total = kahanSum(cells_.data(), static_cast<std::size_t>(cells_.size()));
    if (std::abs(total - 1.0) > kMassTolerance)
        throw ComputeError("attention map mass is " + toShortest(total) + ", expected 1");
}

double shannonEntropyBits(const Eigen::Ref<const Eigen::ArrayXd>& probabilities) {
    return entropyBitsChecked(probabilities.data(),
                              static_cast<std::size_t>(probabilities.size()));
}

double shannonEntropyBits(std::span<const double> probabilities) {
    return entropyBitsChecked(probabilities.data(), probabilities.size());
}

AttentionMap buildAttentionMap(std::span<const Fixation> fixations, const KernelConfig& kernel,
                               int width, int height) {
    kernel.validate();
    if (width <= 0 || height <= 0) throw ValidationError("grid dimensions must be positive");
    if (fixations.empty()) throw ValidationError("cannot build an attention map from no fixations");

    const double radius = kernel.truncation_radius * kernel.sigma_px;
    const double inv_two_sigma_sq = 1.0 / (2.0 * kernel.sigma_px * kernel.sigma_px);

    Eigen::ArrayXXd accum = Eigen::ArrayXXd::Zero(height, width);
    Eigen::ArrayXd wx, wy;
    for (const Fixation& f : fixations) {
        const KernelBox box = truncationBox(f, radius, width, height);
        if (box.empty()) continue; // kernel support entirely off-grid
        const int nx = box.x_hi - box.x_lo + 1;
        const int ny = box.y_hi - box.y_lo + 1;
        wx = Eigen::ArrayXd::LinSpaced(nx, box.x_lo, box.x_hi) - f.x_px;
        wy = Eigen::ArrayXd::LinSpaced(ny, box.y_lo, box.y_hi) - f.y_px;
        wx = (-wx.square() * inv_two_sigma_sq).exp();
        wy = (-wy.square() * inv_two_sigma_sq).exp() * f.duration_ms;
        // Separable kernel: the block update is a rank-1 outer product.
        accum.matrix().block(box.y_lo, box.x_lo, ny, nx).noalias() +=
            wy.matrix() * wx.matrix().transpose();
    }

    const double total = kahanSum(accum.data(), static_cast<std::size_t>(accum.size()));
    if (!(total > 0.0))
        throw ComputeError("all fixation kernel mass falls off-grid; nothing to normalize");
    return AttentionMap(accum / total);
}

double vae(const AttentionMap& map) {
    return entropyBitsChecked(map.cells().data(), static_cast<std::size_t>(map.cells().size()));
}

bool kernelTouchesGrid(const Fixation& fixation, const KernelConfig& kernel, int width,
                       int height) {
    return !truncationBox(fixation, kernel.truncation_radius * kernel.sigma_px, width, height)
                .empty();
}

PageVaeSummary pageVaeSummary(const std::vector<const Recording*>& recordings,
                              const KernelConfig& kernel, int width, int height) {
    kernel.validate();
    if (recordings.empty()) throw ValidationError("pageVaeSummary requires at least one recording");
    const std::string& page = recordings.front()->page_id;
    for (const Recording* rec : recordings)
        if (rec->page_id != page)
            throw ValidationError("pageVaeSummary got recordings from multiple pages");

    PageVaeSummary out;
    out.page_id = page;

    std::vector<const Recording*> included;
    for (const Recording* rec : recordings) {
        bool usable = false;
        for (const Fixation& f : rec->fixations)
            if (kernelTouchesGrid(f, kernel, width, height)) {
                usable = true;
                break;
            }
        if (usable)
            included.push_back(rec);
        else
            out.excluded_subjects.push_back(rec->subject_id);
    }
    if (included.size() < 2)
        throw ComputeError("page '" + page + "': " + std::to_string(included.size()) +
                           " subject(s) with usable fixations, need at least 2");

    std::vector<Fixation> pooled;
    for (const Recording* rec : included)
        pooled.insert(pooled.end(), rec->fixations.begin(), rec->fixations.end());
    out.vae_bits = vae(buildAttentionMap(pooled, kernel, width, height));

    double individual_sum = 0.0;
    for (const Recording* rec : included) {
        const double bits = vae(buildAttentionMap(rec->fixations, kernel, width, height));
        out.included_subjects.push_back(rec->subject_id);
        out.individual_vae_bits.push_back(bits);
        individual_sum += bits;
    }
    out.bvae_bits = individual_sum / static_cast<double>(included.size());
    if (!(out.bvae_bits > 0.0))
        throw ComputeError("page '" + page + "': base VAE is zero, rVAE undefined");
    out.rvae = out.vae_bits / out.bvae_bits;
    return out;
}

void writePgm(const AttentionMap& map, std::ostream& out) {
    const int w = map.width();
    const int h = map.height();
    const double max_p = map.cells().maxCoeff(); // > 0: the map carries unit mass
    std::string bytes;
    bytes.reserve(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double gray = std::floor(255.0 * map.cells()(y, x) / max_p);
            bytes.push_back(static_cast<char>(static_cast<unsigned char>(gray)));
        }
    out << "P5\n" << w << ' ' << h << "\n255\n";
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

} // namespace gazent
