#include "gazent/aoi_transitions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "gazent/format_util.hpp"

namespace gazent {

AoiSet clusterAoi(std::span<const Fixation> fixations, double radius_px) {
    if (fixations.empty()) throw ValidationError("clusterAoi requires at least one fixation");
    if (!(radius_px > 0.0)) throw ValidationError("clustering radius must be > 0");

    AoiSet set;
    std::vector<double> weights; // per-AOI total duration, drives the centroid mean
    for (std::size_t i = 0; i < fixations.size(); ++i) {
        const Fixation& f = fixations[i];
        int best = -1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < set.aois.size(); ++a) {
            const double dx = f.x_px - set.aois[a].centroid_x;
            const double dy = f.y_px - set.aois[a].centroid_y;
            const double dist = std::hypot(dx, dy);
            if (dist <= radius_px && dist < best_dist) {
                best = static_cast<int>(a);
                best_dist = dist;
            }
        }
        if (best < 0) {
            Aoi aoi;
            aoi.label = static_cast<int>(set.aois.size()) + 1;
            aoi.centroid_x = f.x_px;
            aoi.centroid_y = f.y_px;
            aoi.member_indices.push_back(i);
            aoi.fixation_count = 1;
            set.aois.push_back(std::move(aoi));
            weights.push_back(f.duration_ms);
        } else {
            Aoi& aoi = set.aois[static_cast<std::size_t>(best)];
            const double w = weights[static_cast<std::size_t>(best)];
            const double w_new = w + f.duration_ms;
            aoi.centroid_x = (aoi.centroid_x * w + f.x_px * f.duration_ms) / w_new;
            aoi.centroid_y = (aoi.centroid_y * w + f.y_px * f.duration_ms) / w_new;
            aoi.member_indices.push_back(i);
            ++aoi.fixation_count;
            weights[static_cast<std::size_t>(best)] = w_new;
        }
    }
    return set;
}

std::vector<Fixation> pooledTimeOrdered(const std::vector<const Recording*>& recordings) {
    std::vector<Fixation> pooled;
    for (const Recording* rec : recordings)
        pooled.insert(pooled.end(), rec->fixations.begin(), rec->fixations.end());
    std::stable_sort(pooled.begin(), pooled.end(),
                     [](const Fixation& a, const Fixation& b) { return a.start_ms < b.start_ms; });
    return pooled;
}

AoiSequence aoiSequence(const Recording& recording, const AoiSet& aois) {
    if (aois.aois.empty()) throw ValidationError("aoiSequence requires a non-empty AoiSet");
    AoiSequence seq;
    seq.subject_id = recording.subject_id;
    for (const Fixation& f : recording.fixations) {
        int best_label = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (const Aoi& aoi : aois.aois) {
            const double dist = std::hypot(f.x_px - aoi.centroid_x, f.y_px - aoi.centroid_y);
            if (dist < best_dist) {
                best_dist = dist;
                best_label = aoi.label;
            }
        }
        if (seq.labels.empty() || seq.labels.back() != best_label)
            seq.labels.push_back(best_label);
    }
    return seq;
}

TransitionModel estimateTransitionModel(const std::vector<AoiSequence>& sequences, int n,
                                        PriorMode prior_mode) {
    if (n < 2) throw ValidationError("transition model requires n >= 2 AOIs");

    TransitionModel model;
    model.n = n;
    model.source_counts = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd occurrences = Eigen::VectorXd::Zero(n);

    long total_transitions = 0;
    long total_elements = 0;
    for (const AoiSequence& seq : sequences) {
        for (std::size_t k = 0; k < seq.labels.size(); ++k) {
            const int label = seq.labels[k];
            if (label < 1 || label > n)
                throw ValidationError("AOI label " + std::to_string(label) + " outside 1.." +
                                      std::to_string(n));
            occurrences[label - 1] += 1.0;
            ++total_elements;
            if (k + 1 < seq.labels.size()) {
                const int next = seq.labels[k + 1];
                if (next < 1 || next > n)
                    throw ValidationError("AOI label " + std::to_string(next) + " outside 1.." +
                                          std::to_string(n));
                if (next == label)
                    throw ValidationError("self-transition in sequence for subject '" +
                                          seq.subject_id + "' (duplicates must be collapsed)");
                model.source_counts(label - 1, next - 1) += 1.0;
                ++total_transitions;
            }
        }
    }
    if (total_transitions == 0) throw ComputeError("no transitions in any sequence");

    model.matrix = Eigen::MatrixXd::Zero(n, n);
    const Eigen::VectorXd row_sums = model.source_counts.rowwise().sum();
    for (int i = 0; i < n; ++i)
        if (row_sums[i] > 0.0) model.matrix.row(i) = model.source_counts.row(i) / row_sums[i];

    if (prior_mode == PriorMode::TransitionSources)
        model.priors = row_sums / static_cast<double>(total_transitions);
    else
        model.priors = occurrences / static_cast<double>(total_elements);
    return model;
}

MarkovEntropy markovEntropy(const TransitionModel& model) {
    if (model.n < 2) throw ValidationError("Markov entropy requires n >= 2 AOIs");
    double h = 0.0;
    for (int i = 0; i < model.n; ++i) {
        if (model.priors[i] <= 0.0) continue;
        double row_term = 0.0;
        for (int j = 0; j < model.n; ++j) {
            if (j == i) continue;
            const double p = model.matrix(i, j);
            if (p > 0.0) row_term += p * std::log2(p);
        }
        h -= model.priors[i] * row_term;
    }
    MarkovEntropy out;
    out.h_bits = h;
    out.h_max_bits = std::log2(static_cast<double>(model.n - 1));
    // n == 2 is the degenerate chain: every transition is forced, h == h_max == 0.
    out.h_relative = out.h_max_bits > 0.0 ? out.h_bits / out.h_max_bits : 0.0;
    return out;
}

void writeAoiTsv(const AoiSet& aois, std::ostream& out) {
    out << "aoi_id\tcentroid_x\tcentroid_y\tfix_count\n";
    for (const Aoi& aoi : aois.aois)
        out << aoi.label << '\t' << toShortest(aoi.centroid_x) << '\t'
            << toShortest(aoi.centroid_y) << '\t' << aoi.fixation_count << '\n';
}

void writeSequencesTsv(std::span<const AoiSequence> sequences, std::ostream& out) {
    out << "subject_id\tsequence\n";
    for (const AoiSequence& seq : sequences) {
        out << seq.subject_id << '\t';
        for (std::size_t k = 0; k < seq.labels.size(); ++k) {
            if (k > 0) out << " - ";
            out << seq.labels[k];
        }
        out << '\n';
    }
}

} // namespace gazent
