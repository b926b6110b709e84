#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gazent/gaze_data.hpp"

namespace gazent {

/// One area of interest: a spatial cluster of fixations.
struct Aoi {
    int label = 0; // 1-based, assigned in first-appearance order
    double centroid_x = 0.0;
    double centroid_y = 0.0;
    std::vector<std::size_t> member_indices; // indices into the clustering input
    int fixation_count = 0;
};

struct AoiSet {
    std::vector<Aoi> aois;

    int size() const noexcept { return static_cast<int>(aois.size()); }
};

/// A subject's AOI visit order with consecutive duplicates collapsed,
/// so only inter-AOI transitions remain.
struct AoiSequence {
    std::string subject_id;
    std::vector<int> labels;
};

/// First-order Markov model over AOI transitions.
/// matrix(i, j) = p(next = j+1 | current = i+1); diagonal identically zero.
/// Rows with at least one outgoing transition sum to 1; rows with none are
/// all-zero. priors sum to 1.
struct TransitionModel {
    int n = 0;
    Eigen::MatrixXd matrix;
    Eigen::VectorXd priors;
    Eigen::MatrixXd source_counts; // raw transition tallies
};

/// How the prior P(i) is counted (the source-count reading makes the entropy
/// a proper expectation over observed transitions; the occurrence reading is
/// kept selectable).
enum class PriorMode {
    TransitionSources, // occurrences of i as a transition source / total transitions
    Occurrences,       // occurrences of i among all sequence elements / total elements
};

/// Deterministic greedy clustering: fixations are processed in the given
/// order; each is assigned to the nearest existing AOI whose centroid lies
/// within radius_px (centroid updated as the duration-weighted member mean),
/// otherwise it opens a new AOI. Labels follow first-appearance order.
/// Identical input yields an identical AoiSet.
AoiSet clusterAoi(std::span<const Fixation> fixations, double radius_px);

/// Pools the recordings' fixations in global start-time order (ties keep the
/// recordings' subject order) -- the canonical clustering input for a page.
std::vector<Fixation> pooledTimeOrdered(const std::vector<const Recording*>& recordings);

/// Maps each fixation to its nearest AOI centroid (no radius limit; ties go
/// to the lower label) and collapses consecutive duplicates.
AoiSequence aoiSequence(const Recording& recording, const AoiSet& aois);

/// Estimates the transition matrix by counting inter-AOI transitions in the
/// sequences. p_ij = count(i->j) / count(i->*). Zero transitions overall is
/// an error; sequence order does not affect the result.
TransitionModel estimateTransitionModel(const std::vector<AoiSequence>& sequences, int n,
                                        PriorMode prior_mode = PriorMode::TransitionSources);

struct MarkovEntropy {
    double h_bits = 0.0;
    double h_max_bits = 0.0; // log2(n-1): uniform transitions, uniform priors
    double h_relative = 0.0; // h / h_max, defined as 0 when h_max == 0 (n == 2)
};

/// h = -sum_i P(i) sum_{j != i} p_ij log2 p_ij. Requires n >= 2.
MarkovEntropy markovEntropy(const TransitionModel& model);

/// TSV "aoi_id\tcentroid_x\tcentroid_y\tfix_count", one row per AOI.
void writeAoiTsv(const AoiSet& aois, std::ostream& out);

/// TSV "subject_id\tsequence" with labels joined as "6 - 7 - 11".
void writeSequencesTsv(std::span<const AoiSequence> sequences, std::ostream& out);

} // namespace gazent
