#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "topicstab/lda.hpp"
#include "topicstab/matrix.hpp"

namespace topicstab {

enum class DistanceMeasure {
  kDistance,    ///< sqrt of the base-2 Jensen-Shannon divergence; a metric on [0, 1]
  kDivergence,  ///< the base-2 divergence itself
};

/// Base-2 Jensen-Shannon divergence, 1/2 KL(p||m) + 1/2 KL(q||m) with m = (p+q)/2.
/// Summation runs left to right over indices, so the result is exactly symmetric.
/// Throws InvalidArgument on length mismatch, negative entries, or sums off by > 1e-6.
double js_divergence(std::span<const double> p, std::span<const double> q);

/// Jensen-Shannon distance: sqrt(js_divergence(p, q)).
double jsd(std::span<const double> p, std::span<const double> q);

struct UnionProjection {
  Matrix first;
  Matrix second;
  Vocabulary vocabulary;  // lexicographically sorted
};

/// Zero-extends both phi matrices onto the sorted union vocabulary. Rows are not renormalised.
UnionProjection project_to_union(const TopicModel& m1, const TopicModel& m2);

struct AlignedPair {
  std::size_t source_topic;
  std::size_t target_topic;
  double distance;

  bool operator==(const AlignedPair&) const = default;
};

struct AlignmentResult {
  std::vector<AlignedPair> pairs;  // one per source topic, in source order
  double alignment_distance = 0.0;
  double topic_overlap = 0.0;
  std::size_t k1 = 0;
  std::size_t k2 = 0;
  std::size_t union_vocab_size = 0;
};

/// K1 x K2 matrix of distances between rows of `first` and rows of `second`.
Matrix distance_matrix(const Matrix& first, const Matrix& second, DistanceMeasure measure = DistanceMeasure::kDistance);

/// Nearest target per source row, exact ties going to the lowest target index.
AlignmentResult align_distances(const Matrix& distances);

/// Each topic of m1 matched to its nearest topic of m2; many-to-one allowed.
AlignmentResult align(const TopicModel& m1, const TopicModel& m2, DistanceMeasure measure = DistanceMeasure::kDistance);

/// Mean of the pair distances. Throws InvalidArgument on an empty result.
double alignment_distance(const AlignmentResult& result);

/// Distinct targets / k2. Throws InvalidArgument when k2 is 0.
double topic_overlap(const AlignmentResult& result);

}  // namespace topicstab
