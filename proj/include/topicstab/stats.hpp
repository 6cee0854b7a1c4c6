#pragma once

#include <span>

namespace topicstab {

double mean(std::span<const double> xs);

/// Sample standard deviation (divisor n-1); 0 for fewer than two values.
double sample_sd(std::span<const double> xs);

/// Spearman rank correlation with average ranks for ties. NaN when either input
/// has zero rank variance or the lengths differ.
double spearman(std::span<const double> xs, std::span<const double> ys);

}  // namespace topicstab
