#include "topicstab/align.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "topicstab/error.hpp"

namespace topicstab {

namespace {

void check_distribution(std::span<const double> p, const char* name) {
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidArgument(std::string(name) + " has a negative or non-finite entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-6) throw InvalidArgument(std::string(name) + " sums to " + std::to_string(sum));
}

// Terms with a zero weight contribute nothing; m >= p/2 > 0 whenever p > 0.
double divergence_unchecked(std::span<const double> p, std::span<const double> q) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double a = p[i], b = q[i];
    const double m = 0.5 * (a + b);
    const double ta = a > 0.0 ? a * std::log2(a / m) : 0.0;
    const double tb = b > 0.0 ? b * std::log2(b / m) : 0.0;
    sum += ta + tb;
  }
  return std::clamp(0.5 * sum, 0.0, 1.0);
}

}  // namespace

double js_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw InvalidArgument("length mismatch: " + std::to_string(p.size()) + " vs " + std::to_string(q.size()));
  }
  check_distribution(p, "p");
  check_distribution(q, "q");
  return divergence_unchecked(p, q);
}

double jsd(std::span<const double> p, std::span<const double> q) { return std::sqrt(js_divergence(p, q)); }

UnionProjection project_to_union(const TopicModel& m1, const TopicModel& m2) {
  std::vector<std::string> words = m1.vocabulary().words();
  words.insert(words.end(), m2.vocabulary().words().begin(), m2.vocabulary().words().end());
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());

  auto project = [&words](const TopicModel& m) {
    const auto& vocab = m.vocabulary().words();
    std::vector<std::size_t> column(vocab.size());
    for (std::size_t w = 0; w < vocab.size(); ++w) {
      column[w] = static_cast<std::size_t>(std::lower_bound(words.begin(), words.end(), vocab[w]) - words.begin());
    }
    Matrix out(m.num_topics(), words.size(), 0.0);
    for (std::size_t k = 0; k < m.num_topics(); ++k) {
      auto row = m.phi().row(k);
      for (std::size_t w = 0; w < row.size(); ++w) out(k, column[w]) = row[w];
    }
    return out;
  };

  Matrix first = project(m1);
  Matrix second = project(m2);
  return {std::move(first), std::move(second), Vocabulary(std::move(words))};
}

Matrix distance_matrix(const Matrix& first, const Matrix& second, DistanceMeasure measure) {
  if (first.cols() != second.cols()) throw InvalidArgument("distance_matrix: column counts differ");
  Matrix out(first.rows(), second.rows());
  for (std::size_t i = 0; i < first.rows(); ++i) {
    for (std::size_t j = 0; j < second.rows(); ++j) {
      const double div = divergence_unchecked(first.row(i), second.row(j));
      out(i, j) = measure == DistanceMeasure::kDistance ? std::sqrt(div) : div;
    }
  }
  return out;
}

AlignmentResult align_distances(const Matrix& distances) {
  AlignmentResult result;
  result.k1 = distances.rows();
  result.k2 = distances.cols();
  if (result.k1 == 0 || result.k2 == 0) throw InvalidArgument("cannot align an empty model");
  result.pairs.reserve(result.k1);
  for (std::size_t i = 0; i < result.k1; ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < result.k2; ++j) {
      if (distances(i, j) < distances(i, best)) best = j;
    }
    result.pairs.push_back({i, best, distances(i, best)});
  }
  result.alignment_distance = alignment_distance(result);
  result.topic_overlap = topic_overlap(result);
  return result;
}

AlignmentResult align(const TopicModel& m1, const TopicModel& m2, DistanceMeasure measure) {
  const UnionProjection projected = project_to_union(m1, m2);
  AlignmentResult result = align_distances(distance_matrix(projected.first, projected.second, measure));
  result.union_vocab_size = projected.vocabulary.size();
  return result;
}

double alignment_distance(const AlignmentResult& result) {
  if (result.pairs.empty()) throw InvalidArgument("alignment has no pairs");
  double sum = 0.0;
  for (const auto& pair : result.pairs) sum += pair.distance;
  return sum / static_cast<double>(result.pairs.size());
}

double topic_overlap(const AlignmentResult& result) {
  if (result.k2 == 0) throw InvalidArgument("topic_overlap requires k2 >= 1");
  std::vector<bool> hit(result.k2, false);
  std::size_t distinct = 0;
  for (const auto& pair : result.pairs) {
    if (!hit.at(pair.target_topic)) {
      hit[pair.target_topic] = true;
      ++distinct;
    }
  }
  return static_cast<double>(distinct) / static_cast<double>(result.k2);
}

}  // namespace topicstab
