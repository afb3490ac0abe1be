#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idiolect/similarity.hpp"

namespace idiolect {

/// Category of every matrix row. Category names are kept sorted, so comparing category
/// indices is the same as comparing names.
struct CategoryLabeling {
  std::vector<std::string> categories;
  std::vector<std::size_t> chunk_category;

  static CategoryLabeling from_labels(std::span<const std::string> labels);

  std::size_t chunk_count() const noexcept { return chunk_category.size(); }
  std::size_t size_of(std::size_t category) const;

  /// Throws DegenerateCategory for unknown names.
  std::size_t index_of(std::string_view category) const;

  /// At least two categories, each with at least two chunks; throws DegenerateCategory.
  void require_analysable() const;
};

struct RankedPair {
  std::size_t a = 0;  // row index, a < b
  std::size_t b = 0;
  double score = 0;
  double rank = 0;
};

/// All unordered pairs ascending by dissimilarity (rank 1 = most similar); exact ties
/// share the average of the ranks they span.
struct RankedPairs {
  std::size_t chunk_count = 0;
  std::vector<RankedPair> pairs;
};

RankedPairs rank_pairs(const DissimilarityMatrix<double>& matrix);

/// Average ranks for a sequence of values, ties averaged (1-based).
std::vector<double> average_ranks(std::span<const double> values);

/// Sum of ranks of the pairs whose two chunks both belong to `category`.
double within_category_rank_sum(const RankedPairs& ranked, const CategoryLabeling& labeling,
                                std::string_view category);

/// Sum over every category of its within-category rank sum.
double pooled_within_rank_sum(const RankedPairs& ranked, const CategoryLabeling& labeling);

/// Smallest and largest rank sum a category of `chunks` members can reach among `pairs` pairs.
std::pair<double, double> rank_sum_bounds(std::size_t chunks, std::size_t pairs);

struct NullSummary {
  double mean = 0;
  double sd = 0;
  double min = 0;
  double max = 0;
};

struct PermutationTest {
  double observed = 0;
  double p_value = 1;
  std::size_t extreme_count = 0;  // null draws at least as extreme as observed
  std::size_t permutations = 0;
  std::uint64_t seed = 0;
  NullSummary null;
};

enum class Tail {
  Lower,  // small statistic is extreme (rank sums)
  Upper,  // large statistic is extreme (attribution hits)
};

/// Computes one or more statistics from a per-chunk label vector.
using LabelStatistic = std::function<void(std::span<const std::size_t> labels, std::span<double> out)>;

/// Label-permutation baseline. Permutation i shuffles the observed labels with
/// CounterStream(seed, i); p = (1 + #extreme) / (permutations + 1). Results do not depend
/// on `jobs`.
std::vector<PermutationTest> permutation_test(std::span<const std::size_t> labels,
                                              std::size_t statistic_count,
                                              const LabelStatistic& statistic, Tail tail,
                                              std::size_t permutations, std::uint64_t seed,
                                              unsigned jobs = 1);

/// Rank-sum baseline for one category; category sizes preserved, one-sided (lower tail).
PermutationTest rank_sum_baseline(const RankedPairs& ranked, const CategoryLabeling& labeling,
                                  std::string_view category, std::size_t permutations,
                                  std::uint64_t seed, unsigned jobs = 1);

/// Same for the pooled statistic over all categories.
PermutationTest pooled_rank_sum_baseline(const RankedPairs& ranked, const CategoryLabeling& labeling,
                                         std::size_t permutations, std::uint64_t seed,
                                         unsigned jobs = 1);

struct ChunkAttribution {
  std::size_t chunk = 0;
  std::size_t true_category = 0;
  std::size_t attributed = 0;
  /// Mean dissimilarity to each category; leave-one-out for the chunk's own category.
  std::vector<double> mean_dissimilarity;
  bool tie = false;
  bool hit() const noexcept { return attributed == true_category; }
};

struct Attribution {
  std::vector<ChunkAttribution> chunks;
  std::vector<std::size_t> hits;    // per category
  std::vector<std::size_t> totals;  // per category
  std::vector<std::string> ties_logged;
};

/// Nearest-category attribution of every chunk; ties go to the smallest category name and
/// are logged.
Attribution attribute_chunks(const DissimilarityMatrix<double>& matrix, const CategoryLabeling& labeling);

/// Per-category hit-count baseline, one-sided (upper tail), in category index order.
std::vector<PermutationTest> attribution_baseline(const DissimilarityMatrix<double>& matrix,
                                                  const CategoryLabeling& labeling,
                                                  std::size_t permutations, std::uint64_t seed,
                                                  unsigned jobs = 1);

struct BaselineSettings {
  std::size_t permutations = 10000;
  std::uint64_t seed = 42;
  double threshold = 0.05;
  unsigned jobs = 1;
};

struct HomogeneityReport {
  std::string category;
  std::size_t chunks = 0;
  double rank_sum = 0;
  double rank_sum_min = 0;
  double rank_sum_max = 0;
  double rank_sum_p = 1;
  std::size_t attribution_hits = 0;
  std::size_t attribution_total = 0;
  double attribution_p = 1;
  std::size_t permutations = 0;
  std::uint64_t seed = 0;
  bool rank_sum_significant = false;
  bool attribution_significant = false;
  NullSummary rank_sum_null;
  NullSummary attribution_null;
};

struct HomogeneityAnalysis {
  std::vector<HomogeneityReport> reports;  // category order
  PermutationTest pooled_rank_sum;
  Attribution attribution;
};

/// Both statistics and both baselines for every category. The per-category rank-sum
/// p-values equal rank_sum_baseline's for the same seed.
HomogeneityAnalysis analyse_homogeneity(const DissimilarityMatrix<double>& matrix,
                                        const CategoryLabeling& labeling,
                                        const BaselineSettings& settings);

/// Generic-scalar entry points: ranks and means are evaluated in double.
template <typename Scalar>
RankedPairs rank_pairs(const DissimilarityMatrix<Scalar>& matrix) {
  return rank_pairs(DissimilarityMatrix<double>{matrix.chunk_ids, matrix.scores.template cast<double>()});
}

template <typename Scalar>
Attribution attribute_chunks(const DissimilarityMatrix<Scalar>& matrix, const CategoryLabeling& labeling) {
  return attribute_chunks(DissimilarityMatrix<double>{matrix.chunk_ids, matrix.scores.template cast<double>()},
                          labeling);
}

}  // namespace idiolect
