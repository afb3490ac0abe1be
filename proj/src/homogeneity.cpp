#include "idiolect/homogeneity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "idiolect/rng.hpp"

namespace idiolect {

namespace {

NullSummary summarize(std::span<const double> values, std::size_t stride, std::size_t column) {
  NullSummary s;
  const std::size_t n = values.size() / stride;
  if (n == 0) return s;
  double sum = 0;
  s.min = s.max = values[column];
  for (std::size_t i = 0; i < n; ++i) {
    const double v = values[i * stride + column];
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.mean = sum / static_cast<double>(n);
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = values[i * stride + column] - s.mean;
    ss += d * d;
  }
  s.sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  return s;
}

void rank_sums(const RankedPairs& ranked, std::span<const std::size_t> labels, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& p : ranked.pairs) {
    const std::size_t la = labels[p.a];
    if (la == labels[p.b]) out[la] += p.rank;
  }
}

// Writes the attributed category of every chunk; returns per-category means via `means`
// when non-null.
void attribute(const Eigen::MatrixXd& scores, std::span<const std::size_t> labels,
               std::span<const std::size_t> sizes, std::vector<std::size_t>& attributed,
               std::vector<bool>& tied, std::vector<std::vector<double>>* means) {
  const std::size_t n = labels.size();
  const std::size_t k = sizes.size();
  std::vector<double> sums(k);
  attributed.assign(n, 0);
  tied.assign(n, false);
  if (means) means->assign(n, std::vector<double>(k));
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) sums[labels[j]] += scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    std::size_t best = k;
    double best_mean = 0;
    bool tie = false;
    for (std::size_t c = 0; c < k; ++c) {
      const std::size_t members = c == labels[i] ? sizes[c] - 1 : sizes[c];
      if (members == 0) continue;
      const double mean = sums[c] / static_cast<double>(members);
      if (means) (*means)[i][c] = mean;
      if (best == k || mean < best_mean) {
        best = c;
        best_mean = mean;
        tie = false;
      } else if (mean == best_mean) {
        tie = true;
      }
    }
    attributed[i] = best;
    tied[i] = tie;
  }
}

std::vector<std::size_t> category_sizes(std::span<const std::size_t> labels, std::size_t k) {
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t l : labels) ++sizes[l];
  return sizes;
}

void hit_counts(const Eigen::MatrixXd& scores, std::span<const std::size_t> labels,
                std::span<const std::size_t> sizes, std::span<double> out) {
  std::vector<std::size_t> attributed;
  std::vector<bool> tied;
  attribute(scores, labels, sizes, attributed, tied, nullptr);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (attributed[i] == labels[i]) out[labels[i]] += 1.0;
  }
}

}  // namespace

CategoryLabeling CategoryLabeling::from_labels(std::span<const std::string> labels) {
  CategoryLabeling out;
  out.categories.assign(labels.begin(), labels.end());
  std::sort(out.categories.begin(), out.categories.end());
  out.categories.erase(std::unique(out.categories.begin(), out.categories.end()), out.categories.end());
  out.chunk_category.reserve(labels.size());
  for (const auto& l : labels) out.chunk_category.push_back(out.index_of(l));
  return out;
}

std::size_t CategoryLabeling::size_of(std::size_t category) const {
  return static_cast<std::size_t>(std::count(chunk_category.begin(), chunk_category.end(), category));
}

std::size_t CategoryLabeling::index_of(std::string_view category) const {
  const auto it = std::lower_bound(categories.begin(), categories.end(), category);
  if (it == categories.end() || *it != category) {
    throw Error(ErrorKind::DegenerateCategory, "unknown category '" + std::string(category) + "'");
  }
  return static_cast<std::size_t>(it - categories.begin());
}

void CategoryLabeling::require_analysable() const {
  if (categories.size() < 2) {
    throw Error(ErrorKind::DegenerateCategory,
                "need at least 2 categories, have " + std::to_string(categories.size()));
  }
  for (std::size_t c = 0; c < categories.size(); ++c) {
    if (size_of(c) < 2) {
      throw Error(ErrorKind::DegenerateCategory,
                  "category '" + categories[c] + "' has fewer than 2 chunks");
    }
  }
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    // positions i..j (0-based) span ranks i+1..j+1
    const double rank = static_cast<double>(i + j + 2) / 2.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

RankedPairs rank_pairs(const DissimilarityMatrix<double>& matrix) {
  const auto n = static_cast<std::size_t>(matrix.size());
  if (n < 2) throw Error(ErrorKind::DegenerateCategory, "ranking needs at least 2 chunks");
  RankedPairs out;
  out.chunk_count = n;
  std::vector<double> scores;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double s = matrix.scores(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      out.pairs.push_back({a, b, s, 0});
      scores.push_back(s);
    }
  }
  const auto ranks = average_ranks(scores);
  for (std::size_t i = 0; i < ranks.size(); ++i) out.pairs[i].rank = ranks[i];
  std::stable_sort(out.pairs.begin(), out.pairs.end(),
                   [](const RankedPair& x, const RankedPair& y) { return x.score < y.score; });
  return out;
}

double within_category_rank_sum(const RankedPairs& ranked, const CategoryLabeling& labeling,
                                std::string_view category) {
  const std::size_t c = labeling.index_of(category);
  if (labeling.size_of(c) < 2) {
    throw Error(ErrorKind::DegenerateCategory,
                "category '" + std::string(category) + "' has fewer than 2 chunks");
  }
  std::vector<double> sums(labeling.categories.size());
  rank_sums(ranked, labeling.chunk_category, sums);
  return sums[c];
}

double pooled_within_rank_sum(const RankedPairs& ranked, const CategoryLabeling& labeling) {
  std::vector<double> sums(labeling.categories.size());
  rank_sums(ranked, labeling.chunk_category, sums);
  return std::accumulate(sums.begin(), sums.end(), 0.0);
}

std::pair<double, double> rank_sum_bounds(std::size_t chunks, std::size_t pairs) {
  const std::size_t m = chunks * (chunks - 1) / 2;
  const double low = static_cast<double>(m) * static_cast<double>(m + 1) / 2.0;
  double high = 0;
  for (std::size_t r = pairs - m + 1; r <= pairs; ++r) high += static_cast<double>(r);
  return {low, high};
}

std::vector<PermutationTest> permutation_test(std::span<const std::size_t> labels,
                                              std::size_t statistic_count,
                                              const LabelStatistic& statistic, Tail tail,
                                              std::size_t permutations, std::uint64_t seed,
                                              unsigned jobs) {
  if (permutations < 1) throw Error(ErrorKind::Config, "permutations must be at least 1");
  std::vector<double> observed(statistic_count);
  statistic(labels, observed);

  std::vector<double> null(permutations * statistic_count);
  parallel_for(permutations, jobs, [&](std::size_t i) {
    std::vector<std::size_t> shuffled(labels.begin(), labels.end());
    CounterStream stream(seed, i);
    shuffle(std::span<std::size_t>(shuffled), stream);
    statistic(shuffled, std::span<double>(null).subspan(i * statistic_count, statistic_count));
  });

  std::vector<PermutationTest> out(statistic_count);
  for (std::size_t s = 0; s < statistic_count; ++s) {
    auto& t = out[s];
    t.observed = observed[s];
    t.permutations = permutations;
    t.seed = seed;
    for (std::size_t i = 0; i < permutations; ++i) {
      const double v = null[i * statistic_count + s];
      if (tail == Tail::Lower ? v <= t.observed : v >= t.observed) ++t.extreme_count;
    }
    t.p_value = static_cast<double>(1 + t.extreme_count) / static_cast<double>(permutations + 1);
    t.null = summarize(null, statistic_count, s);
  }
  return out;
}

PermutationTest rank_sum_baseline(const RankedPairs& ranked, const CategoryLabeling& labeling,
                                  std::string_view category, std::size_t permutations,
                                  std::uint64_t seed, unsigned jobs) {
  const std::size_t c = labeling.index_of(category);
  if (labeling.size_of(c) < 2) {
    throw Error(ErrorKind::DegenerateCategory,
                "category '" + std::string(category) + "' has fewer than 2 chunks");
  }
  const std::size_t k = labeling.categories.size();
  auto stat = [&](std::span<const std::size_t> labels, std::span<double> out) {
    std::vector<double> sums(k);
    rank_sums(ranked, labels, sums);
    out[0] = sums[c];
  };
  return permutation_test(labeling.chunk_category, 1, stat, Tail::Lower, permutations, seed, jobs)
      .front();
}

PermutationTest pooled_rank_sum_baseline(const RankedPairs& ranked, const CategoryLabeling& labeling,
                                         std::size_t permutations, std::uint64_t seed,
                                         unsigned jobs) {
  labeling.require_analysable();
  const std::size_t k = labeling.categories.size();
  auto stat = [&](std::span<const std::size_t> labels, std::span<double> out) {
    std::vector<double> sums(k);
    rank_sums(ranked, labels, sums);
    out[0] = std::accumulate(sums.begin(), sums.end(), 0.0);
  };
  return permutation_test(labeling.chunk_category, 1, stat, Tail::Lower, permutations, seed, jobs)
      .front();
}

Attribution attribute_chunks(const DissimilarityMatrix<double>& matrix, const CategoryLabeling& labeling) {
  labeling.require_analysable();
  const std::size_t k = labeling.categories.size();
  const auto sizes = category_sizes(labeling.chunk_category, k);
  std::vector<std::size_t> attributed;
  std::vector<bool> tied;
  std::vector<std::vector<double>> means;
  attribute(matrix.scores, labeling.chunk_category, sizes, attributed, tied, &means);

  Attribution out;
  out.hits.assign(k, 0);
  out.totals = sizes;
  for (std::size_t i = 0; i < labeling.chunk_count(); ++i) {
    ChunkAttribution a{i, labeling.chunk_category[i], attributed[i], std::move(means[i]), tied[i]};
    if (a.hit()) ++out.hits[a.true_category];
    if (a.tie) {
      std::string tied_with;
      for (std::size_t c = 0; c < k; ++c) {
        if (a.mean_dissimilarity[c] == a.mean_dissimilarity[a.attributed] &&
            (c != a.true_category || sizes[c] > 1)) {
          if (!tied_with.empty()) tied_with += ", ";
          tied_with += labeling.categories[c];
        }
      }
      out.ties_logged.push_back("chunk " + matrix.chunk_ids[i] + ": tie between " + tied_with +
                                "; attributed to " + labeling.categories[a.attributed]);
    }
    out.chunks.push_back(std::move(a));
  }
  return out;
}

std::vector<PermutationTest> attribution_baseline(const DissimilarityMatrix<double>& matrix,
                                                  const CategoryLabeling& labeling,
                                                  std::size_t permutations, std::uint64_t seed,
                                                  unsigned jobs) {
  labeling.require_analysable();
  const std::size_t k = labeling.categories.size();
  const auto sizes = category_sizes(labeling.chunk_category, k);
  auto stat = [&](std::span<const std::size_t> labels, std::span<double> out) {
    hit_counts(matrix.scores, labels, sizes, out);
  };
  return permutation_test(labeling.chunk_category, k, stat, Tail::Upper, permutations, seed, jobs);
}

HomogeneityAnalysis analyse_homogeneity(const DissimilarityMatrix<double>& matrix,
                                        const CategoryLabeling& labeling,
                                        const BaselineSettings& settings) {
  labeling.require_analysable();
  if (static_cast<std::size_t>(matrix.size()) != labeling.chunk_count()) {
    throw Error(ErrorKind::PreconditionFailed, "labeling does not match matrix size");
  }
  const std::size_t k = labeling.categories.size();
  const RankedPairs ranked = rank_pairs(matrix);

  // statistics 0..k-1 per category, k pooled; same shuffles as rank_sum_baseline
  auto rank_stat = [&](std::span<const std::size_t> labels, std::span<double> out) {
    rank_sums(ranked, labels, out.first(k));
    out[k] = std::accumulate(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(k), 0.0);
  };
  auto rank_tests = permutation_test(labeling.chunk_category, k + 1, rank_stat, Tail::Lower,
                                     settings.permutations, settings.seed, settings.jobs);
  auto attribution_tests =
      attribution_baseline(matrix, labeling, settings.permutations, settings.seed, settings.jobs);

  HomogeneityAnalysis out;
  out.attribution = attribute_chunks(matrix, labeling);
  out.pooled_rank_sum = rank_tests[k];
  for (std::size_t c = 0; c < k; ++c) {
    HomogeneityReport r;
    r.category = labeling.categories[c];
    r.chunks = labeling.size_of(c);
    r.rank_sum = rank_tests[c].observed;
    std::tie(r.rank_sum_min, r.rank_sum_max) = rank_sum_bounds(r.chunks, ranked.pairs.size());
    r.rank_sum_p = rank_tests[c].p_value;
    r.attribution_hits = out.attribution.hits[c];
    r.attribution_total = out.attribution.totals[c];
    r.attribution_p = attribution_tests[c].p_value;
    r.permutations = settings.permutations;
    r.seed = settings.seed;
    r.rank_sum_significant = r.rank_sum_p <= settings.threshold;
    r.attribution_significant = r.attribution_p <= settings.threshold;
    r.rank_sum_null = rank_tests[c].null;
    r.attribution_null = attribution_tests[c].null;
    out.reports.push_back(std::move(r));
  }
  return out;
}

}  // namespace idiolect
