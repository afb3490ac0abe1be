#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "idiolect/csv.hpp"
#include "idiolect/error.hpp"
#include "idiolect/parallel.hpp"
#include "idiolect/tokenization.hpp"

namespace idiolect {

/// Divisor applied to the summed per-token chi-square contributions.
enum class Normalization {
  UnionSize,          // |union vocabulary|, the default
  UnionSizeMinusOne,  // degrees-of-freedom variant, max(|union| - 1, 1)
};

namespace detail {

/// Neumaier-compensated running sum.
template <typename Scalar>
class CompensatedSum {
 public:
  void add(Scalar x) noexcept {
    const Scalar t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  Scalar value() const noexcept { return sum_ + carry_; }

 private:
  Scalar sum_{0};
  Scalar carry_{0};
};

// (observed - expected)^2 / expected with expected = n * pooled / grand_total.
template <typename Scalar>
Scalar cell_term(Scalar observed, Scalar n, Scalar pooled, Scalar grand_total) {
  const Scalar expected = n * pooled / grand_total;
  const Scalar diff = observed - expected;
  return diff * diff / expected;
}

}  // namespace detail

/// Average two-sample chi-square over the union vocabulary of two distributions, with
/// expectations taken from the pooled counts. Symmetric to the last bit; zero for
/// identical count maps; larger means more different.
template <typename Scalar = double>
Scalar chi_square_dissimilarity(const TokenDistribution& a, const TokenDistribution& b,
                                Normalization normalization = Normalization::UnionSize) {
  if (!(a.mode == b.mode)) {
    throw Error(ErrorKind::ModeMismatch, "cannot compare " + a.mode.name() + " with " + b.mode.name());
  }
  if (a.total <= 0 || b.total <= 0) {
    throw Error(ErrorKind::EmptyDistribution,
                "empty distribution for chunk '" + (a.total <= 0 ? a.chunk_id : b.chunk_id) + "'");
  }
  const auto n_a = static_cast<Scalar>(a.total);
  const auto n_b = static_cast<Scalar>(b.total);
  const Scalar grand = n_a + n_b;

  detail::CompensatedSum<Scalar> sum;
  std::size_t union_size = 0;
  auto contribute = [&](std::int64_t count_a, std::int64_t count_b) {
    const auto ca = static_cast<Scalar>(count_a);
    const auto cb = static_cast<Scalar>(count_b);
    const Scalar pooled = ca + cb;
    // x + y == y + x exactly, so swapping the arguments cannot change the result
    sum.add(detail::cell_term(ca, n_a, pooled, grand) + detail::cell_term(cb, n_b, pooled, grand));
    ++union_size;
  };

  // merge walk in code-point order
  auto ia = a.counts.begin();
  auto ib = b.counts.begin();
  while (ia != a.counts.end() || ib != b.counts.end()) {
    if (ib == b.counts.end() || (ia != a.counts.end() && ia->first < ib->first)) {
      contribute(ia->second, 0);
      ++ia;
    } else if (ia == a.counts.end() || ib->first < ia->first) {
      contribute(0, ib->second);
      ++ib;
    } else {
      contribute(ia->second, ib->second);
      ++ia;
      ++ib;
    }
  }

  const std::size_t divisor = normalization == Normalization::UnionSize
                                  ? union_size
                                  : std::max<std::size_t>(union_size, 2) - 1;
  return sum.value() / static_cast<Scalar>(divisor);
}

/// Symmetric matrix of pairwise dissimilarities with exact-zero diagonal. Rows and columns
/// follow the lexicographically sorted chunk ids.
template <typename Scalar = double>
struct DissimilarityMatrix {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  std::vector<std::string> chunk_ids;
  Matrix scores;

  Eigen::Index size() const noexcept { return scores.rows(); }
};

template <typename Scalar = double>
DissimilarityMatrix<Scalar> pairwise_matrix(std::span<const TokenDistribution> dists,
                                            Normalization normalization = Normalization::UnionSize,
                                            unsigned jobs = 1) {
  if (dists.size() < 2) {
    throw Error(ErrorKind::DegenerateCategory, "a dissimilarity matrix needs at least 2 chunks");
  }
  std::vector<std::size_t> order(dists.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return dists[x].chunk_id < dists[y].chunk_id; });

  const auto n = static_cast<Eigen::Index>(dists.size());
  DissimilarityMatrix<Scalar> out;
  out.chunk_ids.reserve(dists.size());
  for (std::size_t i : order) out.chunk_ids.push_back(dists[i].chunk_id);
  out.scores = DissimilarityMatrix<Scalar>::Matrix::Zero(n, n);

  // one task per row of the upper triangle; each task writes only its own cells
  parallel_for(dists.size(), jobs, [&](std::size_t row) {
    const auto i = static_cast<Eigen::Index>(row);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      out.scores(i, j) = chi_square_dissimilarity<Scalar>(dists[order[row]],
                                                          dists[order[static_cast<std::size_t>(j)]],
                                                          normalization);
    }
  });
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) out.scores(j, i) = out.scores(i, j);
  }
  return out;
}

/// Fixed six decimals, ties to even on the exact binary value.
std::string format_fixed6(double value);

/// Header row "chunk_id,<ids...>", then one row per chunk.
template <typename Scalar>
std::string matrix_csv(const DissimilarityMatrix<Scalar>& m) {
  std::vector<std::string> header{"chunk_id"};
  header.insert(header.end(), m.chunk_ids.begin(), m.chunk_ids.end());
  std::string out = csv::row(header);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    std::vector<std::string> fields{m.chunk_ids[static_cast<std::size_t>(i)]};
    for (Eigen::Index j = 0; j < m.size(); ++j) {
      fields.push_back(format_fixed6(static_cast<double>(m.scores(i, j))));
    }
    out += csv::row(fields);
  }
  return out;
}

/// Reads a matrix written by matrix_csv.
DissimilarityMatrix<double> read_matrix_csv(std::string_view text);

}  // namespace idiolect
