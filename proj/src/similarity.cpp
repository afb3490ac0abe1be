#include "idiolect/similarity.hpp"

#include <charconv>
#include <cmath>

#include "idiolect/csv.hpp"

namespace idiolect {

std::string format_fixed6(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, 6);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

DissimilarityMatrix<double> read_matrix_csv(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty() || rows.front().empty() || rows.front().front() != "chunk_id") {
    throw Error(ErrorKind::MalformedInput, "matrix CSV: missing header row");
  }
  DissimilarityMatrix<double> m;
  m.chunk_ids.assign(rows.front().begin() + 1, rows.front().end());
  const auto n = static_cast<Eigen::Index>(m.chunk_ids.size());
  if (rows.size() != m.chunk_ids.size() + 1) {
    throw Error(ErrorKind::MalformedInput, "matrix CSV: row count does not match header");
  }
  m.scores = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i) + 1];
    if (row.size() != m.chunk_ids.size() + 1 || row.front() != m.chunk_ids[static_cast<std::size_t>(i)]) {
      throw Error(ErrorKind::MalformedInput, "matrix CSV: malformed row " + std::to_string(i + 1));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& cell = row[static_cast<std::size_t>(j) + 1];
      double v = 0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v) || v < 0) {
        throw Error(ErrorKind::MalformedInput, "matrix CSV: bad value '" + cell + "'");
      }
      m.scores(i, j) = v;
    }
  }
  return m;
}

}  // namespace idiolect
