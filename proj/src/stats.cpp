#include "courtrel/stats.hpp"

#include <cmath>
#include <limits>

#include "courtrel/errors.hpp"

namespace courtrel {

ContingencyTable::ContingencyTable(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), counts_(rows * cols, 0) {}

void ContingencyTable::add(std::size_t row, std::size_t col, std::int64_t n) {
  if (row >= rows_ || col >= cols_) throw InternalError("contingency index out of range");
  counts_[row * cols_ + col] += n;
}

std::int64_t ContingencyTable::at(std::size_t row, std::size_t col) const {
  if (row >= rows_ || col >= cols_) throw InternalError("contingency index out of range");
  return counts_[row * cols_ + col];
}

std::int64_t ContingencyTable::row_total(std::size_t row) const {
  std::int64_t total = 0;
  for (std::size_t c = 0; c < cols_; ++c) total += at(row, c);
  return total;
}

std::int64_t ContingencyTable::col_total(std::size_t col) const {
  std::int64_t total = 0;
  for (std::size_t r = 0; r < rows_; ++r) total += at(r, col);
  return total;
}

std::int64_t ContingencyTable::grand_total() const {
  std::int64_t total = 0;
  for (auto v : counts_) total += v;
  return total;
}

ContingencyTable count_instances(
    const std::vector<std::pair<RelationType, Kappa>>& labeled) {
  ContingencyTable table(kRelationCount, kKappaCount);
  for (const auto& [relation, pool] : labeled) {
    table.add(static_cast<std::size_t>(relation), static_cast<std::size_t>(pool));
  }
  return table;
}

double pmi(const ContingencyTable& table, std::size_t row, std::size_t col,
           double smoothing, LogBase base) {
  std::int64_t n = table.grand_total();
  if (n == 0) throw EmptyTable();

  double cell = static_cast<double>(table.at(row, col));
  double row_sum = static_cast<double>(table.row_total(row));
  double col_sum = static_cast<double>(table.col_total(col));
  double total = static_cast<double>(n);
  if (smoothing > 0.0) {
    cell += smoothing;
    row_sum += smoothing * static_cast<double>(table.cols());
    col_sum += smoothing * static_cast<double>(table.rows());
    total += smoothing * static_cast<double>(table.rows() * table.cols());
  }
  if (cell == 0.0) return -std::numeric_limits<double>::infinity();

  double value = std::log((cell * total) / (row_sum * col_sum));
  if (base == LogBase::Two) value /= std::log(2.0);
  return value;
}

PmiMatrix pmi_matrix(const ContingencyTable& table, double smoothing, LogBase base) {
  PmiMatrix matrix;
  matrix.base = base;
  matrix.values.assign(table.rows(), std::vector<double>(table.cols(), 0.0));
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.cols(); ++c) {
      matrix.values[r][c] = pmi(table, r, c, smoothing, base);
    }
  }
  return matrix;
}

}  // namespace courtrel
