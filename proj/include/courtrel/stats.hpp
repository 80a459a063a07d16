#ifndef COURTREL_STATS_HPP
#define COURTREL_STATS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "courtrel/grouping.hpp"
#include "courtrel/relext.hpp"

namespace courtrel {

class ContingencyTable {
 public:
  ContingencyTable(std::size_t rows, std::size_t cols);

  void add(std::size_t row, std::size_t col, std::int64_t n = 1);
  std::int64_t at(std::size_t row, std::size_t col) const;
  std::int64_t row_total(std::size_t row) const;
  std::int64_t col_total(std::size_t col) const;
  std::int64_t grand_total() const;
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool operator==(const ContingencyTable&) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::int64_t> counts_;
};

// 7x4 relation-by-pool table. A lawyer-utterance instance appears once per
// pool it belongs to, so it increments two cells (and N twice).
ContingencyTable count_instances(
    const std::vector<std::pair<RelationType, Kappa>>& labeled);

enum class LogBase { Natural, Two };

// log[(f/N) / ((row/N)(col/N))] with every cell replaced by f+smoothing when
// smoothing > 0 (marginals re-derived from the smoothed cells).
// Returns -infinity for a zero cell with smoothing off. Throws EmptyTable
// when N == 0.
double pmi(const ContingencyTable& table, std::size_t row, std::size_t col,
           double smoothing = 0.0, LogBase base = LogBase::Natural);

struct PmiMatrix {
  std::vector<std::vector<double>> values;
  LogBase base = LogBase::Natural;

  std::size_t rows() const { return values.size(); }
  std::size_t cols() const { return values.empty() ? 0 : values.front().size(); }
};

PmiMatrix pmi_matrix(const ContingencyTable& table, double smoothing = 0.0,
                     LogBase base = LogBase::Natural);

}  // namespace courtrel

#endif
