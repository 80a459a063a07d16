#ifndef COURTREL_REPORT_HPP
#define COURTREL_REPORT_HPP

#include <string>

#include "courtrel/stats.hpp"

namespace courtrel {

// Self-contained SVG marker chart of MI(R, kappa): x axis IsA..UsedWith,
// one marker series per pool (A circle, B square, C left-triangle,
// D right-triangle). -infinity cells render as a down arrow pinned under the
// plot floor. Byte-deterministic for equal inputs.
std::string render_mi_chart(const PmiMatrix& matrix);

std::string mi_csv(const ContingencyTable& table, const PmiMatrix& matrix);
std::string marginals_csv(const ContingencyTable& table);

}  // namespace courtrel

#endif
