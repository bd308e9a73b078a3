#pragma once

#include "ipmkit/core.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace ipmkit {

/// One point per row, comma separated. A first row that does not parse as
/// numbers is treated as a header and skipped. Blank lines are ignored.
PointMatrix read_points_csv(std::istream& in);
PointMatrix read_points_csv(const std::string& path);

struct LabeledRows {
  PointMatrix points;
  std::vector<int> labels;
};

/// Like read_points_csv, with a trailing +1/-1 label column.
LabeledRows read_labeled_csv(std::istream& in);
LabeledRows read_labeled_csv(const std::string& path);

void write_points_csv(std::ostream& out, const PointMatrix& points);

}  // namespace ipmkit
