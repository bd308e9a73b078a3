#include "ipmkit/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

namespace ipmkit {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::optional<std::vector<double>> parse_row(const std::string& line) {
  std::vector<double> values;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    const std::string field =
        trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    if (!field.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (field.empty() || ec != std::errc() || ptr != last) {
      return std::nullopt;
    }
    values.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

std::vector<std::vector<double>> read_rows(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto row = parse_row(line);
    if (!row) {
      if (first_content) {
        first_content = false;
        continue;  // header
      }
      throw DataError("csv line " + std::to_string(line_no) + ": non-numeric field");
    }
    first_content = false;
    if (!rows.empty() && row->size() != rows.front().size()) {
      throw DataError("csv line " + std::to_string(line_no) + ": expected " +
                      std::to_string(rows.front().size()) + " columns, got " +
                      std::to_string(row->size()));
    }
    for (double v : *row) {
      if (!std::isfinite(v)) {
        throw DataError("csv line " + std::to_string(line_no) + ": non-finite value");
      }
    }
    rows.push_back(std::move(*row));
  }
  if (rows.empty()) {
    throw DataError("csv contains no data rows");
  }
  return rows;
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open '" + path + "'");
  }
  return in;
}

}  // namespace

PointMatrix read_points_csv(std::istream& in) {
  const auto rows = read_rows(in);
  PointMatrix pts(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      pts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return pts;
}

PointMatrix read_points_csv(const std::string& path) {
  auto in = open(path);
  return read_points_csv(in);
}

LabeledRows read_labeled_csv(std::istream& in) {
  const auto rows = read_rows(in);
  const std::size_t width = rows.front().size();
  if (width < 2) {
    throw DataError("labeled csv needs at least one coordinate column and a label column");
  }
  LabeledRows out;
  out.points.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width - 1));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j + 1 < width; ++j) {
      out.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    const double label = rows[i].back();
    if (label != 1.0 && label != -1.0) {
      throw DataError("labeled csv row " + std::to_string(i + 1) + ": label must be +1 or -1");
    }
    out.labels.push_back(label > 0 ? 1 : -1);
  }
  return out;
}

LabeledRows read_labeled_csv(const std::string& path) {
  auto in = open(path);
  return read_labeled_csv(in);
}

void write_points_csv(std::ostream& out, const PointMatrix& points) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = 0; j < points.cols(); ++j) {
      if (j) os << ',';
      os << points(i, j);
    }
    os << '\n';
  }
  out << os.str();
}

}  // namespace ipmkit
