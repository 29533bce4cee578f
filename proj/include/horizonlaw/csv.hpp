#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace horizonlaw {

struct parse_error : std::runtime_error {
  parse_error(const std::string& msg, int row = -1, int col = -1)
      : std::runtime_error(msg), row(row), col(col) {}
  int row;  // 1-based data row; -1 when not positional
  int col;  // 1-based column
};

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Policy for gap cells (empty or "nan", case-insensitive).
enum class GapPolicy { reject, drop_row, interpolate };

struct CsvOptions {
  enum class Header { detect, yes, no };
  Header header = Header::detect;
  GapPolicy gaps = GapPolicy::reject;
};

struct Table {
  std::vector<std::string> column_names;  // synthesized c1..cV when absent
  Eigen::MatrixXd values;
  bool had_header = false;
};

// Strict numeric CSV reader. Non-numeric cells (other than gaps) raise
// parse_error with 1-based row/column; an empty file raises parse_error.
Table load_table(const std::string& path, const CsvOptions& opt = {});
Table parse_table(const std::string& text, const CsvOptions& opt = {});

// Writes header + rows in %.15g (>= 12 significant digits, stable bytes).
void write_table(const std::string& path,
                 const std::vector<std::string>& column_names,
                 const Eigen::MatrixXd& values);

std::string format_double(double v);  // %.15g

}  // namespace horizonlaw
