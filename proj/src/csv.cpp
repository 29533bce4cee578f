#include "horizonlaw/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

namespace horizonlaw {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      cells.push_back(trim(std::string_view(line).substr(start)));
      break;
    }
    cells.push_back(trim(std::string_view(line).substr(start, pos - start)));
    start = pos + 1;
  }
  return cells;
}

bool is_gap(const std::string& cell) {
  if (cell.empty()) return true;
  std::string low = cell;
  std::transform(low.begin(), low.end(), low.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return low == "nan";
}

std::optional<double> parse_number(const std::string& cell) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  // std::from_chars rejects an explicit plus sign; accept it like strtod does.
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || first == last) return std::nullopt;
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

Table parse_table(const std::string& text, const CsvOptions& opt) {
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (trim(line).empty()) continue;
      lines.push_back(line);
    }
  }
  if (lines.empty()) throw parse_error("empty input");

  std::vector<std::string> first = split_cells(lines.front());
  bool has_header;
  switch (opt.header) {
    case CsvOptions::Header::yes:
      has_header = true;
      break;
    case CsvOptions::Header::no:
      has_header = false;
      break;
    default:
      has_header = std::any_of(first.begin(), first.end(), [](const std::string& c) {
        return !is_gap(c) && !parse_number(c).has_value();
      });
  }

  Table table;
  table.had_header = has_header;
  const std::size_t cols = first.size();
  std::size_t line_idx = 0;
  if (has_header) {
    table.column_names = first;
    line_idx = 1;
    if (line_idx >= lines.size()) throw parse_error("no data rows");
  } else {
    for (std::size_t c = 1; c <= cols; ++c)
      table.column_names.push_back("c" + std::to_string(c));
  }

  // Parse into a gap-aware buffer first; row numbers are 1-based data rows.
  std::vector<std::vector<double>> rows;
  std::vector<std::vector<bool>> gaps;
  for (int data_row = 1; line_idx < lines.size(); ++line_idx, ++data_row) {
    const std::vector<std::string> cells = split_cells(lines[line_idx]);
    if (cells.size() != cols)
      throw parse_error("row " + std::to_string(data_row) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(cols),
                        data_row);
    std::vector<double> row(cols, 0.0);
    std::vector<bool> gap(cols, false);
    for (std::size_t c = 0; c < cols; ++c) {
      if (is_gap(cells[c])) {
        if (opt.gaps == GapPolicy::reject)
          throw parse_error("missing value at row " + std::to_string(data_row) +
                                ", column " + std::to_string(c + 1),
                            data_row, static_cast<int>(c + 1));
        gap[c] = true;
        continue;
      }
      const std::optional<double> v = parse_number(cells[c]);
      if (!v)
        throw parse_error("cannot parse '" + cells[c] + "' at row " +
                              std::to_string(data_row) + ", column " +
                              std::to_string(c + 1),
                          data_row, static_cast<int>(c + 1));
      row[c] = *v;
    }
    rows.push_back(std::move(row));
    gaps.push_back(std::move(gap));
  }

  if (opt.gaps == GapPolicy::drop_row) {
    std::vector<std::vector<double>> kept;
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (std::none_of(gaps[r].begin(), gaps[r].end(), [](bool g) { return g; }))
        kept.push_back(std::move(rows[r]));
    rows = std::move(kept);
  } else if (opt.gaps == GapPolicy::interpolate) {
    for (std::size_t c = 0; c < cols; ++c) {
      std::vector<std::size_t> known;
      for (std::size_t r = 0; r < rows.size(); ++r)
        if (!gaps[r][c]) known.push_back(r);
      if (known.empty())
        throw parse_error("column " + std::to_string(c + 1) + " has no values", -1,
                          static_cast<int>(c + 1));
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (!gaps[r][c]) continue;
        const auto next = std::lower_bound(known.begin(), known.end(), r);
        if (next == known.begin()) {
          rows[r][c] = rows[known.front()][c];
        } else if (next == known.end()) {
          rows[r][c] = rows[known.back()][c];
        } else {
          const std::size_t hi = *next, lo = *(next - 1);
          const double t = static_cast<double>(r - lo) / static_cast<double>(hi - lo);
          rows[r][c] = (1.0 - t) * rows[lo][c] + t * rows[hi][c];
        }
      }
    }
  }

  if (rows.empty()) throw parse_error("no data rows");
  table.values.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c)
      table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rows[r][c];
  return table;
}

Table load_table(const std::string& path, const CsvOptions& opt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw io_error("read failure: " + path);
  return parse_table(buf.str(), opt);
}

void write_table(const std::string& path,
                 const std::vector<std::string>& column_names,
                 const Eigen::MatrixXd& values) {
  if (static_cast<Eigen::Index>(column_names.size()) != values.cols())
    throw std::invalid_argument("column name count must match value columns");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path);
  for (std::size_t c = 0; c < column_names.size(); ++c) {
    if (c) out << ',';
    out << column_names[c];
  }
  out << '\n';
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      if (c) out << ',';
      out << format_double(values(r, c));
    }
    out << '\n';
  }
  if (!out) throw io_error("write failure: " + path);
}

}  // namespace horizonlaw
