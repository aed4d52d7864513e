#include "equidisp/csv.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace equidisp {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(field);
  for (std::string& f : fields) {
    // Trim whitespace and surrounding quotes.
    const auto b = f.find_first_not_of(" \t\"");
    const auto e = f.find_last_not_of(" \t\"");
    f = (b == std::string::npos) ? std::string() : f.substr(b, e - b + 1);
  }
  return fields;
}

bool parse_number(const std::string& text, double& out) {
  if (text.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtod(text.c_str(), &end);
  return end == text.c_str() + text.size() && errno == 0;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;   // data rows
  std::vector<std::size_t> row_lines;           // 1-based file line numbers
};

Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);

  Table t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (t.header.empty()) {
      t.header = std::move(fields);
    } else {
      t.rows.push_back(std::move(fields));
      t.row_lines.push_back(line_no);
    }
  }
  if (t.header.empty()) throw ParseError("empty file: " + path);
  if (t.rows.empty()) throw ParseError("no data rows in: " + path);
  return t;
}

std::size_t column_index(const Table& t, const std::string& name,
                         std::size_t fallback) {
  if (name.empty()) {
    if (fallback >= t.header.size())
      throw ParseError("file has too few columns");
    return fallback;
  }
  for (std::size_t i = 0; i < t.header.size(); ++i)
    if (t.header[i] == name) return i;
  throw ParseError("column not found: " + name);
}

}  // namespace

Sample2D load_xy_csv(const std::string& path, const std::string& x_col,
                     const std::string& y_col) {
  const Table t = read_table(path);
  const std::size_t ix = column_index(t, x_col, 0);
  const std::size_t iy = column_index(t, y_col, 1);

  Sample2D out;
  out.pairs.reserve(t.rows.size());
  std::vector<std::size_t> bad_lines;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    double x = 0.0, y = 0.0;
    if (row.size() <= std::max(ix, iy) || !parse_number(row[ix], x) ||
        !parse_number(row[iy], y)) {
      bad_lines.push_back(t.row_lines[r]);
      continue;
    }
    out.pairs.emplace_back(x, y);
  }
  if (!bad_lines.empty()) {
    std::ostringstream msg;
    msg << path << ": " << bad_lines.size()
        << " row(s) with missing or non-numeric entries at line(s)";
    for (std::size_t i = 0; i < bad_lines.size() && i < 10; ++i)
      msg << ' ' << bad_lines[i];
    if (bad_lines.size() > 10) msg << " ...";
    throw ParseError(msg.str(), bad_lines);
  }
  return out;
}

std::vector<double> load_column_csv(const std::string& path,
                                    const std::string& col) {
  const Table t = read_table(path);
  const std::size_t ic = column_index(t, col, 0);

  std::vector<double> out;
  out.reserve(t.rows.size());
  std::vector<std::size_t> bad_lines;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    double v = 0.0;
    if (row.size() <= ic || !parse_number(row[ic], v)) {
      bad_lines.push_back(t.row_lines[r]);
      continue;
    }
    out.push_back(v);
  }
  if (!bad_lines.empty()) {
    std::ostringstream msg;
    msg << path << ": " << bad_lines.size()
        << " row(s) with missing or non-numeric entries";
    throw ParseError(msg.str(), bad_lines);
  }
  return out;
}

void write_xy_csv(const std::string& path, const Sample2D& s) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open for writing: " + path);
  out << "x,y\n";
  out.precision(17);
  for (const auto& [x, y] : s.pairs) out << x << ',' << y << '\n';
  if (!out) throw ParseError("write failed: " + path);
}

}  // namespace equidisp
