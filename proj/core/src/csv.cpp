#include "muod/csv.hpp"

#include <array>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <utility>

#include "muod/errors.hpp"
#include "muod/matrix.hpp"

namespace muod {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

bool parse_number(const std::string& field, double& out) {
  const std::string t = trim(field);
  if (t.empty()) return false;
  const char* begin = t.c_str();
  char* end = nullptr;
  errno = 0;
  out = std::strtod(begin, &end);
  return end == begin + t.size() && errno != ERANGE;
}

[[noreturn]] void bad_cell(std::size_t row, std::size_t col, const std::string& what) {
  throw InvalidData("row " + std::to_string(row) + ", column " + std::to_string(col) +
                    ": " + what);
}

}  // namespace

std::string format_double(double x) {
  std::array<char, 32> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw NumericalFailure("double formatting failed");
  return std::string(buf.data(), ptr);
}

FunctionalSample read_curves_csv(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;  // blank lines carry no data
    lines.push_back(line);
  }
  if (lines.empty()) throw InvalidData("empty CSV input");

  // Header detection: all fields past an optional leading "id" start with "t=".
  std::vector<std::string> first = split_fields(lines[0]);
  bool has_header = false;
  bool has_ids = false;
  std::optional<std::vector<double>> grid;
  {
    std::size_t from = 0;
    if (!first.empty() && trim(first[0]) == "id") {
      from = 1;
      has_ids = true;
    }
    bool all_t = first.size() > from;
    for (std::size_t j = from; j < first.size(); ++j)
      if (trim(first[j]).rfind("t=", 0) != 0) {
        all_t = false;
        break;
      }
    if (all_t) {
      has_header = true;
      std::vector<double> g;
      for (std::size_t j = from; j < first.size(); ++j) {
        double v = 0;
        if (!parse_number(trim(first[j]).substr(2), v) || !std::isfinite(v))
          bad_cell(1, j + 1, "malformed grid value");
        g.push_back(v);
      }
      grid = std::move(g);
    } else if (from == 1) {
      // "id" first field but the rest are not grid labels: still a header
      // is the only consistent reading, since "id" never parses as data.
      has_header = true;
    }
  }

  const std::size_t data_begin = has_header ? 1 : 0;
  if (data_begin >= lines.size()) throw InvalidData("CSV has a header but no curves");

  if (!has_header) {
    // Without a header the id column is inferred from the first data field.
    double probe = 0;
    has_ids = !parse_number(split_fields(lines[0])[0], probe);
  }

  std::vector<std::string> ids;
  std::vector<double> values;
  std::size_t d = 0;
  const std::size_t n = lines.size() - data_begin;

  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t row_no = data_begin + r + 1;  // 1-based in the file
    std::vector<std::string> fields = split_fields(lines[data_begin + r]);
    const std::size_t from = has_ids ? 1 : 0;
    if (fields.size() <= from) bad_cell(row_no, 1, "row has no values");
    const std::size_t width = fields.size() - from;
    if (r == 0) {
      d = width;
      values.reserve(n * d);
    } else if (width != d) {
      throw InvalidData("row " + std::to_string(row_no) + ": expected " +
                        std::to_string(d) + " values, found " + std::to_string(width));
    }
    if (has_ids) ids.push_back(trim(fields[0]));
    for (std::size_t j = 0; j < width; ++j) {
      double v = 0;
      if (!parse_number(fields[from + j], v))
        bad_cell(row_no, from + j + 1, "not a number");
      if (!std::isfinite(v)) bad_cell(row_no, from + j + 1, "non-finite value");
      values.push_back(v);
    }
  }

  if (grid && grid->size() != d)
    throw InvalidData("header lists " + std::to_string(grid->size()) +
                      " grid points for rows of width " + std::to_string(d));

  Matrix m;
  m.rows = n;
  m.cols = d;
  m.data = std::move(values);
  return FunctionalSample(
      std::move(m), std::move(grid),
      has_ids ? std::optional<std::vector<std::string>>(std::move(ids)) : std::nullopt);
}

FunctionalSample read_curves_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidData("cannot open " + path);
  return read_curves_csv(in);
}

void write_curves_csv(std::ostream& out, const FunctionalSample& sample) {
  const bool has_ids = sample.ids().has_value();
  if (sample.grid()) {
    if (has_ids) out << "id,";
    const std::vector<double>& g = *sample.grid();
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (j) out << ',';
      out << "t=" << format_double(g[j]);
    }
    out << '\n';
  }
  for (std::size_t i = 0; i < sample.n(); ++i) {
    if (has_ids) out << (*sample.ids())[i] << ',';
    const auto row = sample.curve(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      out << format_double(row[j]);
    }
    out << '\n';
  }
}

void write_curves_csv(const std::string& path, const FunctionalSample& sample) {
  std::ofstream out(path);
  if (!out) throw InvalidData("cannot write " + path);
  write_curves_csv(out, sample);
  if (!out) throw InvalidData("write failed for " + path);
}

void write_labels_csv(std::ostream& out, const std::vector<std::string>& ids,
                      const std::vector<bool>& is_outlier,
                      const std::vector<int>& submodel) {
  if (ids.size() != is_outlier.size())
    throw InvalidData("label table: ids and flags differ in length");
  out << "id,is_outlier,submodel\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << ids[i] << ',' << (is_outlier[i] ? 1 : 0) << ',';
    if (i < submodel.size() && submodel[i] > 0) out << submodel[i];
    out << '\n';
  }
}

void write_labels_csv(const std::string& path, const std::vector<std::string>& ids,
                      const std::vector<bool>& is_outlier,
                      const std::vector<int>& submodel) {
  std::ofstream out(path);
  if (!out) throw InvalidData("cannot write " + path);
  write_labels_csv(out, ids, is_outlier, submodel);
  if (!out) throw InvalidData("write failed for " + path);
}

}  // namespace muod
