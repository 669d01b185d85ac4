#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "muod/functional_sample.hpp"

namespace muod {

// Reads a sample from CSV, one curve per row.
//
// Layout rules:
//   * An optional header row is recognized when its fields (past an optional
//     leading "id") all start with "t=". The suffixes become the grid.
//   * An id column is assumed when the header's first field is "id", or,
//     without a header, when the first field of the first data row does not
//     parse as a number.
//   * Every remaining field must be a finite number and all rows must have
//     the same width. Violations raise InvalidData naming the 1-based row
//     and column.
FunctionalSample read_curves_csv(std::istream& in);
FunctionalSample read_curves_csv(const std::string& path);

// Writes the same layout back: header iff a grid is stored, id column iff
// ids are stored. Numbers use the shortest representation that restores the
// exact double, so a write/read round trip is value-identical.
void write_curves_csv(std::ostream& out, const FunctionalSample& sample);
void write_curves_csv(const std::string& path, const FunctionalSample& sample);

// One row per curve: id,is_outlier(0/1),submodel (empty when inapplicable).
void write_labels_csv(std::ostream& out, const std::vector<std::string>& ids,
                      const std::vector<bool>& is_outlier,
                      const std::vector<int>& submodel);
void write_labels_csv(const std::string& path, const std::vector<std::string>& ids,
                      const std::vector<bool>& is_outlier,
                      const std::vector<int>& submodel);

// Shortest decimal string that parses back to exactly this double.
std::string format_double(double x);

}  // namespace muod
