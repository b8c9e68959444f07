#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "ldot/matrix.hpp"
#include "ldot/measure.hpp"

namespace ldot {

/// Shortest round-tripping text for a double: 17 significant digits.
std::string format_number(double value);

/// Measure CSV: header `coord_1,...,coord_d,weight`, one atom per row.
DiscreteMeasure parse_measure_csv(std::istream& in, const std::string& source_name);
DiscreteMeasure read_measure_csv(const std::string& path);
void write_measure_csv(std::ostream& out, const DiscreteMeasure& measure);

/// Cost CSV: n rows of m comma-separated nonnegative reals, no header.
Matrix parse_cost_csv(std::istream& in, const std::string& source_name);
Matrix read_cost_csv(const std::string& path);

/// Writes a dense matrix without header, one row per line.
void write_matrix_csv(std::ostream& out, const Matrix& m);

}  // namespace ldot
