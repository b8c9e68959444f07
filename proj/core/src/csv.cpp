#include "ldot/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include "ldot/errors.hpp"

namespace ldot {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_field(std::string_view field, const std::string& source, std::size_t line,
                   std::size_t column) {
  if (field.empty()) throw CsvError(source, line, column, "empty field");
  double v = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw CsvError(source, line, column, "cannot parse '" + std::string(field) + "' as a number");
  if (!std::isfinite(v)) throw CsvError(source, line, column, "non-finite value");
  return v;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError(path, 0, 0, "cannot open file");
  return in;
}

}  // namespace

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

DiscreteMeasure parse_measure_csv(std::istream& in, const std::string& source_name) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  bool have_header = false;
  std::vector<std::vector<double>> points;
  std::vector<double> weights;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (!have_header) {
      if (fields.size() < 2 || fields.back() != "weight")
        throw CsvError(source_name, line_no, 0,
                       "expected header coord_1,...,coord_d,weight");
      for (std::size_t k = 0; k + 1 < fields.size(); ++k)
        if (fields[k] != "coord_" + std::to_string(k + 1))
          throw CsvError(source_name, line_no, k + 1,
                         "expected column name coord_" + std::to_string(k + 1));
      dim = fields.size() - 1;
      have_header = true;
      continue;
    }
    if (fields.size() != dim + 1)
      throw CsvError(source_name, line_no, 0,
                     "expected " + std::to_string(dim + 1) + " fields, found " +
                         std::to_string(fields.size()));
    std::vector<double> p(dim);
    for (std::size_t k = 0; k < dim; ++k) p[k] = parse_field(fields[k], source_name, line_no, k + 1);
    points.push_back(std::move(p));
    weights.push_back(parse_field(fields[dim], source_name, line_no, dim + 1));
  }
  if (!have_header) throw CsvError(source_name, line_no, 0, "missing header");
  if (points.empty()) throw CsvError(source_name, line_no, 0, "no atoms");
  try {
    return build_measure(points, weights);
  } catch (const InvalidArgument& e) {
    throw CsvError(source_name, 0, 0, e.what());
  }
}

DiscreteMeasure read_measure_csv(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_measure_csv(in, path);
}

void write_measure_csv(std::ostream& out, const DiscreteMeasure& measure) {
  for (std::size_t k = 0; k < measure.dim(); ++k) out << "coord_" << (k + 1) << ',';
  out << "weight\n";
  for (std::size_t i = 0; i < measure.size(); ++i) {
    for (double x : measure.point(i)) out << format_number(x) << ',';
    out << format_number(measure.weight(i)) << '\n';
  }
}

Matrix parse_cost_csv(std::istream& in, const std::string& source_name) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (!rows.empty() && fields.size() != rows.front().size())
      throw CsvError(source_name, line_no, 0,
                     "expected " + std::to_string(rows.front().size()) + " fields, found " +
                         std::to_string(fields.size()));
    std::vector<double> r(fields.size());
    for (std::size_t k = 0; k < fields.size(); ++k) {
      r[k] = parse_field(fields[k], source_name, line_no, k + 1);
      if (r[k] < 0.0) throw CsvError(source_name, line_no, k + 1, "negative cost");
    }
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw CsvError(source_name, line_no, 0, "empty cost matrix");
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

Matrix read_cost_csv(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_cost_csv(in, path);
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_number(m(i, j));
    }
    out << '\n';
  }
}

}  // namespace ldot
