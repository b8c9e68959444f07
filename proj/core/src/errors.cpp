#include "ldot/errors.hpp"

namespace ldot {

namespace {

std::string format_csv_error(const std::string& path, std::size_t line, std::size_t column,
                             const std::string& what) {
  std::string msg = path + ":" + std::to_string(line);
  if (column > 0) msg += ":" + std::to_string(column);
  return msg + ": " + what;
}

}  // namespace

CsvError::CsvError(std::string path, std::size_t line, std::size_t column, const std::string& what)
    : Error(format_csv_error(path, line, column, what)),
      path_(std::move(path)),
      line_(line),
      column_(column) {}

}  // namespace ldot
