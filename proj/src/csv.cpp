#include "supstable/csv.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace supstable {

void append_number(std::string& line, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  line.append(buf, res.ptr);
}

void write_csv(std::ostream& out, const std::string& comment,
               const std::vector<CsvColumn>& columns) {
  if (!comment.empty()) {
    out << "# " << comment << '\n';
  }
  std::string line;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    line += (c ? "," : "") + columns[c].name;
  }
  out << line << '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().values.size();
  for (const CsvColumn& col : columns) {
    if (col.values.size() != rows) {
      throw std::invalid_argument("csv column '" + col.name +
                                  "' has the wrong length");
    }
  }
  for (std::size_t r = 0; r < rows; ++r) {
    line.clear();
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) {
        line += ',';
      }
      append_number(line, columns[c].values[r]);
    }
    line += '\n';
    out << line;
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write '" + path.string() + "'");
  }
  return out;
}

void write_csv(const std::filesystem::path& path, const std::string& comment,
               const std::vector<CsvColumn>& columns) {
  std::ofstream out = open_output(path);
  write_csv(out, comment, columns);
  if (!out) {
    throw std::runtime_error("error writing '" + path.string() + "'");
  }
}

}  // namespace supstable
