#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace supstable {

/// Shortest decimal text that reads back to the same double ("." decimal
/// separator regardless of locale).
void append_number(std::string& line, double v);

struct CsvColumn {
  std::string name;
  std::vector<double> values;
};

/// Writes the optional `# ...` comment line, the header row and one row per
/// index of the (equal-length) columns.
void write_csv(std::ostream& out, const std::string& comment,
               const std::vector<CsvColumn>& columns);
void write_csv(const std::filesystem::path& path, const std::string& comment,
               const std::vector<CsvColumn>& columns);

/// Opens a file for writing in binary mode; throws std::runtime_error.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace supstable
