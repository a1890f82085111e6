#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace boxlat::tsv {

struct Row {
  std::size_t line = 0;  // 1-based line number in the source
  std::vector<std::string> fields;
};

// Reads a tab-separated file. Blank lines and lines starting with '#' are
// skipped. Throws DataError naming the path when the file cannot be opened.
std::vector<Row> read_file(const std::filesystem::path& path);
std::vector<Row> read_text(std::string_view text);

std::vector<std::string> split(std::string_view line, char sep = '\t');

// Parses a finite or infinite decimal; throws DataError("<where>:<line>: ...").
double parse_double(std::string_view text, std::string_view where, std::size_t line);
std::size_t parse_size(std::string_view text, std::string_view where, std::size_t line);

// printf-style "%.<digits>g" formatting.
std::string format(double value, int significant_digits);

// Writes `contents` to `path`, throwing DataError on failure.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace boxlat::tsv
