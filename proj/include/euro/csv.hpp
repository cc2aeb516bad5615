#pragma once

#include <string>
#include <vector>

namespace euro {

// Minimal CSV support for the interchange files: UTF-8, comma-separated,
// one header row, no quoting (team ids and bookmaker names must not contain
// commas).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path);

// Throws DataError naming the file when the header differs from `expected`.
void require_header(const CsvTable& table, const std::vector<std::string>& expected,
                    const std::string& path);

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace euro
