#include "euro/csv.hpp"

#include <fstream>
#include <sstream>

#include "euro/errors.hpp"

namespace euro {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      table.rows.push_back(std::move(fields));
    }
  }
  if (first) throw DataError("empty file (missing header): " + path);
  return table;
}

void require_header(const CsvTable& table, const std::vector<std::string>& expected,
                    const std::string& path) {
  if (table.header != expected) {
    std::string want, got;
    for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
    for (const auto& h : table.header) got += (got.empty() ? "" : ",") + h;
    throw DataError(path + ": header mismatch, expected '" + want + "' got '" + got + "'");
  }
}

}  // namespace euro
