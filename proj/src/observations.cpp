#include "hazkde/observations.hpp"

#include <fstream>
#include <sstream>

namespace hazkde {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_value(const std::string& field, std::size_t line) {
  const std::string t = trim(field);
  if (t.empty()) throw ParseError("empty value", line);
  try {
    std::size_t pos = 0;
    const double v = std::stod(t, &pos);
    if (pos != t.size())
      throw ParseError("trailing characters after number: '" + t + "'", line);
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (...) {
    throw ParseError("not a number: '" + t + "'", line);
  }
}

std::vector<std::string> split_csv(const std::string& row) {
  std::vector<std::string> out;
  std::stringstream ss(row);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!row.empty() && row.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::vector<double> read_observations(const std::string& path,
                                      const std::optional<std::string>& column) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);

  std::vector<double> out;
  std::string row;
  std::size_t line = 0;

  if (!column) {
    while (std::getline(in, row)) {
      ++line;
      const std::string t = trim(row);
      if (t.empty()) continue;
      out.push_back(parse_value(t, line));
    }
    return out;
  }

  // CSV with a header row naming the columns
  std::size_t col_index = 0;
  bool header_seen = false;
  while (std::getline(in, row)) {
    ++line;
    if (trim(row).empty()) continue;
    const auto fields = split_csv(row);
    if (!header_seen) {
      header_seen = true;
      bool found = false;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (trim(fields[i]) == *column) {
          col_index = i;
          found = true;
          break;
        }
      }
      if (!found)
        throw ParseError("column '" + *column + "' not found in header", line);
      continue;
    }
    if (col_index >= fields.size())
      throw ParseError("row has no column '" + *column + "'", line);
    out.push_back(parse_value(fields[col_index], line));
  }
  if (!header_seen && column)
    throw ParseError("missing CSV header", line == 0 ? 1 : line);
  return out;
}

}  // namespace hazkde
