#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hazkde {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Reads observations from a file: one decimal float per line, blank lines
// ignored.  With `column` set the file is parsed as CSV with a header row
// and values come from the named column.  Non-numeric content raises
// ParseError carrying the 1-based line number.
std::vector<double> read_observations(
    const std::string& path, const std::optional<std::string>& column = {});

}  // namespace hazkde
