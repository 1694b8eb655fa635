#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "incmax/rational.hpp"

namespace incmax {

using json = nlohmann::json;

// Shortest decimal text that reads back to the same binary64.
std::string format_double(double x);

// A JSON string ("p/q", decimal) or number; numbers are taken at their exact binary value.
Rational rational_from_json(const json& value);

json read_json_file(const std::string& path);

// Writes rows of pre-formatted cells with a header line.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& out_;
  std::size_t width_;
};

}  // namespace incmax
