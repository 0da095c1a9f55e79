#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace cmvwalk {

/// Shortest decimal form that round-trips to the same binary64 value.
std::string format_double(double x);

/// Header row plus comma-separated rows, '\n' line endings.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header);

  CsvWriter& field(double x);
  CsvWriter& field(long long x);
  CsvWriter& field(std::string_view s);
  void end_row();

 private:
  void sep();
  std::ostream& out_;
  bool first_ = true;
};

}  // namespace cmvwalk
