#pragma once

#include "lightesd/core.hpp"

#include <cstddef>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace lightesd::cli {

/// Malformed input; `line()` is 1-based and counts the header when present.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& message);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Reads a comma-separated series. A first row whose value field is not a
/// number is taken as a header; the value column is `value_column` (default
/// "value"), and a "timestamp" column is used when present. Without a
/// header, one column is values and two columns are timestamp,value.
/// Integer timestamps are kept as integers, anything else as text.
TimeSeries read_series_csv(std::istream& in, const std::string& value_column = "value");

/// Header "timestamp,value"; timestamps default to the sample index. Values
/// are written with enough digits to read back bit-identical.
void write_series_csv(std::ostream& out, const TimeSeries& series);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

} // namespace lightesd::cli
