#include "lightesd/cli/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace lightesd::cli {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            return out;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

std::optional<double> parse_double(std::string_view s) {
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

Timestamp parse_timestamp(std::string_view s) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size() && !s.empty()) return v;
    return std::string(s);
}

} // namespace

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

TimeSeries read_series_csv(std::istream& in, const std::string& value_column) {
    std::string line;
    std::size_t line_no = 0;
    std::optional<std::size_t> value_idx;
    std::optional<std::size_t> ts_idx;
    std::size_t width = 0;
    bool first = true;

    std::vector<double> values;
    std::vector<Timestamp> stamps;

    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
        if (trim(line).empty()) continue;
        const auto fields = split(line);

        if (first) {
            first = false;
            // Header when the would-be value field is not numeric.
            const std::size_t guess = fields.size() == 1 ? 0 : 1;
            const bool header = fields.size() > 2 || !parse_double(fields[guess]);
            width = fields.size();
            if (header) {
                for (std::size_t i = 0; i < fields.size(); ++i) {
                    if (fields[i] == value_column) value_idx = i;
                    if (fields[i] == "timestamp") ts_idx = i;
                }
                if (!value_idx) throw ParseError(line_no, "no column named '" + value_column + "' in header");
                continue;
            }
            if (fields.size() > 2) throw ParseError(line_no, "headerless input must have one or two columns");
            value_idx = guess;
            if (fields.size() == 2) ts_idx = 0;
        }

        if (fields.size() != width) {
            throw ParseError(line_no, "expected " + std::to_string(width) + " fields, found " +
                                          std::to_string(fields.size()));
        }
        const auto v = parse_double(fields[*value_idx]);
        if (!v) throw ParseError(line_no, "cannot parse value '" + std::string(fields[*value_idx]) + "'");
        values.push_back(*v);
        if (ts_idx) stamps.push_back(parse_timestamp(fields[*ts_idx]));
    }
    if (ts_idx) return TimeSeries(std::move(values), std::move(stamps));
    return TimeSeries(std::move(values));
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_series_csv(std::ostream& out, const TimeSeries& series) {
    out << "timestamp,value\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series.timestamps) {
            std::visit([&](const auto& t) { out << t; }, (*series.timestamps)[i]);
        } else {
            out << i;
        }
        out << ',' << format_double(series.values[i]) << '\n';
    }
}

} // namespace lightesd::cli
