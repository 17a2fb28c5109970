#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace lightesd {

enum class ErrorCode {
    NonFinite,
    TooShort,
    NonMonotonicTimestamps,
    InvalidParam,
    SegmentTooLong,
    PeriodOutOfRange,
    DomainError,
    DegenerateDf,
    WeightSumZero,
    ZeroMean,
    PlacementExhausted,
};

const char* to_string(ErrorCode code);

/// Every recoverable failure in the library surfaces as an Error. `index()`
/// carries the offending position (or length, for TooShort) when one exists.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, std::optional<std::size_t> index = std::nullopt);

    ErrorCode code() const noexcept { return code_; }
    std::optional<std::size_t> index() const noexcept { return index_; }

private:
    ErrorCode code_;
    std::optional<std::size_t> index_;
};

inline constexpr std::size_t kMinSeriesLength = 16;

using Timestamp = std::variant<std::int64_t, std::string>;

struct TimeSeries {
    std::vector<double> values;
    std::optional<std::vector<Timestamp>> timestamps;

    TimeSeries() = default;
    explicit TimeSeries(std::vector<double> v) : values(std::move(v)) {}
    TimeSeries(std::vector<double> v, std::vector<Timestamp> ts)
        : values(std::move(v)), timestamps(std::move(ts)) {}

    std::size_t size() const noexcept { return values.size(); }

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;
};

/// Returns the series unchanged when it is long enough, finite and (if
/// present) carries strictly increasing timestamps of matching length.
const TimeSeries& validate(const TimeSeries& series);

/// Checks values only; used by entry points that accept raw sequences.
void validate_values(const std::vector<double>& values, std::size_t min_length);

/// trend + seasonals + residual. The residual is formed by subtraction,
/// see `form_residual`.
struct Decomposition {
    std::vector<double> trend;
    std::vector<std::vector<double>> seasonals;
    std::vector<double> residual;
    std::vector<std::size_t> periods;
};

/// residual[t] = y[t] - (trend[t] + seasonals[0][t] + ...), the fitted part
/// summed left to right in the same order `reconstruction_mismatches` uses.
std::vector<double> form_residual(const std::vector<double>& y,
                                  const std::vector<double>& trend,
                                  const std::vector<std::vector<double>>& seasonals);

/// Number of samples where trend + seasonals... + residual (left-to-right
/// double addition) differs bitwise from y.
std::size_t reconstruction_mismatches(const std::vector<double>& y, const Decomposition& d);

/// Number of samples where residual differs bitwise from `form_residual`.
std::size_t subtraction_mismatches(const std::vector<double>& y, const Decomposition& d);

} // namespace lightesd
