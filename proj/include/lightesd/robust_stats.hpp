#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lightesd {

/// Gaussian-consistency factor for the S estimator.
inline constexpr double kSnConsistency = 1.1926;
/// Gaussian-consistency factor for the median absolute deviation.
inline constexpr double kMadConsistency = 1.4826;

/// Median; even lengths average the two central order statistics.
double median(std::span<const double> x);

/// Raw median absolute deviation about the median (no consistency factor).
double mad(std::span<const double> x);

/// Unscaled S statistic med_i med_j |x_i - x_j| (j ranges over all points,
/// including i). O(n log n).
double sn_raw(std::span<const double> x);

/// Same statistic for data that is already sorted ascending.
double sn_raw_sorted(std::span<const double> sorted);

/// Centered running median with a truncated window at the edges.
std::vector<double> running_median(std::span<const double> x, std::size_t half_width);

double mean(std::span<const double> x);
/// Population standard deviation.
double stddev(std::span<const double> x);

} // namespace lightesd
