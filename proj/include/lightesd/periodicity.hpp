#pragma once

#include "lightesd/config.hpp"
#include "lightesd/core.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace lightesd {

/// One-sided PSD estimate. Frequencies are in cycles per sample, ascending,
/// starting at the segment resolution 1/L; the DC bin is never included.
struct Periodogram {
    std::vector<double> frequencies;
    std::vector<double> psd;
};

struct PeriodSet {
    /// Samples per cycle, ordered by descending peak PSD. Empty when nonseasonal.
    std::vector<std::size_t> periods;
    bool is_seasonal = false;

    // Scan diagnostics.
    std::vector<double> peak_psd;  ///< aligned with periods
    double threshold = 0.0;
    std::size_t local_maxima_above_threshold = 0;

    /// Periods as reported: the detected list, or {kNonseasonalPeriod}.
    std::vector<std::size_t> reported() const;
};

/// Resolved segment length for a series of n samples.
std::size_t welch_segment_length(const WelchParams& params, std::size_t n);

/// Resolved zero-padded transform length for a segment of length L.
std::size_t welch_fft_length(const WelchParams& params, std::size_t segment_length);

/// Welch's averaged periodogram: overlapping segments, each mean-removed,
/// windowed, zero padded and transformed; squared magnitudes are scaled by the
/// window power and averaged across segments.
Periodogram welch_psd(std::span<const double> values, const WelchParams& params);
Periodogram welch_psd(const TimeSeries& series, const WelchParams& params);

/// The psd_percentile order statistic of the maximum PSD over
/// n_permutations shuffles of the series. Shuffle i draws from stream
/// (seed, i), so the result depends only on the values and config.
double permutation_threshold(const TimeSeries& series, const DetectorConfig& config);

/// Maxima recorded by permutation_threshold, sorted ascending.
std::vector<double> permutation_maxima(std::span<const double> values, const DetectorConfig& config);

PeriodSet detect_periods(const TimeSeries& series, const DetectorConfig& config);

} // namespace lightesd
