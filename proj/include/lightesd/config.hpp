#pragma once

#include "lightesd/core.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lightesd {

enum class WindowKind { Quadratic, Triangular };

const char* to_string(WindowKind kind);

struct WelchParams {
    /// Samples per segment. Unset means min(256, n/2).
    std::optional<std::size_t> segment_length;
    /// Overlap D/L between consecutive segments, in [0, 0.5].
    double overlap_frac = 0.5;
    WindowKind window = WindowKind::Quadratic;
    /// Zero-padded transform length. Unset means the smallest power of two
    /// that is at least 8 * segment_length.
    std::optional<std::size_t> fft_length;
};

struct RobustTrendParams {
    double lambda1 = 1.0;
    double lambda2 = 10.0;
    /// Huber threshold in standardized units. Unset means 1.345.
    std::optional<double> huber_gamma;
    /// Data scale used to standardize the problem. Unset means the robust
    /// scale S of the series minus its 5-point running median (the noise
    /// level). Setting 1.0 solves the objective on raw values.
    std::optional<double> scale;
    double admm_rho = 1.0;
    std::size_t max_iters = 300;
    double tol_primal = 1e-6;
    double tol_dual = 1e-6;
};

struct StlParams {
    std::size_t bilateral_half_width = 3;
    double bilateral_sigma_d = 2.0;
    /// Intensity bandwidth of the bilateral filter. Unset means
    /// 2 * S(first differences of the input).
    std::optional<double> bilateral_sigma_i;
    std::size_t neighbor_cycles = 2;
    /// Similarity bandwidth of the non-local seasonal filter. Unset means
    /// 2 * S(lag-period differences of the filter input).
    std::optional<double> seasonal_sigma;
    double lad_lambda1 = 1.0;
    double lad_lambda2 = 10.0;
    std::size_t lad_max_iters = 300;
    double lad_rho = 1.0;
    double lad_tol = 1e-6;
    /// Run the seasonal filter on the bilateral-denoised series instead of
    /// the original detrended values.
    bool seasonal_on_denoised = false;
};

struct DetectorConfig {
    double alpha = 0.05;
    double max_anomaly_frac = 0.10;
    std::size_t n_permutations = 100;
    double psd_percentile = 0.99;
    std::uint64_t seed = 42;
    /// Keep every above-threshold local maximum instead of requiring each
    /// accepted peak to beat the previously accepted one.
    bool accept_all_peaks = false;
    WelchParams welch;
    RobustTrendParams robust_trend;
    StlParams stl;
};

/// Throws Error(InvalidParam) naming the first field out of range. `n` is the
/// series length the config will be applied to (0 skips length-dependent checks).
void validate(const DetectorConfig& config, std::size_t n = 0);

/// floor(max_anomaly_frac * n), at least 1.
std::size_t max_anomalies(const DetectorConfig& config, std::size_t n);

/// Period list value reported for a series without seasonality.
inline constexpr std::size_t kNonseasonalPeriod = 1;

struct AnomalyReport {
    std::vector<std::size_t> anomaly_indices;
    /// R_robust at the iteration that flagged each index, aligned with anomaly_indices.
    std::vector<double> scores;
    /// Detected periods, or {kNonseasonalPeriod}.
    std::vector<std::size_t> periods_detected;
    DetectorConfig config_echo;
    double timing = 0.0;
};

} // namespace lightesd
