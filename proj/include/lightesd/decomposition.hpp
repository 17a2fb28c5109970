#pragma once

#include "lightesd/config.hpp"
#include "lightesd/core.hpp"
#include "lightesd/periodicity.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace lightesd {

/// out[i] = x[i+1] - x[i]. Throws TooShort for fewer than 2 points.
std::vector<double> first_difference_matrix_apply(std::span<const double> x);

/// out[i] = x[i+2] - 2 x[i+1] + x[i]. Throws TooShort for fewer than 3 points.
std::vector<double> second_difference_matrix_apply(std::span<const double> x);

/// Sum of Huber penalties: u^2/2 inside [-gamma, gamma], gamma|u| - gamma^2/2 outside.
double huber_loss(std::span<const double> r, double gamma);

/// huber(y - t) + lambda1 |D1 t|_1 + lambda2 |D2 t|_1
double robust_trend_objective(std::span<const double> y, std::span<const double> trend, double gamma,
                              double lambda1, double lambda2);

/// |x - g|_1 + lambda1 |D1 g|_1 + lambda2 |D2 g|_1
double lad_objective(std::span<const double> x, std::span<const double> g, double lambda1, double lambda2);

struct SolverDiagnostics {
    bool converged = false;
    std::size_t iterations = 0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    /// Objective (in standardized units) at each accepted iterate, i.e. each
    /// iterate that did not increase the best objective seen so far.
    std::vector<double> objective_history;
    /// Standardization applied before solving: x_std = (x - center) / scale.
    double center = 0.0;
    double scale = 1.0;
    /// Huber threshold used, in standardized units (robust_trend only).
    double gamma = 0.0;
};

struct RobustTrendFit {
    Decomposition decomposition;
    SolverDiagnostics diagnostics;
};

/// Robust noise scale used by RobustTrendParams::scale when unset.
double robust_noise_scale(std::span<const double> y);

/// Trend minimizing the Huber fit plus l1 first/second difference penalties,
/// by ADMM with an iteratively reweighted (majorize-minimize) Huber step.
/// The best iterate is returned even when the tolerances are not reached.
RobustTrendFit robust_trend_fit(std::span<const double> y, const RobustTrendParams& params);

/// Decomposition with no seasonal components.
Decomposition robust_trend(const TimeSeries& series, const RobustTrendParams& params);

/// Edge-preserving smoother: Gaussian weights in index distance and value
/// difference over a truncated window of half-width H.
std::vector<double> bilateral_denoise(std::span<const double> y, const StlParams& params);
std::vector<double> bilateral_denoise(const TimeSeries& series, const StlParams& params);

/// out[t] = x[t + period] - x[t]. Requires 2 <= period <= n/2.
std::vector<double> seasonal_difference(std::span<const double> x, std::size_t period);

struct LadFit {
    std::vector<double> trend_difference;
    SolverDiagnostics diagnostics;
};

/// l1-fit with l1 first/second difference penalties, by ADMM.
LadFit lad_trend_fit(std::span<const double> diffed, const StlParams& params);
std::vector<double> lad_trend(std::span<const double> diffed, const StlParams& params);

/// Trend on n points whose lag-`period` differences approximate `trend_difference`:
/// per-step slopes trend_difference / period are integrated from zero (before anchoring).
std::vector<double> integrate_seasonal_difference(std::span<const double> trend_difference,
                                                  std::size_t period, std::size_t n);

/// Phase-wise robust smoother: for each t, the similarity-weighted mean of the
/// same-phase samples t + m*period, |m| <= neighbor_cycles, with weights
/// measured against their median. The result is centered so every aligned
/// full cycle [k*period, (k+1)*period) sums to zero.
std::vector<double> nonlocal_seasonal(std::span<const double> detrended, std::size_t period,
                                      const StlParams& params);

/// Bilateral denoise, seasonal differencing at the largest period, LAD trend,
/// then one seasonal component per period (largest first) and the residual by
/// subtraction from the original values.
Decomposition fast_robust_stl(const TimeSeries& series, const PeriodSet& periods, const StlParams& params);

/// robust_trend for a nonseasonal verdict, fast_robust_stl otherwise.
Decomposition extract_residual(const TimeSeries& series, const PeriodSet& periods, const DetectorConfig& config);

} // namespace lightesd
