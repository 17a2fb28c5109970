#pragma once

#include "lightesd/core.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace lightesd {

/// Quantile of Student's t distribution: x with CDF(x; df) = p.
double t_quantile(double p, double df);

/// Upper-tail quantile: x >= 0 with P(T > x) = q, for q in (0, 0.5].
/// Avoids forming 1 - q when q is tiny.
double t_quantile_upper(double q, double df);

/// P(T > x) for x >= 0.
double t_upper_tail(double x, double df);

/// Critical value of the generalized ESD test at iteration l (0-based) for
/// a series of original length n:
///   lambda = t * (n-l-1) / sqrt((n-l) * (t^2 + n-l-2)),
///   t = upper alpha / (2 (n-l)) quantile with n-l-2 degrees of freedom.
double esd_critical(std::size_t n, std::size_t l, double alpha);

/// S = 1.1926 * med_i med_j |x_i - x_j|.
double robust_scale_s(std::span<const double> x);

/// Which candidates end up in the outlier set.
enum class EsdAcceptance {
    /// Exactly the candidates whose own iteration has R > lambda.
    PerIteration,
    /// Every candidate up to the last iteration with R > lambda (Rosner).
    UpToLastRejection,
};

struct EsdIteration {
    std::size_t l = 0;
    /// Position in the original input.
    std::size_t candidate_index = 0;
    double r_value = 0.0;
    double lambda_value = 0.0;
    /// r_value > lambda_value at this iteration.
    bool rejected = false;
    /// Candidate belongs to the final outlier set.
    bool flagged = false;
};

struct EsdResult {
    /// Original positions in detection order.
    std::vector<std::size_t> outlier_indices;
    std::vector<EsdIteration> stats;
};

/// Generalized ESD with sample mean and (n-1) standard deviation. Every
/// iteration removes its candidate; `acceptance` decides which are reported.
EsdResult classic_esd(std::span<const double> x, double alpha, std::size_t a_max,
                      EsdAcceptance acceptance = EsdAcceptance::PerIteration);

/// Generalized ESD with median and the S scale (falling back to the scaled
/// MAD when S is zero). The candidate each iteration is the remaining point
/// farthest from the median, lowest index on ties. When both scales are
/// zero, points off the median score +inf and all-equal data scores 0.
EsdResult improved_esd(std::span<const double> x, double alpha, std::size_t a_max,
                       EsdAcceptance acceptance = EsdAcceptance::PerIteration);

} // namespace lightesd
