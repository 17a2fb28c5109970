#pragma once

#include "lightesd/config.hpp"
#include "lightesd/core.hpp"
#include "lightesd/esd.hpp"

#include <cstddef>
#include <vector>

namespace lightesd {

/// Period detection, residual extraction, robust ESD on the residual and the
/// boundary trim. Deterministic for fixed values and config (seed included).
AnomalyReport detect(const TimeSeries& series, const DetectorConfig& config);

struct StageTimings {
    double periods = 0.0;
    double decomposition = 0.0;
    double esd = 0.0;
    double trim = 0.0;

    double sum() const { return periods + decomposition + esd + trim; }
};

struct ScoreTrace {
    AnomalyReport report;
    EsdResult esd;
    /// Detected periods, or {kNonseasonalPeriod}.
    std::vector<std::size_t> periods;
    bool is_seasonal = false;
    double trend_variance = 0.0;
    /// One entry per seasonal component, aligned with `periods` when seasonal.
    std::vector<double> seasonal_variances;
    double residual_variance = 0.0;
    std::size_t a_max = 0;
    /// Indices the boundary trim removed (subset of {0, n-1}).
    std::vector<std::size_t> trimmed;
    StageTimings timings;
};

/// Same computation as `detect`, keeping the intermediate results.
ScoreTrace score_trace(const TimeSeries& series, const DetectorConfig& config);

/// The boundary rule on its own: drops 0 when 1 is not flagged and n-1 when
/// n-2 is not flagged. `flagged` is a membership mask of length n.
std::vector<std::size_t> boundary_trim(std::vector<bool>& flagged);

} // namespace lightesd
