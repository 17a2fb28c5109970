#include "lightesd/pipeline.hpp"

#include "lightesd/decomposition.hpp"
#include "lightesd/periodicity.hpp"
#include "lightesd/robust_stats.hpp"

#include <algorithm>
#include <chrono>

namespace lightesd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double variance(const std::vector<double>& x) {
    if (x.empty()) return 0.0;
    const double sd = stddev(x);
    return sd * sd;
}

ScoreTrace run(const TimeSeries& series, const DetectorConfig& config) {
    const auto t_total = Clock::now();
    validate(series);
    validate(config, series.size());
    const std::size_t n = series.size();

    ScoreTrace trace;
    trace.a_max = max_anomalies(config, n);

    auto t = Clock::now();
    const PeriodSet periods = detect_periods(series, config);
    trace.timings.periods = seconds_since(t);

    t = Clock::now();
    const Decomposition dec = extract_residual(series, periods, config);
    trace.timings.decomposition = seconds_since(t);

    t = Clock::now();
    trace.esd = improved_esd(dec.residual, config.alpha, trace.a_max);
    trace.timings.esd = seconds_since(t);

    t = Clock::now();
    std::vector<bool> flagged(n, false);
    std::vector<double> score_at(n, 0.0);
    for (const auto& it : trace.esd.stats) {
        if (!it.flagged) continue;
        flagged[it.candidate_index] = true;
        score_at[it.candidate_index] = it.r_value;
    }
    trace.trimmed = boundary_trim(flagged);

    AnomalyReport& report = trace.report;
    for (std::size_t i = 0; i < n; ++i) {
        if (!flagged[i]) continue;
        report.anomaly_indices.push_back(i);
        report.scores.push_back(score_at[i]);
    }
    report.periods_detected = periods.reported();
    report.config_echo = config;
    trace.timings.trim = seconds_since(t);

    trace.periods = report.periods_detected;
    trace.is_seasonal = periods.is_seasonal;
    trace.trend_variance = variance(dec.trend);
    for (const auto& s : dec.seasonals) trace.seasonal_variances.push_back(variance(s));
    trace.residual_variance = variance(dec.residual);

    report.timing = seconds_since(t_total);
    return trace;
}

} // namespace

std::vector<std::size_t> boundary_trim(std::vector<bool>& flagged) {
    std::vector<std::size_t> removed;
    const std::size_t n = flagged.size();
    if (n < 2) return removed;
    if (flagged[0] && !flagged[1]) {
        flagged[0] = false;
        removed.push_back(0);
    }
    if (flagged[n - 1] && !flagged[n - 2]) {
        flagged[n - 1] = false;
        removed.push_back(n - 1);
    }
    return removed;
}

AnomalyReport detect(const TimeSeries& series, const DetectorConfig& config) {
    return run(series, config).report;
}

ScoreTrace score_trace(const TimeSeries& series, const DetectorConfig& config) {
    return run(series, config);
}

} // namespace lightesd
