#include "lightesd/config.hpp"
#include "lightesd/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

namespace lightesd {

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::NonMonotonicTimestamps: return "NonMonotonicTimestamps";
    case ErrorCode::InvalidParam: return "InvalidParam";
    case ErrorCode::SegmentTooLong: return "SegmentTooLong";
    case ErrorCode::PeriodOutOfRange: return "PeriodOutOfRange";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DegenerateDf: return "DegenerateDf";
    case ErrorCode::WeightSumZero: return "WeightSumZero";
    case ErrorCode::ZeroMean: return "ZeroMean";
    case ErrorCode::PlacementExhausted: return "PlacementExhausted";
    }
    return "Unknown";
}

const char* to_string(WindowKind kind) {
    return kind == WindowKind::Quadratic ? "quadratic" : "triangular";
}

Error::Error(ErrorCode code, std::string message, std::optional<std::size_t> index)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), index_(index) {}

void validate_values(const std::vector<double>& values, std::size_t min_length) {
    if (values.size() < min_length) {
        throw Error(ErrorCode::TooShort,
                    "series has " + std::to_string(values.size()) + " samples, need at least " +
                        std::to_string(min_length),
                    values.size());
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw Error(ErrorCode::NonFinite, "non-finite value at index " + std::to_string(i), i);
        }
    }
}

const TimeSeries& validate(const TimeSeries& series) {
    validate_values(series.values, kMinSeriesLength);
    if (series.timestamps) {
        const auto& ts = *series.timestamps;
        if (ts.size() != series.values.size()) {
            throw Error(ErrorCode::NonMonotonicTimestamps,
                        "timestamp count " + std::to_string(ts.size()) + " does not match value count " +
                            std::to_string(series.values.size()),
                        std::min(ts.size(), series.values.size()));
        }
        for (std::size_t i = 1; i < ts.size(); ++i) {
            if (ts[i].index() != ts[i - 1].index() || !(ts[i - 1] < ts[i])) {
                throw Error(ErrorCode::NonMonotonicTimestamps,
                            "timestamps not strictly increasing at index " + std::to_string(i), i);
            }
        }
    }
    return series;
}

namespace {

void invalid(const std::string& what) {
    throw Error(ErrorCode::InvalidParam, what);
}

bool bit_equal(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

} // namespace

void validate(const DetectorConfig& c, std::size_t n) {
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) invalid("alpha must lie in (0, 1)");
    if (!(c.max_anomaly_frac > 0.0 && c.max_anomaly_frac <= 0.5)) invalid("max_anomaly_frac must lie in (0, 0.5]");
    if (n > 0 && std::floor(c.max_anomaly_frac * static_cast<double>(n)) < 1.0) {
        invalid("max_anomaly_frac * n must be at least 1");
    }
    if (c.n_permutations < 20) invalid("n_permutations must be at least 20");
    if (!(c.psd_percentile > 0.5 && c.psd_percentile < 1.0)) invalid("psd_percentile must lie in (0.5, 1)");

    const auto& w = c.welch;
    if (!(w.overlap_frac >= 0.0 && w.overlap_frac <= 0.5)) invalid("welch.overlap_frac must lie in [0, 0.5]");
    if (w.segment_length && *w.segment_length < 4) invalid("welch.segment_length must be at least 4");
    if (w.fft_length && w.segment_length && *w.fft_length < *w.segment_length) {
        invalid("welch.fft_length must be at least segment_length");
    }

    const auto& rt = c.robust_trend;
    if (!(rt.lambda1 >= 0.0) || !(rt.lambda2 >= 0.0)) invalid("robust_trend lambdas must be nonnegative");
    if (rt.huber_gamma && !(*rt.huber_gamma > 0.0)) invalid("robust_trend.huber_gamma must be positive");
    if (rt.scale && !(*rt.scale > 0.0)) invalid("robust_trend.scale must be positive");
    if (!(rt.admm_rho > 0.0)) invalid("robust_trend.admm_rho must be positive");
    if (rt.max_iters < 1) invalid("robust_trend.max_iters must be at least 1");
    if (!(rt.tol_primal > 0.0) || !(rt.tol_dual > 0.0)) invalid("robust_trend tolerances must be positive");

    const auto& s = c.stl;
    if (s.bilateral_half_width < 1) invalid("stl.bilateral_half_width must be at least 1");
    if (!(s.bilateral_sigma_d > 0.0)) invalid("stl.bilateral_sigma_d must be positive");
    if (s.bilateral_sigma_i && !(*s.bilateral_sigma_i > 0.0)) invalid("stl.bilateral_sigma_i must be positive");
    if (s.seasonal_sigma && !(*s.seasonal_sigma > 0.0)) invalid("stl.seasonal_sigma must be positive");
    if (s.neighbor_cycles < 1) invalid("stl.neighbor_cycles must be at least 1");
    if (!(s.lad_lambda1 >= 0.0) || !(s.lad_lambda2 >= 0.0)) invalid("stl lad lambdas must be nonnegative");
    if (s.lad_max_iters < 1) invalid("stl.lad_max_iters must be at least 1");
    if (!(s.lad_rho > 0.0) || !(s.lad_tol > 0.0)) invalid("stl.lad_rho and stl.lad_tol must be positive");
}

std::size_t max_anomalies(const DetectorConfig& config, std::size_t n) {
    const auto a = static_cast<std::size_t>(std::floor(config.max_anomaly_frac * static_cast<double>(n)));
    return a < 1 ? 1 : a;
}

std::vector<double> form_residual(const std::vector<double>& y,
                                  const std::vector<double>& trend,
                                  const std::vector<std::vector<double>>& seasonals) {
    std::vector<double> r(y.size());
    for (std::size_t t = 0; t < y.size(); ++t) {
        double fitted = trend[t];
        for (const auto& s : seasonals) fitted += s[t];
        r[t] = y[t] - fitted;
    }
    return r;
}

std::size_t reconstruction_mismatches(const std::vector<double>& y, const Decomposition& d) {
    std::size_t bad = 0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        double v = d.trend[t];
        for (const auto& s : d.seasonals) v += s[t];
        v += d.residual[t];
        if (!bit_equal(v, y[t])) ++bad;
    }
    return bad;
}

std::size_t subtraction_mismatches(const std::vector<double>& y, const Decomposition& d) {
    const auto r = form_residual(y, d.trend, d.seasonals);
    std::size_t bad = 0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        if (!bit_equal(r[t], d.residual[t])) ++bad;
    }
    return bad;
}

} // namespace lightesd
