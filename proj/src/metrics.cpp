#include "lightesd/metrics.hpp"

#include "lightesd/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace lightesd {

namespace {

EvalScores finish(std::size_t tp, std::size_t fp, std::size_t fn) {
    EvalScores s;
    s.tp = tp;
    s.fp = fp;
    s.fn = fn;
    // Nothing predicted and nothing to find counts as perfect.
    if (tp + fp == 0) s.precision = fn == 0 ? 1.0 : 0.0;
    else s.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    if (tp + fn == 0) s.recall = fp == 0 ? 1.0 : 0.0;
    else s.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    const double sum = s.precision + s.recall;
    s.f1 = sum > 0.0 ? 2.0 * s.precision * s.recall / sum : 0.0;
    return s;
}

bool near_any(const std::set<std::size_t>& pool, std::size_t i, std::size_t window) {
    const std::size_t lo = i >= window ? i - window : 0;
    auto it = pool.lower_bound(lo);
    return it != pool.end() && *it <= i + window;
}

void check_unit(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::InvalidParam, std::string(name) + " must lie in [0, 1]");
}

} // namespace

EvalScores prf1(std::span<const std::size_t> predicted, std::span<const std::size_t> truth) {
    return prf1_window(predicted, truth, 0);
}

EvalScores prf1_window(std::span<const std::size_t> predicted, std::span<const std::size_t> truth,
                       std::size_t window) {
    const std::set<std::size_t> pred(predicted.begin(), predicted.end());
    const std::set<std::size_t> real(truth.begin(), truth.end());
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    for (std::size_t p : pred) {
        if (near_any(real, p, window)) ++tp;
        else ++fp;
    }
    for (std::size_t t : real) {
        if (!near_any(pred, t, window)) ++fn;
    }
    return finish(tp, fp, fn);
}

Generality generality(std::span<const double> f1) {
    if (f1.empty()) throw Error(ErrorCode::ZeroMean, "generality needs at least one F1 value");
    double mean = 0.0;
    for (double v : f1) mean += v;
    mean /= static_cast<double>(f1.size());
    if (mean == 0.0) throw Error(ErrorCode::ZeroMean, "mean F1 is zero, CV undefined");
    double ss = 0.0;
    for (double v : f1) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / static_cast<double>(f1.size())) / mean};
}

std::vector<double> normalize_latency(std::span<const double> cohort) {
    std::vector<double> out(cohort.size(), 0.0);
    if (cohort.empty()) return out;
    const auto [lo, hi] = std::minmax_element(cohort.begin(), cohort.end());
    const double range = *hi - *lo;
    if (!(range > 0.0)) return out;
    for (std::size_t i = 0; i < cohort.size(); ++i) out[i] = (cohort[i] - *lo) / range;
    return out;
}

double adcomp_score(const AdcsInput& in) {
    double wsum = 0.0;
    for (double w : in.weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorCode::InvalidParam, "ADCS weights must be nonnegative");
        wsum += w;
    }
    if (!(wsum > 0.0)) throw Error(ErrorCode::WeightSumZero, "ADCS weights sum to zero");
    check_unit(in.f1, "f1");
    check_unit(in.latency_norm, "latency_norm");
    check_unit(in.cpu_frac, "cpu_frac");
    check_unit(in.ram_frac, "ram_frac");
    check_unit(in.power_frac, "power_frac");
    if (!(in.cv >= 0.0)) throw Error(ErrorCode::InvalidParam, "cv must be nonnegative");
    const double g = std::min(in.cv, 1.0);

    const auto& w = in.weights;
    const double total = w[0] * in.f1 + w[1] * (1.0 - g) + w[2] * (1.0 - in.latency_norm) +
                         w[3] * (1.0 - in.cpu_frac) + w[4] * (1.0 - in.ram_frac) + w[5] * (1.0 - in.power_frac);
    return std::clamp(total / wsum, 0.0, 1.0);
}

} // namespace lightesd
