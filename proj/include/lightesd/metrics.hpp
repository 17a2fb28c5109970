#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace lightesd {

struct EvalScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
};

/// Point-wise exact index matching. Duplicates are ignored.
EvalScores prf1(std::span<const std::size_t> predicted, std::span<const std::size_t> truth);

/// A prediction counts as a hit when some truth index lies within +-window;
/// a truth index is recalled when some prediction lies within +-window.
/// window = 0 reduces to prf1.
EvalScores prf1_window(std::span<const std::size_t> predicted, std::span<const std::size_t> truth,
                       std::size_t window);

struct Generality {
    double mean = 0.0;
    /// Population standard deviation divided by the mean.
    double cv = 0.0;
};

/// Throws ZeroMean when the list is empty or its mean is zero.
Generality generality(std::span<const double> f1_per_dataset);

/// Min-max scaling; a cohort whose values are all equal maps to zeros.
std::vector<double> normalize_latency(std::span<const double> cohort);

struct AdcsInput {
    double f1 = 0.0;
    double cv = 0.0;
    double latency_norm = 0.0;
    double cpu_frac = 0.0;
    double ram_frac = 0.0;
    double power_frac = 0.0;
    /// w_f, w_g, w_l, w_c, w_r, w_p
    std::array<double, 6> weights{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
};

/// Weighted mean of f1, 1 - cv, 1 - latency, 1 - cpu, 1 - ram, 1 - power.
/// cv is clamped to [0, 1] first. Throws WeightSumZero for a zero weight
/// sum and InvalidParam for negative weights or out-of-range components.
double adcomp_score(const AdcsInput& input);

} // namespace lightesd
