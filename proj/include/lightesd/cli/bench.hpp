#pragma once

#include "lightesd/metrics.hpp"
#include "lightesd/synthdata.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace lightesd::cli {

struct BenchOptions {
    std::size_t seeds = 10;
    std::size_t n = 5000;
    /// Datasets use seeds first_seed, first_seed + 1, ...
    std::uint64_t first_seed = 1;
    /// Seed of the detector's permutation test.
    std::uint64_t detector_seed = 42;
    std::vector<double> alphas{0.05, 0.001};
    std::vector<Preset> presets{Preset::Std, Preset::Rw};
    double cpu_frac = 0.0;
    double ram_frac = 0.0;
    double power_frac = 0.0;
};

struct BenchRow {
    Preset preset = Preset::Std;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    EvalScores scores;
    std::size_t n_truth = 0;
    std::size_t n_predicted = 0;
    bool seasonal = false;
    double latency_seconds = 0.0;
};

/// Means over seeds for one (dataset, alpha) pair.
struct BenchAggregate {
    Preset preset = Preset::Std;
    double alpha = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double latency_mean = 0.0;
    double latency_max = 0.0;
};

/// One detector setting (alpha) across all datasets.
struct BenchModel {
    double alpha = 0.0;
    Generality generality;
    double latency_mean = 0.0;
    /// latency_mean min-max normalized across the alphas of this run.
    double latency_norm = 0.0;
    double cv_clamped = 0.0;
    double adcs = 0.0;
};

struct BenchReport {
    BenchOptions options;
    /// Sorted by (dataset, alpha descending, seed).
    std::vector<BenchRow> rows;
    std::vector<BenchAggregate> aggregates;
    std::vector<BenchModel> models;
};

/// Throws InvalidParam when seeds == 0 or no alphas/presets are given.
BenchReport run_bench(const BenchOptions& options);

} // namespace lightesd::cli
