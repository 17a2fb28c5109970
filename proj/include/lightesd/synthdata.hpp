#pragma once

#include "lightesd/core.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace lightesd {

/// Parameters of the seasonal generator y_t = kappa t^2 + beta sin(2 pi t / 30.5) + gamma eps_t.
struct SeasonalParams {
    double kappa = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

inline constexpr double kSeasonalPeriod = 30.5;
inline constexpr std::size_t kMinGeneratedLength = 64;

/// The kappa, beta, gamma draws gen_seasonal makes for `seed`.
SeasonalParams gen_seasonal_params(std::uint64_t seed);

TimeSeries gen_seasonal(std::size_t n, std::uint64_t seed);

/// y_0 = 1, y_t = y_{t-1} + N(0, 1).
TimeSeries gen_random_walk(std::size_t n, std::uint64_t seed);

struct InjectionSpec {
    std::size_t n_spikes = 0;
    std::size_t n_dips = 0;
    std::size_t n_collective = 0;
    /// Magnitude bounds in units of the series standard deviation.
    std::pair<double, double> magnitude_range{0.5, 6.0};
    std::pair<std::size_t, std::size_t> collective_length_range{3, 8};
    std::uint64_t seed = 0;
};

enum class AnomalyKind { Spike, Dip, Collective };

const char* to_string(AnomalyKind kind);

/// One planted region.
struct InjectedAnomaly {
    AnomalyKind kind = AnomalyKind::Spike;
    std::size_t start = 0;
    std::size_t length = 1;
    /// Signed amplitude in units of the series standard deviation.
    double magnitude = 0.0;
};

struct LabeledSeries {
    TimeSeries series;
    /// Sorted, unique; every member of a collective region is listed.
    std::vector<std::size_t> truth_indices;
    std::vector<InjectedAnomaly> anomalies;
};

/// Spikes add +m sigma at one index, dips add -m sigma, collective anomalies
/// add a half-sine bump of random sign, m sigma sin(pi (k+1) / (L+1)) for
/// k < L. Regions never overlap or touch and stay clear of the first and last
/// two samples. Throws PlacementExhausted after 1000 rejected draws.
LabeledSeries inject_anomalies(const TimeSeries& series, const InjectionSpec& spec);

enum class Preset { Std, Rw };

const char* to_string(Preset preset);
/// Parses "std" or "rw"; throws InvalidParam otherwise.
Preset parse_preset(const std::string& name);

/// Anomaly mix for a preset: std is 3 spikes, 2 dips, 2 collective; rw is
/// 4 spikes, 4 dips, 1 collective.
InjectionSpec preset_spec(Preset preset, std::uint64_t seed);

/// Generator plus injection, both driven by `seed`.
LabeledSeries generate_preset(Preset preset, std::size_t n, std::uint64_t seed);

} // namespace lightesd
