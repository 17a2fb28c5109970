#include "lightesd/synthdata.hpp"

#include "lightesd/random.hpp"
#include "lightesd/robust_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lightesd {

namespace {

// Stream 0 of a seed drives the generators, stream 1 the injection.
constexpr std::uint64_t kGeneratorStream = 0;
constexpr std::uint64_t kInjectionStream = 1;

void require_length(std::size_t n) {
    if (n < kMinGeneratedLength) {
        throw Error(ErrorCode::TooShort,
                    "generated series need at least " + std::to_string(kMinGeneratedLength) + " samples", n);
    }
}

SeasonalParams draw_params(Rng& rng) {
    SeasonalParams p;
    p.kappa = rng.uniform(0.001, 0.01);
    p.beta = rng.uniform(1.3e4, 1.5e4);
    p.gamma = rng.uniform(1.5e3, 3.0e3);
    return p;
}

} // namespace

SeasonalParams gen_seasonal_params(std::uint64_t seed) {
    Rng rng(seed, kGeneratorStream);
    return draw_params(rng);
}

TimeSeries gen_seasonal(std::size_t n, std::uint64_t seed) {
    require_length(n);
    Rng rng(seed, kGeneratorStream);
    const SeasonalParams p = draw_params(rng);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i);
        y[i] = p.kappa * t * t + p.beta * std::sin(2.0 * std::numbers::pi * t / kSeasonalPeriod) +
               p.gamma * rng.normal();
    }
    return TimeSeries(std::move(y));
}

TimeSeries gen_random_walk(std::size_t n, std::uint64_t seed) {
    require_length(n);
    Rng rng(seed, kGeneratorStream);
    std::vector<double> y(n);
    y[0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) y[i] = y[i - 1] + rng.normal();
    return TimeSeries(std::move(y));
}

const char* to_string(AnomalyKind kind) {
    switch (kind) {
    case AnomalyKind::Spike: return "spike";
    case AnomalyKind::Dip: return "dip";
    case AnomalyKind::Collective: return "collective";
    }
    return "unknown";
}

LabeledSeries inject_anomalies(const TimeSeries& series, const InjectionSpec& spec) {
    validate_values(series.values, 1);
    const auto [low, high] = spec.magnitude_range;
    const auto [min_len, max_len] = spec.collective_length_range;
    if (!(low >= 0.0 && low <= high)) throw Error(ErrorCode::InvalidParam, "magnitude_range must satisfy 0 <= low <= high");
    if (min_len < 2 || min_len > max_len) {
        throw Error(ErrorCode::InvalidParam, "collective_length_range must satisfy 2 <= min <= max");
    }

    LabeledSeries out;
    out.series = series;
    const std::size_t n = series.size();
    const double sigma = stddev(series.values);
    Rng rng(spec.seed, kInjectionStream);

    // taken[i] marks samples inside a region or directly next to one.
    std::vector<bool> taken(n, false);
    constexpr std::size_t margin = 2;

    auto place = [&](std::size_t length) -> std::size_t {
        std::size_t rejected = 0;
        while (true) {
            if (n >= 2 * margin + length) {
                const std::size_t span = n - 2 * margin - length + 1;
                const std::size_t start = margin + static_cast<std::size_t>(rng.below(span));
                bool clear = true;
                for (std::size_t i = start; i < start + length && clear; ++i) clear = !taken[i];
                if (clear) {
                    const std::size_t lo = start > 0 ? start - 1 : 0;
                    const std::size_t hi = std::min(n - 1, start + length);
                    for (std::size_t i = lo; i <= hi; ++i) taken[i] = true;
                    return start;
                }
            }
            if (++rejected >= 1000) {
                throw Error(ErrorCode::PlacementExhausted,
                            "could not place an anomaly of length " + std::to_string(length) + " after 1000 draws");
            }
        }
    };

    auto& y = out.series.values;
    for (std::size_t k = 0; k < spec.n_spikes + spec.n_dips; ++k) {
        const bool spike = k < spec.n_spikes;
        const double m = rng.uniform(low, high) * (spike ? 1.0 : -1.0);
        const std::size_t at = place(1);
        y[at] += m * sigma;
        out.anomalies.push_back({spike ? AnomalyKind::Spike : AnomalyKind::Dip, at, 1, m});
    }
    for (std::size_t k = 0; k < spec.n_collective; ++k) {
        const std::size_t length = min_len + static_cast<std::size_t>(rng.below(max_len - min_len + 1));
        const double m = rng.uniform(low, high) * (rng.below(2) == 0 ? 1.0 : -1.0);
        const std::size_t start = place(length);
        for (std::size_t j = 0; j < length; ++j) {
            const double shape =
                std::sin(std::numbers::pi * static_cast<double>(j + 1) / static_cast<double>(length + 1));
            y[start + j] += m * sigma * shape;
        }
        out.anomalies.push_back({AnomalyKind::Collective, start, length, m});
    }

    for (const auto& a : out.anomalies) {
        for (std::size_t j = 0; j < a.length; ++j) out.truth_indices.push_back(a.start + j);
    }
    std::sort(out.truth_indices.begin(), out.truth_indices.end());
    return out;
}

const char* to_string(Preset preset) {
    return preset == Preset::Std ? "std" : "rw";
}

Preset parse_preset(const std::string& name) {
    if (name == "std") return Preset::Std;
    if (name == "rw") return Preset::Rw;
    throw Error(ErrorCode::InvalidParam, "unknown preset '" + name + "' (expected std or rw)");
}

InjectionSpec preset_spec(Preset preset, std::uint64_t seed) {
    InjectionSpec spec;
    spec.seed = seed;
    if (preset == Preset::Std) {
        spec.n_spikes = 3;
        spec.n_dips = 2;
        spec.n_collective = 2;
    } else {
        spec.n_spikes = 4;
        spec.n_dips = 4;
        spec.n_collective = 1;
    }
    return spec;
}

LabeledSeries generate_preset(Preset preset, std::size_t n, std::uint64_t seed) {
    const TimeSeries base = preset == Preset::Std ? gen_seasonal(n, seed) : gen_random_walk(n, seed);
    return inject_anomalies(base, preset_spec(preset, seed));
}

} // namespace lightesd
