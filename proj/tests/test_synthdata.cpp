#include "support.hpp"

#include "lightesd/robust_stats.hpp"
#include "lightesd/synthdata.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

using namespace lightesd;
using testing::error_code_of;

TEST_CASE("seasonal generator") {
    const TimeSeries a = gen_seasonal(5000, 3);
    CHECK(a.size() == 5000);
    CHECK(a == gen_seasonal(5000, 3));
    CHECK(a != gen_seasonal(5000, 4));

    const SeasonalParams p = gen_seasonal_params(3);
    CHECK(p.kappa >= 0.001);
    CHECK(p.kappa <= 0.01);
    CHECK(p.beta >= 1.3e4);
    CHECK(p.beta <= 1.5e4);
    CHECK(p.gamma >= 1.5e3);
    CHECK(p.gamma <= 3.0e3);

    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const SeasonalParams q = gen_seasonal_params(seed);
        const SeasonalParams r = gen_seasonal_params(seed + 1);
        CHECK((q.kappa != r.kappa || q.beta != r.beta || q.gamma != r.gamma));
        const auto y = gen_seasonal(5000, seed).values;
        const double n1 = 4999.0;
        CHECK(y.back() - y.front() >= 0.001 * n1 * n1 - 3.0 * q.gamma - 2.0 * q.beta);
    }
    CHECK(error_code_of([] { gen_seasonal(63, 1); }) == ErrorCode::TooShort);
}

TEST_CASE("seasonal generator follows its formula") {
    // Replays the draws: three parameters, then one normal per sample.
    const std::uint64_t seed = 9;
    const SeasonalParams p = gen_seasonal_params(seed);
    const auto y = gen_seasonal(400, seed).values;
    Rng rng(seed, 0);
    rng.uniform01();
    rng.uniform01();
    rng.uniform01();
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double t = static_cast<double>(i);
        const double expected =
            p.kappa * t * t + p.beta * std::sin(2.0 * std::numbers::pi * t / 30.5) + p.gamma * rng.normal();
        CHECK(y[i] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("random walk generator") {
    const TimeSeries w = gen_random_walk(10000, 5);
    CHECK(w.values[0] == 1.0);
    CHECK(w == gen_random_walk(10000, 5));
    std::vector<double> diffs(w.size() - 1);
    for (std::size_t i = 1; i < w.size(); ++i) diffs[i - 1] = w.values[i] - w.values[i - 1];
    const double m = mean(diffs);
    const double sd = stddev(diffs);
    CHECK(m >= -0.05);
    CHECK(m <= 0.05);
    CHECK(sd * sd >= 0.9);
    CHECK(sd * sd <= 1.1);
    CHECK(error_code_of([] { gen_random_walk(10, 1); }) == ErrorCode::TooShort);
}

TEST_CASE("empty injection is the identity") {
    const TimeSeries s = gen_random_walk(300, 2);
    const LabeledSeries out = inject_anomalies(s, InjectionSpec{});
    CHECK(out.series == s);
    CHECK(out.truth_indices.empty());
    CHECK(out.anomalies.empty());
}

TEST_CASE("presets follow the anomaly mix") {
    const InjectionSpec std_spec = preset_spec(Preset::Std, 1);
    CHECK(std_spec.n_spikes == 3);
    CHECK(std_spec.n_dips == 2);
    CHECK(std_spec.n_collective == 2);
    const InjectionSpec rw_spec = preset_spec(Preset::Rw, 1);
    CHECK(rw_spec.n_spikes == 4);
    CHECK(rw_spec.n_dips == 4);
    CHECK(rw_spec.n_collective == 1);

    CHECK(parse_preset("std") == Preset::Std);
    CHECK(parse_preset("rw") == Preset::Rw);
    CHECK(std::string(to_string(Preset::Rw)) == "rw");
    CHECK(error_code_of([] { parse_preset("nab"); }) == ErrorCode::InvalidParam);
}

TEST_CASE("injection invariants") {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const Preset preset = seed % 2 ? Preset::Std : Preset::Rw;
        const std::size_t n = 64 + 37 * (seed % 40);
        const TimeSeries base = preset == Preset::Std ? gen_seasonal(n, seed) : gen_random_walk(n, seed);
        const InjectionSpec spec = preset_spec(preset, seed);
        const LabeledSeries out = inject_anomalies(base, spec);
        CAPTURE(seed);

        REQUIRE(out.series.size() == n);
        const auto& truth = out.truth_indices;
        CHECK(std::is_sorted(truth.begin(), truth.end()));
        CHECK(std::adjacent_find(truth.begin(), truth.end()) == truth.end());

        std::size_t collective_total = 0;
        std::size_t spikes = 0;
        std::size_t dips = 0;
        for (const auto& a : out.anomalies) {
            if (a.kind == AnomalyKind::Collective) {
                collective_total += a.length;
                CHECK(a.length >= 3);
                CHECK(a.length <= 8);
            } else {
                CHECK(a.length == 1);
            }
            if (a.kind == AnomalyKind::Spike) {
                ++spikes;
                CHECK(a.magnitude > 0.0);
            }
            if (a.kind == AnomalyKind::Dip) {
                ++dips;
                CHECK(a.magnitude < 0.0);
            }
            CHECK(std::fabs(a.magnitude) >= 0.5);
            CHECK(std::fabs(a.magnitude) <= 6.0);
            CHECK(a.start >= 2);
            CHECK(a.start + a.length <= n - 2);
        }
        CHECK(spikes == spec.n_spikes);
        CHECK(dips == spec.n_dips);
        CHECK(truth.size() == spec.n_spikes + spec.n_dips + collective_total);

        // Regions neither overlap nor touch.
        auto regions = out.anomalies;
        std::sort(regions.begin(), regions.end(), [](const auto& a, const auto& b) { return a.start < b.start; });
        for (std::size_t i = 1; i < regions.size(); ++i) {
            CHECK(regions[i].start > regions[i - 1].start + regions[i - 1].length);
        }

        const std::set<std::size_t> marked(truth.begin(), truth.end());
        for (std::size_t i = 0; i < n; ++i) {
            if (!marked.count(i)) CHECK(out.series.values[i] == base.values[i]);
        }

        // Spike and dip offsets are magnitude * sigma exactly as recorded.
        const double sigma = stddev(base.values);
        for (const auto& a : out.anomalies) {
            if (a.kind == AnomalyKind::Collective) continue;
            CHECK(out.series.values[a.start] - base.values[a.start] ==
                  doctest::Approx(a.magnitude * sigma).epsilon(1e-9));
        }
    }
    CHECK(generate_preset(Preset::Std, 800, 7).series == generate_preset(Preset::Std, 800, 7).series);
}

TEST_CASE("injection rejects impossible requests") {
    const TimeSeries s = gen_random_walk(64, 1);
    InjectionSpec crowded;
    crowded.n_spikes = 40;
    CHECK(error_code_of([&] { inject_anomalies(s, crowded); }) == ErrorCode::PlacementExhausted);

    InjectionSpec bad;
    bad.magnitude_range = {3.0, 1.0};
    CHECK(error_code_of([&] { inject_anomalies(s, bad); }) == ErrorCode::InvalidParam);
    bad = InjectionSpec{};
    bad.collective_length_range = {1, 4};
    CHECK(error_code_of([&] { inject_anomalies(s, bad); }) == ErrorCode::InvalidParam);
}
