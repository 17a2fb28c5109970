#include "lightesd/cli/bench.hpp"

#include "lightesd/pipeline.hpp"

#include <algorithm>
#include <chrono>

namespace lightesd::cli {

BenchReport run_bench(const BenchOptions& options) {
    if (options.seeds == 0) throw Error(ErrorCode::InvalidParam, "--seeds must be at least 1");
    if (options.alphas.empty() || options.presets.empty()) {
        throw Error(ErrorCode::InvalidParam, "bench needs at least one alpha and one dataset");
    }

    BenchReport report;
    report.options = options;

    for (Preset preset : options.presets) {
        for (std::size_t k = 0; k < options.seeds; ++k) {
            const std::uint64_t seed = options.first_seed + k;
            const LabeledSeries data = generate_preset(preset, options.n, seed);
            for (double alpha : options.alphas) {
                DetectorConfig config;
                config.alpha = alpha;
                config.seed = options.detector_seed;
                const auto start = std::chrono::steady_clock::now();
                const AnomalyReport r = detect(data.series, config);
                const double latency =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

                BenchRow row;
                row.preset = preset;
                row.alpha = alpha;
                row.seed = seed;
                row.scores = prf1(r.anomaly_indices, data.truth_indices);
                row.n_truth = data.truth_indices.size();
                row.n_predicted = r.anomaly_indices.size();
                row.seasonal = r.periods_detected != std::vector<std::size_t>{kNonseasonalPeriod};
                row.latency_seconds = latency;
                report.rows.push_back(row);
            }
        }
    }
    std::stable_sort(report.rows.begin(), report.rows.end(), [](const BenchRow& a, const BenchRow& b) {
        if (a.preset != b.preset) return a.preset < b.preset;
        if (a.alpha != b.alpha) return a.alpha > b.alpha;
        return a.seed < b.seed;
    });

    for (Preset preset : options.presets) {
        for (double alpha : options.alphas) {
            BenchAggregate agg;
            agg.preset = preset;
            agg.alpha = alpha;
            std::size_t count = 0;
            for (const auto& row : report.rows) {
                if (row.preset != preset || row.alpha != alpha) continue;
                agg.precision += row.scores.precision;
                agg.recall += row.scores.recall;
                agg.f1 += row.scores.f1;
                agg.latency_mean += row.latency_seconds;
                agg.latency_max = std::max(agg.latency_max, row.latency_seconds);
                ++count;
            }
            const auto c = static_cast<double>(count);
            agg.precision /= c;
            agg.recall /= c;
            agg.f1 /= c;
            agg.latency_mean /= c;
            report.aggregates.push_back(agg);
        }
    }

    std::vector<double> latencies;
    for (double alpha : options.alphas) {
        BenchModel model;
        model.alpha = alpha;
        std::vector<double> f1s;
        double latency = 0.0;
        for (const auto& agg : report.aggregates) {
            if (agg.alpha != alpha) continue;
            f1s.push_back(agg.f1);
            latency += agg.latency_mean;
        }
        model.latency_mean = latency / static_cast<double>(f1s.size());
        latencies.push_back(model.latency_mean);
        try {
            model.generality = generality(f1s);
        } catch (const Error&) {
            // Every dataset scored F1 = 0: worst generality.
            model.generality = {0.0, 1.0};
        }
        report.models.push_back(model);
    }
    const auto norm = normalize_latency(latencies);
    for (std::size_t i = 0; i < report.models.size(); ++i) {
        BenchModel& m = report.models[i];
        m.latency_norm = norm[i];
        m.cv_clamped = std::min(m.generality.cv, 1.0);
        AdcsInput in;
        in.f1 = m.generality.mean;
        in.cv = m.generality.cv;
        in.latency_norm = m.latency_norm;
        in.cpu_frac = options.cpu_frac;
        in.ram_frac = options.ram_frac;
        in.power_frac = options.power_frac;
        m.adcs = adcomp_score(in);
    }
    return report;
}

} // namespace lightesd::cli
