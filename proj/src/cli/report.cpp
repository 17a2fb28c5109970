#include "lightesd/cli/report.hpp"

#include "lightesd/cli/csv_io.hpp"
#include "lightesd/random.hpp"

#ifndef LIGHTESD_VERSION
#define LIGHTESD_VERSION "0.0.0"
#endif

namespace lightesd::cli {

using nlohmann::ordered_json;

const char* version() { return LIGHTESD_VERSION; }

ordered_json detect_report_json(const AnomalyReport& report, std::size_t n) {
    const DetectorConfig& c = report.config_echo;
    ordered_json j;
    j["schema"] = kSchemaVersion;
    j["anomaly_indices"] = report.anomaly_indices;
    j["scores"] = report.scores;
    j["periods"] = report.periods_detected;
    j["seasonal"] = report.periods_detected != std::vector<std::size_t>{kNonseasonalPeriod};
    j["n"] = n;
    j["alpha"] = c.alpha;
    j["max_anomaly_frac"] = c.max_anomaly_frac;
    j["seed"] = c.seed;
    j["latency_seconds"] = report.timing;
    j["version"] = version();
    j["prng"] = kPrngName;
    return j;
}

ordered_json truth_json(const LabeledSeries& data, Preset preset, std::size_t n, std::uint64_t seed) {
    ordered_json j;
    j["schema"] = kSchemaVersion;
    j["preset"] = to_string(preset);
    j["n"] = n;
    j["seed"] = seed;
    j["truth_indices"] = data.truth_indices;
    ordered_json groups = ordered_json::array();
    for (const auto& a : data.anomalies) {
        groups.push_back({{"kind", to_string(a.kind)},
                          {"start", a.start},
                          {"length", a.length},
                          {"magnitude_sigma", a.magnitude}});
    }
    j["anomalies"] = groups;
    j["version"] = version();
    j["prng"] = kPrngName;
    return j;
}

namespace {

ordered_json scores_json(const EvalScores& s) {
    return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1},
            {"tp", s.tp},               {"fp", s.fp},         {"fn", s.fn}};
}

} // namespace

ordered_json bench_json(const BenchReport& r) {
    ordered_json j;
    j["schema"] = kSchemaVersion;
    j["version"] = version();
    j["prng"] = kPrngName;
    j["n"] = r.options.n;
    j["seeds"] = r.options.seeds;
    j["first_seed"] = r.options.first_seed;
    j["detector_seed"] = r.options.detector_seed;
    const bool measured = r.options.cpu_frac > 0.0 || r.options.ram_frac > 0.0 || r.options.power_frac > 0.0;
    j["resources"] = {{"cpu_frac", r.options.cpu_frac},
                      {"ram_frac", r.options.ram_frac},
                      {"power_frac", r.options.power_frac},
                      {"supplied", measured}};

    ordered_json rows = ordered_json::array();
    for (const auto& row : r.rows) {
        ordered_json o;
        o["dataset"] = to_string(row.preset);
        o["alpha"] = row.alpha;
        o["seed"] = row.seed;
        o.update(scores_json(row.scores));
        o["n_truth"] = row.n_truth;
        o["n_predicted"] = row.n_predicted;
        o["seasonal"] = row.seasonal;
        o["latency_seconds"] = row.latency_seconds;
        rows.push_back(o);
    }
    j["rows"] = rows;

    ordered_json aggs = ordered_json::array();
    for (const auto& a : r.aggregates) {
        aggs.push_back({{"dataset", to_string(a.preset)},
                        {"alpha", a.alpha},
                        {"precision", a.precision},
                        {"recall", a.recall},
                        {"f1", a.f1},
                        {"latency_mean_seconds", a.latency_mean},
                        {"latency_max_seconds", a.latency_max}});
    }
    j["aggregates"] = aggs;

    ordered_json models = ordered_json::array();
    for (const auto& m : r.models) {
        models.push_back({{"alpha", m.alpha},
                          {"f1_mean", m.generality.mean},
                          {"f1_cv", m.generality.cv},
                          {"f1_cv_clamped", m.cv_clamped},
                          {"latency_mean_seconds", m.latency_mean},
                          {"latency_norm", m.latency_norm},
                          {"adcs", m.adcs}});
    }
    j["models"] = models;
    return j;
}

void write_bench_csv(std::ostream& out, const BenchReport& r) {
    out << "kind,dataset,alpha,seed,precision,recall,f1,tp,fp,fn,latency_seconds,f1_cv,latency_norm,adcs\n";
    for (const auto& row : r.rows) {
        out << "run," << to_string(row.preset) << ',' << format_double(row.alpha) << ',' << row.seed << ','
            << format_double(row.scores.precision) << ',' << format_double(row.scores.recall) << ','
            << format_double(row.scores.f1) << ',' << row.scores.tp << ',' << row.scores.fp << ','
            << row.scores.fn << ',' << format_double(row.latency_seconds) << ",,,\n";
    }
    for (const auto& a : r.aggregates) {
        out << "aggregate," << to_string(a.preset) << ',' << format_double(a.alpha) << ",,"
            << format_double(a.precision) << ',' << format_double(a.recall) << ',' << format_double(a.f1)
            << ",,,," << format_double(a.latency_mean) << ",,,\n";
    }
    for (const auto& m : r.models) {
        out << "model,all," << format_double(m.alpha) << ",,,," << format_double(m.generality.mean) << ",,,,"
            << format_double(m.latency_mean) << ',' << format_double(m.generality.cv) << ','
            << format_double(m.latency_norm) << ',' << format_double(m.adcs) << '\n';
    }
}

} // namespace lightesd::cli
