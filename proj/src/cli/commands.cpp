#include "lightesd/cli/commands.hpp"

#include "lightesd/cli/bench.hpp"
#include "lightesd/cli/csv_io.hpp"
#include "lightesd/cli/report.hpp"
#include "lightesd/pipeline.hpp"
#include "lightesd/synthdata.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>

namespace lightesd::cli {

namespace {

struct DetectArgs {
    std::string input;
    std::string out;
    std::optional<double> alpha;
    std::optional<double> max_anomaly_frac;
    std::optional<std::uint64_t> seed;
    std::string value_column = "value";
    std::string plot_data;
};

struct GenArgs {
    std::string preset;
    std::size_t n = 5000;
    std::optional<std::uint64_t> seed;
    std::string out;
};

struct BenchArgs {
    std::size_t seeds = 10;
    std::size_t n = 5000;
    std::uint64_t first_seed = 1;
    std::optional<std::uint64_t> seed;
    std::string format = "json";
    std::string out;
    double cpu_frac = 0.0;
    double ram_frac = 0.0;
    double power_frac = 0.0;
};

// Writes to `path`, or to `fallback` when path is empty.
template <typename Fn>
bool emit(const std::string& path, std::ostream& fallback, std::ostream& err, Fn&& write) {
    if (path.empty()) {
        write(fallback);
        return true;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        err << "error: cannot write " << path << '\n';
        return false;
    }
    write(file);
    return static_cast<bool>(file);
}

int cmd_detect(const DetectArgs& a, std::ostream& out, std::ostream& err) {
    std::ifstream in(a.input, std::ios::binary);
    if (!in) {
        err << "error: cannot open " << a.input << '\n';
        return kExitParse;
    }
    TimeSeries series;
    try {
        series = read_series_csv(in, a.value_column);
    } catch (const ParseError& e) {
        err << "error: " << a.input << ": " << e.what() << '\n';
        return kExitParse;
    }

    DetectorConfig config;
    config.seed = a.seed.value_or(default_seed());
    if (a.alpha) config.alpha = *a.alpha;
    if (a.max_anomaly_frac) config.max_anomaly_frac = *a.max_anomaly_frac;

    const AnomalyReport report = detect(series, config);
    const auto j = detect_report_json(report, series.size());
    if (!emit(a.out, out, err, [&](std::ostream& os) { os << j.dump(2) << '\n'; })) return kExitInternal;

    if (!a.plot_data.empty()) {
        std::vector<bool> flagged(series.size(), false);
        for (auto i : report.anomaly_indices) flagged[i] = true;
        const bool ok = emit(a.plot_data, out, err, [&](std::ostream& os) {
            os << "index,value,anomaly\n";
            for (std::size_t i = 0; i < series.size(); ++i) {
                os << i << ',' << format_double(series.values[i]) << ',' << (flagged[i] ? 1 : 0) << '\n';
            }
        });
        if (!ok) return kExitInternal;
    }
    return kExitOk;
}

std::string truth_path(const std::string& csv_path) {
    std::string stem = csv_path;
    const std::string ext = ".csv";
    if (stem.size() > ext.size() && stem.compare(stem.size() - ext.size(), ext.size(), ext) == 0) {
        stem.resize(stem.size() - ext.size());
    }
    return stem + ".truth.json";
}

int cmd_gen(const GenArgs& a, std::ostream& out, std::ostream& err) {
    const Preset preset = parse_preset(a.preset);
    const std::uint64_t seed = a.seed.value_or(default_seed());
    const LabeledSeries data = generate_preset(preset, a.n, seed);
    if (!emit(a.out, out, err, [&](std::ostream& os) { write_series_csv(os, data.series); })) return kExitInternal;
    const std::string tpath = truth_path(a.out);
    const auto j = truth_json(data, preset, a.n, seed);
    if (!emit(tpath, out, err, [&](std::ostream& os) { os << j.dump(2) << '\n'; })) return kExitInternal;
    return kExitOk;
}

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
    if (a.format != "json" && a.format != "csv") {
        throw Error(ErrorCode::InvalidParam, "--format must be json or csv");
    }
    for (double f : {a.cpu_frac, a.ram_frac, a.power_frac}) {
        if (!(f >= 0.0 && f <= 1.0)) throw Error(ErrorCode::InvalidParam, "resource fractions must lie in [0, 1]");
    }
    if (a.cpu_frac == 0.0 && a.ram_frac == 0.0 && a.power_frac == 0.0) {
        err << "warning: resource fractions were not measured; cpu, ram and power enter ADCS as 0\n";
    }
    BenchOptions opt;
    opt.seeds = a.seeds;
    opt.n = a.n;
    opt.first_seed = a.first_seed;
    opt.detector_seed = a.seed.value_or(default_seed());
    opt.cpu_frac = a.cpu_frac;
    opt.ram_frac = a.ram_frac;
    opt.power_frac = a.power_frac;
    const BenchReport report = run_bench(opt);

    const bool ok = emit(a.out, out, err, [&](std::ostream& os) {
        if (a.format == "csv") write_bench_csv(os, report);
        else os << bench_json(report).dump(2) << '\n';
    });
    return ok ? kExitOk : kExitInternal;
}

} // namespace

std::uint64_t default_seed() {
    if (const char* env = std::getenv("LIGHTESD_SEED")) {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
    }
    return 42;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Anomaly detection for univariate time series"};
    app.set_version_flag("--version", version());
    app.require_subcommand(1);

    DetectArgs da;
    auto* detect_cmd = app.add_subcommand("detect", "Detect anomalies in a CSV series");
    detect_cmd->add_option("--input", da.input, "CSV file with a value column")->required();
    detect_cmd->add_option("--out", da.out, "Write the JSON report here instead of stdout");
    detect_cmd->add_option("--alpha", da.alpha, "Significance level of the ESD test");
    detect_cmd->add_option("--max-anomaly-frac", da.max_anomaly_frac, "Upper bound on the flagged fraction");
    detect_cmd->add_option("--seed", da.seed, "Seed of the permutation test");
    detect_cmd->add_option("--value-column", da.value_column, "Name of the value column");
    detect_cmd->add_option("--emit-plot-data", da.plot_data, "Write index,value,anomaly rows for plotting");

    GenArgs ga;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic dataset with planted anomalies");
    gen_cmd->add_option("--preset", ga.preset, "std or rw")->required();
    gen_cmd->add_option("--n", ga.n, "Number of samples");
    gen_cmd->add_option("--seed", ga.seed, "Dataset seed");
    gen_cmd->add_option("--out", ga.out, "CSV path; ground truth goes to <name>.truth.json")->required();

    BenchArgs ba;
    auto* bench_cmd = app.add_subcommand("bench", "Score the detector on generated datasets");
    bench_cmd->add_option("--seeds", ba.seeds, "Datasets per preset");
    bench_cmd->add_option("--n", ba.n, "Samples per dataset");
    bench_cmd->add_option("--first-seed", ba.first_seed, "Seed of the first dataset");
    bench_cmd->add_option("--seed", ba.seed, "Seed of the permutation test");
    bench_cmd->add_option("--format", ba.format, "json or csv");
    bench_cmd->add_option("--out", ba.out, "Write the report here instead of stdout");
    bench_cmd->add_option("--cpu-frac", ba.cpu_frac, "Measured CPU fraction in [0, 1]");
    bench_cmd->add_option("--ram-frac", ba.ram_frac, "Measured RAM fraction in [0, 1]");
    bench_cmd->add_option("--power-frac", ba.power_frac, "Measured power fraction in [0, 1]");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitParse;
    }

    try {
        if (*detect_cmd) return cmd_detect(da, out, err);
        if (*gen_cmd) return cmd_gen(ga, out, err);
        if (*bench_cmd) return cmd_bench(ba, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitInternal;
}

} // namespace lightesd::cli
