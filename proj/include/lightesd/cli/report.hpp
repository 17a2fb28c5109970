#pragma once

#include "lightesd/cli/bench.hpp"
#include "lightesd/config.hpp"
#include "lightesd/synthdata.hpp"

#include <json.hpp>

#include <cstddef>
#include <ostream>

namespace lightesd::cli {

inline constexpr int kSchemaVersion = 1;

const char* version();

nlohmann::ordered_json detect_report_json(const AnomalyReport& report, std::size_t n);

nlohmann::ordered_json truth_json(const LabeledSeries& data, Preset preset, std::size_t n, std::uint64_t seed);

nlohmann::ordered_json bench_json(const BenchReport& report);

/// Per-run rows followed by aggregate and model rows, distinguished by the
/// first column.
void write_bench_csv(std::ostream& out, const BenchReport& report);

} // namespace lightesd::cli
