#pragma once

#include <string>

#include "output.hpp"

namespace raris::tool {

struct BenchmarkOptions {
    std::string preset;
    std::string out_dir = "bench";
    std::uint64_t seed = 1;
    int workers = 1;
    int runs = 50;  ///< independent repetitions for the variance presets
};

/// Runs a preset and writes its CSVs, summary.json and manifest.json into
/// out_dir. Returns the summary.
json run_benchmark(const BenchmarkOptions& opts);

}  // namespace raris::tool
