#pragma once

#include <map>
#include <string>
#include <vector>

#include "szego/config.hpp"

namespace szego {

/// Output files by name, contents held in memory until written.
using OutputFiles = std::map<std::string, std::string>;

KernelTable tabulate_for(const RunConfig& cfg, double b, unsigned threads);

/// Curves for g1, g2, g3 (d = 2) and the configured g on the reduced path,
/// or g1 and the configured g on the brute-force lattice.
std::vector<VertexTraceCurve> scan_curves(const RunConfig& cfg, TraceMethod method, unsigned threads);

struct FitAndCompareResult {
    OracleReport report;
    OutputFiles files; // report.json, plot.csv, curves.csv
    std::vector<StageTiming> stages;
};

FitAndCompareResult fit_and_compare(const RunConfig& cfg, unsigned threads);

/// grid, quad, window, version and config hash; no timestamps.
nlohmann::json report_manifest(const RunConfig& cfg);

void write_outputs(const std::string& dir, const OutputFiles& files);

} // namespace szego
