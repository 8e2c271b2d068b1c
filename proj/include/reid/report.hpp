#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "reid/metrics.hpp"

namespace reid {

// One engine's per-frame threshold trace.
struct DampingTracePoint {
    std::int64_t frame = 0;
    DecisionKind kind = DecisionKind::Lost;
    std::optional<double> d;  // chosen-candidate distance, absent on Lost
    double mu_d = 0.0;
    double sigma_d = 0.0;
    double lambda_d = 0.0;
};

struct DampingComparison {
    std::vector<DampingTracePoint> damped;    // damping factors active
    std::vector<DampingTracePoint> undamped;  // both factors pinned to 1
};

// Runs the same stream through a damped and an undamped engine and records
// both threshold traces. `config.damped` selects the first engine's mode, so
// passing damped=false yields two identical traces.
DampingComparison compare_damping(const DetectionStream& stream, const EngineConfig& config,
                                  std::int64_t person_id);

// frame, then (kind, d, mu_d, sigma_d, lambda_d) per engine.
void write_damping_csv(const DampingComparison& cmp, std::ostream& out);

// Per-run rows followed by min/mean/max aggregate rows. Tracking lengths and
// delays aggregate over the pooled per-run lists; counts aggregate over runs.
void write_metrics_csv(const std::vector<RunMetrics>& runs, std::ostream& out);

// Plain-text min/mean/max summary of the four per-run statistics.
void write_summary(const std::vector<RunMetrics>& runs, std::ostream& out);

// Static SVG bar charts, one per statistic, mirroring the CSV content.
// Returns the file names written into `dir`.
std::vector<std::string> write_plots(const std::vector<RunMetrics>& runs, const std::string& dir);

}  // namespace reid
