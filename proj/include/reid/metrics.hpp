#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "reid/engine.hpp"
#include "reid/stream.hpp"
#include "reid/types.hpp"

namespace reid {

// Evaluation result for one engine run against one target person.
struct RunMetrics {
    std::int64_t person_id = -1;
    std::int64_t initial_track_id = -1;
    std::int64_t frames_processed = 0;
    double fps = 30.0;

    // Durations (seconds) of maximal visible runs where the target kept one
    // track id. Runs cut at stream boundaries are included as-is.
    std::vector<double> mot_tracking_lengths;
    // Per recovered re-entry: frames from reappearance to the first decision
    // binding to the target, inclusive, over fps.
    std::vector<double> reid_delays;
    std::int64_t mot_error_count = 0;   // target track-id switches in ground truth
    std::int64_t reid_count = 0;        // Reidentified decisions bound to the target
    std::int64_t misid_count = 0;       // decisions bound to a non-target person
    std::int64_t lost_frames = 0;
    std::int64_t direct_track_frames = 0;
    std::int64_t reidentified_frames = 0;
    std::int64_t unrecovered_reentries = 0;
};

struct RunResult {
    std::vector<Decision> decisions;
    RunMetrics metrics;
};

// Target-person view of the stream's ground truth.
struct TargetTruth {
    std::int64_t person_id = -1;
    std::vector<PresenceEntry> presence;  // per frame

    // Built from record-level person_id annotations; throws ValidationError
    // if the stream carries none for this person.
    static TargetTruth from_stream(const DetectionStream& stream, std::int64_t person_id);
};

// Drives one engine over the stream, bound initially to `person_id` via the
// track id that person carries in the stream's first frame (ValidationError
// if absent there). The binding consumes the first frame; decisions cover
// the remaining ones.
RunResult run_stream(const DetectionStream& stream, const EngineConfig& config,
                     std::int64_t person_id);

// Per-person evaluation: one independent run for every person present in
// the first frame.
std::vector<RunResult> sweep_stream(const DetectionStream& stream, const EngineConfig& config);

}  // namespace reid
