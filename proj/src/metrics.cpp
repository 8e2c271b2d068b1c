#include "reid/metrics.hpp"

#include <algorithm>
#include <unordered_map>

namespace reid {

TargetTruth TargetTruth::from_stream(const DetectionStream& stream, std::int64_t person_id) {
    TargetTruth truth;
    truth.person_id = person_id;
    truth.presence.assign(stream.frames.size(), PresenceEntry{});
    bool seen = false;
    for (std::size_t f = 0; f < stream.frames.size(); ++f) {
        for (const auto& det : stream.frames[f]) {
            if (det.person_id && *det.person_id == person_id) {
                truth.presence[f] = {true, det.track_id};
                seen = true;
                break;
            }
        }
    }
    if (!seen) {
        throw ValidationError("stream carries no ground truth for person " +
                              std::to_string(person_id));
    }
    return truth;
}

namespace {

// Maximal visible runs with a constant track id, and the number of id
// changes over the target's visible frames.
void scan_truth(const TargetTruth& truth, double fps, RunMetrics& metrics) {
    std::int64_t run_frames = 0;
    std::int64_t run_id = -1;
    std::int64_t last_visible_id = -1;
    bool prev_visible = false;
    for (const auto& entry : truth.presence) {
        if (entry.visible) {
            if (prev_visible && entry.track_id == run_id) {
                ++run_frames;
            } else {
                if (run_frames > 0) {
                    metrics.mot_tracking_lengths.push_back(static_cast<double>(run_frames) / fps);
                }
                run_frames = 1;
                run_id = entry.track_id;
            }
            if (last_visible_id >= 0 && entry.track_id != last_visible_id) {
                ++metrics.mot_error_count;
            }
            last_visible_id = entry.track_id;
        } else if (run_frames > 0) {
            metrics.mot_tracking_lengths.push_back(static_cast<double>(run_frames) / fps);
            run_frames = 0;
            run_id = -1;
        }
        prev_visible = entry.visible;
    }
    if (run_frames > 0) {
        metrics.mot_tracking_lengths.push_back(static_cast<double>(run_frames) / fps);
    }
}

}  // namespace

RunResult run_stream(const DetectionStream& stream, const EngineConfig& config,
                     std::int64_t person_id) {
    if (stream.frames.empty()) throw ValidationError("stream has no frames");
    if (config.feature_dim != stream.header.feature_dim) {
        throw ValidationError("engine feature_dim " + std::to_string(config.feature_dim) +
                              " does not match stream feature_dim " +
                              std::to_string(stream.header.feature_dim));
    }

    const Detection* initial = nullptr;
    for (const auto& det : stream.frames[0]) {
        if (det.person_id && *det.person_id == person_id) {
            initial = &det;
            break;
        }
    }
    if (initial == nullptr) {
        throw ValidationError("person " + std::to_string(person_id) +
                              " is not present at the stream start");
    }

    const TargetTruth truth = TargetTruth::from_stream(stream, person_id);
    const double fps = stream.header.fps;

    RunResult result;
    result.metrics.person_id = person_id;
    result.metrics.initial_track_id = initial->track_id;
    result.metrics.fps = fps;
    scan_truth(truth, fps, result.metrics);

    // The binding consumes the first frame; decisions start at the second.
    ReidEngine engine(config, initial->track_id, initial->feature);
    result.decisions.reserve(stream.frames.size() - 1);

    // Frames where the bound decision names the ground-truth target.
    std::vector<bool> bound_to_target(stream.frames.size(), false);

    for (std::size_t f = 1; f < stream.frames.size(); ++f) {
        const auto& frame = stream.frames[f];
        const Decision decision = engine.process_frame(static_cast<std::int64_t>(f), frame);
        ++result.metrics.frames_processed;
        switch (decision.kind) {
            case DecisionKind::Lost:
                ++result.metrics.lost_frames;
                break;
            case DecisionKind::DirectTrack:
            case DecisionKind::Reidentified: {
                if (decision.kind == DecisionKind::DirectTrack) {
                    ++result.metrics.direct_track_frames;
                } else {
                    ++result.metrics.reidentified_frames;
                }
                const bool on_target =
                    truth.presence[f].visible && truth.presence[f].track_id == *decision.track_id;
                if (on_target) {
                    bound_to_target[f] = true;
                    if (decision.kind == DecisionKind::Reidentified) ++result.metrics.reid_count;
                } else {
                    ++result.metrics.misid_count;
                }
                break;
            }
        }
        result.decisions.push_back(decision);
    }

    // Re-ID delay per re-entry: frames from reappearance to the first
    // decision bound to the target, inclusive, within that visibility run.
    for (std::size_t f = 1; f < truth.presence.size(); ++f) {
        if (!truth.presence[f].visible || truth.presence[f - 1].visible) continue;
        bool recovered = false;
        for (std::size_t g = f; g < truth.presence.size() && truth.presence[g].visible; ++g) {
            if (bound_to_target[g]) {
                result.metrics.reid_delays.push_back(static_cast<double>(g - f + 1) / fps);
                recovered = true;
                break;
            }
        }
        if (!recovered) ++result.metrics.unrecovered_reentries;
    }

    return result;
}

std::vector<RunResult> sweep_stream(const DetectionStream& stream, const EngineConfig& config) {
    if (stream.frames.empty()) throw ValidationError("stream has no frames");
    std::vector<std::int64_t> persons;
    for (const auto& det : stream.frames[0]) {
        if (det.person_id) persons.push_back(*det.person_id);
    }
    std::sort(persons.begin(), persons.end());
    persons.erase(std::unique(persons.begin(), persons.end()), persons.end());
    if (persons.empty()) {
        throw ValidationError("sweep requires ground-truth person ids at the stream start");
    }
    std::vector<RunResult> results;
    results.reserve(persons.size());
    for (const auto person : persons) {
        results.push_back(run_stream(stream, config, person));
    }
    return results;
}

}  // namespace reid
