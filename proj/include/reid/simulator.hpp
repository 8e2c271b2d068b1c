#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "reid/types.hpp"

namespace reid {

struct OcclusionEvent {
    std::int64_t person = 0;
    std::int64_t start_frame = 0;
    std::int64_t duration_frames = 1;
};

struct AppearanceChange {
    std::int64_t person = 0;
    std::int64_t frame = 0;
    double magnitude = 0.0;  // Euclidean jump applied to the latent vector
};

struct DistractorSwap {
    std::int64_t frame = 0;
    std::int64_t person_a = 0;
    std::int64_t person_b = 0;
};

struct ScenarioConfig {
    std::uint64_t seed = 0;
    std::int64_t num_frames = 1;
    double fps = 30.0;
    std::int64_t num_persons = 1;
    std::int64_t feature_dim = 256;
    // Minimum pairwise distance between latent centers, in units of
    // obs_noise_sd (a unit of 1 is used when the noise is zero).
    double base_separation = 6.0;
    double drift_sd = 0.0;      // per-frame random-walk step, per dimension
    double obs_noise_sd = 0.0;  // per-detection observation noise, per dimension
    std::vector<OcclusionEvent> occlusion_events;
    std::vector<AppearanceChange> appearance_changes;
    // Tracker behavior on re-entry: issue a fresh track id (true) or revive
    // the previous one (false).
    bool id_switch_on_reentry = true;
    // Hard tracker identity exchanges, applied after generation in order.
    std::vector<DistractorSwap> distractor_swaps;

    std::vector<std::string> validate() const;
};

// Per-person, per-frame ground truth.
struct PresenceEntry {
    bool visible = false;
    std::int64_t track_id = -1;
};

struct Scenario {
    ScenarioConfig config;
    std::vector<std::vector<Detection>> frames;            // ordered by track_id within a frame
    std::vector<std::vector<PresenceEntry>> ground_truth;  // [person][frame]
};

// Builds the full detection stream for a configuration. Latent appearance
// centers sit on scaled coordinate axes (pairwise distance exactly
// base_separation noise units), walk with drift_sd per frame, and emit
// noisy observations while visible. The emulated tracker keeps an id while
// a person stays visible and hands out monotonically increasing fresh ids.
// Bit-identical output for equal configs.
Scenario generate(const ScenarioConfig& config);

// Exchanges the track ids persons a and b carry at `frame` in every frame
// from there on, emulating a hard tracker identity switch. Both persons
// must be visible at the swap frame.
Scenario inject_distractor_swap(Scenario scenario, std::int64_t frame, std::int64_t person_a,
                                std::int64_t person_b);

}  // namespace reid
