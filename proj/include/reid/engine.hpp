#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "reid/distance.hpp"
#include "reid/types.hpp"

namespace reid {

struct EngineConfig {
    std::int64_t feature_dim = 256;
    double eps_sigma = kDefaultSigmaEps;       // floor for sigma in the distance
    std::int64_t n_max = 100;                  // moving-average counter cap
    std::int64_t blacklist_stable_frames = 30; // direct-ID frames before distractors are listed
    double lambda_init = 1.0;                  // gate before the first distance update
    bool normalize_features = false;           // L2-normalize features at ingest
    bool damped = true;                        // false pins both damping factors to 1 (plain EMA)
    bool blacklist_enabled = true;

    // Returns every violated constraint, empty when the config is usable.
    std::vector<std::string> validate() const;
};

// Single-target tracking state machine. Each frame takes one of three exits:
// the tracker kept the target's ID (DirectTrack), the gate re-identified it
// under a new ID (Reidentified), or nothing qualified (Lost). Lost frames
// change no state at all.
class ReidEngine {
public:
    // Binds the engine to the user-selected track. The initial feature
    // seeds the appearance model (mu = feature, sigma = 0, one update
    // consumed); the threshold model starts empty with the configured
    // initial gate.
    ReidEngine(const EngineConfig& config, std::int64_t initial_id,
               const FeatureVector& initial_feature);

    // Rebuilds an engine from previously captured state (checkpoint
    // restore). The gate is recomputed from mu_d and sigma_d once the
    // threshold model has seen an update; before that the stored value
    // passes through.
    ReidEngine(const EngineConfig& config, std::int64_t tracked_id, TargetModel target,
               ThresholdModel threshold, std::set<std::int64_t> blacklist,
               std::int64_t stable_run);

    // Runs one frame. Detections must share frame_index, carry distinct
    // track ids and features of the configured dimension; an empty frame is
    // valid and comes back Lost.
    Decision process_frame(std::int64_t frame_index, const std::vector<Detection>& detections);

    // Minimum-distance candidate among non-blacklisted features, if it beats
    // the gate strictly. Ties break toward the smallest track id. Callers
    // must have taken the direct-ID path off the table already.
    std::optional<std::pair<std::int64_t, double>> reidentify(
        const std::vector<std::pair<std::int64_t, FeatureVector>>& candidates) const;

    // Applies the full model update for a chosen detection at distance d:
    // appearance mean/dispersion first, then distance mean/dispersion, then
    // the gate. Damping factors are computed once from (d, current gate).
    void update_models(const FeatureVector& chosen_feature, double d);

    const EngineConfig& config() const { return config_; }
    std::int64_t tracked_id() const { return tracked_id_; }
    const TargetModel& target() const { return target_; }
    const ThresholdModel& threshold() const { return threshold_; }
    const std::set<std::int64_t>& blacklist() const { return blacklist_; }
    std::int64_t stable_run() const { return stable_run_; }
    // Times the threshold damping fell back to 1 because the gate was zero.
    std::int64_t delta_fallback_count() const { return delta_fallback_count_; }

private:
    FeatureVector ingest(const FeatureVector& raw) const;
    std::optional<std::pair<std::int64_t, double>> gate_best(
        const std::vector<std::int64_t>& ids, const std::vector<FeatureVector>& feats) const;

    EngineConfig config_;
    std::int64_t tracked_id_ = 0;
    TargetModel target_;
    ThresholdModel threshold_;
    std::set<std::int64_t> blacklist_;
    std::int64_t stable_run_ = 0;
    std::int64_t delta_fallback_count_ = 0;
};

// Shared-counter update of the appearance pair (mu, sigma) with one new
// feature. The dispersion sample is taken against the pre-update mean; on
// the very first update the mean bootstraps to the feature so the sample is
// zero. Dispersion is clamped at zero: weights above 1 (small n * delta)
// can otherwise push it negative.
void apply_feature_update(TargetModel& model, const FeatureVector& x, double delta);

// Same scheme for the scalar distance pair (mu_d, sigma_d); afterwards the
// gate is recomputed as mu_d + 2 * sigma_d.
void apply_distance_update(ThresholdModel& model, double d, double delta);

}  // namespace reid
