#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace reid {

// Thrown when a caller breaks an operation precondition (wrong dimension,
// non-finite input, malformed frame). These are programming errors, not
// recoverable runtime conditions.
struct ContractViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown for bad user-supplied configuration or stream content. The message
// lists every violation found, one per line.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Appearance embedding, one value per dimension. All components finite.
using FeatureVector = std::vector<double>;

// Throws ContractViolation unless x has length dim and every component is finite.
void check_feature(const FeatureVector& x, std::size_t dim, const char* what);

// Rescales x to unit L2 norm. Zero vectors are returned unchanged.
FeatureVector l2_normalized(FeatureVector x);

// One observed person in one frame, as produced by the upstream tracker.
struct Detection {
    std::int64_t frame_index = 0;
    double timestamp = 0.0;            // seconds
    std::int64_t track_id = 0;         // tracker-assigned, volatile across occlusions
    FeatureVector feature;
    std::optional<std::int64_t> person_id;            // ground truth, simulator only
    std::optional<std::array<double, 4>> bbox;        // carried through, never interpreted
};

// Ideal-target appearance model: per-dimension mean and dispersion, where
// sigma is the moving average of element-wise squared deviations. mu and
// sigma share one update counter.
struct TargetModel {
    FeatureVector mu;
    FeatureVector sigma;
    std::int64_t n_feat = 0;
    std::int64_t n_max = 100;
};

// Scalar statistics of the target's own distances and the derived gate.
// lambda_d == mu_d + 2*sigma_d holds after the first update.
struct ThresholdModel {
    double mu_d = 0.0;
    double sigma_d = 0.0;
    double lambda_d = 0.0;
    std::int64_t n_dist = 0;
    std::int64_t n_max = 100;
};

enum class DecisionKind { DirectTrack, Reidentified, Lost };

const char* to_string(DecisionKind kind);
std::optional<DecisionKind> decision_kind_from_string(const std::string& s);

// Per-frame engine output. track_id and distance are absent exactly when
// the frame is Lost.
struct Decision {
    std::int64_t frame_index = 0;
    DecisionKind kind = DecisionKind::Lost;
    std::optional<std::int64_t> track_id;
    std::optional<double> distance;
    double lambda_snapshot = 0.0;      // gate value in force this frame
    std::int64_t blacklist_size = 0;   // diagnostic, post-frame
};

}  // namespace reid
