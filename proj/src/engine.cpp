#include "reid/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "reid/dema.hpp"

namespace reid {

std::vector<std::string> EngineConfig::validate() const {
    std::vector<std::string> problems;
    if (feature_dim < 1) problems.push_back("feature_dim must be positive");
    if (!(eps_sigma > 0.0)) problems.push_back("eps_sigma must be positive");
    if (n_max < 1) problems.push_back("n_max must be positive");
    if (blacklist_stable_frames < 1) problems.push_back("blacklist_stable_frames must be positive");
    if (!(lambda_init > 0.0)) problems.push_back("lambda_init must be positive");
    return problems;
}

namespace {

std::string joined(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += "\n";
        out += p;
    }
    return out;
}

}  // namespace

void apply_feature_update(TargetModel& model, const FeatureVector& x, double delta) {
    check_feature(x, model.mu.size(), "apply_feature_update: x");
    if (model.n_feat == 0) {
        // First sample: the mean bootstraps to it, so the deviation is zero.
        model.mu = x;
        model.sigma.assign(x.size(), 0.0);
    } else {
        const FeatureVector var = elementwise_squared_deviation(model.mu, x);
        DemaState<FeatureVector> mu_state{model.mu, model.n_feat, model.n_max};
        model.mu = dema_update(std::move(mu_state), x, delta).value;
        DemaState<FeatureVector> sigma_state{model.sigma, model.n_feat, model.n_max};
        model.sigma = dema_update(std::move(sigma_state), var, delta).value;
        // Weights above 1 can overshoot below zero when the new deviation is
        // smaller than the running one.
        for (double& s : model.sigma) s = std::max(0.0, s);
    }
    model.n_feat = std::min(model.n_feat + 1, model.n_max);
}

void apply_distance_update(ThresholdModel& model, double d, double delta) {
    if (!std::isfinite(d)) throw ContractViolation("apply_distance_update: d must be finite");
    if (model.n_dist == 0) {
        model.mu_d = d;
        model.sigma_d = 0.0;
    } else {
        const double var_d = scalar_squared_deviation(model.mu_d, d);
        DemaState<double> mu_state{model.mu_d, model.n_dist, model.n_max};
        model.mu_d = dema_update(mu_state, d, delta).value;
        DemaState<double> sigma_state{model.sigma_d, model.n_dist, model.n_max};
        model.sigma_d = dema_update(sigma_state, var_d, delta).value;
    }
    model.n_dist = std::min(model.n_dist + 1, model.n_max);
    model.lambda_d = model.mu_d + 2.0 * model.sigma_d;
}

ReidEngine::ReidEngine(const EngineConfig& config, std::int64_t initial_id,
                       const FeatureVector& initial_feature)
    : config_(config) {
    const auto problems = config_.validate();
    if (!problems.empty()) throw ValidationError(joined(problems));

    const FeatureVector feat = ingest(initial_feature);
    tracked_id_ = initial_id;
    target_.mu = feat;
    target_.sigma.assign(feat.size(), 0.0);
    target_.n_feat = 1;
    target_.n_max = config_.n_max;
    threshold_.lambda_d = config_.lambda_init;
    threshold_.n_max = config_.n_max;
}

ReidEngine::ReidEngine(const EngineConfig& config, std::int64_t tracked_id, TargetModel target,
                       ThresholdModel threshold, std::set<std::int64_t> blacklist,
                       std::int64_t stable_run)
    : config_(config),
      tracked_id_(tracked_id),
      target_(std::move(target)),
      threshold_(threshold),
      blacklist_(std::move(blacklist)),
      stable_run_(stable_run) {
    const auto problems = config_.validate();
    if (!problems.empty()) throw ValidationError(joined(problems));

    const auto dim = static_cast<std::size_t>(config_.feature_dim);
    check_feature(target_.mu, dim, "restore: target mu");
    check_feature(target_.sigma, dim, "restore: target sigma");
    for (double s : target_.sigma) {
        if (s < 0.0) throw ContractViolation("restore: negative sigma component");
    }
    if (target_.n_feat < 0 || target_.n_max < 1 || target_.n_feat > target_.n_max) {
        throw ContractViolation("restore: target counter out of range");
    }
    if (threshold_.sigma_d < 0.0 || threshold_.mu_d < 0.0) {
        throw ContractViolation("restore: negative threshold statistic");
    }
    if (threshold_.n_dist < 0 || threshold_.n_max < 1 || threshold_.n_dist > threshold_.n_max) {
        throw ContractViolation("restore: threshold counter out of range");
    }
    if (blacklist_.count(tracked_id_) != 0) {
        throw ContractViolation("restore: tracked id is blacklisted");
    }
    if (stable_run_ < 0) throw ContractViolation("restore: negative stable_run");
    if (threshold_.n_dist >= 1) {
        threshold_.lambda_d = threshold_.mu_d + 2.0 * threshold_.sigma_d;
    }
}

FeatureVector ReidEngine::ingest(const FeatureVector& raw) const {
    check_feature(raw, static_cast<std::size_t>(config_.feature_dim), "engine feature");
    return config_.normalize_features ? l2_normalized(raw) : raw;
}

std::optional<std::pair<std::int64_t, double>> ReidEngine::gate_best(
    const std::vector<std::int64_t>& ids, const std::vector<FeatureVector>& feats) const {
    std::optional<std::pair<std::int64_t, double>> best;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (blacklist_.count(ids[i]) != 0) continue;
        const double d = statistical_distance(feats[i], target_, config_.eps_sigma);
        if (!best || d < best->second || (d == best->second && ids[i] < best->first)) {
            best = {ids[i], d};
        }
    }
    if (best && best->second < threshold_.lambda_d) return best;
    return std::nullopt;
}

std::optional<std::pair<std::int64_t, double>> ReidEngine::reidentify(
    const std::vector<std::pair<std::int64_t, FeatureVector>>& candidates) const {
    std::vector<std::int64_t> ids;
    std::vector<FeatureVector> feats;
    ids.reserve(candidates.size());
    feats.reserve(candidates.size());
    for (const auto& [id, raw] : candidates) {
        ids.push_back(id);
        feats.push_back(ingest(raw));
    }
    return gate_best(ids, feats);
}

void ReidEngine::update_models(const FeatureVector& chosen_feature, double d) {
    const double feat_delta = config_.damped ? delta_f(d) : 1.0;
    double dist_delta = 1.0;
    if (config_.damped) {
        bool fallback = false;
        dist_delta = delta_lambda(d, threshold_.lambda_d, &fallback);
        if (fallback) ++delta_fallback_count_;
    }
    apply_feature_update(target_, chosen_feature, feat_delta);
    apply_distance_update(threshold_, d, dist_delta);
}

Decision ReidEngine::process_frame(std::int64_t frame_index,
                                   const std::vector<Detection>& detections) {
    if (frame_index < 0) throw ContractViolation("process_frame: negative frame index");
    std::unordered_set<std::int64_t> seen_ids;
    std::vector<FeatureVector> feats;
    feats.reserve(detections.size());
    for (const auto& det : detections) {
        if (det.frame_index != frame_index) {
            throw ContractViolation("process_frame: detection frame_index " +
                                    std::to_string(det.frame_index) + " != " +
                                    std::to_string(frame_index));
        }
        if (!seen_ids.insert(det.track_id).second) {
            throw ContractViolation("process_frame: duplicate track_id " +
                                    std::to_string(det.track_id));
        }
        feats.push_back(ingest(det.feature));
    }

    const double lambda_snapshot = threshold_.lambda_d;

    // Phase 1: keep the tracker's id if it is still in the frame.
    const Detection* chosen = nullptr;
    const FeatureVector* chosen_feat = nullptr;
    bool direct = false;
    for (std::size_t i = 0; i < detections.size(); ++i) {
        if (detections[i].track_id == tracked_id_) {
            chosen = &detections[i];
            chosen_feat = &feats[i];
            direct = true;
            break;
        }
    }

    double d = 0.0;
    if (direct) {
        // The gate plays no role here, but the distance still feeds the
        // threshold statistics.
        d = statistical_distance(*chosen_feat, target_, config_.eps_sigma);
    } else {
        // Phase 2: gate the best non-blacklisted candidate.
        std::vector<std::int64_t> ids;
        ids.reserve(detections.size());
        for (const auto& det : detections) ids.push_back(det.track_id);
        if (const auto hit = gate_best(ids, feats)) {
            d = hit->second;
            for (std::size_t i = 0; i < detections.size(); ++i) {
                if (detections[i].track_id == hit->first) {
                    chosen = &detections[i];
                    chosen_feat = &feats[i];
                    break;
                }
            }
        }
    }

    if (chosen == nullptr) {
        // Lost: no output, no state change.
        Decision decision;
        decision.frame_index = frame_index;
        decision.kind = DecisionKind::Lost;
        decision.lambda_snapshot = lambda_snapshot;
        decision.blacklist_size = static_cast<std::int64_t>(blacklist_.size());
        return decision;
    }

    if (direct) {
        ++stable_run_;
        if (config_.blacklist_enabled && stable_run_ >= config_.blacklist_stable_frames) {
            for (const auto& det : detections) {
                if (det.track_id != tracked_id_) blacklist_.insert(det.track_id);
            }
        }
    } else {
        tracked_id_ = chosen->track_id;
        stable_run_ = 0;
        blacklist_.erase(tracked_id_);
    }

    update_models(*chosen_feat, d);

    Decision decision;
    decision.frame_index = frame_index;
    decision.kind = direct ? DecisionKind::DirectTrack : DecisionKind::Reidentified;
    decision.track_id = chosen->track_id;
    decision.distance = d;
    decision.lambda_snapshot = lambda_snapshot;
    decision.blacklist_size = static_cast<std::int64_t>(blacklist_.size());
    return decision;
}

}  // namespace reid
