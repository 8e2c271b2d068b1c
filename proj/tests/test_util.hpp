#pragma once

// Shared helpers for the test suites: a bit-level engine state hash, an
// independent reference implementation of the per-frame decision rule, and
// small builders. The reference deliberately re-derives everything from
// scratch with its own loops so it cannot share a bug with the library path.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <optional>
#include <vector>

#include "reid/engine.hpp"
#include "reid/rng.hpp"
#include "reid/types.hpp"

namespace testutil {

inline void fnv_mix(std::uint64_t& h, const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
}

template <typename T>
void fnv_value(std::uint64_t& h, const T& v) {
    fnv_mix(h, &v, sizeof(v));
}

inline std::uint64_t engine_state_hash(const reid::ReidEngine& e) {
    std::uint64_t h = 1469598103934665603ULL;
    fnv_value(h, e.tracked_id());
    fnv_value(h, e.stable_run());
    for (double v : e.target().mu) fnv_value(h, v);
    for (double v : e.target().sigma) fnv_value(h, v);
    fnv_value(h, e.target().n_feat);
    fnv_value(h, e.threshold().mu_d);
    fnv_value(h, e.threshold().sigma_d);
    fnv_value(h, e.threshold().lambda_d);
    fnv_value(h, e.threshold().n_dist);
    for (std::int64_t id : e.blacklist()) fnv_value(h, id);
    return h;
}

struct RefDecision {
    reid::DecisionKind kind = reid::DecisionKind::Lost;
    std::optional<std::int64_t> track_id;
    std::optional<double> distance;
};

// From-scratch distance: plain indexed loop, explicit floor.
inline double ref_distance(const reid::FeatureVector& x, const reid::FeatureVector& mu,
                           const reid::FeatureVector& sigma, double eps) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double scale = sigma[i] > eps ? sigma[i] : eps;
        const double t = (x[i] - mu[i]) / scale;
        acc += t * t;
    }
    return std::sqrt(acc / static_cast<double>(x.size()));
}

// Reference per-frame decision: direct id match wins outright; otherwise the
// smallest-distance non-blacklisted candidate (ties to the smaller id) if it
// beats the gate strictly.
inline RefDecision ref_decide(const reid::ReidEngine& engine,
                              const std::vector<reid::Detection>& dets) {
    const auto& cfg = engine.config();
    const auto norm = [&](reid::FeatureVector f) {
        if (!cfg.normalize_features) return f;
        double sq = 0.0;
        for (double v : f) sq += v * v;
        if (sq > 0.0) {
            const double inv = 1.0 / std::sqrt(sq);
            for (double& v : f) v *= inv;
        }
        return f;
    };

    RefDecision out;
    for (const auto& det : dets) {
        if (det.track_id == engine.tracked_id()) {
            out.kind = reid::DecisionKind::DirectTrack;
            out.track_id = det.track_id;
            out.distance = ref_distance(norm(det.feature), engine.target().mu,
                                        engine.target().sigma, cfg.eps_sigma);
            return out;
        }
    }
    bool have = false;
    double best_d = 0.0;
    std::int64_t best_id = 0;
    for (const auto& det : dets) {
        if (engine.blacklist().count(det.track_id) != 0) continue;
        const double d = ref_distance(norm(det.feature), engine.target().mu,
                                      engine.target().sigma, cfg.eps_sigma);
        if (!have || d < best_d || (d == best_d && det.track_id < best_id)) {
            have = true;
            best_d = d;
            best_id = det.track_id;
        }
    }
    if (have && best_d < engine.threshold().lambda_d) {
        out.kind = reid::DecisionKind::Reidentified;
        out.track_id = best_id;
        out.distance = best_d;
    }
    return out;
}

inline reid::FeatureVector random_feature(reid::Xoshiro256StarStar& rng, std::size_t dim,
                                          double lo = -2.0, double hi = 2.0) {
    reid::FeatureVector f(dim);
    for (auto& v : f) v = lo + (hi - lo) * rng.uniform();
    return f;
}

inline reid::Detection make_detection(std::int64_t frame, std::int64_t track_id,
                                      reid::FeatureVector feature,
                                      std::optional<std::int64_t> person = std::nullopt,
                                      double fps = 30.0) {
    reid::Detection det;
    det.frame_index = frame;
    det.timestamp = static_cast<double>(frame) / fps;
    det.track_id = track_id;
    det.feature = std::move(feature);
    det.person_id = person;
    return det;
}

}  // namespace testutil
