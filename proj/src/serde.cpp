#include "reid/serde.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace reid {

using nlohmann::json;

void to_json(json& j, const OcclusionEvent& e) {
    j = json{{"person", e.person},
             {"start_frame", e.start_frame},
             {"duration_frames", e.duration_frames}};
}

void from_json(const json& j, OcclusionEvent& e) {
    e.person = j.at("person").get<std::int64_t>();
    e.start_frame = j.at("start_frame").get<std::int64_t>();
    e.duration_frames = j.at("duration_frames").get<std::int64_t>();
}

void to_json(json& j, const AppearanceChange& e) {
    j = json{{"person", e.person}, {"frame", e.frame}, {"magnitude", e.magnitude}};
}

void from_json(const json& j, AppearanceChange& e) {
    e.person = j.at("person").get<std::int64_t>();
    e.frame = j.at("frame").get<std::int64_t>();
    e.magnitude = j.at("magnitude").get<double>();
}

void to_json(json& j, const DistractorSwap& e) {
    j = json{{"frame", e.frame}, {"person_a", e.person_a}, {"person_b", e.person_b}};
}

void from_json(const json& j, DistractorSwap& e) {
    e.frame = j.at("frame").get<std::int64_t>();
    e.person_a = j.at("person_a").get<std::int64_t>();
    e.person_b = j.at("person_b").get<std::int64_t>();
}

void to_json(json& j, const ScenarioConfig& c) {
    j = json{{"seed", c.seed},
             {"num_frames", c.num_frames},
             {"fps", c.fps},
             {"num_persons", c.num_persons},
             {"feature_dim", c.feature_dim},
             {"base_separation", c.base_separation},
             {"drift_sd", c.drift_sd},
             {"obs_noise_sd", c.obs_noise_sd},
             {"occlusion_events", c.occlusion_events},
             {"appearance_changes", c.appearance_changes},
             {"id_switch_on_reentry", c.id_switch_on_reentry},
             {"distractor_swaps", c.distractor_swaps}};
}

void from_json(const json& j, ScenarioConfig& c) {
    c = ScenarioConfig{};
    c.seed = j.value("seed", c.seed);
    c.num_frames = j.value("num_frames", c.num_frames);
    c.fps = j.value("fps", c.fps);
    c.num_persons = j.value("num_persons", c.num_persons);
    c.feature_dim = j.value("feature_dim", c.feature_dim);
    c.base_separation = j.value("base_separation", c.base_separation);
    c.drift_sd = j.value("drift_sd", c.drift_sd);
    c.obs_noise_sd = j.value("obs_noise_sd", c.obs_noise_sd);
    if (j.contains("occlusion_events")) {
        c.occlusion_events = j.at("occlusion_events").get<std::vector<OcclusionEvent>>();
    }
    if (j.contains("appearance_changes")) {
        c.appearance_changes = j.at("appearance_changes").get<std::vector<AppearanceChange>>();
    }
    c.id_switch_on_reentry = j.value("id_switch_on_reentry", c.id_switch_on_reentry);
    if (j.contains("distractor_swaps")) {
        c.distractor_swaps = j.at("distractor_swaps").get<std::vector<DistractorSwap>>();
    }
}

void to_json(json& j, const EngineConfig& c) {
    j = json{{"feature_dim", c.feature_dim},
             {"eps_sigma", c.eps_sigma},
             {"n_max", c.n_max},
             {"blacklist_stable_frames", c.blacklist_stable_frames},
             {"lambda_init", c.lambda_init},
             {"normalize_features", c.normalize_features},
             {"damped", c.damped},
             {"blacklist_enabled", c.blacklist_enabled}};
}

void from_json(const json& j, EngineConfig& c) {
    c = EngineConfig{};
    c.feature_dim = j.value("feature_dim", c.feature_dim);
    c.eps_sigma = j.value("eps_sigma", c.eps_sigma);
    c.n_max = j.value("n_max", c.n_max);
    c.blacklist_stable_frames = j.value("blacklist_stable_frames", c.blacklist_stable_frames);
    c.lambda_init = j.value("lambda_init", c.lambda_init);
    c.normalize_features = j.value("normalize_features", c.normalize_features);
    c.damped = j.value("damped", c.damped);
    c.blacklist_enabled = j.value("blacklist_enabled", c.blacklist_enabled);
}

void to_json(json& j, const Decision& d) {
    j = json{{"frame", d.frame_index},
             {"kind", to_string(d.kind)},
             {"lambda", d.lambda_snapshot},
             {"blacklist_size", d.blacklist_size}};
    if (d.track_id) j["track_id"] = *d.track_id;
    if (d.distance) j["distance"] = *d.distance;
}

void from_json(const json& j, Decision& d) {
    d = Decision{};
    d.frame_index = j.at("frame").get<std::int64_t>();
    const auto kind = decision_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) throw ValidationError("unknown decision kind: " + j.at("kind").get<std::string>());
    d.kind = *kind;
    d.lambda_snapshot = j.at("lambda").get<double>();
    d.blacklist_size = j.at("blacklist_size").get<std::int64_t>();
    if (j.contains("track_id")) d.track_id = j.at("track_id").get<std::int64_t>();
    if (j.contains("distance")) d.distance = j.at("distance").get<double>();
}

void to_json(json& j, const RunMetrics& m) {
    j = json{{"person_id", m.person_id},
             {"initial_track_id", m.initial_track_id},
             {"frames_processed", m.frames_processed},
             {"fps", m.fps},
             {"mot_tracking_lengths", m.mot_tracking_lengths},
             {"reid_delays", m.reid_delays},
             {"mot_error_count", m.mot_error_count},
             {"reid_count", m.reid_count},
             {"misid_count", m.misid_count},
             {"lost_frames", m.lost_frames},
             {"direct_track_frames", m.direct_track_frames},
             {"reidentified_frames", m.reidentified_frames},
             {"unrecovered_reentries", m.unrecovered_reentries}};
}

void from_json(const json& j, RunMetrics& m) {
    m = RunMetrics{};
    m.person_id = j.at("person_id").get<std::int64_t>();
    m.initial_track_id = j.at("initial_track_id").get<std::int64_t>();
    m.frames_processed = j.at("frames_processed").get<std::int64_t>();
    m.fps = j.at("fps").get<double>();
    m.mot_tracking_lengths = j.at("mot_tracking_lengths").get<std::vector<double>>();
    m.reid_delays = j.at("reid_delays").get<std::vector<double>>();
    m.mot_error_count = j.at("mot_error_count").get<std::int64_t>();
    m.reid_count = j.at("reid_count").get<std::int64_t>();
    m.misid_count = j.at("misid_count").get<std::int64_t>();
    m.lost_frames = j.at("lost_frames").get<std::int64_t>();
    m.direct_track_frames = j.value("direct_track_frames", std::int64_t{0});
    m.reidentified_frames = j.value("reidentified_frames", std::int64_t{0});
    m.unrecovered_reentries = j.value("unrecovered_reentries", std::int64_t{0});
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

}  // namespace reid
