#include "reid/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "reid/rng.hpp"

namespace reid {

namespace {

std::string joined(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += "\n";
        out += p;
    }
    return out;
}

FeatureVector random_unit_vector(Xoshiro256StarStar& rng, std::size_t dim) {
    FeatureVector v(dim);
    double norm_sq = 0.0;
    for (auto& x : v) {
        x = rng.normal();
        norm_sq += x * x;
    }
    if (norm_sq == 0.0) {
        v[0] = 1.0;
        return v;
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& x : v) x *= inv;
    return v;
}

}  // namespace

std::vector<std::string> ScenarioConfig::validate() const {
    std::vector<std::string> problems;
    if (num_frames < 1) problems.push_back("num_frames must be positive");
    if (!(fps > 0.0)) problems.push_back("fps must be positive");
    if (num_persons < 1) problems.push_back("num_persons must be positive");
    if (feature_dim < 1) problems.push_back("feature_dim must be positive");
    if (num_persons > feature_dim) {
        problems.push_back("num_persons must not exceed feature_dim (axis-aligned latent centers)");
    }
    if (!(base_separation > 0.0)) problems.push_back("base_separation must be positive");
    if (drift_sd < 0.0) problems.push_back("drift_sd must be non-negative");
    if (obs_noise_sd < 0.0) problems.push_back("obs_noise_sd must be non-negative");
    for (std::size_t i = 0; i < occlusion_events.size(); ++i) {
        const auto& e = occlusion_events[i];
        if (e.person < 0 || e.person >= num_persons) {
            problems.push_back("occlusion_events[" + std::to_string(i) + "]: invalid person index");
        }
        if (e.start_frame < 0 || e.start_frame >= num_frames) {
            problems.push_back("occlusion_events[" + std::to_string(i) + "]: start_frame out of range");
        }
        if (e.duration_frames < 1) {
            problems.push_back("occlusion_events[" + std::to_string(i) + "]: duration_frames must be >= 1");
        }
    }
    for (std::size_t i = 0; i < appearance_changes.size(); ++i) {
        const auto& e = appearance_changes[i];
        if (e.person < 0 || e.person >= num_persons) {
            problems.push_back("appearance_changes[" + std::to_string(i) + "]: invalid person index");
        }
        if (e.frame < 0 || e.frame >= num_frames) {
            problems.push_back("appearance_changes[" + std::to_string(i) + "]: frame out of range");
        }
        if (!std::isfinite(e.magnitude)) {
            problems.push_back("appearance_changes[" + std::to_string(i) + "]: magnitude must be finite");
        }
    }
    for (std::size_t i = 0; i < distractor_swaps.size(); ++i) {
        const auto& e = distractor_swaps[i];
        if (e.person_a < 0 || e.person_a >= num_persons || e.person_b < 0 ||
            e.person_b >= num_persons) {
            problems.push_back("distractor_swaps[" + std::to_string(i) + "]: invalid person index");
        }
        if (e.frame < 0 || e.frame >= num_frames) {
            problems.push_back("distractor_swaps[" + std::to_string(i) + "]: frame out of range");
        }
    }
    return problems;
}

Scenario generate(const ScenarioConfig& config) {
    const auto problems = config.validate();
    if (!problems.empty()) throw ValidationError(joined(problems));

    const auto persons = static_cast<std::size_t>(config.num_persons);
    const auto dim = static_cast<std::size_t>(config.feature_dim);
    const auto frames = static_cast<std::size_t>(config.num_frames);

    Xoshiro256StarStar rng(config.seed);

    // Latent centers on scaled coordinate axes: pairwise distance is exactly
    // base_separation noise units. A unit of 1 stands in when the stream is
    // noiseless so the separation still means something.
    const double unit = config.obs_noise_sd > 0.0 ? config.obs_noise_sd : 1.0;
    const double axis = config.base_separation * unit / std::sqrt(2.0);
    std::vector<FeatureVector> latent(persons, FeatureVector(dim, 0.0));
    for (std::size_t p = 0; p < persons; ++p) latent[p][p] = axis;

    // Occlusion mask per person per frame.
    std::vector<std::vector<bool>> occluded(persons, std::vector<bool>(frames, false));
    for (const auto& e : config.occlusion_events) {
        const auto last = std::min<std::int64_t>(e.start_frame + e.duration_frames,
                                                 config.num_frames);
        for (std::int64_t f = e.start_frame; f < last; ++f) {
            occluded[static_cast<std::size_t>(e.person)][static_cast<std::size_t>(f)] = true;
        }
    }

    Scenario scenario;
    scenario.config = config;
    scenario.frames.resize(frames);
    scenario.ground_truth.assign(persons, std::vector<PresenceEntry>(frames));

    std::vector<std::int64_t> current_id(persons, -1);
    std::vector<bool> was_visible(persons, false);
    std::int64_t next_id = 0;

    for (std::size_t f = 0; f < frames; ++f) {
        // Latent dynamics first, in person order, so the draw sequence is
        // fixed by the config alone.
        for (std::size_t p = 0; p < persons; ++p) {
            if (config.drift_sd > 0.0) {
                for (std::size_t i = 0; i < dim; ++i) {
                    latent[p][i] += config.drift_sd * rng.normal();
                }
            }
            for (const auto& e : config.appearance_changes) {
                if (static_cast<std::size_t>(e.person) == p &&
                    static_cast<std::size_t>(e.frame) == f) {
                    const FeatureVector dir = random_unit_vector(rng, dim);
                    for (std::size_t i = 0; i < dim; ++i) latent[p][i] += e.magnitude * dir[i];
                }
            }
        }

        auto& out = scenario.frames[f];
        for (std::size_t p = 0; p < persons; ++p) {
            const bool visible = !occluded[p][f];
            if (visible) {
                if (!was_visible[p]) {
                    if (current_id[p] < 0 || config.id_switch_on_reentry) {
                        current_id[p] = next_id++;
                    }
                }
                Detection det;
                det.frame_index = static_cast<std::int64_t>(f);
                det.timestamp = static_cast<double>(f) / config.fps;
                det.track_id = current_id[p];
                det.person_id = static_cast<std::int64_t>(p);
                det.feature = latent[p];
                if (config.obs_noise_sd > 0.0) {
                    for (auto& x : det.feature) x += config.obs_noise_sd * rng.normal();
                }
                out.push_back(std::move(det));
            }
            scenario.ground_truth[p][f] = {visible, visible ? current_id[p] : -1};
            was_visible[p] = visible;
        }
        std::sort(out.begin(), out.end(),
                  [](const Detection& a, const Detection& b) { return a.track_id < b.track_id; });
    }

    for (const auto& swap : config.distractor_swaps) {
        scenario = inject_distractor_swap(std::move(scenario), swap.frame, swap.person_a,
                                          swap.person_b);
    }
    return scenario;
}

Scenario inject_distractor_swap(Scenario scenario, std::int64_t frame, std::int64_t person_a,
                                std::int64_t person_b) {
    const auto& config = scenario.config;
    std::vector<std::string> problems;
    if (frame < 0 || frame >= config.num_frames) problems.push_back("swap frame out of range");
    if (person_a < 0 || person_a >= config.num_persons) problems.push_back("person_a invalid");
    if (person_b < 0 || person_b >= config.num_persons) problems.push_back("person_b invalid");
    if (!problems.empty()) throw ValidationError(joined(problems));

    const auto& entry_a = scenario.ground_truth[static_cast<std::size_t>(person_a)]
                                               [static_cast<std::size_t>(frame)];
    const auto& entry_b = scenario.ground_truth[static_cast<std::size_t>(person_b)]
                                               [static_cast<std::size_t>(frame)];
    if (!entry_a.visible) problems.push_back("person_a not visible at swap frame");
    if (!entry_b.visible) problems.push_back("person_b not visible at swap frame");
    if (!problems.empty()) throw ValidationError(joined(problems));

    const std::int64_t id_a = entry_a.track_id;
    const std::int64_t id_b = entry_b.track_id;
    if (id_a == id_b) return scenario;  // self swap

    const auto remap = [id_a, id_b](std::int64_t id) {
        if (id == id_a) return id_b;
        if (id == id_b) return id_a;
        return id;
    };

    for (std::int64_t f = frame; f < config.num_frames; ++f) {
        auto& frame_dets = scenario.frames[static_cast<std::size_t>(f)];
        for (auto& det : frame_dets) det.track_id = remap(det.track_id);
        std::sort(frame_dets.begin(), frame_dets.end(),
                  [](const Detection& a, const Detection& b) { return a.track_id < b.track_id; });
        for (auto& person_truth : scenario.ground_truth) {
            auto& entry = person_truth[static_cast<std::size_t>(f)];
            if (entry.visible) entry.track_id = remap(entry.track_id);
        }
    }
    return scenario;
}

}  // namespace reid
