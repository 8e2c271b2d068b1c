#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "reid/dema.hpp"
#include "reid/engine.hpp"
#include "reid/rng.hpp"
#include "test_util.hpp"

using namespace reid;
using testutil::make_detection;

namespace {

EngineConfig small_config(std::int64_t dim, double lambda_init = 1.0) {
    EngineConfig cfg;
    cfg.feature_dim = dim;
    cfg.lambda_init = lambda_init;
    return cfg;
}

// With sigma == 1 in every dimension, a displacement of r * sqrt(D) along one
// axis sits at statistical distance exactly r.
FeatureVector feature_at_distance(const FeatureVector& mu, double r) {
    FeatureVector x = mu;
    x[0] += r * std::sqrt(static_cast<double>(mu.size()));
    return x;
}

// Engine whose model is pinned at mu with unit sigma, so candidate distances
// are constructible in closed form.
ReidEngine unit_sigma_engine(std::int64_t dim, std::int64_t tracked, double lambda_init) {
    ReidEngine engine(small_config(dim, lambda_init), tracked, FeatureVector(dim, 0.0));
    // One crafted direct frame: at n_feat = 1 with delta = 1 the update
    // replaces outright, leaving mu = x1 and sigma = (x1 - x0)^2 = 1.
    std::vector<Detection> frame{make_detection(1, tracked, FeatureVector(dim, 1.0))};
    const Decision d1 = engine.process_frame(1, frame);
    REQUIRE(d1.kind == DecisionKind::DirectTrack);
    REQUIRE(engine.target().mu == FeatureVector(dim, 1.0));
    REQUIRE(engine.target().sigma == FeatureVector(dim, 1.0));
    return engine;
}

}  // namespace

TEST_CASE("construction binds the id and seeds the models") {
    ReidEngine engine(small_config(2, 0.8), 5, {1.0, 2.0});
    CHECK(engine.tracked_id() == 5);
    CHECK(engine.target().mu == FeatureVector{1.0, 2.0});
    CHECK(engine.target().sigma == FeatureVector{0.0, 0.0});
    CHECK(engine.target().n_feat == 1);
    CHECK(engine.threshold().n_dist == 0);
    CHECK(engine.threshold().lambda_d == 0.8);
    CHECK(engine.blacklist().empty());

    CHECK_THROWS_AS(ReidEngine(small_config(2), 5, {1.0}), ContractViolation);

    // The direct-ID branch short-circuits before any gate.
    std::vector<Detection> frame{make_detection(1, 5, {9.0, 9.0})};
    CHECK(engine.process_frame(1, frame).kind == DecisionKind::DirectTrack);
}

TEST_CASE("invalid configs are rejected with every violation listed") {
    EngineConfig cfg = small_config(0);
    cfg.eps_sigma = 0.0;
    cfg.lambda_init = -1.0;
    try {
        ReidEngine engine(cfg, 0, {});
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("feature_dim") != std::string::npos);
        CHECK(msg.find("eps_sigma") != std::string::npos);
        CHECK(msg.find("lambda_init") != std::string::npos);
    }
}

TEST_CASE("empty frame is lost and leaves all state untouched") {
    ReidEngine engine(small_config(2), 5, {1.0, 2.0});
    const auto before = testutil::engine_state_hash(engine);
    const Decision decision = engine.process_frame(3, {});
    CHECK(decision.kind == DecisionKind::Lost);
    CHECK_FALSE(decision.track_id.has_value());
    CHECK_FALSE(decision.distance.has_value());
    CHECK(decision.frame_index == 3);
    CHECK(testutil::engine_state_hash(engine) == before);
}

TEST_CASE("direct path wins regardless of distances") {
    auto engine = unit_sigma_engine(2, 7, 10.0);
    const FeatureVector near = engine.target().mu;  // distance 0 for a distractor
    const FeatureVector far = feature_at_distance(engine.target().mu, 5.0);
    std::vector<Detection> frame{make_detection(2, 3, near), make_detection(2, 7, far)};
    const Decision decision = engine.process_frame(2, frame);
    CHECK(decision.kind == DecisionKind::DirectTrack);
    CHECK(*decision.track_id == 7);
    CHECK(*decision.distance == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("gated re-identification picks the closest candidate and rebinds") {
    auto engine = unit_sigma_engine(2, 99, 10.0);
    // Pin the gate: one direct frame at distance 0.7 bootstraps
    // mu_d = 0.7, sigma_d = 0, lambda_d = 0.7.
    std::vector<Detection> direct{
        make_detection(2, 99, feature_at_distance(engine.target().mu, 0.7))};
    engine.process_frame(2, direct);
    REQUIRE(engine.threshold().lambda_d == doctest::Approx(0.7).epsilon(1e-12));

    const FeatureVector mu = engine.target().mu;
    std::vector<Detection> frame{
        make_detection(3, 11, feature_at_distance(mu, 0.4)),
        make_detection(3, 12, feature_at_distance(mu, 0.9)),
    };
    const Decision decision = engine.process_frame(3, frame);
    CHECK(decision.kind == DecisionKind::Reidentified);
    CHECK(*decision.track_id == 11);
    CHECK(*decision.distance == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(*decision.distance < decision.lambda_snapshot);
    CHECK(engine.tracked_id() == 11);
    CHECK(engine.stable_run() == 0);
}

TEST_CASE("gate failure is lost and updates nothing") {
    auto engine = unit_sigma_engine(2, 99, 0.7);
    const auto before = testutil::engine_state_hash(engine);
    std::vector<Detection> frame{
        make_detection(2, 11, feature_at_distance(engine.target().mu, 0.9))};
    const Decision decision = engine.process_frame(2, frame);
    CHECK(decision.kind == DecisionKind::Lost);
    CHECK(testutil::engine_state_hash(engine) == before);
    CHECK(engine.tracked_id() == 99);
}

TEST_CASE("blacklisted candidates are skipped even when closer") {
    EngineConfig cfg = small_config(2, 0.7);
    cfg.blacklist_stable_frames = 1;
    ReidEngine engine(cfg, 7, FeatureVector(2, 0.0));
    // One direct frame with the distractor present: stable_run reaches 1 and
    // id 3 lands on the blacklist. The crafted feature keeps unit sigma.
    std::vector<Detection> frame1{
        make_detection(1, 7, FeatureVector(2, 1.0)),
        make_detection(1, 3, FeatureVector{4.0, -1.0}),
    };
    engine.process_frame(1, frame1);
    REQUIRE(engine.blacklist().count(3) == 1);
    REQUIRE(engine.target().sigma == FeatureVector(2, 1.0));

    const FeatureVector mu = engine.target().mu;
    std::vector<Detection> frame2{
        make_detection(2, 3, feature_at_distance(mu, 0.1)),
        make_detection(2, 8, feature_at_distance(mu, 0.5)),
    };
    const Decision decision = engine.process_frame(2, frame2);
    CHECK(decision.kind == DecisionKind::Reidentified);
    CHECK(*decision.track_id == 8);
    CHECK(*decision.distance == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(engine.blacklist().count(8) == 0);
}

TEST_CASE("reidentify edge cases") {
    auto engine = unit_sigma_engine(2, 99, 0.5);
    const FeatureVector mu = engine.target().mu;

    CHECK_FALSE(engine.reidentify({}).has_value());

    // Exactly at the gate: rejected (strict inequality).
    const double lambda = engine.threshold().lambda_d;
    CHECK_FALSE(engine.reidentify({{4, feature_at_distance(mu, lambda)}}).has_value());

    // Symmetric displacements tie bitwise; the smaller id wins.
    FeatureVector plus = mu, minus = mu;
    plus[0] += 0.3 * std::sqrt(2.0);
    minus[0] -= 0.3 * std::sqrt(2.0);
    const auto hit = engine.reidentify({{7, plus}, {4, minus}});
    REQUIRE(hit.has_value());
    CHECK(hit->first == 4);
    CHECK(hit->second == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("first distance update bootstraps the threshold") {
    auto engine = unit_sigma_engine(3, 1, 1.0);
    REQUIRE(engine.threshold().n_dist == 0);
    engine.update_models(engine.target().mu, 0.5);
    CHECK(engine.threshold().mu_d == 0.5);
    CHECK(engine.threshold().sigma_d == 0.0);
    CHECK(engine.threshold().lambda_d == 0.5);
    CHECK(engine.threshold().n_dist == 1);
}

TEST_CASE("updating with the current mean is a fixed point for mu and decays sigma") {
    auto engine = unit_sigma_engine(2, 1, 1.0);
    const FeatureVector mu = engine.target().mu;
    double sigma_prev = engine.target().sigma[0];
    for (int i = 0; i < 20; ++i) {
        engine.update_models(mu, statistical_distance(mu, engine.target()));
        CHECK(engine.target().mu == mu);
        CHECK(engine.target().sigma[0] <= sigma_prev);
        CHECK(engine.target().sigma[0] >= 0.0);
        sigma_prev = engine.target().sigma[0];
    }
    CHECK(sigma_prev < 0.5);
}

TEST_CASE("lambda always equals mu_d + 2 sigma_d after updates") {
    auto engine = unit_sigma_engine(2, 1, 1.0);
    Xoshiro256StarStar rng(404);
    for (int i = 0; i < 200; ++i) {
        engine.update_models(testutil::random_feature(rng, 2), rng.uniform() * 3.0);
        const auto& t = engine.threshold();
        CHECK(t.lambda_d == t.mu_d + 2.0 * t.sigma_d);
        CHECK(t.sigma_d >= 0.0);
        CHECK(t.lambda_d >= t.mu_d);
    }
}

TEST_CASE("sigma overshoot from weights above one is clamped at zero") {
    auto engine = unit_sigma_engine(2, 1, 1.0);
    REQUIRE(engine.target().sigma == FeatureVector(2, 1.0));
    // Exact re-observation of the mean: d = 0, delta_f floors, alpha near 2.
    engine.update_models(engine.target().mu, 0.0);
    CHECK(engine.target().sigma == FeatureVector(2, 0.0));
}

TEST_CASE("threshold damping falls back when the gate has collapsed to zero") {
    ReidEngine engine(small_config(2), 1, FeatureVector(2, 0.5));
    // Re-observing the seed feature exactly: d = 0, so the bootstrap sets
    // mu_d = sigma_d = lambda_d = 0.
    std::vector<Detection> same{make_detection(1, 1, FeatureVector(2, 0.5))};
    engine.process_frame(1, same);
    REQUIRE(engine.threshold().lambda_d == 0.0);
    CHECK(engine.delta_fallback_count() == 0);

    std::vector<Detection> moved{make_detection(2, 1, FeatureVector(2, 0.75))};
    engine.process_frame(2, moved);
    CHECK(engine.delta_fallback_count() == 1);
}

TEST_CASE("malformed frames are contract violations") {
    ReidEngine engine(small_config(2), 5, {0.0, 0.0});
    std::vector<Detection> dup{make_detection(1, 4, {0.0, 0.0}), make_detection(1, 4, {1.0, 1.0})};
    CHECK_THROWS_AS(engine.process_frame(1, dup), ContractViolation);
    std::vector<Detection> wrong_dim{make_detection(1, 4, {0.0})};
    CHECK_THROWS_AS(engine.process_frame(1, wrong_dim), ContractViolation);
    std::vector<Detection> mixed{make_detection(2, 4, {0.0, 0.0})};
    CHECK_THROWS_AS(engine.process_frame(1, mixed), ContractViolation);
}

TEST_CASE("stable tracking blacklists frame distractors; disabled engine never does") {
    EngineConfig cfg = small_config(2, 5.0);
    cfg.blacklist_stable_frames = 3;
    for (const bool enabled : {true, false}) {
        EngineConfig variant = cfg;
        variant.blacklist_enabled = enabled;
        ReidEngine engine(variant, 7, FeatureVector(2, 0.0));
        const FeatureVector distractor{9.0, 9.0};
        for (std::int64_t f = 1; f <= 4; ++f) {
            std::vector<Detection> frame{
                make_detection(f, 7, FeatureVector(2, 0.01 * static_cast<double>(f))),
                make_detection(f, 21, distractor),
            };
            engine.process_frame(f, frame);
            CHECK(engine.stable_run() == f);
            if (!enabled || f < 3) {
                CHECK(engine.blacklist().empty());
            } else {
                CHECK(engine.blacklist().count(21) == 1);
            }
        }
    }
}

TEST_CASE("normalized ingest stores unit-norm features") {
    EngineConfig cfg = small_config(2);
    cfg.normalize_features = true;
    ReidEngine engine(cfg, 1, {3.0, 4.0});
    CHECK(engine.target().mu[0] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(engine.target().mu[1] == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("identical state and frame give identical results") {
    auto a = unit_sigma_engine(3, 5, 1.2);
    auto b = a;  // value copy
    Xoshiro256StarStar rng(31337);
    for (std::int64_t f = 2; f < 50; ++f) {
        std::vector<Detection> frame;
        std::vector<std::int64_t> used;
        const auto n = rng.uniform_int(0, 3);
        for (std::int64_t i = 0; i < n; ++i) {
            const std::int64_t id = rng.uniform_int(0, 9);
            if (std::find(used.begin(), used.end(), id) != used.end()) continue;
            used.push_back(id);
            frame.push_back(make_detection(f, id, testutil::random_feature(rng, 3)));
        }
        const Decision da = a.process_frame(f, frame);
        const Decision db = b.process_frame(f, frame);
        CHECK(da.kind == db.kind);
        CHECK(da.track_id == db.track_id);
        CHECK(da.distance == db.distance);
        CHECK(testutil::engine_state_hash(a) == testutil::engine_state_hash(b));
    }
}

TEST_CASE("fuzz: engine agrees with the from-scratch reference and keeps invariants") {
    Xoshiro256StarStar rng(0xfadefade);
    int frames_checked = 0;
    for (int episode = 0; episode < 200; ++episode) {
        const std::int64_t dim = rng.uniform_int(1, 4);
        EngineConfig cfg = small_config(dim, 0.2 + 2.0 * rng.uniform());
        cfg.blacklist_stable_frames = rng.uniform_int(1, 3);
        cfg.normalize_features = rng.uniform() < 0.25;
        ReidEngine engine(cfg, rng.uniform_int(0, 7),
                          testutil::random_feature(rng, static_cast<std::size_t>(dim)));

        for (std::int64_t f = 1; f <= 50; ++f) {
            std::vector<Detection> frame;
            const auto count = rng.uniform_int(0, 4);
            std::vector<std::int64_t> used;
            for (std::int64_t i = 0; i < count; ++i) {
                std::int64_t id = rng.uniform_int(0, 7);
                if (std::find(used.begin(), used.end(), id) != used.end()) continue;
                used.push_back(id);
                FeatureVector feat;
                if (!frame.empty() && rng.uniform() < 0.15) {
                    feat = frame.back().feature;  // forced distance tie
                } else {
                    feat = testutil::random_feature(rng, static_cast<std::size_t>(dim));
                }
                frame.push_back(make_detection(f, id, std::move(feat)));
            }

            const auto before = testutil::engine_state_hash(engine);
            const auto expected = testutil::ref_decide(engine, frame);
            const bool tracked_blacklisted = engine.blacklist().count(engine.tracked_id()) != 0;
            const Decision got = engine.process_frame(f, frame);
            ++frames_checked;

            CHECK_FALSE(tracked_blacklisted);
            REQUIRE(got.kind == expected.kind);
            REQUIRE(got.track_id == expected.track_id);
            if (expected.distance) {
                REQUIRE(*got.distance == doctest::Approx(*expected.distance).epsilon(1e-12));
            }
            if (got.kind == DecisionKind::Lost) {
                CHECK(testutil::engine_state_hash(engine) == before);
            }
            if (got.kind == DecisionKind::Reidentified) {
                CHECK(*got.distance < got.lambda_snapshot);
            }
            for (double s : engine.target().sigma) CHECK(s >= 0.0);
            CHECK(engine.threshold().sigma_d >= 0.0);
        }
    }
    CHECK(frames_checked == 200 * 50);
}
