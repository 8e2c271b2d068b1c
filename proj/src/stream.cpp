#include "reid/stream.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "reid/rng.hpp"
#include "reid/serde.hpp"

namespace reid {

using nlohmann::json;

namespace {

[[noreturn]] void fail_line(std::size_t line_no, const std::string& what) {
    throw ValidationError("stream line " + std::to_string(line_no) + ": " + what);
}

json parse_line(const std::string& line, std::size_t line_no) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) fail_line(line_no, "malformed or truncated JSON");
    return j;
}

}  // namespace

void write_stream(const Scenario& scenario, std::ostream& out) {
    json header{{"type", "header"},
                {"format_version", kStreamFormatVersion},
                {"feature_dim", scenario.config.feature_dim},
                {"fps", scenario.config.fps},
                {"num_frames", scenario.config.num_frames},
                {"prng_name", kPrngName},
                {"seed", scenario.config.seed},
                {"config", scenario.config}};
    out << header.dump() << '\n';
    for (const auto& frame : scenario.frames) {
        for (const auto& det : frame) {
            json rec{{"frame", det.frame_index},
                     {"t", det.timestamp},
                     {"track_id", det.track_id},
                     {"feature", det.feature}};
            if (det.person_id) rec["person_id"] = *det.person_id;
            if (det.bbox) rec["bbox"] = *det.bbox;
            out << rec.dump() << '\n';
        }
    }
}

void write_stream_file(const Scenario& scenario, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    write_stream(scenario, out);
    out.flush();
    if (!out) throw IoError("write failed: " + path);
}

DetectionStream read_stream(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) throw ValidationError("empty stream: missing header line");
    ++line_no;
    const json hj = parse_line(line, line_no);
    if (hj.value("type", "") != "header") fail_line(line_no, "first line is not a header record");

    DetectionStream stream;
    auto& header = stream.header;
    header.format_version = hj.value("format_version", -1);
    if (header.format_version != kStreamFormatVersion) {
        fail_line(line_no, "unsupported format_version " + std::to_string(header.format_version) +
                               " (expected " + std::to_string(kStreamFormatVersion) + ")");
    }
    if (!hj.contains("feature_dim") || !hj.contains("num_frames")) {
        fail_line(line_no, "header missing feature_dim or num_frames");
    }
    header.feature_dim = hj.at("feature_dim").get<std::int64_t>();
    header.fps = hj.value("fps", 30.0);
    header.num_frames = hj.at("num_frames").get<std::int64_t>();
    header.prng_name = hj.value("prng_name", "");
    header.seed = hj.value("seed", std::uint64_t{0});
    if (hj.contains("config")) {
        header.config = hj.at("config").get<ScenarioConfig>();
        header.has_config = true;
    }
    if (header.feature_dim < 1) fail_line(line_no, "feature_dim must be positive");
    if (header.num_frames < 1) fail_line(line_no, "num_frames must be positive");
    if (!(header.fps > 0.0)) fail_line(line_no, "fps must be positive");

    stream.frames.assign(static_cast<std::size_t>(header.num_frames), {});

    std::int64_t prev_frame = -1;
    std::int64_t prev_track = -1;
    double prev_t = -std::numeric_limits<double>::infinity();
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) fail_line(line_no, "blank line");
        const json rj = parse_line(line, line_no);
        Detection det;
        try {
            det.frame_index = rj.at("frame").get<std::int64_t>();
            det.timestamp = rj.at("t").get<double>();
            det.track_id = rj.at("track_id").get<std::int64_t>();
            det.feature = rj.at("feature").get<FeatureVector>();
            if (rj.contains("person_id")) det.person_id = rj.at("person_id").get<std::int64_t>();
            if (rj.contains("bbox")) det.bbox = rj.at("bbox").get<std::array<double, 4>>();
        } catch (const json::exception& e) {
            fail_line(line_no, std::string("bad record: ") + e.what());
        }
        if (det.frame_index < 0 || det.frame_index >= header.num_frames) {
            fail_line(line_no, "frame index out of range");
        }
        if (det.feature.size() != static_cast<std::size_t>(header.feature_dim)) {
            fail_line(line_no, "feature has " + std::to_string(det.feature.size()) +
                                   " values, header says " + std::to_string(header.feature_dim));
        }
        for (double v : det.feature) {
            if (!std::isfinite(v)) fail_line(line_no, "non-finite feature component");
        }
        if (det.frame_index < prev_frame ||
            (det.frame_index == prev_frame && det.track_id <= prev_track)) {
            fail_line(line_no, "records must be ordered by (frame, track_id) without duplicates");
        }
        if (!std::isfinite(det.timestamp) || det.timestamp < prev_t) {
            fail_line(line_no, "timestamps must be finite and non-decreasing");
        }
        prev_t = det.timestamp;
        prev_frame = det.frame_index;
        prev_track = det.track_id;
        stream.frames[static_cast<std::size_t>(det.frame_index)].push_back(std::move(det));
    }
    if (in.bad()) throw IoError("stream read failed");
    return stream;
}

DetectionStream read_stream_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    return read_stream(in);
}

}  // namespace reid
