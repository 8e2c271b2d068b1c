#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "reid/simulator.hpp"
#include "reid/types.hpp"

namespace reid {

inline constexpr int kStreamFormatVersion = 1;

// First line of a detection stream. Everything needed to replay or validate
// the records, including the generating configuration.
struct StreamHeader {
    int format_version = kStreamFormatVersion;
    std::int64_t feature_dim = 0;
    double fps = 30.0;
    std::int64_t num_frames = 0;
    std::string prng_name;
    std::uint64_t seed = 0;
    ScenarioConfig config;  // echo of the generating config
    bool has_config = false;
};

struct DetectionStream {
    StreamHeader header;
    std::vector<std::vector<Detection>> frames;  // index == frame_index, gaps are empty frames
};

// Line-delimited JSON: one header line, then one record per detection,
// ordered by (frame_index, track_id). Floats round-trip bit-exactly.
void write_stream(const Scenario& scenario, std::ostream& out);
void write_stream_file(const Scenario& scenario, const std::string& path);

// Parses and validates a stream. Failures name the offending line.
DetectionStream read_stream(std::istream& in);
DetectionStream read_stream_file(const std::string& path);

}  // namespace reid
