#include "reid/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "reid/serde.hpp"

namespace reid {

namespace {

std::vector<DampingTracePoint> trace_run(const DetectionStream& stream, const EngineConfig& config,
                                         std::int64_t person_id) {
    const Detection* initial = nullptr;
    for (const auto& det : stream.frames.at(0)) {
        if (det.person_id && *det.person_id == person_id) {
            initial = &det;
            break;
        }
    }
    if (initial == nullptr) {
        throw ValidationError("person " + std::to_string(person_id) +
                              " is not present at the stream start");
    }
    ReidEngine engine(config, initial->track_id, initial->feature);
    std::vector<DampingTracePoint> trace;
    trace.reserve(stream.frames.size());
    for (std::size_t f = 1; f < stream.frames.size(); ++f) {
        const Decision decision = engine.process_frame(static_cast<std::int64_t>(f),
                                                       stream.frames[f]);
        DampingTracePoint point;
        point.frame = decision.frame_index;
        point.kind = decision.kind;
        point.d = decision.distance;
        point.mu_d = engine.threshold().mu_d;
        point.sigma_d = engine.threshold().sigma_d;
        point.lambda_d = engine.threshold().lambda_d;
        trace.push_back(point);
    }
    return trace;
}

double mean_of(const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

struct Stats {
    double min = 0.0, mean = 0.0, max = 0.0;
    bool present = false;
};

Stats stats_of(const std::vector<double>& xs) {
    Stats s;
    if (xs.empty()) return s;
    s.present = true;
    s.min = *std::min_element(xs.begin(), xs.end());
    s.max = *std::max_element(xs.begin(), xs.end());
    s.mean = mean_of(xs);
    return s;
}

std::string opt_num(const std::vector<double>& xs) {
    return xs.empty() ? std::string{} : format_double(mean_of(xs));
}

}  // namespace

DampingComparison compare_damping(const DetectionStream& stream, const EngineConfig& config,
                                  std::int64_t person_id) {
    if (stream.frames.empty()) throw ValidationError("stream has no frames");
    EngineConfig undamped = config;
    undamped.damped = false;
    DampingComparison cmp;
    cmp.damped = trace_run(stream, config, person_id);
    cmp.undamped = trace_run(stream, undamped, person_id);
    return cmp;
}

void write_damping_csv(const DampingComparison& cmp, std::ostream& out) {
    out << "frame,kind_damped,d_damped,mu_d_damped,sigma_d_damped,lambda_d_damped,"
           "kind_undamped,d_undamped,mu_d_undamped,sigma_d_undamped,lambda_d_undamped\n";
    const std::size_t n = std::min(cmp.damped.size(), cmp.undamped.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = cmp.damped[i];
        const auto& b = cmp.undamped[i];
        out << a.frame << ',' << to_string(a.kind) << ','
            << (a.d ? format_double(*a.d) : std::string{}) << ',' << format_double(a.mu_d) << ','
            << format_double(a.sigma_d) << ',' << format_double(a.lambda_d) << ','
            << to_string(b.kind) << ',' << (b.d ? format_double(*b.d) : std::string{}) << ','
            << format_double(b.mu_d) << ',' << format_double(b.sigma_d) << ','
            << format_double(b.lambda_d) << '\n';
    }
}

void write_metrics_csv(const std::vector<RunMetrics>& runs, std::ostream& out) {
    if (runs.empty()) throw ValidationError("no runs to report");
    out << "row,person_id,frames,duration_s,tracking_length_s,reid_delay_s,"
           "mot_error_count,reid_count,misid_count,lost_frames,unrecovered_reentries\n";

    std::vector<double> pooled_lengths;
    std::vector<double> pooled_delays;
    std::vector<double> errors, reids, misids, losts, unrecovered;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& m = runs[i];
        pooled_lengths.insert(pooled_lengths.end(), m.mot_tracking_lengths.begin(),
                              m.mot_tracking_lengths.end());
        pooled_delays.insert(pooled_delays.end(), m.reid_delays.begin(), m.reid_delays.end());
        errors.push_back(static_cast<double>(m.mot_error_count));
        reids.push_back(static_cast<double>(m.reid_count));
        misids.push_back(static_cast<double>(m.misid_count));
        losts.push_back(static_cast<double>(m.lost_frames));
        unrecovered.push_back(static_cast<double>(m.unrecovered_reentries));
        out << "run" << i << ',' << m.person_id << ',' << m.frames_processed << ','
            << format_double(static_cast<double>(m.frames_processed) / m.fps) << ','
            << opt_num(m.mot_tracking_lengths) << ',' << opt_num(m.reid_delays) << ','
            << m.mot_error_count << ',' << m.reid_count << ',' << m.misid_count << ','
            << m.lost_frames << ',' << m.unrecovered_reentries << '\n';
    }

    const Stats len = stats_of(pooled_lengths);
    const Stats delay = stats_of(pooled_delays);
    const auto agg_row = [&](const char* name, auto pick) {
        out << name << ",,,," << (len.present ? format_double(pick(len)) : std::string{}) << ','
            << (delay.present ? format_double(pick(delay)) : std::string{}) << ','
            << format_double(pick(stats_of(errors))) << ',' << format_double(pick(stats_of(reids)))
            << ',' << format_double(pick(stats_of(misids))) << ','
            << format_double(pick(stats_of(losts))) << ','
            << format_double(pick(stats_of(unrecovered))) << '\n';
    };
    agg_row("min", [](const Stats& s) { return s.min; });
    agg_row("mean", [](const Stats& s) { return s.mean; });
    agg_row("max", [](const Stats& s) { return s.max; });
}

void write_summary(const std::vector<RunMetrics>& runs, std::ostream& out) {
    if (runs.empty()) throw ValidationError("no runs to report");
    std::vector<double> pooled_lengths, pooled_delays, errors, reids;
    for (const auto& m : runs) {
        pooled_lengths.insert(pooled_lengths.end(), m.mot_tracking_lengths.begin(),
                              m.mot_tracking_lengths.end());
        pooled_delays.insert(pooled_delays.end(), m.reid_delays.begin(), m.reid_delays.end());
        errors.push_back(static_cast<double>(m.mot_error_count));
        reids.push_back(static_cast<double>(m.reid_count));
    }
    const auto line = [&](const char* name, const Stats& s) {
        out << name << ": ";
        if (!s.present) {
            out << "n/a\n";
            return;
        }
        out << "min " << format_double(s.min) << "  mean " << format_double(s.mean) << "  max "
            << format_double(s.max) << '\n';
    };
    out << "runs: " << runs.size() << '\n';
    line("tracker_tracking_length_s", stats_of(pooled_lengths));
    line("reid_delay_s", stats_of(pooled_delays));
    line("tracker_error_count", stats_of(errors));
    line("reid_count", stats_of(reids));
}

namespace {

// Minimal static bar chart; one bar per run.
std::string bar_chart_svg(const std::string& title, const std::vector<double>& values) {
    const int width = 640, height = 360;
    const int margin_left = 60, margin_bottom = 40, margin_top = 40, margin_right = 20;
    const double vmax = values.empty() ? 1.0 : std::max(1e-12, *std::max_element(values.begin(),
                                                                                 values.end()));
    const int plot_w = width - margin_left - margin_right;
    const int plot_h = height - margin_top - margin_bottom;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">" << title << "</text>\n";
    svg << "<line x1=\"" << margin_left << "\" y1=\"" << margin_top << "\" x2=\"" << margin_left
        << "\" y2=\"" << height - margin_bottom << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << margin_left << "\" y1=\"" << height - margin_bottom << "\" x2=\""
        << width - margin_right << "\" y2=\"" << height - margin_bottom << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"12\" y=\"" << margin_top + 12 << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << format_double(vmax) << "</text>\n";

    const double slot = static_cast<double>(plot_w) / std::max<std::size_t>(1, values.size());
    const double bar_w = std::max(2.0, slot * 0.6);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double h = vmax > 0 ? values[i] / vmax * plot_h : 0.0;
        const double x = margin_left + slot * static_cast<double>(i) + (slot - bar_w) / 2;
        const double y = height - margin_bottom - h;
        svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << bar_w << "\" height=\"" << h
            << "\" fill=\"#4878a8\"/>\n";
        svg << "<text x=\"" << x + bar_w / 2 << "\" y=\"" << height - margin_bottom + 16
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << i
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace

std::vector<std::string> write_plots(const std::vector<RunMetrics>& runs, const std::string& dir) {
    if (runs.empty()) throw ValidationError("no runs to plot");
    std::filesystem::create_directories(dir);

    std::vector<double> lengths, delays, errors, reids;
    for (const auto& m : runs) {
        lengths.push_back(m.mot_tracking_lengths.empty() ? 0.0 : mean_of(m.mot_tracking_lengths));
        delays.push_back(m.reid_delays.empty() ? 0.0 : mean_of(m.reid_delays));
        errors.push_back(static_cast<double>(m.mot_error_count));
        reids.push_back(static_cast<double>(m.reid_count));
    }

    const std::vector<std::pair<std::string, std::vector<double>*>> charts = {
        {"tracking_length", &lengths},
        {"reid_delay", &delays},
        {"tracker_errors", &errors},
        {"reid_counts", &reids},
    };
    const std::vector<std::string> titles = {
        "Mean tracker tracking length per run (s)",
        "Mean re-identification delay per run (s)",
        "Tracker id switches per run",
        "Re-identifications per run",
    };

    std::vector<std::string> written;
    for (std::size_t i = 0; i < charts.size(); ++i) {
        const std::string name = charts[i].first + ".svg";
        write_text_file((std::filesystem::path(dir) / name).string(),
                        bar_chart_svg(titles[i], *charts[i].second));
        written.push_back(name);
    }
    return written;
}

}  // namespace reid
