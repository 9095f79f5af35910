// Copyright (C) 2026 The poseproc Authors
// SPDX-License-Identifier: Apache-2.0

#include "poseproc/bench.hpp"

#include <sys/utsname.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "poseproc/errors.hpp"
#include "poseproc/io.hpp"
#include "poseproc/parallel.hpp"
#include "poseproc/synth.hpp"

namespace poseproc::bench {

namespace {

constexpr int kCanonicalPersons = 20;
constexpr std::uint64_t kCanonicalSeed = 1;
constexpr int kCanonicalOriginalHeight = 256;
constexpr int kCanonicalOriginalWidth = 456;

Scenario synthetic(std::string label, int persons)
{
    RenderConfig render;
    render.seed = kCanonicalSeed;
    Scene scene = generate_scene(persons, render);
    Scenario s;
    s.label = std::move(label);
    s.heatmaps = std::move(scene.heatmaps);
    s.pafs = std::move(scene.pafs);
    s.geometry = compute_input_geometry(kCanonicalOriginalHeight, kCanonicalOriginalWidth,
                                        render.map_height * 8);
    return s;
}

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ns(Clock::time_point from, Clock::time_point to)
{
    return std::chrono::duration_cast<std::chrono::nanoseconds>(to - from).count();
}

double fps_of(std::int64_t ns)
{
    return 1e9 / static_cast<double>(std::max<std::int64_t>(ns, 1));
}

class Fnv1a {
public:
    void add(const std::string& s)
    {
        for (unsigned char c : s) {
            hash_ ^= c;
            hash_ *= 0x100000001b3ULL;
        }
    }
    std::uint64_t value() const noexcept { return hash_; }

private:
    std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

} // namespace

Scenario canonical_scenario()
{
    return synthetic("canonical-20", kCanonicalPersons);
}

Scenario empty_scenario()
{
    return synthetic("empty", 0);
}

Scenario load_scenario(const std::filesystem::path& dir)
{
    io::Fixture fixture = io::read_fixture(dir);
    Scenario s;
    s.label = dir.filename().empty() ? dir.parent_path().filename().string() : dir.filename().string();
    s.geometry = compute_input_geometry(fixture.truth.original_height, fixture.truth.original_width,
                                        fixture.heatmaps.height() * 8);
    s.heatmaps = std::move(fixture.heatmaps);
    s.pafs = std::move(fixture.pafs);
    return s;
}

std::int64_t median_ns(std::span<const std::int64_t> samples)
{
    if (samples.empty())
        throw std::invalid_argument("median of no samples");
    std::vector<std::int64_t> sorted(samples.begin(), samples.end());
    const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>((sorted.size() - 1) / 2);
    std::nth_element(sorted.begin(), mid, sorted.end());
    return *mid;
}

std::uint64_t config_digest(const DecoderConfig& cfg, const Scenario& scenario)
{
    std::ostringstream key;
    key << std::hexfloat << "factor=" << cfg.upsample_factor << ";threshold=" << cfg.peak_threshold
        << ";samples=" << cfg.paf_sample_count << ";align=" << cfg.paf_alignment_threshold
        << ";ratio=" << cfg.min_valid_ratio << ";min_kp=" << cfg.min_keypoints
        << ";min_score=" << cfg.min_skeleton_score << ";heat=" << scenario.heatmaps.height() << "x"
        << scenario.heatmaps.width() << "x" << scenario.heatmaps.channels() << ";paf=" << scenario.pafs.height()
        << "x" << scenario.pafs.width() << "x" << scenario.pafs.channels()
        << ";orig=" << scenario.geometry.original_height << "x" << scenario.geometry.original_width;
    Fnv1a h;
    h.add(key.str());
    return h.value();
}

std::string machine_descriptor()
{
    std::ostringstream out;
    utsname u{};
    if (uname(&u) == 0)
        out << u.sysname << " " << u.release << " " << u.machine;
    else
        out << "unknown";
    out << ", " << std::thread::hardware_concurrency() << " hardware threads";
#if defined(__clang__)
    out << ", clang " << __clang_major__ << "." << __clang_minor__;
#elif defined(__GNUC__)
    out << ", gcc " << __GNUC__ << "." << __GNUC_MINOR__;
#endif
    return out.str();
}

std::string mode_name(PipelineMode mode)
{
    return mode == PipelineMode::naive ? "naive" : "optimized";
}

void check_gate(const Scenario& scenario, const DecoderConfig& cfg, int threads)
{
    const std::vector<PoseSkeleton> naive = decode_full_resolution(scenario.heatmaps, scenario.pafs,
                                                                   scenario.geometry, cfg);
    const std::vector<PoseSkeleton> optimized = decode(scenario.heatmaps, scenario.pafs, scenario.geometry, cfg,
                                                       resolve_threads(threads));
    const double tolerance =
        static_cast<double>(scenario.geometry.stride) / (cfg.upsample_factor * scenario.geometry.scale());
    if (const auto diff = diff_skeleton_sets(naive, optimized, tolerance))
        throw GateFailure("naive and optimized decodes differ on '" + scenario.label + "' (naive first):\n" + *diff);
}

BenchReport run_benchmark(const Scenario& scenario, PipelineMode mode, const DecoderConfig& cfg,
                          const BenchOptions& options)
{
    if (options.frames < kMinFrames)
        throw std::invalid_argument("at least " + std::to_string(kMinFrames) + " timed frames are required, got " +
                                    std::to_string(options.frames));
    if (options.warmup < 0)
        throw std::invalid_argument("warm-up frame count must be >= 0");
    const int threads = resolve_threads(options.threads);
    check_gate(scenario, cfg, threads);

    PosePipeline pipeline(cfg, mode, threads);
    std::vector<std::int64_t> resize, extract, group, total;
    resize.reserve(options.frames);
    extract.reserve(options.frames);
    group.reserve(options.frames);
    total.reserve(options.frames);
    std::size_t skeletons = 0;

    for (int frame = 0; frame < options.warmup + options.frames; ++frame) {
        const auto t0 = Clock::now();
        pipeline.resize(scenario.heatmaps, scenario.pafs, scenario.geometry);
        const auto t1 = Clock::now();
        pipeline.extract();
        const auto t2 = Clock::now();
        skeletons = pipeline.group().size();
        const auto t3 = Clock::now();
        if (frame < options.warmup)
            continue;
        resize.push_back(elapsed_ns(t0, t1));
        extract.push_back(elapsed_ns(t1, t2));
        group.push_back(elapsed_ns(t2, t3));
        total.push_back(elapsed_ns(t0, t3));
    }

    BenchReport report;
    report.scenario = scenario.label;
    report.mode = mode_name(mode);
    report.threads = pipeline.mode() == PipelineMode::naive ? 1 : threads;
    report.upsample_factor = mode == PipelineMode::naive ? 0 : cfg.upsample_factor;
    report.skeletons = static_cast<int>(skeletons);
    report.timings = {median_ns(resize), median_ns(extract), median_ns(group), median_ns(total), options.frames,
                      config_digest(cfg, scenario)};
    report.fps = {fps_of(report.timings.resize_ns), fps_of(report.timings.extract_ns),
                  fps_of(report.timings.group_ns), fps_of(report.timings.total_ns)};
    report.machine = machine_descriptor();
    report.method = "median of " + std::to_string(options.frames) + " frames after " +
                    std::to_string(options.warmup) + " warm-up frames; stages timed in-pipeline";
    return report;
}

std::string format_sig3(double value)
{
    if (!std::isfinite(value))
        return value > 0 ? "inf" : (value < 0 ? "-inf" : "nan");
    if (value == 0.0)
        return "0.00";
    const int magnitude = static_cast<int>(std::floor(std::log10(std::abs(value))));
    const int decimals = 2 - magnitude;
    char buf[64];
    if (decimals >= 0) {
        std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
        // Rounding can carry into a new digit (9.996 -> "10.00").
        std::string s = buf;
        const double rounded = std::stod(s);
        if (std::floor(std::log10(std::abs(rounded))) > magnitude && decimals > 0)
            std::snprintf(buf, sizeof(buf), "%.*f", decimals - 1, value);
        return buf;
    }
    const double unit = std::pow(10.0, -decimals);
    std::snprintf(buf, sizeof(buf), "%.0f", std::round(value / unit) * unit);
    return buf;
}

std::string format_report_text(const BenchReport& r)
{
    std::ostringstream out;
    out << "Scenario: " << r.scenario << "  mode: " << r.mode;
    if (r.upsample_factor > 0)
        out << "  upsample: " << r.upsample_factor;
    else
        out << "  upsample: to input size";
    out << "  threads: " << r.threads << "  skeletons: " << r.skeletons << "\n";
    out << "Machine: " << r.machine << "\n";
    out << "Method: " << r.method << "\n";

    char line[200];
    std::snprintf(line, sizeof(line), "%-8s %20s %18s %16s %10s\n", "", "Resize feature maps", "Extract keypoints",
                  "Group keypoints", "Total");
    out << line;
    std::snprintf(line, sizeof(line), "%-8s %20s %18s %16s %10s\n", "fps", format_sig3(r.fps.resize).c_str(),
                  format_sig3(r.fps.extract).c_str(), format_sig3(r.fps.group).c_str(),
                  format_sig3(r.fps.total).c_str());
    out << line;
    auto ms = [](std::int64_t ns) { return format_sig3(static_cast<double>(ns) * 1e-6); };
    std::snprintf(line, sizeof(line), "%-8s %20s %18s %16s %10s\n", "ms", ms(r.timings.resize_ns).c_str(),
                  ms(r.timings.extract_ns).c_str(), ms(r.timings.group_ns).c_str(), ms(r.timings.total_ns).c_str());
    out << line;
    return out.str();
}

std::string format_report_json(const BenchReport& r)
{
    char digest[17];
    std::snprintf(digest, sizeof(digest), "%016llx", static_cast<unsigned long long>(r.timings.config_digest));
    const nlohmann::json j = {
        {"scenario", r.scenario},
        {"mode", r.mode},
        {"threads", r.threads},
        {"upsample_factor", r.upsample_factor},
        {"skeletons", r.skeletons},
        {"timings_ns",
         {{"resize", r.timings.resize_ns},
          {"extract", r.timings.extract_ns},
          {"group", r.timings.group_ns},
          {"total", r.timings.total_ns}}},
        {"frames", r.timings.frames},
        {"config_digest", digest},
        {"fps", {{"resize", r.fps.resize}, {"extract", r.fps.extract}, {"group", r.fps.group}, {"total", r.fps.total}}},
        {"machine", r.machine},
        {"method", r.method},
    };
    return j.dump(2) + "\n";
}

BenchReport parse_report_json(const std::string& text)
{
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        BenchReport r;
        r.scenario = j.at("scenario").get<std::string>();
        r.mode = j.at("mode").get<std::string>();
        r.threads = j.at("threads").get<int>();
        r.upsample_factor = j.at("upsample_factor").get<int>();
        r.skeletons = j.at("skeletons").get<int>();
        const auto& t = j.at("timings_ns");
        r.timings.resize_ns = t.at("resize").get<std::int64_t>();
        r.timings.extract_ns = t.at("extract").get<std::int64_t>();
        r.timings.group_ns = t.at("group").get<std::int64_t>();
        r.timings.total_ns = t.at("total").get<std::int64_t>();
        r.timings.frames = j.at("frames").get<int>();
        r.timings.config_digest = std::stoull(j.at("config_digest").get<std::string>(), nullptr, 16);
        const auto& f = j.at("fps");
        r.fps = {f.at("resize").get<double>(), f.at("extract").get<double>(), f.at("group").get<double>(),
                 f.at("total").get<double>()};
        r.machine = j.at("machine").get<std::string>();
        r.method = j.at("method").get<std::string>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("bench report", e.what());
    } catch (const std::logic_error& e) {
        throw ParseError("config_digest", e.what());
    }
}

} // namespace poseproc::bench
