// Copyright (C) 2026 The poseproc Authors
// SPDX-License-Identifier: Apache-2.0

#include "poseproc/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "poseproc/archcalc.hpp"
#include "poseproc/bench.hpp"
#include "poseproc/decoder.hpp"
#include "poseproc/errors.hpp"
#include "poseproc/io.hpp"
#include "poseproc/parallel.hpp"
#include "poseproc/synth.hpp"

namespace poseproc::cli {

namespace {

constexpr int kStride = 8;

struct Size {
    int height = 0;
    int width = 0;
};

Size parse_size(const std::string& text, const std::string& flag)
{
    const auto x = text.find('x');
    auto number = [&](std::string_view part) {
        int v = 0;
        const auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc() || end != part.data() + part.size() || v < 1)
            throw ParseError(flag, "expected HxW with positive integers, got '" + text + "'");
        return v;
    };
    if (x == std::string::npos)
        throw ParseError(flag, "expected HxW, got '" + text + "'");
    const std::string_view view(text);
    return {number(view.substr(0, x)), number(view.substr(x + 1))};
}

FeatureMaps load_tensor(const std::string& path, const std::string& flag)
{
    try {
        return io::read_tensor(path);
    } catch (const ParseError& e) {
        throw ParseError(flag, path + ": " + e.what());
    }
}

constexpr const char* kThreadsEnv = "POSE_DECODE_THREADS";

// CLI11's envname() drops unparsable values silently; a typo here should not quietly
// fall back to one thread.
int threads_from_env(int fallback)
{
    const char* raw = std::getenv(kThreadsEnv);
    if (raw == nullptr || *raw == '\0')
        return fallback;
    const std::string_view text(raw);
    int v = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || end != text.data() + text.size() || v < 0)
        throw ParseError(kThreadsEnv, "expected a non-negative integer, got '" + std::string(text) + "'");
    return v;
}

struct GlobalOptions {
    int threads = 1;
    std::uint64_t seed = 0;
    bool json = false;
};

struct DecodeOptions {
    std::string heatmaps;
    std::string pafs;
    std::string orig_size;
    int upsample = 4;
    std::string out_path;
};

int cmd_decode(const DecodeOptions& o, const GlobalOptions& g, std::ostream& out)
{
    const FeatureMaps heatmaps = load_tensor(o.heatmaps, "--heatmaps");
    const FeatureMaps pafs = load_tensor(o.pafs, "--pafs");
    if (heatmaps.channels() != kHeatmapChannels)
        throw DimensionError("--heatmaps " + o.heatmaps + ": expected " + std::to_string(kHeatmapChannels) +
                             " channels, found " + std::to_string(heatmaps.channels()));
    if (pafs.channels() != kPafChannels)
        throw DimensionError("--pafs " + o.pafs + ": expected " + std::to_string(kPafChannels) + " channels, found " +
                             std::to_string(pafs.channels()));

    const Size orig = o.orig_size.empty() ? Size{heatmaps.height() * kStride, heatmaps.width() * kStride}
                                          : parse_size(o.orig_size, "--orig-size");
    const InputGeometry geometry = compute_input_geometry(orig.height, orig.width, heatmaps.height() * kStride);
    if (geometry.feature_width() != heatmaps.width())
        throw DimensionError("--orig-size " + std::to_string(orig.height) + "x" + std::to_string(orig.width) +
                             " implies " + std::to_string(geometry.feature_height()) + "x" +
                             std::to_string(geometry.feature_width()) + " maps, --heatmaps " + o.heatmaps + " is " +
                             std::to_string(heatmaps.height()) + "x" + std::to_string(heatmaps.width()));

    DecoderConfig cfg;
    cfg.upsample_factor = o.upsample;
    const std::vector<PoseSkeleton> skeletons = decode(heatmaps, pafs, geometry, cfg, resolve_threads(g.threads));
    io::write_poses(io::make_pose_document(geometry, skeletons), o.out_path);

    if (g.json)
        out << nlohmann::json{{"skeletons", skeletons.size()}, {"out", o.out_path}}.dump() << "\n";
    else
        out << skeletons.size() << " skeletons\n";
    return kOk;
}

struct SynthOptions {
    int persons = 0;
    std::string size = "32x57";
    std::string orig_size;
    std::string out_dir;
    bool full_body = false;
};

int cmd_synth(const SynthOptions& o, const GlobalOptions& g, std::ostream& out)
{
    const Size map = parse_size(o.size, "--size");
    const Size orig = o.orig_size.empty() ? Size{map.height * kStride, map.width * kStride}
                                          : parse_size(o.orig_size, "--orig-size");
    const InputGeometry geometry = compute_input_geometry(orig.height, orig.width, map.height * kStride);
    if (geometry.feature_width() != map.width)
        throw DimensionError("--orig-size " + o.orig_size + " does not produce " + o.size + " maps");

    RenderConfig render;
    render.map_height = map.height;
    render.map_width = map.width;
    render.seed = g.seed;
    render.full_body = o.full_body;
    Scene scene = generate_scene(o.persons, render);

    io::Fixture fixture{std::move(scene.heatmaps), std::move(scene.pafs),
                        io::SceneTruth{render, o.persons, orig.height, orig.width, std::move(scene.persons)}};
    io::write_fixture(o.out_dir, fixture);

    if (g.json)
        out << nlohmann::json{{"persons", o.persons}, {"out_dir", o.out_dir}, {"seed", g.seed}}.dump() << "\n";
    else
        out << "wrote " << o.persons << " persons to " << o.out_dir << "\n";
    return kOk;
}

struct FlopsOptions {
    std::string arch = "baseline";
    std::string input = "368x368";
};

int cmd_flops(const FlopsOptions& o, const GlobalOptions& g, std::ostream& out)
{
    const Size input = parse_size(o.input, "--input");
    std::vector<arch::ArchSpec> specs;
    if (o.arch == "baseline")
        specs.push_back(arch::builtin_baseline_openpose(input.height, input.width));
    else if (o.arch == "lightweight")
        specs.push_back(arch::builtin_lightweight(input.height, input.width));
    else
        specs = arch::builtin_backbone_variants(input.height, input.width);

    std::vector<arch::ComplexityReport> reports;
    for (const arch::ArchSpec& spec : specs)
        reports.push_back(arch::evaluate(spec));

    if (g.json) {
        if (reports.size() == 1) {
            out << arch::format_report_json(reports.front()) << "\n";
        } else {
            nlohmann::json all = nlohmann::json::array();
            for (const auto& r : reports)
                all.push_back(nlohmann::json::parse(arch::format_report_json(r)));
            out << all.dump(2) << "\n";
        }
        return kOk;
    }
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (i > 0)
            out << "\n";
        out << arch::format_report_text(reports[i]);
    }
    return kOk;
}

struct BenchOptionsCli {
    std::string scenario = "canonical";
    std::string mode = "optimized";
    int frames = bench::kMinFrames;
    int upsample = 4;
    std::string json_out;
};

int cmd_bench(const BenchOptionsCli& o, const GlobalOptions& g, std::ostream& out)
{
    bench::Scenario scenario;
    if (o.scenario == "canonical")
        scenario = bench::canonical_scenario();
    else if (o.scenario == "empty")
        scenario = bench::empty_scenario();
    else
        scenario = bench::load_scenario(o.scenario);

    DecoderConfig cfg;
    cfg.upsample_factor = o.upsample;
    const PipelineMode mode = o.mode == "naive" ? PipelineMode::naive : PipelineMode::optimized;
    const bench::BenchReport report =
        bench::run_benchmark(scenario, mode, cfg, {o.frames, bench::kWarmupFrames, g.threads});

    if (!o.json_out.empty()) {
        std::ofstream f(o.json_out, std::ios::trunc);
        if (!f)
            throw std::runtime_error("cannot write " + o.json_out);
        f << bench::format_report_json(report);
    }
    out << (g.json ? bench::format_report_json(report) : bench::format_report_text(report));
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Multi-person pose post-processing: decode, synthesize, count FLOPs, benchmark."};
    app.name("poseproc");
    app.require_subcommand(1, 1);

    GlobalOptions global;
    CLI::Option* threads_opt =
        app.add_option("--threads", global.threads,
                       "decoder worker threads, 0 = hardware concurrency (env: " + std::string(kThreadsEnv) + ")")
            ->check(CLI::NonNegativeNumber);
    app.add_option("--seed", global.seed, "random seed");
    app.add_flag("--json", global.json, "machine-readable output");

    DecodeOptions decode_opts;
    CLI::App* decode_cmd = app.add_subcommand("decode", "decode heatmap and PAF tensors into poses")->fallthrough();
    decode_cmd->add_option("--heatmaps", decode_opts.heatmaps, "19-channel tensor file")->required();
    decode_cmd->add_option("--pafs", decode_opts.pafs, "38-channel tensor file")->required();
    decode_cmd->add_option("--orig-size", decode_opts.orig_size, "original image size HxW (default: maps x 8)");
    decode_cmd->add_option("--upsample", decode_opts.upsample, "upsample factor")
        ->capture_default_str()
        ->check(CLI::Range(1, 64));
    decode_cmd->add_option("--out", decode_opts.out_path, "output pose document")->required();

    SynthOptions synth_opts;
    CLI::App* synth_cmd = app.add_subcommand("synth", "render a synthetic fixture")->fallthrough();
    synth_cmd->add_option("--persons", synth_opts.persons, "number of persons")->required()->check(
        CLI::NonNegativeNumber);
    synth_cmd->add_option("--size", synth_opts.size, "map size HxW")->capture_default_str();
    synth_cmd->add_option("--orig-size", synth_opts.orig_size, "original image size HxW (default: maps x 8)");
    synth_cmd->add_option("--out-dir", synth_opts.out_dir, "fixture directory")->required();
    synth_cmd->add_flag("--full-body", synth_opts.full_body, "all 18 keypoints visible on every person");

    FlopsOptions flops_opts;
    CLI::App* flops_cmd = app.add_subcommand("flops", "print a complexity report")->fallthrough();
    flops_cmd->add_option("--arch", flops_opts.arch, "architecture")
        ->capture_default_str()
        ->check(CLI::IsMember({"baseline", "lightweight", "variants"}));
    flops_cmd->add_option("--input", flops_opts.input, "network input HxW")->capture_default_str();

    BenchOptionsCli bench_opts;
    CLI::App* bench_cmd = app.add_subcommand("bench", "time the post-processing stages")->fallthrough();
    bench_cmd->add_option("--scenario", bench_opts.scenario, "fixture directory, 'canonical' or 'empty'")
        ->capture_default_str();
    bench_cmd->add_option("--mode", bench_opts.mode, "pipeline mode")
        ->capture_default_str()
        ->check(CLI::IsMember({"naive", "optimized"}));
    bench_cmd->add_option("--frames", bench_opts.frames, "timed frames (>= 30)")
        ->capture_default_str()
        ->check(CLI::Range(bench::kMinFrames, 1000000));
    bench_cmd->add_option("--upsample", bench_opts.upsample, "upsample factor for optimized mode")
        ->capture_default_str()
        ->check(CLI::Range(1, 64));
    bench_cmd->add_option("--json-out", bench_opts.json_out, "also write the JSON report here");

    std::vector<const char*> argv{"poseproc"};
    for (const std::string& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kParseError;
    }

    try {
        if (threads_opt->count() == 0)
            global.threads = threads_from_env(global.threads);
        if (decode_cmd->parsed())
            return cmd_decode(decode_opts, global, out);
        if (synth_cmd->parsed())
            return cmd_synth(synth_opts, global, out);
        if (flops_cmd->parsed())
            return cmd_flops(flops_opts, global, out);
        return cmd_bench(bench_opts, global, out);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kParseError;
    } catch (const DimensionError& e) {
        err << "dimension mismatch: " << e.what() << "\n";
        return kDimensionError;
    } catch (const PlacementInfeasible& e) {
        err << "placement infeasible: " << e.what() << "\n";
        return kPlacementInfeasible;
    } catch (const GateFailure& e) {
        err << "correctness gate failed: " << e.what() << "\n";
        return kGateFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
}

} // namespace poseproc::cli
