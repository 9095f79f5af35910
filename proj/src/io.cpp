// Copyright (C) 2026 The poseproc Authors
// SPDX-License-Identifier: Apache-2.0

#include "poseproc/io.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <iterator>
#include <limits>
#include <set>

#include "json.hpp"
#include "poseproc/errors.hpp"

namespace poseproc::io {

using nlohmann::json;

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v)
{
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

std::uint16_t get_u16(const std::uint8_t* p)
{
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get_u32(const std::uint8_t* p)
{
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

int checked_dim(std::uint32_t v, const char* field)
{
    if (v == 0)
        throw ParseError(field, "must be positive");
    if (v > static_cast<std::uint32_t>(std::numeric_limits<int>::max()))
        throw ParseError(field, "too large: " + std::to_string(v));
    return static_cast<int>(v);
}

} // namespace

std::vector<std::uint8_t> encode_tensor(const FeatureMaps& maps)
{
    if (maps.empty())
        throw std::invalid_argument("cannot encode an empty tensor");
    std::vector<std::uint8_t> out;
    out.reserve(kTensorHeaderSize + maps.values().size() * 4);
    out.insert(out.end(), kTensorMagic.begin(), kTensorMagic.end());
    put_u16(out, kTensorVersion);
    put_u32(out, static_cast<std::uint32_t>(maps.height()));
    put_u32(out, static_cast<std::uint32_t>(maps.width()));
    put_u32(out, static_cast<std::uint32_t>(maps.channels()));
    out.push_back(kDtypeFloat32);
    put_u32(out, 0);
    for (float v : maps.values())
        put_u32(out, std::bit_cast<std::uint32_t>(v));
    return out;
}

FeatureMaps decode_tensor(std::span<const std::uint8_t> bytes)
{
    if (bytes.size() < kTensorHeaderSize)
        throw ParseError("header", "file has " + std::to_string(bytes.size()) + " bytes, header needs " +
                                       std::to_string(kTensorHeaderSize));
    const std::uint8_t* p = bytes.data();
    if (!std::equal(kTensorMagic.begin(), kTensorMagic.end(), p))
        throw ParseError("magic", "expected \"PTNS\"");
    if (const std::uint16_t version = get_u16(p + 4); version != kTensorVersion)
        throw ParseError("version", "unsupported version " + std::to_string(version));
    const int height = checked_dim(get_u32(p + 6), "height");
    const int width = checked_dim(get_u32(p + 10), "width");
    const int channels = checked_dim(get_u32(p + 14), "channels");
    if (p[18] != kDtypeFloat32)
        throw ParseError("dtype", "unsupported dtype code " + std::to_string(p[18]));
    if (get_u32(p + 19) != 0)
        throw ParseError("reserved", "must be zero");

    const std::uint64_t count = static_cast<std::uint64_t>(height) * width * channels;
    const std::uint64_t payload = bytes.size() - kTensorHeaderSize;
    if (payload / 4 < count)
        throw ParseError("payload", "truncated: expected " + std::to_string(count * 4) + " bytes, found " +
                                        std::to_string(payload));
    if (payload != count * 4)
        throw ParseError("trailing", std::to_string(payload - count * 4) + " unexpected bytes after payload");

    std::vector<float> data(count);
    const std::uint8_t* q = p + kTensorHeaderSize;
    for (std::uint64_t i = 0; i < count; ++i, q += 4)
        data[i] = std::bit_cast<float>(get_u32(q));
    return FeatureMaps(height, width, channels, std::move(data));
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw std::runtime_error("write failed: " + path.string());
}

void write_tensor(const FeatureMaps& maps, const std::filesystem::path& path)
{
    write_file_bytes(path, encode_tensor(maps));
}

FeatureMaps read_tensor(const std::filesystem::path& path)
{
    return decode_tensor(read_file_bytes(path));
}

namespace {

std::string read_text(const std::filesystem::path& path)
{
    const std::vector<std::uint8_t> bytes = read_file_bytes(path);
    return {bytes.begin(), bytes.end()};
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

// Strict view over a JSON object: every key must be consumed exactly as declared.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object())
            throw ParseError(path_.empty() ? "$" : path_, "expected an object");
    }

    const json& at(const std::string& key)
    {
        seen_.insert(key);
        const auto it = j_.find(key);
        if (it == j_.end())
            throw ParseError(child(key), "missing");
        return *it;
    }

    double number(const std::string& key)
    {
        const json& v = at(key);
        if (!v.is_number())
            throw ParseError(child(key), "expected a number");
        return v.get<double>();
    }

    int integer(const std::string& key)
    {
        const json& v = at(key);
        if (!v.is_number_integer())
            throw ParseError(child(key), "expected an integer");
        const auto n = v.get<std::int64_t>();
        if (n < std::numeric_limits<int>::min() || n > std::numeric_limits<int>::max())
            throw ParseError(child(key), "out of range");
        return static_cast<int>(n);
    }

    std::uint64_t unsigned_integer(const std::string& key)
    {
        const json& v = at(key);
        if (!v.is_number_unsigned())
            throw ParseError(child(key), "expected a non-negative integer");
        return v.get<std::uint64_t>();
    }

    bool boolean(const std::string& key)
    {
        const json& v = at(key);
        if (!v.is_boolean())
            throw ParseError(child(key), "expected a boolean");
        return v.get<bool>();
    }

    std::string string(const std::string& key)
    {
        const json& v = at(key);
        if (!v.is_string())
            throw ParseError(child(key), "expected a string");
        return v.get<std::string>();
    }

    const json& array(const std::string& key)
    {
        const json& v = at(key);
        if (!v.is_array())
            throw ParseError(child(key), "expected an array");
        return v;
    }

    std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    /// Rejects keys that were never read.
    void finish() const
    {
        for (const auto& [key, value] : j_.items()) {
            if (!seen_.count(key))
                throw ParseError(child(key), "unknown field");
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

std::string indexed(const std::string& path, std::size_t i)
{
    return path + "[" + std::to_string(i) + "]";
}

json parse_json(const std::string& text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("$", e.what());
    }
}

KeypointKind parse_kind(const std::string& name, const std::string& path)
{
    const std::optional<KeypointKind> kind = keypoint_from_name(name);
    if (!kind)
        throw ParseError(path, "unknown keypoint kind '" + name + "'");
    return *kind;
}

json geometry_to_json(const InputGeometry& g)
{
    return {
        {"net_input_height", g.net_input_height},
        {"net_input_width", g.net_input_width},
        {"original_height", g.original_height},
        {"original_width", g.original_width},
        {"stride", g.stride},
        {"pad", {{"top", g.pad.top}, {"left", g.pad.left}, {"bottom", g.pad.bottom}, {"right", g.pad.right}}},
    };
}

InputGeometry geometry_from_json(const json& j, const std::string& path)
{
    ObjectReader r(j, path);
    InputGeometry g;
    g.net_input_height = r.integer("net_input_height");
    g.net_input_width = r.integer("net_input_width");
    g.original_height = r.integer("original_height");
    g.original_width = r.integer("original_width");
    g.stride = r.integer("stride");
    ObjectReader pad(r.at("pad"), r.child("pad"));
    g.pad.top = pad.integer("top");
    g.pad.left = pad.integer("left");
    g.pad.bottom = pad.integer("bottom");
    g.pad.right = pad.integer("right");
    pad.finish();
    r.finish();
    return g;
}

void check_schema(ObjectReader& r, int expected)
{
    const int version = r.integer("schema_version");
    if (version != expected)
        throw ParseError(r.child("schema_version"),
                         "unsupported version " + std::to_string(version) + ", expected " + std::to_string(expected));
}

template <typename T, typename Fn>
std::array<std::optional<T>, kNumKeypointKinds> parse_slots(const json& arr, const std::string& path, Fn&& parse_one)
{
    if (arr.size() != kNumKeypointKinds)
        throw ParseError(path, "expected " + std::to_string(kNumKeypointKinds) + " entries, found " +
                                   std::to_string(arr.size()));
    std::array<std::optional<T>, kNumKeypointKinds> slots;
    for (std::size_t k = 0; k < arr.size(); ++k) {
        if (arr[k].is_null())
            continue;
        slots[k] = parse_one(arr[k], indexed(path, k), static_cast<KeypointKind>(k));
    }
    return slots;
}

} // namespace

PoseDocument make_pose_document(const InputGeometry& geometry, std::span<const PoseSkeleton> skeletons)
{
    PoseDocument doc;
    doc.geometry = geometry;
    doc.skeletons.reserve(skeletons.size());
    for (const PoseSkeleton& s : skeletons) {
        PoseRecord rec;
        rec.score = s.score;
        for (int k = 0; k < kNumKeypointKinds; ++k) {
            if (const auto& kp = s.slots[k])
                rec.keypoints[k] = PoseKeypoint{kp->kind, kp->x, kp->y, static_cast<double>(kp->score)};
        }
        doc.skeletons.push_back(rec);
    }
    return doc;
}

std::string format_poses(const PoseDocument& doc)
{
    json skeletons = json::array();
    for (const PoseRecord& rec : doc.skeletons) {
        json keypoints = json::array();
        for (const auto& kp : rec.keypoints) {
            if (!kp) {
                keypoints.push_back(nullptr);
                continue;
            }
            keypoints.push_back(
                {{"kind", std::string(keypoint_name(kp->kind))}, {"x", kp->x}, {"y", kp->y}, {"score", kp->score}});
        }
        skeletons.push_back({{"score", rec.score}, {"keypoints", std::move(keypoints)}});
    }
    const json j = {
        {"schema_version", doc.schema_version},
        {"geometry", geometry_to_json(doc.geometry)},
        {"skeletons", std::move(skeletons)},
    };
    return j.dump(2) + "\n";
}

PoseDocument parse_poses(const std::string& text)
{
    const json j = parse_json(text);
    ObjectReader r(j, "");
    PoseDocument doc;
    check_schema(r, kPoseSchemaVersion);
    doc.schema_version = kPoseSchemaVersion;
    doc.geometry = geometry_from_json(r.at("geometry"), "geometry");

    const json& skeletons = r.array("skeletons");
    for (std::size_t i = 0; i < skeletons.size(); ++i) {
        const std::string path = indexed("skeletons", i);
        ObjectReader s(skeletons[i], path);
        PoseRecord rec;
        rec.score = s.number("score");
        rec.keypoints = parse_slots<PoseKeypoint>(
            s.array("keypoints"), s.child("keypoints"), [](const json& e, const std::string& p, KeypointKind slot) {
                ObjectReader kr(e, p);
                PoseKeypoint kp;
                kp.kind = parse_kind(kr.string("kind"), kr.child("kind"));
                if (kp.kind != slot)
                    throw ParseError(kr.child("kind"), "does not match its slot '" +
                                                           std::string(keypoint_name(slot)) + "'");
                kp.x = kr.number("x");
                kp.y = kr.number("y");
                kp.score = kr.number("score");
                kr.finish();
                return kp;
            });
        s.finish();
        doc.skeletons.push_back(rec);
    }
    r.finish();
    return doc;
}

void write_poses(const PoseDocument& doc, const std::filesystem::path& path)
{
    write_text(path, format_poses(doc));
}

PoseDocument read_poses(const std::filesystem::path& path)
{
    return parse_poses(read_text(path));
}

std::string format_scene_truth(const SceneTruth& truth)
{
    json persons = json::array();
    for (const GroundTruthPerson& p : truth.persons) {
        json keypoints = json::array();
        for (int k = 0; k < kNumKeypointKinds; ++k) {
            if (!p.keypoints[k]) {
                keypoints.push_back(nullptr);
                continue;
            }
            keypoints.push_back({{"kind", std::string(keypoint_name(static_cast<KeypointKind>(k)))},
                                 {"x", p.keypoints[k]->x},
                                 {"y", p.keypoints[k]->y}});
        }
        persons.push_back({{"keypoints", std::move(keypoints)}});
    }
    const RenderConfig& c = truth.render;
    const json j = {
        {"schema_version", kSceneSchemaVersion},
        {"render",
         {{"sigma", c.sigma},
          {"limb_width", c.limb_width},
          {"map_height", c.map_height},
          {"map_width", c.map_width},
          {"seed", c.seed},
          {"min_separation", c.min_separation},
          {"full_body", c.full_body}}},
        {"num_persons", truth.num_persons},
        {"original_height", truth.original_height},
        {"original_width", truth.original_width},
        {"persons", std::move(persons)},
    };
    return j.dump(2) + "\n";
}

SceneTruth parse_scene_truth(const std::string& text)
{
    const json j = parse_json(text);
    ObjectReader r(j, "");
    check_schema(r, kSceneSchemaVersion);
    SceneTruth truth;

    ObjectReader c(r.at("render"), "render");
    truth.render.sigma = c.number("sigma");
    truth.render.limb_width = c.number("limb_width");
    truth.render.map_height = c.integer("map_height");
    truth.render.map_width = c.integer("map_width");
    truth.render.seed = c.unsigned_integer("seed");
    truth.render.min_separation = c.number("min_separation");
    truth.render.full_body = c.boolean("full_body");
    c.finish();
    try {
        truth.render.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError("render", e.what());
    }

    truth.num_persons = r.integer("num_persons");
    truth.original_height = r.integer("original_height");
    truth.original_width = r.integer("original_width");
    if (truth.original_height < 1 || truth.original_width < 1)
        throw ParseError("original_height", "original size must be positive");

    const json& persons = r.array("persons");
    for (std::size_t i = 0; i < persons.size(); ++i) {
        const std::string path = indexed("persons", i);
        ObjectReader pr(persons[i], path);
        GroundTruthPerson person;
        person.keypoints = parse_slots<Point2>(
            pr.array("keypoints"), pr.child("keypoints"), [](const json& e, const std::string& p, KeypointKind slot) {
                ObjectReader kr(e, p);
                if (parse_kind(kr.string("kind"), kr.child("kind")) != slot)
                    throw ParseError(kr.child("kind"), "does not match its slot '" +
                                                           std::string(keypoint_name(slot)) + "'");
                Point2 pt{kr.number("x"), kr.number("y")};
                kr.finish();
                return pt;
            });
        pr.finish();
        truth.persons.push_back(person);
    }
    if (static_cast<int>(truth.persons.size()) != truth.num_persons)
        throw ParseError("num_persons", "does not match the persons array");
    r.finish();
    return truth;
}

void write_fixture(const std::filesystem::path& dir, const Fixture& fixture)
{
    std::filesystem::create_directories(dir);
    write_tensor(fixture.heatmaps, dir / kHeatmapsFile);
    write_tensor(fixture.pafs, dir / kPafsFile);
    write_text(dir / kTruthFile, format_scene_truth(fixture.truth));
}

Fixture read_fixture(const std::filesystem::path& dir)
{
    Fixture f;
    f.heatmaps = read_tensor(dir / kHeatmapsFile);
    f.pafs = read_tensor(dir / kPafsFile);
    f.truth = parse_scene_truth(read_text(dir / kTruthFile));
    return f;
}

} // namespace poseproc::io
