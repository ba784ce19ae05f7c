#include "mograph/motion_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mograph/errors.hpp"

namespace mograph {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double finite_number(const json& j, const char* what) {
    if (!j.is_number()) throw SchemaError(std::string("expected number for ") + what);
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ValueError(std::string("non-finite value for ") + what);
    return v;
}

Vec3 parse_vec3(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 3) throw SchemaError(std::string(what) + " must be a 3-array");
    return Vec3(finite_number(j[0], what), finite_number(j[1], what), finite_number(j[2], what));
}

Quat parse_quat_wxyz(const json& j) {
    if (!j.is_array() || j.size() != 4) throw SchemaError("rotation must be a [w,x,y,z] 4-array");
    // Stored bits are kept verbatim so save -> load round-trips field-exact;
    // clip.validate() rejects non-unit rotations afterwards.
    return Quat(finite_number(j[0], "rotation"), finite_number(j[1], "rotation"),
                finite_number(j[2], "rotation"), finite_number(j[3], "rotation"));
}

}  // namespace

MotionClip parse_motion_json(const std::string& text, const std::string& fallback_source_id) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed motion JSON: ") + e.what());
    }
    if (!root.is_object()) throw SchemaError("motion JSON root must be an object");
    if (!root.contains("fps") || !root.contains("skeleton") || !root.contains("frames")) {
        throw SchemaError("motion JSON needs fps, skeleton and frames");
    }

    MotionClip clip;
    clip.fps = finite_number(root["fps"], "fps");
    if (clip.fps <= 0.0) throw ValueError("fps must be positive");
    clip.source_id = root.value("source_id", fallback_source_id);

    const json& skel = root["skeleton"];
    if (!skel.is_object() || !skel.contains("joints")) throw SchemaError("skeleton needs joints");
    for (const json& jj : skel["joints"]) {
        Joint joint;
        if (!jj.contains("name")) throw SchemaError("joint needs a name");
        joint.name = jj["name"].get<std::string>();
        if (!jj.contains("parent") || jj["parent"].is_null()) {
            joint.parent = -1;
        } else {
            joint.parent = jj["parent"].get<int>();
        }
        joint.offset = jj.contains("offset") ? parse_vec3(jj["offset"], "offset") : Vec3::Zero();
        clip.skeleton.joints.push_back(std::move(joint));
    }
    if (skel.contains("salient")) {
        for (const json& s : skel["salient"]) {
            clip.skeleton.salient_joint_names.push_back(s.get<std::string>());
        }
    } else {
        clip.skeleton.salient_joint_names = Skeleton::guess_salient(clip.skeleton.joints);
    }

    for (const json& jf : root["frames"]) {
        if (!jf.contains("root_pos") || !jf.contains("rotations")) {
            throw SchemaError("frame needs root_pos and rotations");
        }
        MotionFrame frame;
        frame.root_position = parse_vec3(jf["root_pos"], "root_pos");
        for (const json& jq : jf["rotations"]) frame.joint_rotations.push_back(parse_quat_wxyz(jq));
        clip.frames.push_back(std::move(frame));
    }

    clip.validate();
    return clip;
}

namespace {

// --- BVH ---------------------------------------------------------------

struct BvhJoint {
    std::string name;
    int parent = -1;
    Vec3 offset = Vec3::Zero();
    std::vector<std::string> channels;  // in file order
};

class Tokenizer {
public:
    explicit Tokenizer(const std::string& text) : text_(text) {}

    std::string next() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of BVH file");
        size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        return text_.substr(start, pos_ - start);
    }

    std::string peek() {
        size_t saved = pos_;
        std::string tok = next();
        pos_ = saved;
        return tok;
    }

    bool eof() {
        skip_ws();
        return pos_ >= text_.size();
    }

    double number() {
        const std::string tok = next();
        try {
            size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) throw ParseError("bad number '" + tok + "' in BVH");
            if (!std::isfinite(v)) throw ValueError("non-finite number in BVH");
            return v;
        } catch (const std::invalid_argument&) {
            throw ParseError("bad number '" + tok + "' in BVH");
        } catch (const std::out_of_range&) {
            throw ParseError("number out of range '" + tok + "' in BVH");
        }
    }

    void expect(const std::string& tok) {
        const std::string got = next();
        if (got != tok) throw ParseError("expected '" + tok + "' in BVH, got '" + got + "'");
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    const std::string& text_;
    size_t pos_ = 0;
};

Quat axis_rotation(char axis, double degrees) {
    const double rad = degrees * M_PI / 180.0;
    switch (axis) {
        case 'X': return Quat(Eigen::AngleAxisd(rad, Vec3::UnitX()));
        case 'Y': return Quat(Eigen::AngleAxisd(rad, Vec3::UnitY()));
        case 'Z': return Quat(Eigen::AngleAxisd(rad, Vec3::UnitZ()));
        default: throw ParseError(std::string("unknown rotation axis '") + axis + "'");
    }
}

void parse_bvh_joint(Tokenizer& tok, std::vector<BvhJoint>& joints, int parent) {
    BvhJoint joint;
    joint.name = tok.next();
    joint.parent = parent;
    tok.expect("{");
    tok.expect("OFFSET");
    joint.offset = Vec3(tok.number(), tok.number(), tok.number());
    const int self = static_cast<int>(joints.size());
    joints.push_back(joint);

    while (true) {
        const std::string kw = tok.next();
        if (kw == "CHANNELS") {
            const int n = static_cast<int>(tok.number());
            for (int i = 0; i < n; ++i) joints[self].channels.push_back(tok.next());
        } else if (kw == "JOINT") {
            parse_bvh_joint(tok, joints, self);
        } else if (kw == "End") {
            // "End Site" block: offset only, no channels; not a graph joint here.
            tok.expect("Site");
            tok.expect("{");
            tok.expect("OFFSET");
            tok.number();
            tok.number();
            tok.number();
            tok.expect("}");
        } else if (kw == "}") {
            break;
        } else {
            throw ParseError("unexpected token '" + kw + "' in BVH hierarchy");
        }
    }
}

}  // namespace

MotionClip parse_bvh(const std::string& text, const std::string& source_id) {
    Tokenizer tok(text);
    tok.expect("HIERARCHY");
    tok.expect("ROOT");
    std::vector<BvhJoint> bvh_joints;
    parse_bvh_joint(tok, bvh_joints, -1);
    if (bvh_joints.empty()) throw SchemaError("BVH file declares no joints");

    tok.expect("MOTION");
    tok.expect("Frames:");
    const int frame_count = static_cast<int>(tok.number());
    tok.expect("Frame");
    tok.expect("Time:");
    const double frame_time = tok.number();
    if (frame_time <= 0.0) throw ValueError("frame time must be positive");

    MotionClip clip;
    clip.fps = 1.0 / frame_time;
    clip.source_id = source_id;
    for (const auto& bj : bvh_joints) {
        clip.skeleton.joints.push_back(Joint{bj.name, bj.parent, bj.offset});
    }
    clip.skeleton.salient_joint_names = Skeleton::guess_salient(clip.skeleton.joints);

    for (int f = 0; f < frame_count; ++f) {
        MotionFrame frame;
        frame.joint_rotations.resize(bvh_joints.size(), Quat::Identity());
        for (size_t j = 0; j < bvh_joints.size(); ++j) {
            Quat q = Quat::Identity();
            Vec3 pos = Vec3::Zero();
            bool has_pos = false;
            for (const std::string& ch : bvh_joints[j].channels) {
                const double v = tok.number();
                if (ch == "Xposition") { pos.x() = v; has_pos = true; }
                else if (ch == "Yposition") { pos.y() = v; has_pos = true; }
                else if (ch == "Zposition") { pos.z() = v; has_pos = true; }
                else if (ch.size() == 9 && ch.substr(1) == "rotation") {
                    q = q * axis_rotation(ch[0], v);
                } else {
                    throw ParseError("unknown BVH channel '" + ch + "'");
                }
            }
            frame.joint_rotations[j] = q.normalized();
            if (bvh_joints[j].parent < 0 && has_pos) frame.root_position = pos;
        }
        clip.frames.push_back(std::move(frame));
    }
    if (!tok.eof()) {
        // Trailing numbers beyond the declared frame count are a parse error.
        throw ParseError("trailing data after BVH motion block");
    }

    clip.validate();
    return clip;
}

MotionClip load_motion_clip(const std::string& path, MotionFormat format) {
    const std::string text = read_file(path);
    // Strip directories and extension for the fallback source id.
    std::string stem = path;
    if (auto slash = stem.find_last_of("/\\"); slash != std::string::npos) stem = stem.substr(slash + 1);
    if (auto dot = stem.find_last_of('.'); dot != std::string::npos) stem = stem.substr(0, dot);
    return format == MotionFormat::bvh ? parse_bvh(text, stem) : parse_motion_json(text, stem);
}

MotionClip load_motion_clip(const std::string& path) {
    const bool bvh = path.size() >= 4 && path.substr(path.size() - 4) == ".bvh";
    return load_motion_clip(path, bvh ? MotionFormat::bvh : MotionFormat::json);
}

void save_motion_clip(const MotionClip& clip, const std::string& path) {
    json skel_joints = json::array();
    for (const auto& j : clip.skeleton.joints) {
        json jj = {{"name", j.name}, {"offset", {j.offset.x(), j.offset.y(), j.offset.z()}}};
        if (j.parent < 0) jj["parent"] = nullptr; else jj["parent"] = j.parent;
        skel_joints.push_back(std::move(jj));
    }
    json frames = json::array();
    for (const auto& f : clip.frames) {
        json rotations = json::array();
        for (const auto& q : f.joint_rotations) {
            rotations.push_back({q.w(), q.x(), q.y(), q.z()});
        }
        frames.push_back({{"root_pos", {f.root_position.x(), f.root_position.y(), f.root_position.z()}},
                          {"rotations", std::move(rotations)}});
    }
    json root = {{"fps", clip.fps},
                 {"skeleton", {{"joints", std::move(skel_joints)}, {"salient", clip.skeleton.salient_joint_names}}},
                 {"frames", std::move(frames)},
                 {"source_id", clip.source_id}};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << root.dump(1) << "\n";
}

}  // namespace mograph
