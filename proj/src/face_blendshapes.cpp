#include "mograph/face/blendshapes.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "mograph/errors.hpp"

namespace mograph::face {

const std::array<std::string, kChannelCount>& channel_names() {
    static const std::array<std::string, kChannelCount> names = {
        "eyeBlinkLeft",     "eyeLookDownLeft",   "eyeLookInLeft",     "eyeLookOutLeft",
        "eyeLookUpLeft",    "eyeSquintLeft",     "eyeWideLeft",       "eyeBlinkRight",
        "eyeLookDownRight", "eyeLookInRight",    "eyeLookOutRight",   "eyeLookUpRight",
        "eyeSquintRight",   "eyeWideRight",      "jawForward",        "jawLeft",
        "jawRight",         "jawOpen",           "mouthClose",        "mouthFunnel",
        "mouthPucker",      "mouthLeft",         "mouthRight",        "mouthSmileLeft",
        "mouthSmileRight",  "mouthFrownLeft",    "mouthFrownRight",   "mouthDimpleLeft",
        "mouthDimpleRight", "mouthStretchLeft",  "mouthStretchRight", "mouthRollLower",
        "mouthRollUpper",   "mouthShrugLower",   "mouthShrugUpper",   "mouthPressLeft",
        "mouthPressRight",  "mouthLowerDownLeft", "mouthLowerDownRight", "mouthUpperUpLeft",
        "mouthUpperUpRight", "browDownLeft",     "browDownRight",     "browInnerUp",
        "browOuterUpLeft",  "browOuterUpRight",  "cheekPuff",         "cheekSquintLeft",
        "cheekSquintRight", "noseSneerLeft",     "noseSneerRight",    "tongueOut"};
    return names;
}

int channel_index(const std::string& name) {
    static const std::map<std::string, int> index = [] {
        std::map<std::string, int> m;
        for (int i = 0; i < kChannelCount; ++i) m[channel_names()[i]] = i;
        return m;
    }();
    auto it = index.find(name);
    if (it == index.end()) throw ValueError("unknown blendshape channel '" + name + "'");
    return it->second;
}

void BlendshapeSequence::validate() const {
    if (!(fps > 0.0)) throw ValueError("blendshape fps must be positive");
    for (const auto& frame : frames) {
        for (double v : frame) {
            if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
                throw ValueError("blendshape weights must lie in [0,1]");
            }
        }
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

double parse_number(const std::string& cell, const std::string& where) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
        throw FormatError("bad number '" + cell + "' in " + where);
    }
    return v;
}

std::string format_number(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

BlendshapeSequence load_blendshape_csv(const std::string& path, double fps) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open blendshape csv " + path);
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty blendshape csv " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv_line(line, ',');
    if (header.size() != kChannelCount) {
        throw SchemaError("blendshape csv needs 52 columns, got " +
                          std::to_string(header.size()));
    }
    for (int i = 0; i < kChannelCount; ++i) {
        if (header[i] != channel_names()[i]) {
            throw SchemaError("blendshape csv column " + std::to_string(i) + " is '" + header[i] +
                              "', expected '" + channel_names()[i] + "'");
        }
    }

    BlendshapeSequence seq;
    seq.fps = fps;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_csv_line(line, ',');
        if (cells.size() != kChannelCount) {
            throw FormatError("blendshape csv row with " + std::to_string(cells.size()) +
                              " cells in " + path);
        }
        BlendshapeFrame frame{};
        for (int i = 0; i < kChannelCount; ++i) {
            frame[i] = std::clamp(parse_number(cells[i], path), 0.0, 1.0);
        }
        seq.frames.push_back(frame);
    }
    seq.validate();
    return seq;
}

void save_blendshape_csv(const BlendshapeSequence& seq, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write blendshape csv " + path);
    for (int i = 0; i < kChannelCount; ++i) {
        out << channel_names()[i] << (i + 1 < kChannelCount ? "," : "\n");
    }
    for (const auto& frame : seq.frames) {
        for (int i = 0; i < kChannelCount; ++i) {
            out << format_number(frame[i]) << (i + 1 < kChannelCount ? "," : "\n");
        }
    }
}

std::vector<PhonemeInterval> load_phoneme_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open phoneme tsv " + path);
    std::vector<PhonemeInterval> intervals;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_csv_line(line, '\t');
        if (cells.size() != 3) throw FormatError("phoneme tsv needs 3 columns in " + path);
        PhonemeInterval iv;
        iv.start_seconds = parse_number(cells[0], path);
        iv.end_seconds = parse_number(cells[1], path);
        iv.phoneme = cells[2];
        if (!(iv.start_seconds < iv.end_seconds)) {
            throw ValueError("phoneme interval must have start < end in " + path);
        }
        intervals.push_back(std::move(iv));
    }
    return intervals;
}

void save_phoneme_tsv(const std::vector<PhonemeInterval>& intervals, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write phoneme tsv " + path);
    for (const auto& iv : intervals) {
        out << format_number(iv.start_seconds) << '\t' << format_number(iv.end_seconds) << '\t'
            << iv.phoneme << '\n';
    }
}

PhonemeTimeline rasterize_phonemes(const std::vector<PhonemeInterval>& intervals,
                                   int frame_count, double fps) {
    if (frame_count < 0) throw ValueError("negative frame count");
    if (!(fps > 0.0)) throw ValueError("fps must be positive");
    PhonemeTimeline timeline;
    timeline.labels.assign(frame_count, "");
    for (int t = 0; t < frame_count; ++t) {
        const double center = (t + 0.5) / fps;
        for (const auto& iv : intervals) {
            if (center >= iv.start_seconds && center < iv.end_seconds) {
                timeline.labels[t] = iv.phoneme;
                break;
            }
        }
    }
    return timeline;
}

}  // namespace mograph::face
