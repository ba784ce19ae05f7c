#include "mograph/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "mograph/errors.hpp"

namespace mograph {

namespace {

uint32_t read_u32(const unsigned char* p) {
    return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
           static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

uint16_t read_u16(const unsigned char* p) {
    return static_cast<uint16_t>(p[0] | p[1] << 8);
}

void write_u32(std::ofstream& out, uint32_t v) {
    const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8 & 0xff),
                           static_cast<char>(v >> 16 & 0xff), static_cast<char>(v >> 24 & 0xff)};
    out.write(bytes, 4);
}

void write_u16(std::ofstream& out, uint16_t v) {
    const char bytes[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8 & 0xff)};
    out.write(bytes, 2);
}

}  // namespace

AudioBuffer load_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open wav " + path);
    std::vector<unsigned char> data((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (data.size() < 12 || std::memcmp(data.data(), "RIFF", 4) != 0 ||
        std::memcmp(data.data() + 8, "WAVE", 4) != 0) {
        throw FormatError("not a RIFF/WAVE file: " + path);
    }

    bool have_fmt = false;
    uint16_t channels = 0, bits = 0, format = 0;
    uint32_t sample_rate = 0;
    const unsigned char* pcm = nullptr;
    uint32_t pcm_bytes = 0;

    size_t pos = 12;
    while (pos + 8 <= data.size()) {
        const unsigned char* hdr = data.data() + pos;
        const uint32_t chunk_size = read_u32(hdr + 4);
        const size_t body = pos + 8;
        if (body + chunk_size > data.size()) throw FormatError("truncated chunk in " + path);
        if (std::memcmp(hdr, "fmt ", 4) == 0) {
            if (chunk_size < 16) throw FormatError("fmt chunk too small in " + path);
            format = read_u16(data.data() + body);
            channels = read_u16(data.data() + body + 2);
            sample_rate = read_u32(data.data() + body + 4);
            bits = read_u16(data.data() + body + 14);
            have_fmt = true;
        } else if (std::memcmp(hdr, "data", 4) == 0) {
            pcm = data.data() + body;
            pcm_bytes = chunk_size;
        }
        pos = body + chunk_size + (chunk_size & 1);  // chunks are word-aligned
    }

    if (!have_fmt || !pcm) throw FormatError("missing fmt/data chunk in " + path);
    if (format != 1) throw FormatError("only PCM wav supported: " + path);
    if (channels != 1) throw FormatError("only mono wav supported: " + path);
    if (bits != 16) throw FormatError("only 16-bit wav supported: " + path);
    if (sample_rate == 0) throw FormatError("zero sample rate in " + path);

    AudioBuffer audio;
    audio.sample_rate = static_cast<int>(sample_rate);
    audio.samples.reserve(pcm_bytes / 2);
    for (uint32_t i = 0; i + 1 < pcm_bytes; i += 2) {
        const int16_t s = static_cast<int16_t>(pcm[i] | pcm[i + 1] << 8);
        audio.samples.push_back(s / 32768.0);
    }
    return audio;
}

void save_wav(const AudioBuffer& audio, const std::string& path) {
    if (audio.sample_rate <= 0) throw ValueError("sample rate must be positive");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write wav " + path);

    const uint32_t pcm_bytes = static_cast<uint32_t>(audio.samples.size() * 2);
    out.write("RIFF", 4);
    write_u32(out, 36 + pcm_bytes);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    write_u32(out, 16);
    write_u16(out, 1);   // PCM
    write_u16(out, 1);   // mono
    write_u32(out, static_cast<uint32_t>(audio.sample_rate));
    write_u32(out, static_cast<uint32_t>(audio.sample_rate) * 2);  // byte rate
    write_u16(out, 2);   // block align
    write_u16(out, 16);  // bits per sample
    out.write("data", 4);
    write_u32(out, pcm_bytes);
    for (double v : audio.samples) {
        const double clamped = std::clamp(v, -1.0, 1.0);
        const int16_t s = static_cast<int16_t>(std::lround(clamped * 32767.0));
        const char bytes[2] = {static_cast<char>(s & 0xff), static_cast<char>(s >> 8 & 0xff)};
        out.write(bytes, 2);
    }
    if (!out) throw IoError("failed writing wav " + path);
}

}  // namespace mograph
