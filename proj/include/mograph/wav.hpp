#pragma once

#include <string>
#include <vector>

namespace mograph {

// Mono audio in [-1, 1]. Only 16-bit PCM WAV files are accepted on disk.
struct AudioBuffer {
    std::vector<double> samples;
    int sample_rate = 0;

    double duration_seconds() const {
        return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
    }
};

AudioBuffer load_wav(const std::string& path);
void save_wav(const AudioBuffer& audio, const std::string& path);

}  // namespace mograph
