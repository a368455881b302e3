#pragma once

#include <string>
#include <vector>

#include "ambiroom/signal.hpp"

namespace ambiroom {

// 32-bit float PCM, little-endian RIFF. Channel k of the file holds
// (spatial s, channel c) with k = s * n_channels + c (spatial-major).
void write_wav(const std::string& path, const SpatialSignal& sig);

struct WavData {
    std::vector<std::vector<double>> channels;
    double fs = 0.0;
};

WavData read_wav(const std::string& path);

// Rebuilds a SpatialSignal from a spatial-major WAV written by write_wav.
SpatialSignal read_wav_signal(const std::string& path, int n_channels, int n_spatial);

}  // namespace ambiroom
