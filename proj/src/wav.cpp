#include "ambiroom/wav.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace ambiroom {

namespace {

void put_u32(std::ofstream& f, std::uint32_t v) {
    f.write(reinterpret_cast<const char*>(&v), 4);
}
void put_u16(std::ofstream& f, std::uint16_t v) {
    f.write(reinterpret_cast<const char*>(&v), 2);
}

std::uint32_t get_u32(std::ifstream& f) {
    std::uint32_t v = 0;
    f.read(reinterpret_cast<char*>(&v), 4);
    return v;
}
std::uint16_t get_u16(std::ifstream& f) {
    std::uint16_t v = 0;
    f.read(reinterpret_cast<char*>(&v), 2);
    return v;
}

}  // namespace

void write_wav(const std::string& path, const SpatialSignal& sig) {
    if (sig.time_domain() != TimeDomain::TIME)
        throw ConfigError("write_wav: signal must be in the time domain");
    const int n_ch = sig.n_channels() * sig.n_spatial();
    const std::size_t n_frames = sig.n_frames();
    const std::uint32_t data_bytes =
        static_cast<std::uint32_t>(n_frames * n_ch * sizeof(float));

    std::ofstream f(path, std::ios::binary);
    if (!f) throw FormatError("write_wav: cannot open " + path);
    f.write("RIFF", 4);
    put_u32(f, 4 + 26 + 8 + data_bytes);
    f.write("WAVE", 4);
    f.write("fmt ", 4);
    put_u32(f, 18);
    put_u16(f, 3);  // IEEE float
    put_u16(f, static_cast<std::uint16_t>(n_ch));
    put_u32(f, static_cast<std::uint32_t>(sig.fs()));
    put_u32(f, static_cast<std::uint32_t>(sig.fs()) * n_ch * sizeof(float));
    put_u16(f, static_cast<std::uint16_t>(n_ch * sizeof(float)));
    put_u16(f, 32);
    put_u16(f, 0);  // cbSize
    f.write("data", 4);
    put_u32(f, data_bytes);

    std::vector<float> frame(n_ch);
    for (std::size_t t = 0; t < n_frames; ++t) {
        for (int s = 0; s < sig.n_spatial(); ++s)
            for (int c = 0; c < sig.n_channels(); ++c)
                frame[s * sig.n_channels() + c] = static_cast<float>(sig.at(c, s, t).real());
        f.write(reinterpret_cast<const char*>(frame.data()), n_ch * sizeof(float));
    }
    if (!f) throw FormatError("write_wav: write failed for " + path);
}

WavData read_wav(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FormatError("read_wav: cannot open " + path);
    char tag[5] = {0};
    f.read(tag, 4);
    if (std::strncmp(tag, "RIFF", 4) != 0) throw FormatError("read_wav: not a RIFF file");
    get_u32(f);
    f.read(tag, 4);
    if (std::strncmp(tag, "WAVE", 4) != 0) throw FormatError("read_wav: not a WAVE file");

    WavData out;
    std::uint16_t format = 0, n_ch = 0, bits = 0;
    bool got_fmt = false;
    while (f.read(tag, 4)) {
        const std::uint32_t size = get_u32(f);
        if (std::strncmp(tag, "fmt ", 4) == 0) {
            format = get_u16(f);
            n_ch = get_u16(f);
            out.fs = get_u32(f);
            get_u32(f);
            get_u16(f);
            bits = get_u16(f);
            f.ignore(size - 16);
            got_fmt = true;
        } else if (std::strncmp(tag, "data", 4) == 0) {
            if (!got_fmt) throw FormatError("read_wav: data chunk before fmt");
            if (format != 3 || bits != 32)
                throw FormatError("read_wav: only 32-bit float PCM supported");
            const std::size_t n_samples = size / sizeof(float);
            const std::size_t n_frames = n_samples / n_ch;
            std::vector<float> raw(n_samples);
            f.read(reinterpret_cast<char*>(raw.data()), size);
            if (!f) throw FormatError("read_wav: truncated data chunk");
            out.channels.assign(n_ch, std::vector<double>(n_frames));
            for (std::size_t t = 0; t < n_frames; ++t)
                for (int c = 0; c < n_ch; ++c)
                    out.channels[c][t] = raw[t * n_ch + c];
            return out;
        } else {
            f.ignore(size + (size % 2));
        }
    }
    throw FormatError("read_wav: missing data chunk");
}

SpatialSignal read_wav_signal(const std::string& path, int n_channels, int n_spatial) {
    const WavData w = read_wav(path);
    if (static_cast<int>(w.channels.size()) != n_channels * n_spatial)
        throw FormatError("read_wav_signal: channel count mismatch");
    SpatialSignal sig(n_channels, n_spatial, w.channels[0].size(), w.fs);
    for (int s = 0; s < n_spatial; ++s)
        for (int c = 0; c < n_channels; ++c)
            sig.set_real_frames(c, s, w.channels[s * n_channels + c]);
    return sig;
}

}  // namespace ambiroom
