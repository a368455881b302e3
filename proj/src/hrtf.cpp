#include "ambiroom/hrtf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ambiroom/fft.hpp"
#include "ambiroom/sh.hpp"

namespace ambiroom {

void HrtfSet::validate() const {
    grid.validate();
    if (taps <= 0) throw FormatError("hrtf: taps must be positive");
    if (!(fs > 0.0)) throw FormatError("hrtf: invalid sample rate");
    if (irs.size() != static_cast<std::size_t>(grid.n_dirs()) * 2 * taps)
        throw FormatError("hrtf: ir payload size mismatch");
}

namespace {

constexpr char kMagic[4] = {'S', 'H', 'R', 'M'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void read_exact(std::istream& in, T* dst, std::size_t count, std::size_t& offset,
                const char* what) {
    in.read(reinterpret_cast<char*>(dst), count * sizeof(T));
    if (static_cast<std::size_t>(in.gcount()) != count * sizeof(T))
        throw FormatError("hrtf container: truncated " + std::string(what) +
                          " at byte offset " + std::to_string(offset));
    offset += count * sizeof(T);
}

}  // namespace

HrtfSet load_hrtf(std::istream& in) {
    std::size_t offset = 0;
    char magic[4];
    read_exact(in, magic, 4, offset, "magic");
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw FormatError("hrtf container: bad magic at byte offset 0");
    std::uint32_t version = 0, fs = 0, d = 0, taps = 0;
    read_exact(in, &version, 1, offset, "version");
    if (version != kVersion)
        throw FormatError("hrtf container: unsupported version " + std::to_string(version) +
                          " at byte offset 4");
    read_exact(in, &fs, 1, offset, "fs");
    read_exact(in, &d, 1, offset, "direction count");
    read_exact(in, &taps, 1, offset, "tap count");
    if (d == 0 || taps == 0)
        throw FormatError("hrtf container: zero direction or tap count");

    HrtfSet set;
    set.fs = fs;
    set.taps = static_cast<int>(taps);
    set.grid.azimuths.resize(d);
    set.grid.elevations.resize(d);
    set.grid.weights.resize(d);
    read_exact(in, set.grid.azimuths.data(), d, offset, "azimuths");
    read_exact(in, set.grid.elevations.data(), d, offset, "elevations");
    read_exact(in, set.grid.weights.data(), d, offset, "weights");
    std::vector<float> raw(static_cast<std::size_t>(d) * 2 * taps);
    read_exact(in, raw.data(), raw.size(), offset, "irs");
    set.irs.assign(raw.begin(), raw.end());
    set.validate();
    return set;
}

HrtfSet load_hrtf_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open hrtf container: " + path);
    return load_hrtf(f);
}

void save_hrtf(std::ostream& out, const HrtfSet& set) {
    set.validate();
    const std::uint32_t fs = static_cast<std::uint32_t>(set.fs);
    const std::uint32_t d = static_cast<std::uint32_t>(set.grid.n_dirs());
    const std::uint32_t taps = static_cast<std::uint32_t>(set.taps);
    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(&kVersion), 4);
    out.write(reinterpret_cast<const char*>(&fs), 4);
    out.write(reinterpret_cast<const char*>(&d), 4);
    out.write(reinterpret_cast<const char*>(&taps), 4);
    out.write(reinterpret_cast<const char*>(set.grid.azimuths.data()), d * sizeof(double));
    out.write(reinterpret_cast<const char*>(set.grid.elevations.data()), d * sizeof(double));
    out.write(reinterpret_cast<const char*>(set.grid.weights.data()), d * sizeof(double));
    std::vector<float> raw(set.irs.begin(), set.irs.end());
    out.write(reinterpret_cast<const char*>(raw.data()), raw.size() * sizeof(float));
    if (!out) throw FormatError("hrtf container: write failed");
}

void save_hrtf_file(const std::string& path, const HrtfSet& set) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open hrtf container for writing: " + path);
    save_hrtf(f, set);
}

HrtfSet resample_hrtf(const HrtfSet& set, double desired_fs) {
    if (!(desired_fs > 0.0)) throw ConfigError("resample_hrtf: invalid target rate");
    set.validate();
    if (desired_fs == set.fs) return set;

    const double ratio = desired_fs / set.fs;
    const int out_taps = static_cast<int>(std::ceil(set.taps * ratio));
    const double cutoff = std::min(1.0, ratio);  // relative to input Nyquist
    const double half_width = 32.0 / cutoff;

    HrtfSet out;
    out.grid = set.grid;
    out.fs = desired_fs;
    out.taps = out_taps;
    out.irs.assign(static_cast<std::size_t>(set.grid.n_dirs()) * 2 * out_taps, 0.0);
    for (int dir = 0; dir < set.grid.n_dirs(); ++dir) {
        for (int ear = 0; ear < 2; ++ear) {
            for (int n = 0; n < out_taps; ++n) {
                const double pos = n / ratio;  // input-time position
                const int k_lo = std::max(0, static_cast<int>(std::ceil(pos - half_width)));
                const int k_hi =
                    std::min(set.taps - 1, static_cast<int>(std::floor(pos + half_width)));
                double acc = 0.0;
                for (int k = k_lo; k <= k_hi; ++k) {
                    const double t = pos - k;
                    const double s = (t == 0.0)
                                         ? cutoff
                                         : std::sin(kPi * cutoff * t) / (kPi * t);
                    const double w = 0.5 * (1.0 + std::cos(kPi * t / half_width));
                    acc += set.ir(dir, ear, k) * s * w;
                }
                // 1/ratio keeps the filter's frequency response (a tone at a
                // shared frequency sees the same gain at either rate).
                out.ir(dir, ear, n) = acc / ratio;
            }
        }
    }
    return out;
}

namespace {

// Per-ear measured spectra on the grid: (D, n_bins).
Eigen::MatrixXcd measured_spectra(const HrtfSet& set, int ear, std::size_t nfft) {
    const std::size_t n_bins = nfft / 2 + 1;
    Eigen::MatrixXcd h(set.grid.n_dirs(), static_cast<Eigen::Index>(n_bins));
    std::vector<double> ir(set.taps);
    for (int dir = 0; dir < set.grid.n_dirs(); ++dir) {
        for (int t = 0; t < set.taps; ++t) ir[t] = set.ir(dir, ear, t);
        const auto bins = fft::rfft(ir, nfft);
        for (std::size_t f = 0; f < n_bins; ++f) h(dir, static_cast<Eigen::Index>(f)) = bins[f];
    }
    return h;
}

}  // namespace

ShHrtf project_ls(const HrtfSet& set, int order, std::size_t nfft) {
    set.validate();
    if (set.grid.n_dirs() < sh_channel_count(order))
        throw ConfigError("project_ls: under-determined grid for order " +
                          std::to_string(order));
    if (nfft < static_cast<std::size_t>(set.taps)) nfft = next_pow2(set.taps);

    ShHrtf out;
    out.order = order;
    out.mode = HrtfMode::LS;
    out.nfft = nfft;
    out.fs = set.fs;
    // The decode-side sign-convention flip is folded in here, and only here.
    // In the shared real-SH basis both the HRTF and the ARIR are expanded in
    // the same real functions, so the flip is the identity map and the
    // weighted analysis below already satisfies the binaural inner-product
    // identity.
    for (int ear = 0; ear < 2; ++ear)
        out.coeffs[ear] = sh_analysis(measured_spectra(set, ear, nfft), set.grid, order);
    return out;
}

ShHrtf magls(const HrtfSet& set, int order, double fc, std::size_t nfft) {
    set.validate();
    if (nfft < static_cast<std::size_t>(set.taps)) nfft = next_pow2(set.taps);
    if (!(fc > 0.0) || fc >= set.fs / 2.0)
        throw ConfigError("magls: crossover must lie in (0, fs/2)");

    ShHrtf out = project_ls(set, order, nfft);
    out.mode = HrtfMode::MAGLS;
    out.fc = fc;

    const ShBasisMatrix y = sh_basis(set.grid, order);
    const Eigen::MatrixXcd yc = y.matrix.cast<cplx>();
    Eigen::VectorXd w =
        Eigen::Map<const Eigen::VectorXd>(set.grid.weights.data(), set.grid.n_dirs());
    const std::size_t n_bins = out.n_bins();
    for (int ear = 0; ear < 2; ++ear) {
        const Eigen::MatrixXcd h = measured_spectra(set, ear, nfft);
        Eigen::MatrixXcd& c = out.coeffs[ear];
        // The Nyquist bin is excluded: the real spectrum forces it real, so
        // phase relaxation is undefined there and the LS value is kept.
        for (std::size_t f = 1; f + 1 < n_bins; ++f) {
            const double freq = static_cast<double>(f) * set.fs / nfft;
            if (freq <= fc) continue;
            // Phase continuation seeded from the previous (LS or MagLS) bin.
            const Eigen::Index fe = static_cast<Eigen::Index>(f);
            const Eigen::VectorXcd est = yc * c.col(fe - 1);
            Eigen::VectorXcd target(set.grid.n_dirs());
            for (int p = 0; p < set.grid.n_dirs(); ++p) {
                const double phase = std::arg(est(p));
                target(p) = std::abs(h(p, fe)) * std::exp(cplx(0.0, phase));
            }
            target.array() *= w.array().cast<cplx>();
            c.col(fe) = yc.transpose() * target;
        }
    }
    return out;
}

double default_magls_fc(int order, double c, double head_radius) {
    switch (order) {
        case 1: return 1200.0;
        case 3: return 2000.0;
        case 5: return 3500.0;
        case 7: return 4800.0;
        case 9: return 5000.0;
        default: break;
    }
    const double f_alias = order * c / (kTwoPi * head_radius);
    return std::clamp(f_alias, 1200.0, 5000.0);
}

std::vector<std::vector<double>> ShHrtf::sh_hrirs() const {
    std::vector<std::vector<double>> out;
    const int dim = sh_channel_count(order);
    out.reserve(static_cast<std::size_t>(dim) * 2);
    std::vector<cplx> bins(n_bins());
    for (int ch = 0; ch < dim; ++ch) {
        for (int ear = 0; ear < 2; ++ear) {
            for (std::size_t f = 0; f < n_bins(); ++f)
                bins[f] = coeffs[ear](ch, static_cast<Eigen::Index>(f));
            out.push_back(fft::irfft(bins, nfft));
        }
    }
    return out;
}

}  // namespace ambiroom
