#pragma once

#include <Eigen/Dense>
#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "ambiroom/grids.hpp"
#include "ambiroom/types.hpp"

namespace ambiroom {

// Measured (or synthetic) HRIR set on a direction grid with quadrature
// weights. irs indexed (direction, ear, tap); ear 0 = left.
struct HrtfSet {
    DirectionGrid grid;
    int taps = 0;
    double fs = 0.0;
    std::vector<double> irs;  // D * 2 * taps, direction-major, ear-major

    double& ir(int dir, int ear, int tap) {
        return irs[(static_cast<std::size_t>(dir) * 2 + ear) * taps + tap];
    }
    double ir(int dir, int ear, int tap) const {
        return irs[(static_cast<std::size_t>(dir) * 2 + ear) * taps + tap];
    }
    void validate() const;
};

enum class HrtfMode { LS, MAGLS };

// SH-domain HRTF coefficients. coeffs[ear] is ((order+1)^2, n_bins) with
// n_bins = nfft/2 + 1.
struct ShHrtf {
    std::array<Eigen::MatrixXcd, 2> coeffs;
    int order = 0;
    HrtfMode mode = HrtfMode::LS;
    double fc = 0.0;  // crossover, MAGLS only
    std::size_t nfft = 0;
    double fs = 0.0;

    std::size_t n_bins() const { return nfft / 2 + 1; }

    // Time-domain SH HRIRs (inverse transform of the coefficient spectra),
    // ((order+1)^2 * 2) slices of nfft samples each.
    std::vector<std::vector<double>> sh_hrirs() const;
};

// Binary container ("SHRM", version 1, little-endian). See
// docs/hrtf_container.md for the layout and a SOFA conversion recipe.
HrtfSet load_hrtf(std::istream& in);
HrtfSet load_hrtf_file(const std::string& path);
void save_hrtf(std::ostream& out, const HrtfSet& set);
void save_hrtf_file(const std::string& path, const HrtfSet& set);

// Band-limited polyphase resampling per IR; no-op when rates match.
HrtfSet resample_hrtf(const HrtfSet& set, double desired_fs);

// Weighted least-squares SH projection at every bin.
ShHrtf project_ls(const HrtfSet& set, int order, std::size_t nfft = 0);

// Magnitude least squares: LS below fc, ascending-frequency phase
// continuation above it.
ShHrtf magls(const HrtfSet& set, int order, double fc, std::size_t nfft = 0);

// Paper defaults for the MagLS crossover per order; other orders fall back
// to the aliasing-frequency rule clamped to [1.2, 5.0] kHz.
double default_magls_fc(int order, double c = kDefaultSpeedOfSound, double head_radius = 0.085);

}  // namespace ambiroom
