#include "ambiroom/synth_hrtf.hpp"

#include <cmath>

#include "ambiroom/array.hpp"
#include "ambiroom/fft.hpp"
#include "ambiroom/special.hpp"

namespace ambiroom {

HrtfSet generate_synthetic_hrtf(const DirectionGrid& grid, const SyntheticHrtfParams& p) {
    grid.validate();
    if (p.taps < 2 || next_pow2(static_cast<std::size_t>(p.taps)) !=
                          static_cast<std::size_t>(p.taps))
        throw ConfigError("generate_synthetic_hrtf: taps must be a power of two");
    if (!(p.head_radius > 0.0) || !(p.fs > 0.0) || p.modal_order < 0)
        throw ConfigError("generate_synthetic_hrtf: invalid parameters");

    // Reuse the rigid-sphere modal machinery; the capsule grid is unused by
    // radial_coefficient.
    ArraySpec sphere;
    sphere.capsule_dirs.azimuths = {0.0};
    sphere.capsule_dirs.elevations = {0.0};
    sphere.capsule_dirs.weights = {kFourPi};
    sphere.radius = p.head_radius;
    sphere.sphere = SphereType::RIGID;
    sphere.source_model = SourceModel::PLANE_WAVE;
    sphere.sm_order = p.modal_order;
    sphere.fs = p.fs;
    sphere.c = p.c;
    sphere.mask_enabled = false;

    const std::size_t nfft = static_cast<std::size_t>(p.taps);
    const std::size_t n_bins = nfft / 2 + 1;
    std::vector<double> freqs(n_bins);
    for (std::size_t f = 0; f < n_bins; ++f) freqs[f] = static_cast<double>(f) * p.fs / nfft;
    const RadialTerm radial = radial_coefficient(
        sphere, std::numeric_limits<double>::infinity(), freqs, false);

    HrtfSet set;
    set.grid = grid;
    set.fs = p.fs;
    set.taps = p.taps;
    set.irs.assign(static_cast<std::size_t>(grid.n_dirs()) * 2 * p.taps, 0.0);

    const double t0 = (p.taps / 2) / p.fs;  // causal bulk delay
    const Vec3 ear[2] = {{0.0, 1.0, 0.0}, {0.0, -1.0, 0.0}};  // left, right
    std::vector<cplx> bins(n_bins);
    for (int d = 0; d < grid.n_dirs(); ++d) {
        const Vec3 dir = grid.unit_vector(d);
        for (int e = 0; e < 2; ++e) {
            const double cos_theta = std::clamp(dir.dot(ear[e]), -1.0, 1.0);
            const auto pn = legendre_pn(p.modal_order, cos_theta);
            for (std::size_t f = 0; f < n_bins; ++f) {
                cplx h = 0.0;
                for (int n = 0; n <= p.modal_order; ++n)
                    h += radial.b(static_cast<Eigen::Index>(f), n) * (2.0 * n + 1.0) /
                         kFourPi * pn[n];
                const double w = kTwoPi * freqs[f];
                bins[f] = h * std::exp(cplx(0.0, -w * t0));
            }
            bins[0] = bins[0].real();
            bins[n_bins - 1] = bins[n_bins - 1].real();
            const auto ir = fft::irfft(bins, nfft);
            for (int t = 0; t < p.taps; ++t) set.ir(d, e, t) = ir[t];
        }
    }
    return set;
}

}  // namespace ambiroom
