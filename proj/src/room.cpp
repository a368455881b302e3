#include "ambiroom/room.hpp"

#include <cmath>

#include "ambiroom/conv.hpp"
#include "ambiroom/sh.hpp"

namespace ambiroom {

void Scene::validate() const {
    room.validate();
    if (sources.empty()) throw ConfigError("scene: at least one source required");
    if (sh_order < 0) throw ConfigError("scene: negative SH order");
    if (frac_delay_taps < 2 || frac_delay_taps % 2 != 0)
        throw ConfigError("scene: fractional delay taps must be even and >= 2");
}

FractionalDelay fractional_delay_kernel(double delay, int n_taps) {
    if (delay < 0.0) throw ConfigError("fractional_delay_kernel: negative delay");
    FractionalDelay fd;
    const double whole = std::floor(delay);
    const double frac = delay - whole;
    if (frac == 0.0) {
        fd.taps = {1.0};
        fd.offset = static_cast<long>(whole);
        return fd;
    }
    const int center = n_taps / 2 - 1;
    fd.taps.resize(n_taps);
    for (int k = 0; k < n_taps; ++k) {
        const double t = k - center - frac;
        const double s = (t == 0.0) ? 1.0 : std::sin(kPi * t) / (kPi * t);
        const double w = 0.5 * (1.0 + std::cos(kTwoPi * t / n_taps));
        fd.taps[k] = s * w;
    }
    fd.offset = static_cast<long>(whole) - center;
    return fd;
}

SpatialSignal compute_arir(const Scene& scene) {
    scene.validate();
    const int n_src = static_cast<int>(scene.sources.size());
    const int n_coeff = sh_channel_count(scene.sh_order);

    std::vector<std::vector<ImageSource>> images(n_src);
    double max_delay = 0.0;
    for (int s = 0; s < n_src; ++s) {
        images[s] = compute_images(scene.room, scene.sources[s].position, scene.receiver);
        for (const auto& img : images[s]) max_delay = std::max(max_delay, img.delay_samples);
    }
    const std::size_t length =
        static_cast<std::size_t>(std::ceil(max_delay)) + scene.frac_delay_taps + 1;

    SpatialSignal arir = SpatialSignal::sh_time(n_src, scene.sh_order, length, scene.room.fs);
    for (int s = 0; s < n_src; ++s) {
        for (const auto& img : images[s]) {
            const auto [az, el] = image_direction(img, scene.receiver);
            const Eigen::VectorXd y = sh_vector(az, el, scene.sh_order);
            const FractionalDelay fd =
                fractional_delay_kernel(img.delay_samples, scene.frac_delay_taps);
            for (int ch = 0; ch < n_coeff; ++ch) {
                const double coef = img.amplitude * y(ch);
                for (std::size_t k = 0; k < fd.taps.size(); ++k) {
                    const long t = fd.offset + static_cast<long>(k);
                    if (t < 0) continue;  // sub-kernel distances clip at t = 0
                    arir.at(s, ch, static_cast<std::size_t>(t)) += coef * fd.taps[k];
                }
            }
        }
    }
    return arir;
}

SpatialSignal compute_amb(const Scene& scene) {
    for (const auto& src : scene.sources)
        if (!src.dry) throw ConfigError("compute_amb: every source needs a dry signal");

    SpatialSignal arir = compute_arir(scene);
    const std::size_t arir_len = arir.n_frames();
    std::size_t max_dry = 1;
    for (const auto& src : scene.sources) max_dry = std::max(max_dry, src.dry->size());
    const std::size_t out_len = arir_len + max_dry - 1;

    SpatialSignal out = SpatialSignal::sh_time(1, scene.sh_order, out_len, scene.room.fs);
    for (int s = 0; s < arir.n_channels(); ++s) {
        const std::vector<double>& dry = *scene.sources[s].dry;
        for (int ch = 0; ch < arir.n_spatial(); ++ch) {
            const auto conv = convolve(dry, arir.real_frames(s, ch));
            for (std::size_t t = 0; t < conv.size(); ++t) out.at(0, ch, t) += conv[t];
        }
    }
    return out;
}

}  // namespace ambiroom
