#pragma once

#include <optional>
#include <vector>

#include "ambiroom/ism.hpp"
#include "ambiroom/signal.hpp"
#include "ambiroom/types.hpp"

namespace ambiroom {

struct SceneSource {
    Vec3 position;
    std::optional<std::vector<double>> dry;  // required by compute_amb
};

struct Scene {
    RoomSpec room;
    std::vector<SceneSource> sources;
    Vec3 receiver;
    int sh_order = 0;
    int frac_delay_taps = 32;

    void validate() const;
};

struct FractionalDelay {
    std::vector<double> taps;
    long offset = 0;  // integer placement of taps[0]
};

// Hann-windowed sinc whose group delay (taps placed at `offset`) equals
// `delay`. Integer delays collapse to a single unit tap.
FractionalDelay fractional_delay_kernel(double delay, int n_taps = 32);

// Per-source ARIR: SpatialSignal [SH, TIME] with one channel per source.
SpatialSignal compute_arir(const Scene& scene);

// Per-source ARIRs convolved with their dry signals and summed into one
// SH stream.
SpatialSignal compute_amb(const Scene& scene);

}  // namespace ambiroom
