#pragma once

#include "ambiroom/grids.hpp"
#include "ambiroom/hrtf.hpp"
#include "ambiroom/types.hpp"

namespace ambiroom {

// Rigid-sphere head model used to synthesize an HRTF set when no measured
// container is supplied.
struct SyntheticHrtfParams {
    double head_radius = 0.0875;  // m
    double fs = 48000.0;
    int taps = 256;        // power of two
    int modal_order = 30;  // scattering series truncation
    double c = kDefaultSpeedOfSound;
};

// Diffraction around a rigid sphere with ears at azimuth +/- 90 degrees
// (left ear = +y). DC gain is 1 by construction; a causal bulk delay of
// taps/2 samples is applied.
HrtfSet generate_synthetic_hrtf(const DirectionGrid& grid,
                                const SyntheticHrtfParams& params = {});

}  // namespace ambiroom
