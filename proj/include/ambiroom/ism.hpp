#pragma once

#include <array>
#include <vector>

#include "ambiroom/types.hpp"

namespace ambiroom {

struct RoomSpec {
    Vec3 dimensions;
    // Energy absorption per wall: {x-, x+, y-, y+, z-, z+}, each in [0, 1).
    std::array<double, 6> absorption{};
    int max_ism_order = 0;
    double fs = 48000.0;
    double c = kDefaultSpeedOfSound;

    void set_uniform_absorption(double alpha) { absorption.fill(alpha); }
    void validate() const;
};

struct ImageSource {
    Vec3 position;
    int reflection_order = 0;
    double amplitude = 0.0;      // wall reflection product / distance
    double distance = 0.0;       // m, to the receiver
    double delay_samples = 0.0;  // fractional, distance * fs / c
};

// Shoebox mirror lattice with total wall-hit count <= max_ism_order.
// Deterministic lexicographic ordering over the lattice indices.
std::vector<ImageSource> compute_images(const RoomSpec& room, const Vec3& source,
                                        const Vec3& receiver);

// Arrival direction of the image at the receiver, azimuth in [0, 2pi),
// elevation in [-pi/2, pi/2]; poles map to azimuth 0.
std::pair<double, double> image_direction(const ImageSource& img, const Vec3& receiver);

}  // namespace ambiroom
