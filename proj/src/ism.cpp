#include "ambiroom/ism.hpp"

#include <cmath>

#include "ambiroom/grids.hpp"

namespace ambiroom {

void RoomSpec::validate() const {
    if (!(dimensions.x > 0.0 && dimensions.y > 0.0 && dimensions.z > 0.0))
        throw GeometryError("room dimensions must be positive");
    for (double a : absorption)
        if (!(a >= 0.0 && a < 1.0))
            throw GeometryError("wall absorption must lie in [0, 1)");
    if (max_ism_order < 0) throw GeometryError("max_ism_order must be >= 0");
    if (!(fs > 0.0) || !(c > 0.0)) throw GeometryError("fs and c must be positive");
}

namespace {

void check_inside(const Vec3& p, const Vec3& dims, const char* what) {
    if (!(p.x > 0.0 && p.x < dims.x && p.y > 0.0 && p.y < dims.y && p.z > 0.0 &&
          p.z < dims.z))
        throw GeometryError(std::string(what) + " must lie strictly inside the room");
}

struct AxisImage {
    int q = 0;       // lattice cell index
    int u = 0;       // 0: even parity, 1: mirrored
    int hits_lo = 0; // reflections off the wall at coordinate 0
    int hits_hi = 0; // reflections off the wall at coordinate L
    double pos = 0.0;

    int hits() const { return hits_lo + hits_hi; }
};

std::vector<AxisImage> axis_images(double src, double len, int max_order) {
    std::vector<AxisImage> out;
    const int q_max = max_order / 2 + 1;
    for (int q = -q_max; q <= q_max; ++q) {
        for (int u = 0; u <= 1; ++u) {
            AxisImage a;
            a.q = q;
            a.u = u;
            a.hits_lo = std::abs(q - u);
            a.hits_hi = std::abs(q);
            if (a.hits() > max_order) continue;
            a.pos = (1 - 2 * u) * src + 2.0 * q * len;
            out.push_back(a);
        }
    }
    return out;
}

}  // namespace

std::vector<ImageSource> compute_images(const RoomSpec& room, const Vec3& source,
                                        const Vec3& receiver) {
    room.validate();
    check_inside(source, room.dimensions, "source");
    check_inside(receiver, room.dimensions, "receiver");

    // Pressure reflection coefficient per wall from energy absorption.
    std::array<double, 6> beta{};
    for (int i = 0; i < 6; ++i) beta[i] = std::sqrt(1.0 - room.absorption[i]);

    const int r_max = room.max_ism_order;
    const auto xs = axis_images(source.x, room.dimensions.x, r_max);
    const auto ys = axis_images(source.y, room.dimensions.y, r_max);
    const auto zs = axis_images(source.z, room.dimensions.z, r_max);

    std::vector<ImageSource> images;
    for (const auto& ax : xs) {
        for (const auto& ay : ys) {
            if (ax.hits() + ay.hits() > r_max) continue;
            for (const auto& az : zs) {
                const int order = ax.hits() + ay.hits() + az.hits();
                if (order > r_max) continue;
                ImageSource img;
                img.position = {ax.pos, ay.pos, az.pos};
                img.reflection_order = order;
                const Vec3 d = img.position - receiver;
                img.distance = d.norm();
                if (img.distance <= 0.0)
                    throw GeometryError("image source coincides with the receiver");
                double refl = std::pow(beta[0], ax.hits_lo) * std::pow(beta[1], ax.hits_hi) *
                              std::pow(beta[2], ay.hits_lo) * std::pow(beta[3], ay.hits_hi) *
                              std::pow(beta[4], az.hits_lo) * std::pow(beta[5], az.hits_hi);
                img.amplitude = refl / img.distance;
                img.delay_samples = img.distance * room.fs / room.c;
                images.push_back(img);
            }
        }
    }
    return images;
}

std::pair<double, double> image_direction(const ImageSource& img, const Vec3& receiver) {
    const Vec3 d = img.position - receiver;
    if (d.norm() <= 0.0) throw GeometryError("degenerate geometry: zero distance image");
    return unit_to_direction(d);
}

}  // namespace ambiroom
