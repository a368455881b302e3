#include "ambiroom/grids.hpp"

#include <algorithm>
#include <cmath>

namespace ambiroom {

void DirectionGrid::validate() const {
    const std::size_t n = azimuths.size();
    if (elevations.size() != n || weights.size() != n)
        throw FormatError("direction grid: array length mismatch");
    if (n == 0) throw FormatError("direction grid: empty");
    double wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(weights[i] > 0.0))
            throw FormatError("direction grid: non-positive weight at index " + std::to_string(i));
        wsum += weights[i];
    }
    if (std::abs(wsum - kFourPi) > 1e-6 * kFourPi)
        throw FormatError("direction grid: weights sum to " + std::to_string(wsum) +
                          ", expected 4*pi");
}

Vec3 DirectionGrid::unit_vector(int p) const {
    return direction_to_unit(azimuths[p], elevations[p]);
}

Vec3 direction_to_unit(double azimuth, double elevation) {
    const double ce = std::cos(elevation);
    return {ce * std::cos(azimuth), ce * std::sin(azimuth), std::sin(elevation)};
}

std::pair<double, double> unit_to_direction(const Vec3& v) {
    const double r = v.norm();
    if (r == 0.0) throw GeometryError("zero-length direction vector");
    const double el = std::asin(std::clamp(v.z / r, -1.0, 1.0));
    double az = std::atan2(v.y, v.x);
    if (std::abs(v.x) < 1e-300 && std::abs(v.y) < 1e-300) az = 0.0;  // pole convention
    if (az < 0.0) az += kTwoPi;
    if (az >= kTwoPi) az = 0.0;
    return {az, el};
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Tricomi initial guess, Newton refinement on P_n.
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

DirectionGrid gauss_product_grid(int n_theta, int n_phi) {
    if (n_theta < 1 || n_phi < 1) throw ConfigError("gauss_product_grid: counts must be >= 1");
    std::vector<double> x, wx;
    gauss_legendre(n_theta, x, wx);
    DirectionGrid g;
    g.azimuths.reserve(static_cast<std::size_t>(n_theta) * n_phi);
    for (int i = 0; i < n_theta; ++i) {
        const double el = std::asin(x[i]);  // x = cos(colatitude) = sin(elevation)
        const double w = wx[i] * kTwoPi / n_phi;
        for (int j = 0; j < n_phi; ++j) {
            g.azimuths.push_back(kTwoPi * j / n_phi);
            g.elevations.push_back(el);
            g.weights.push_back(w);
        }
    }
    return g;
}

DirectionGrid analysis_grid(int order) {
    if (order < 0) throw ConfigError("analysis_grid: negative order");
    return gauss_product_grid(order + 1, 2 * order + 1);
}

}  // namespace ambiroom
