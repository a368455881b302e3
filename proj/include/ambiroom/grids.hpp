#pragma once

#include <utility>
#include <vector>

#include "ambiroom/types.hpp"

namespace ambiroom {

// Sampling of the sphere with quadrature weights. Azimuth in [0, 2pi),
// elevation in [-pi/2, pi/2], weights sum to 4pi.
struct DirectionGrid {
    std::vector<double> azimuths;
    std::vector<double> elevations;
    std::vector<double> weights;

    int n_dirs() const { return static_cast<int>(azimuths.size()); }

    // Throws FormatError on mismatched lengths, non-positive weights, or
    // weight sum off 4pi by more than 1e-6 relative.
    void validate() const;

    Vec3 unit_vector(int p) const;
};

Vec3 direction_to_unit(double azimuth, double elevation);

// (azimuth, elevation) of a unit (or any nonzero) vector. Poles map to
// azimuth 0 by convention.
std::pair<double, double> unit_to_direction(const Vec3& v);

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Product grid: n_theta Gauss-Legendre rings x n_phi uniform azimuths.
// Quadrature is exact for spherical harmonics up to degree
// min(2*n_theta - 1, n_phi - 1).
DirectionGrid gauss_product_grid(int n_theta, int n_phi);

// Smallest product grid whose quadrature is exact to degree 2*order, as
// required for order-`order` SH analysis.
DirectionGrid analysis_grid(int order);

}  // namespace ambiroom
