#pragma once

#include <Eigen/Dense>

#include "ambiroom/grids.hpp"
#include "ambiroom/signal.hpp"
#include "ambiroom/types.hpp"

namespace ambiroom {

// Real spherical harmonics, ACN ordering (index n*n+n+m), N3D normalization,
// no Condon-Shortley phase. Shared convention for every module.

struct ShBasisMatrix {
    Eigen::MatrixXd matrix;  // (n_dirs, (order+1)^2)
    int order = 0;
};

// Basis row for a single direction.
Eigen::VectorXd sh_vector(double azimuth, double elevation, int order);

ShBasisMatrix sh_basis(const DirectionGrid& grid, int order);

// Quadrature analysis: coeff_nm = sum_p w_p Y_nm(dir_p) value_p, one column
// per channel/bin. Requires grid weights valid to degree 2*order.
Eigen::MatrixXcd sh_analysis(const Eigen::MatrixXcd& values, const DirectionGrid& grid,
                             int order);
Eigen::MatrixXd sh_analysis(const Eigen::MatrixXd& values, const DirectionGrid& grid,
                            int order);

// Rotation matrix on real SH coefficient vectors. Euler convention is
// intrinsic z-y-z: alpha about z, beta about the new y, gamma about the new z.
// Block diagonal with one (2n+1) block per degree.
struct WignerDMatrix {
    Eigen::MatrixXd matrix;  // ((order+1)^2, (order+1)^2)
    int order = 0;
    double alpha = 0.0, beta = 0.0, gamma = 0.0;

    bool pure_azimuth() const { return beta == 0.0 && gamma == 0.0; }
};

WignerDMatrix wigner_d_matrix(int order, double alpha, double beta, double gamma);

// The 3x3 rotation of unit vectors matching wigner_d_matrix (used by the
// rotation-evaluation consistency tests).
Eigen::Matrix3d euler_zyz_matrix(double alpha, double beta, double gamma);

// Left-multiplies every (channel, frame) coefficient vector by D.
void rotate_sh(SpatialSignal& sig, const WignerDMatrix& d);

// Fast path for head-yaw sweeps: closed-form cos/sin pair rotation, never
// forms the dense matrix.
void rotate_sh_azimuth(SpatialSignal& sig, double alpha);

}  // namespace ambiroom
