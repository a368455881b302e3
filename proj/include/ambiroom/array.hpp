#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "ambiroom/grids.hpp"
#include "ambiroom/hrtf.hpp"
#include "ambiroom/types.hpp"

namespace ambiroom {

enum class SphereType { RIGID, OPEN };
enum class SourceModel { PLANE_WAVE, POINT_SOURCE };

struct ArraySpec {
    DirectionGrid capsule_dirs;  // M capsules
    double radius = 0.042;
    SphereType sphere = SphereType::RIGID;
    SourceModel source_model = SourceModel::PLANE_WAVE;
    int sm_order = 0;
    double fs = 48000.0;
    double c = kDefaultSpeedOfSound;
    // Sigmoid order mask w_n = 1 / (1 + exp(s * (n - ka - n0))).
    bool mask_enabled = true;
    double mask_steepness = 5.0;
    double mask_offset = 1.0;

    void validate() const;
};

// Uniform-ish capsule layout: Gauss product grid with at least n_mics
// directions, truncated to n_mics with renormalized weights.
DirectionGrid capsule_layout(int n_mics);

// Modal radial coefficients B_n per frequency bin: (n_bins, sm_order + 1).
struct RadialTerm {
    Eigen::MatrixXcd b;
    std::vector<double> freqs;
    SphereType sphere = SphereType::OPEN;
    SourceModel source_model = SourceModel::PLANE_WAVE;
    double source_distance = std::numeric_limits<double>::infinity();
};

double sigmoid_order_mask(const ArraySpec& spec, int n, double ka);

// source_distance in meters; infinity selects the plane-wave form.
// `masked` multiplies in the sigmoid order mask.
RadialTerm radial_coefficient(const ArraySpec& spec, double source_distance,
                              const std::vector<double>& freqs, bool masked = false);

// Frequency-dependent transfer from S source directions to M capsules.
struct SteeringMatrix {
    std::vector<Eigen::MatrixXcd> v;  // per bin, (M, S)
    std::vector<double> freqs;
    DirectionGrid source_dirs;
};

SteeringMatrix steering_matrix(const ArraySpec& spec, const DirectionGrid& sources,
                               std::size_t nfft,
                               double source_distance = std::numeric_limits<double>::infinity());

// Scale-invariant Tikhonov default: eps = 1e-3 * trace(V V^H) / M per bin.
double default_tikhonov_eps(const Eigen::MatrixXcd& v, double lambda = 1e-3);

// ASM encoding filters, per bin ((order+1)^2, M). eps < 0 selects the
// per-bin default damping.
std::vector<Eigen::MatrixXcd> asm_filters(const SteeringMatrix& v, int order, double eps);

// BSM filters, per bin (2, M), ear 0 = left. The HRTF is synthesized on the
// steering matrix's source grid from the SH representation.
std::vector<Eigen::MatrixXcd> bsm_filters(const SteeringMatrix& v, const ShHrtf& hrtf,
                                          double eps, bool magls_pre,
                                          double magls_fc = 0.0);

// Design grid for ASM/BSM matching solves.
DirectionGrid design_grid(int order, int sm_order);

}  // namespace ambiroom
