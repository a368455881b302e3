#pragma once

#include <vector>

#include "ambiroom/signal.hpp"
#include "ambiroom/types.hpp"

namespace ambiroom {

enum class ConvMode { DIRECT, OLA };

struct ConvPlan {
    ConvMode mode = ConvMode::DIRECT;
    std::size_t block = 0;  // OLA segment length
    std::size_t nfft = 0;   // per-block transform size
};

// Overlap-add is chosen when n_fir * 8 < n_sig.
ConvPlan plan_convolution(std::size_t n_sig, std::size_t n_fir);

// Full convolution, length n_sig + n_fir - 1, mode per plan_convolution.
std::vector<double> convolve(const std::vector<double>& sig, const std::vector<double>& fir);

std::vector<double> convolve_direct(const std::vector<double>& sig,
                                    const std::vector<double>& fir);
std::vector<double> convolve_ola(const std::vector<double>& sig,
                                 const std::vector<double>& fir);

// Applies one FIR to every (channel, spatial) slice of a time-domain signal.
SpatialSignal convolve(const SpatialSignal& sig, const std::vector<double>& fir);

}  // namespace ambiroom
