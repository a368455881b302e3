#pragma once

#include <cstdint>
#include <vector>

#include "ambiroom/types.hpp"

namespace ambiroom::fft {

// Execution counters, used by tests that assert transform budgets
// (e.g. a collapsed processor chain doing exactly one forward/inverse pair).
struct Stats {
    std::uint64_t forward = 0;
    std::uint64_t inverse = 0;
};

Stats stats();
void reset_stats();

// Real-input forward transform: nfft real samples -> nfft/2+1 bins.
// Input shorter than nfft is zero padded.
std::vector<cplx> rfft(const std::vector<double>& in, std::size_t nfft);

// Inverse of rfft, already scaled by 1/nfft. Returns nfft samples.
std::vector<double> irfft(const std::vector<cplx>& bins, std::size_t nfft);

}  // namespace ambiroom::fft
