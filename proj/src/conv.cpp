#include "ambiroom/conv.hpp"

#include <algorithm>

#include "ambiroom/fft.hpp"

namespace ambiroom {

ConvPlan plan_convolution(std::size_t n_sig, std::size_t n_fir) {
    ConvPlan p;
    if (n_fir * 8 < n_sig) {
        p.mode = ConvMode::OLA;
        p.block = 4 * next_pow2(n_fir);
        p.nfft = next_pow2(p.block + n_fir - 1);
    }
    return p;
}

std::vector<double> convolve_direct(const std::vector<double>& sig,
                                    const std::vector<double>& fir) {
    std::vector<double> out(sig.size() + fir.size() - 1, 0.0);
    for (std::size_t i = 0; i < sig.size(); ++i)
        for (std::size_t j = 0; j < fir.size(); ++j) out[i + j] += sig[i] * fir[j];
    return out;
}

std::vector<double> convolve_ola(const std::vector<double>& sig,
                                 const std::vector<double>& fir) {
    const ConvPlan p = plan_convolution(sig.size(), fir.size());
    const std::size_t block = p.block ? p.block : 4 * next_pow2(fir.size());
    const std::size_t nfft = p.nfft ? p.nfft : next_pow2(block + fir.size() - 1);
    const std::size_t n_bins = nfft / 2 + 1;

    const auto fir_bins = fft::rfft(fir, nfft);
    std::vector<double> out(sig.size() + fir.size() - 1, 0.0);
    std::vector<double> seg(block);
    for (std::size_t start = 0; start < sig.size(); start += block) {
        const std::size_t len = std::min(block, sig.size() - start);
        std::copy(sig.begin() + start, sig.begin() + start + len, seg.begin());
        std::fill(seg.begin() + len, seg.end(), 0.0);
        auto bins = fft::rfft(seg, nfft);
        for (std::size_t f = 0; f < n_bins; ++f) bins[f] *= fir_bins[f];
        const auto piece = fft::irfft(bins, nfft);
        const std::size_t keep = std::min(len + fir.size() - 1, out.size() - start);
        for (std::size_t i = 0; i < keep; ++i) out[start + i] += piece[i];
    }
    return out;
}

std::vector<double> convolve(const std::vector<double>& sig, const std::vector<double>& fir) {
    if (sig.empty() || fir.empty()) throw ConfigError("convolve: empty operand");
    if (plan_convolution(sig.size(), fir.size()).mode == ConvMode::OLA)
        return convolve_ola(sig, fir);
    return convolve_direct(sig, fir);
}

SpatialSignal convolve(const SpatialSignal& sig, const std::vector<double>& fir) {
    if (sig.time_domain() != TimeDomain::TIME)
        throw FormatError("convolve: signal must be in the time domain");
    SpatialSignal out(sig.n_channels(), sig.n_spatial(), sig.n_frames() + fir.size() - 1,
                      sig.fs(), TimeDomain::TIME, sig.space_domain());
    out.set_sh_order(sig.sh_order());
    out.set_grid(sig.grid());
    for (int c = 0; c < sig.n_channels(); ++c)
        for (int s = 0; s < sig.n_spatial(); ++s)
            out.set_real_frames(c, s, convolve(sig.real_frames(c, s), fir));
    return out;
}

}  // namespace ambiroom
