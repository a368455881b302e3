#include "ambiroom/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

namespace ambiroom::fft {

namespace {
Stats g_stats;
std::mutex g_fftw_mutex;  // FFTW planning is not thread-safe

// Plans are cached per transform size and reused with the new-array execute
// interface; FFTW_UNALIGNED makes them valid for any caller buffer.
fftw_plan forward_plan(std::size_t nfft) {
    static std::map<std::size_t, fftw_plan> cache;
    auto it = cache.find(nfft);
    if (it != cache.end()) return it->second;
    std::vector<double> in(nfft);
    std::vector<cplx> out(nfft / 2 + 1);
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(nfft), in.data(),
                                          reinterpret_cast<fftw_complex*>(out.data()),
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(nfft, plan);
    return plan;
}

fftw_plan inverse_plan(std::size_t nfft) {
    static std::map<std::size_t, fftw_plan> cache;
    auto it = cache.find(nfft);
    if (it != cache.end()) return it->second;
    std::vector<cplx> in(nfft / 2 + 1);
    std::vector<double> out(nfft);
    fftw_plan plan = fftw_plan_dft_c2r_1d(static_cast<int>(nfft),
                                          reinterpret_cast<fftw_complex*>(in.data()),
                                          out.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(nfft, plan);
    return plan;
}
}  // namespace

Stats stats() { return g_stats; }
void reset_stats() { g_stats = Stats{}; }

std::vector<cplx> rfft(const std::vector<double>& in, std::size_t nfft) {
    if (nfft == 0) throw NumericalError("rfft: nfft must be positive");
    std::vector<double> buf(nfft, 0.0);
    std::memcpy(buf.data(), in.data(), std::min(in.size(), nfft) * sizeof(double));
    std::vector<cplx> out(nfft / 2 + 1);
    {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        fftw_execute_dft_r2c(forward_plan(nfft), buf.data(),
                             reinterpret_cast<fftw_complex*>(out.data()));
    }
    ++g_stats.forward;
    return out;
}

std::vector<double> irfft(const std::vector<cplx>& bins, std::size_t nfft) {
    if (bins.size() != nfft / 2 + 1)
        throw NumericalError("irfft: bin count does not match nfft");
    std::vector<cplx> tmp = bins;  // c2r destroys its input
    std::vector<double> out(nfft);
    {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        fftw_execute_dft_c2r(inverse_plan(nfft),
                             reinterpret_cast<fftw_complex*>(tmp.data()), out.data());
    }
    const double scale = 1.0 / static_cast<double>(nfft);
    for (double& v : out) v *= scale;
    ++g_stats.inverse;
    return out;
}

}  // namespace ambiroom::fft
