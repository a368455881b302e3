#include "ambiroom/processors.hpp"

#include <cmath>

#include "ambiroom/fft.hpp"
#include "ambiroom/sh.hpp"

namespace ambiroom {

namespace {

// Re-evaluates the coefficient spectra on the bin grid of a larger nfft via
// zero-padded time-domain SH HRIRs.
ShHrtf rebin_hrtf(const ShHrtf& h, std::size_t nfft) {
    if (nfft == h.nfft) return h;
    if (nfft < h.nfft)
        throw ConfigError("processor: transform shorter than the HRTF kernel");
    ShHrtf out = h;
    out.nfft = nfft;
    const auto hrirs = h.sh_hrirs();
    const int dim = sh_channel_count(h.order);
    for (int ear = 0; ear < 2; ++ear)
        out.coeffs[ear].resize(dim, static_cast<Eigen::Index>(nfft / 2 + 1));
    for (int ch = 0; ch < dim; ++ch) {
        for (int ear = 0; ear < 2; ++ear) {
            const auto bins = fft::rfft(hrirs[static_cast<std::size_t>(ch) * 2 + ear], nfft);
            for (std::size_t f = 0; f < bins.size(); ++f)
                out.coeffs[ear](ch, static_cast<Eigen::Index>(f)) = bins[f];
        }
    }
    return out;
}

}  // namespace

void Processor::check_input(const SpatialSignal& in) const {
    if (in.space_domain() != in_space())
        throw ConfigError("processor: wrong input space domain");
    if (in_space() == SpaceDomain::SH) {
        if (in.sh_order() > in_order())
            throw ConfigError("processor: signal order " + std::to_string(in.sh_order()) +
                              " exceeds processor order " + std::to_string(in_order()));
    } else if (in.n_spatial() != in_spatial()) {
        throw ConfigError("processor: expected " + std::to_string(in_spatial()) +
                          " spatial channels, got " + std::to_string(in.n_spatial()));
    }
}

SpatialSignal Processor::process(const SpatialSignal& in) const {
    check_input(in);
    SpatialSignal sig = in.clone();
    if (sig.time_domain() == TimeDomain::FREQ) sig.to_time();
    const std::size_t out_len = sig.n_frames() + std::max<std::size_t>(kernel_tail(), 1) - 1;
    sig.pad(out_len);
    sig.to_freq();

    const std::size_t nfft = sig.nfft();
    const auto k = kernel(nfft, sig.fs());
    const std::size_t n_bins = nfft / 2 + 1;
    const int in_sp = sig.n_spatial();
    const int out_sp = out_spatial();

    SpatialSignal out = SpatialSignal::freq_signal(sig.n_channels(), out_sp, nfft, sig.fs(),
                                                  out_len, out_space());
    if (out_space() == SpaceDomain::SH) out.set_sh_order(out_order());
    using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    for (int c = 0; c < sig.n_channels(); ++c) {
        Eigen::Map<RowMat> src(&sig.at(c, 0, 0), in_sp, static_cast<Eigen::Index>(n_bins));
        Eigen::Map<RowMat> dst(&out.at(c, 0, 0), out_sp, static_cast<Eigen::Index>(n_bins));
        for (std::size_t f = 0; f < n_bins; ++f) {
            const Eigen::Index fe = static_cast<Eigen::Index>(f);
            // Higher-order processors accept truncated (lower-order) input.
            dst.col(fe) = k[f].leftCols(in_sp) * src.col(fe);
        }
    }
    out.to_time();
    return out;
}

BinauralDecoder::BinauralDecoder(ShHrtf hrtf, int sh_order)
    : hrtf_(std::move(hrtf)), order_(sh_order < 0 ? hrtf_.order : sh_order) {
    if (order_ > hrtf_.order)
        throw ConfigError("BinauralDecoder: requested order exceeds the HRTF order");
    if (order_ < hrtf_.order) {
        const int dim = sh_channel_count(order_);
        for (int ear = 0; ear < 2; ++ear)
            hrtf_.coeffs[ear] = hrtf_.coeffs[ear].topRows(dim).eval();
        hrtf_.order = order_;
    }
}

std::vector<Eigen::MatrixXcd> BinauralDecoder::kernel(std::size_t nfft, double fs) const {
    if (fs != hrtf_.fs) throw ConfigError("BinauralDecoder: sample rate mismatch");
    const ShHrtf h = rebin_hrtf(hrtf_, nfft);
    const std::size_t n_bins = nfft / 2 + 1;
    const int dim = sh_channel_count(order_);
    std::vector<Eigen::MatrixXcd> k(n_bins, Eigen::MatrixXcd(2, dim));
    for (std::size_t f = 0; f < n_bins; ++f)
        for (int ear = 0; ear < 2; ++ear)
            k[f].row(ear) = h.coeffs[ear].col(static_cast<Eigen::Index>(f)).transpose();
    return k;
}

ArrayDecoder::ArrayDecoder(ArraySpec spec, int sh_order)
    : spec_(std::move(spec)), order_(sh_order) {
    spec_.validate();
    if (order_ < 0) throw ConfigError("ArrayDecoder: negative order");
    if (order_ > spec_.sm_order)
        throw ConfigError("ArrayDecoder: decode order exceeds the array steering order");
}

std::vector<Eigen::MatrixXcd> ArrayDecoder::kernel(std::size_t nfft, double fs) const {
    if (fs != spec_.fs) throw ConfigError("ArrayDecoder: sample rate mismatch");
    const std::size_t n_bins = nfft / 2 + 1;
    std::vector<double> freqs(n_bins);
    for (std::size_t f = 0; f < n_bins; ++f) freqs[f] = static_cast<double>(f) * fs / nfft;
    // Ambisonic decode assumes the far-field modal response.
    const RadialTerm radial = radial_coefficient(
        spec_, std::numeric_limits<double>::infinity(), freqs, true);
    const Eigen::MatrixXd y = sh_basis(spec_.capsule_dirs, order_).matrix;
    const int dim = sh_channel_count(order_);
    std::vector<Eigen::MatrixXcd> k(n_bins);
    Eigen::VectorXcd b_acn(dim);
    for (std::size_t f = 0; f < n_bins; ++f) {
        for (int n = 0; n <= order_; ++n)
            for (int m = -n; m <= n; ++m)
                b_acn(acn_index(n, m)) = radial.b(static_cast<Eigen::Index>(f), n);
        k[f] = y.cast<cplx>() * b_acn.asDiagonal();
    }
    return k;
}

AsmEncoder::AsmEncoder(ArraySpec spec, int sh_order, double eps)
    : spec_(std::move(spec)), order_(sh_order), eps_(eps) {
    spec_.validate();
    if (order_ < 0) throw ConfigError("AsmEncoder: negative order");
}

std::vector<Eigen::MatrixXcd> AsmEncoder::kernel(std::size_t nfft, double fs) const {
    if (fs != spec_.fs) throw ConfigError("AsmEncoder: sample rate mismatch");
    const SteeringMatrix v =
        steering_matrix(spec_, design_grid(order_, spec_.sm_order), nfft);
    return asm_filters(v, order_, eps_);
}

BsmRenderer::BsmRenderer(ArraySpec spec, ShHrtf hrtf, double eps, bool magls_pre,
                         double magls_fc)
    : spec_(std::move(spec)),
      hrtf_(std::move(hrtf)),
      eps_(eps),
      magls_pre_(magls_pre),
      magls_fc_(magls_fc) {
    spec_.validate();
}

std::vector<Eigen::MatrixXcd> BsmRenderer::kernel(std::size_t nfft, double fs) const {
    if (fs != spec_.fs || fs != hrtf_.fs)
        throw ConfigError("BsmRenderer: sample rate mismatch");
    const SteeringMatrix v =
        steering_matrix(spec_, design_grid(hrtf_.order, spec_.sm_order), nfft);
    return bsm_filters(v, rebin_hrtf(hrtf_, nfft), eps_, magls_pre_, magls_fc_);
}

ProcessorChain::ProcessorChain(std::vector<std::shared_ptr<const Processor>> stages)
    : stages_(std::move(stages)) {
    if (stages_.empty()) throw ConfigError("ProcessorChain: no stages");
    for (std::size_t i = 0; i + 1 < stages_.size(); ++i) {
        const auto& a = *stages_[i];
        const auto& b = *stages_[i + 1];
        if (a.out_space() != b.in_space() || a.out_spatial() != b.in_spatial())
            throw ConfigError("ProcessorChain: incompatible contracts between stages " +
                              std::to_string(i) + " and " + std::to_string(i + 1));
    }
}

std::size_t ProcessorChain::kernel_tail() const {
    std::size_t tail = 1;
    for (const auto& s : stages_) tail += std::max<std::size_t>(s->kernel_tail(), 1) - 1;
    return tail;
}

std::vector<Eigen::MatrixXcd> ProcessorChain::kernel(std::size_t nfft, double fs) const {
    auto k = stages_.front()->kernel(nfft, fs);
    for (std::size_t i = 1; i < stages_.size(); ++i) {
        const auto next = stages_[i]->kernel(nfft, fs);
        for (std::size_t f = 0; f < k.size(); ++f) k[f] = next[f] * k[f];
    }
    return k;
}

}  // namespace ambiroom
