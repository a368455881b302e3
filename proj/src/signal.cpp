#include "ambiroom/signal.hpp"

#include <cmath>

#include "ambiroom/fft.hpp"
#include "ambiroom/sh.hpp"

namespace ambiroom {

SpatialSignal::SpatialSignal(int n_channels, int n_spatial, std::size_t n_frames, double fs,
                             TimeDomain td, SpaceDomain sd)
    : n_channels_(n_channels),
      n_spatial_(n_spatial),
      n_frames_(n_frames),
      fs_(fs),
      time_domain_(td),
      space_domain_(sd),
      data_(static_cast<std::size_t>(n_channels) * n_spatial * n_frames) {
    if (n_channels < 1 || n_spatial < 1 || n_frames < 1)
        throw ConfigError("SpatialSignal: all dimensions must be positive");
    if (td == TimeDomain::TIME) time_length_ = n_frames;
}

SpatialSignal SpatialSignal::sh_time(int n_channels, int order, std::size_t n_frames,
                                     double fs) {
    SpatialSignal s(n_channels, sh_channel_count(order), n_frames, fs, TimeDomain::TIME,
                    SpaceDomain::SH);
    s.sh_order_ = order;
    return s;
}

SpatialSignal SpatialSignal::freq_signal(int n_channels, int n_spatial, std::size_t nfft,
                                         double fs, std::size_t time_length, SpaceDomain sd) {
    if (nfft < 2 || next_pow2(nfft) != nfft)
        throw ConfigError("freq_signal: nfft must be a power of two");
    SpatialSignal s(n_channels, n_spatial, nfft / 2 + 1, fs, TimeDomain::FREQ, sd);
    s.nfft_ = nfft;
    s.time_length_ = time_length;
    return s;
}

namespace {
SpatialSignal::ConversionStats g_conv_stats;
}

SpatialSignal::ConversionStats SpatialSignal::conversion_stats() { return g_conv_stats; }
void SpatialSignal::reset_conversion_stats() { g_conv_stats = {}; }

void SpatialSignal::pad(std::size_t new_len) {
    if (time_domain_ != TimeDomain::TIME) throw FormatError("pad: signal not in time domain");
    if (new_len < n_frames_) throw ConfigError("pad: cannot shrink");
    if (new_len == n_frames_) return;
    std::vector<cplx> out(static_cast<std::size_t>(n_channels_) * n_spatial_ * new_len);
    for (int c = 0; c < n_channels_; ++c)
        for (int s = 0; s < n_spatial_; ++s)
            for (std::size_t f = 0; f < n_frames_; ++f)
                out[(static_cast<std::size_t>(c) * n_spatial_ + s) * new_len + f] = at(c, s, f);
    data_ = std::move(out);
    n_frames_ = new_len;
    time_length_ = new_len;
}

std::vector<double> SpatialSignal::real_frames(int c, int s) const {
    std::vector<double> out(n_frames_);
    for (std::size_t f = 0; f < n_frames_; ++f) out[f] = at(c, s, f).real();
    return out;
}

void SpatialSignal::set_real_frames(int c, int s, const std::vector<double>& v) {
    if (v.size() != n_frames_) throw ConfigError("set_real_frames: length mismatch");
    for (std::size_t f = 0; f < n_frames_; ++f) at(c, s, f) = v[f];
}

void SpatialSignal::to_freq() {
    if (time_domain_ == TimeDomain::FREQ) return;
    ++g_conv_stats.to_freq;
    time_length_ = n_frames_;
    nfft_ = next_pow2(n_frames_);
    const std::size_t n_bins = nfft_ / 2 + 1;
    std::vector<cplx> out(static_cast<std::size_t>(n_channels_) * n_spatial_ * n_bins);
    for (int c = 0; c < n_channels_; ++c) {
        for (int s = 0; s < n_spatial_; ++s) {
            const auto bins = fft::rfft(real_frames(c, s), nfft_);
            cplx* dst = &out[(static_cast<std::size_t>(c) * n_spatial_ + s) * n_bins];
            std::copy(bins.begin(), bins.end(), dst);
        }
    }
    data_ = std::move(out);
    n_frames_ = n_bins;
    time_domain_ = TimeDomain::FREQ;
}

void SpatialSignal::to_time() {
    if (time_domain_ == TimeDomain::TIME) return;
    ++g_conv_stats.to_time;
    if (nfft_ == 0) throw FormatError("to_time: no recorded nfft for this signal");
    const std::size_t n_bins = nfft_ / 2 + 1;
    if (n_frames_ != n_bins) throw FormatError("to_time: bin count inconsistent with nfft");
    const std::size_t out_len = time_length_ > 0 ? time_length_ : nfft_;
    std::vector<cplx> out(static_cast<std::size_t>(n_channels_) * n_spatial_ * out_len);
    for (int c = 0; c < n_channels_; ++c) {
        for (int s = 0; s < n_spatial_; ++s) {
            std::vector<cplx> bins(n_bins);
            for (std::size_t f = 0; f < n_bins; ++f) bins[f] = at(c, s, f);
            const auto t = fft::irfft(bins, nfft_);
            cplx* dst = &out[(static_cast<std::size_t>(c) * n_spatial_ + s) * out_len];
            for (std::size_t f = 0; f < out_len; ++f) dst[f] = t[f];
        }
    }
    data_ = std::move(out);
    n_frames_ = out_len;
    time_domain_ = TimeDomain::TIME;
}

void SpatialSignal::reshape_spatial(int new_spatial, std::vector<cplx>&& new_data) {
    n_spatial_ = new_spatial;
    data_ = std::move(new_data);
}

void SpatialSignal::to_sh(int order, const DirectionGrid* grid) {
    if (space_domain_ == SpaceDomain::SH) return;
    const DirectionGrid* g = grid ? grid : grid_.get();
    if (!g) throw ConfigError("to_sh: no direction grid available");
    g->validate();
    if (g->n_dirs() != n_spatial_)
        throw FormatError("to_sh: grid size does not match spatial dimension");
    const int n_coeff = sh_channel_count(order);
    if (g->n_dirs() < n_coeff)
        throw ConfigError("to_sh: under-determined grid (" + std::to_string(g->n_dirs()) +
                          " dirs for " + std::to_string(n_coeff) + " coefficients)");

    // Columns are (channel, frame) pairs.
    Eigen::MatrixXcd values(n_spatial_, static_cast<Eigen::Index>(n_channels_) * n_frames_);
    for (int c = 0; c < n_channels_; ++c)
        for (int s = 0; s < n_spatial_; ++s)
            for (std::size_t f = 0; f < n_frames_; ++f)
                values(s, c * static_cast<Eigen::Index>(n_frames_) + f) = at(c, s, f);
    const Eigen::MatrixXcd coeffs = sh_analysis(values, *g, order);

    std::vector<cplx> out(static_cast<std::size_t>(n_channels_) * n_coeff * n_frames_);
    for (int c = 0; c < n_channels_; ++c)
        for (int s = 0; s < n_coeff; ++s)
            for (std::size_t f = 0; f < n_frames_; ++f)
                out[(static_cast<std::size_t>(c) * n_coeff + s) * n_frames_ + f] =
                    coeffs(s, c * static_cast<Eigen::Index>(n_frames_) + f);
    reshape_spatial(n_coeff, std::move(out));
    space_domain_ = SpaceDomain::SH;
    sh_order_ = order;
    grid_.reset();
}

void SpatialSignal::to_space(std::shared_ptr<const DirectionGrid> grid) {
    if (space_domain_ == SpaceDomain::SPACE) return;
    if (!grid) throw ConfigError("to_space: target grid required");
    const ShBasisMatrix y = sh_basis(*grid, sh_order_);
    const int n_dirs = grid->n_dirs();

    Eigen::MatrixXcd coeffs(n_spatial_, static_cast<Eigen::Index>(n_channels_) * n_frames_);
    for (int c = 0; c < n_channels_; ++c)
        for (int s = 0; s < n_spatial_; ++s)
            for (std::size_t f = 0; f < n_frames_; ++f)
                coeffs(s, c * static_cast<Eigen::Index>(n_frames_) + f) = at(c, s, f);
    const Eigen::MatrixXcd values = y.matrix.cast<cplx>() * coeffs;

    std::vector<cplx> out(static_cast<std::size_t>(n_channels_) * n_dirs * n_frames_);
    for (int c = 0; c < n_channels_; ++c)
        for (int s = 0; s < n_dirs; ++s)
            for (std::size_t f = 0; f < n_frames_; ++f)
                out[(static_cast<std::size_t>(c) * n_dirs + s) * n_frames_ + f] =
                    values(s, c * static_cast<Eigen::Index>(n_frames_) + f);
    reshape_spatial(n_dirs, std::move(out));
    space_domain_ = SpaceDomain::SPACE;
    grid_ = std::move(grid);
}

}  // namespace ambiroom
