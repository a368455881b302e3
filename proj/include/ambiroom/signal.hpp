#pragma once

#include <memory>
#include <vector>

#include "ambiroom/grids.hpp"
#include "ambiroom/types.hpp"

namespace ambiroom {

enum class TimeDomain { TIME, FREQ };
enum class SpaceDomain { SPACE, SH };

// Audio container with shape (n_channels, n_spatial, n_frames) and two domain
// flags. Domain conversions mutate in place; copies only via clone().
class SpatialSignal {
public:
    SpatialSignal() = default;
    SpatialSignal(int n_channels, int n_spatial, std::size_t n_frames, double fs,
                  TimeDomain td = TimeDomain::TIME, SpaceDomain sd = SpaceDomain::SPACE);

    static SpatialSignal sh_time(int n_channels, int order, std::size_t n_frames, double fs);

    // Frequency-domain shell with nfft/2+1 bins; to_time() yields time_length
    // frames.
    static SpatialSignal freq_signal(int n_channels, int n_spatial, std::size_t nfft,
                                     double fs, std::size_t time_length, SpaceDomain sd);

    int n_channels() const { return n_channels_; }
    int n_spatial() const { return n_spatial_; }
    std::size_t n_frames() const { return n_frames_; }
    double fs() const { return fs_; }
    TimeDomain time_domain() const { return time_domain_; }
    SpaceDomain space_domain() const { return space_domain_; }
    int sh_order() const { return sh_order_; }
    void set_sh_order(int order) { sh_order_ = order; }
    std::size_t nfft() const { return nfft_; }
    std::size_t time_length() const { return time_length_; }

    const std::shared_ptr<const DirectionGrid>& grid() const { return grid_; }
    void set_grid(std::shared_ptr<const DirectionGrid> g) { grid_ = std::move(g); }

    cplx& at(int c, int s, std::size_t f) {
        return data_[(static_cast<std::size_t>(c) * n_spatial_ + s) * n_frames_ + f];
    }
    const cplx& at(int c, int s, std::size_t f) const {
        return data_[(static_cast<std::size_t>(c) * n_spatial_ + s) * n_frames_ + f];
    }
    std::vector<cplx>& data() { return data_; }
    const std::vector<cplx>& data() const { return data_; }

    SpatialSignal clone() const { return *this; }

    // TIME <-> FREQ. Real-input spectrum convention: FREQ keeps nfft/2+1 bins
    // with nfft = smallest power of two >= time length. No-op when already in
    // the target domain.
    void to_freq();
    void to_time();

    // Zero-pad the time axis (TIME domain only).
    void pad(std::size_t new_len);

    // Global transform counters, for verifying that pipelines share one
    // forward/inverse transform pair.
    struct ConversionStats {
        std::size_t to_freq = 0;
        std::size_t to_time = 0;
    };
    static ConversionStats conversion_stats();
    static void reset_conversion_stats();

    // SPACE -> SH weighted analysis / SH -> SPACE synthesis across the
    // spatial axis. SPACE->SH uses the signal's grid (or `grid` if given).
    void to_sh(int order, const DirectionGrid* grid = nullptr);
    void to_space(std::shared_ptr<const DirectionGrid> grid);

    // Real time-domain view of one (channel, spatial) slice.
    std::vector<double> real_frames(int c, int s) const;
    void set_real_frames(int c, int s, const std::vector<double>& v);

    // Frequency of bin f when in FREQ domain.
    double bin_freq(std::size_t f) const { return static_cast<double>(f) * fs_ / nfft_; }

private:
    void reshape_spatial(int new_spatial, std::vector<cplx>&& new_data);

    int n_channels_ = 0;
    int n_spatial_ = 0;
    std::size_t n_frames_ = 0;
    double fs_ = 0.0;
    TimeDomain time_domain_ = TimeDomain::TIME;
    SpaceDomain space_domain_ = SpaceDomain::SPACE;
    int sh_order_ = 0;
    std::size_t nfft_ = 0;         // recorded by to_freq()
    std::size_t time_length_ = 0;  // original length, restored by to_time()
    std::shared_ptr<const DirectionGrid> grid_;
    std::vector<cplx> data_;
};

}  // namespace ambiroom
