#pragma once

#include <array>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "ambiroom/hrtf.hpp"
#include "ambiroom/room.hpp"
#include "ambiroom/types.hpp"

namespace ambiroom {

struct LsdReport {
    double lsd_left = 0.0;
    double lsd_right = 0.0;
    double lsd_avg = 0.0;
    double f_lo = 0.0;
    double f_hi = 0.0;
    double smoothing = 0.0;  // octave fraction
};

// Each bin replaced by the power mean of bins within +/- fraction/2 octave.
std::vector<double> octave_smooth(const std::vector<double>& mag,
                                  const std::vector<double>& freqs,
                                  double fraction = 1.0 / 6.0);

// Log-spectral distortion between two binaural IRs, RMS over [f_lo, f_hi]
// after per-spectrum smoothing. Magnitudes are floored at 1e-12 before log.
LsdReport lsd(const std::array<std::vector<double>, 2>& h_hat,
              const std::array<std::vector<double>, 2>& h_ref, double fs,
              double f_lo = 200.0, double f_hi = 20000.0, double fraction = 1.0 / 6.0);

// Nearest measured direction by angle; ties broken by lower index.
int nearest_direction(const DirectionGrid& grid, double az, double el);

// Reference foil: ISM + nearest-neighbour HRIR accumulation (no SH domain).
std::array<std::vector<double>, 2> nn_baseline_render(const Scene& scene,
                                                      const HrtfSet& set);

enum class BenchSuite { SH_ORDER, ISM_ORDER, SOURCES, ROTATION };

struct BenchConfig {
    std::vector<int> sh_orders = {1, 3, 5, 7, 9, 12};
    std::vector<int> ism_orders = {1, 2, 3, 4, 5, 6, 7, 8};
    std::vector<int> source_counts = {1, 2, 4, 8};
    int rotation_frames = 600;
    int rotation_ism_order = 5;
    int trials = 10;
    unsigned seed = 1;
    int threads = 1;
};

struct BenchResult {
    std::string suite;
    std::string scenario;
    int trials = 0;
    double mean_s = 0.0;
    double std_s = 0.0;
    std::map<std::string, double> extra;  // counts and per-column timings
};

// Warmup run + >= 10 timed trials per scenario on the fixed evaluation scene
// (6 x 5 x 3 m, alpha 0.4, source (4,4,1.5), receiver (2,2,1.5), 48 kHz).
std::vector<BenchResult> run_bench(BenchSuite suite, const BenchConfig& cfg = {});

void write_bench_csv(std::ostream& out, const std::vector<BenchResult>& rows);

// The shared evaluation scene, single source, given orders.
Scene bench_scene(int sh_order, int ism_order);

}  // namespace ambiroom
