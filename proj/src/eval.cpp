#include "ambiroom/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "ambiroom/fft.hpp"
#include "ambiroom/processors.hpp"
#include "ambiroom/sh.hpp"
#include "ambiroom/synth_hrtf.hpp"

namespace ambiroom {

std::vector<double> octave_smooth(const std::vector<double>& mag,
                                  const std::vector<double>& freqs, double fraction) {
    if (mag.size() != freqs.size()) throw ConfigError("octave_smooth: length mismatch");
    const double up = std::pow(2.0, fraction / 2.0);
    std::vector<double> out(mag.size());
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < mag.size(); ++i) {
        if (freqs[i] <= 0.0) {
            out[i] = mag[i];
            continue;
        }
        const double f_lo = freqs[i] / up;
        const double f_hi = freqs[i] * up;
        while (lo < mag.size() && freqs[lo] < f_lo) ++lo;
        if (hi < lo) hi = lo;
        while (hi + 1 < mag.size() && freqs[hi + 1] <= f_hi) ++hi;
        double acc = 0.0;
        for (std::size_t k = lo; k <= hi; ++k) acc += mag[k] * mag[k];
        out[i] = std::sqrt(acc / static_cast<double>(hi - lo + 1));
    }
    return out;
}

namespace {

constexpr double kMagFloor = 1e-12;

std::vector<double> log_spectrum(const std::vector<double>& ir, std::size_t nfft,
                                 const std::vector<double>& freqs, double fraction) {
    const auto bins = fft::rfft(ir, nfft);
    std::vector<double> mag(bins.size());
    for (std::size_t f = 0; f < bins.size(); ++f) mag[f] = std::abs(bins[f]);
    mag = octave_smooth(mag, freqs, fraction);
    for (double& m : mag) m = 20.0 * std::log10(std::max(m, kMagFloor));
    return mag;
}

}  // namespace

LsdReport lsd(const std::array<std::vector<double>, 2>& h_hat,
              const std::array<std::vector<double>, 2>& h_ref, double fs, double f_lo,
              double f_hi, double fraction) {
    if (!(fs > 0.0)) throw ConfigError("lsd: invalid sample rate");
    std::size_t n = 2;
    for (const auto& v : h_hat) n = std::max(n, v.size());
    for (const auto& v : h_ref) n = std::max(n, v.size());
    const std::size_t nfft = next_pow2(n);
    const std::size_t n_bins = nfft / 2 + 1;
    std::vector<double> freqs(n_bins);
    for (std::size_t f = 0; f < n_bins; ++f) freqs[f] = static_cast<double>(f) * fs / nfft;
    f_hi = std::min(f_hi, fs / 2.0);

    LsdReport rep;
    rep.f_lo = f_lo;
    rep.f_hi = f_hi;
    rep.smoothing = fraction;
    double per_ear[2];
    for (int ear = 0; ear < 2; ++ear) {
        const auto a = log_spectrum(h_hat[ear], nfft, freqs, fraction);
        const auto b = log_spectrum(h_ref[ear], nfft, freqs, fraction);
        double acc = 0.0;
        std::size_t count = 0;
        for (std::size_t f = 0; f < n_bins; ++f) {
            if (freqs[f] < f_lo || freqs[f] > f_hi) continue;
            const double e = a[f] - b[f];
            acc += e * e;
            ++count;
        }
        if (count == 0) throw ConfigError("lsd: no bins in the evaluation band");
        per_ear[ear] = std::sqrt(acc / static_cast<double>(count));
    }
    rep.lsd_left = per_ear[0];
    rep.lsd_right = per_ear[1];
    rep.lsd_avg = 0.5 * (per_ear[0] + per_ear[1]);
    return rep;
}

int nearest_direction(const DirectionGrid& grid, double az, double el) {
    const Vec3 u = direction_to_unit(az, el);
    int best = 0;
    double best_dot = -2.0;
    for (int d = 0; d < grid.n_dirs(); ++d) {
        const double dp = u.dot(grid.unit_vector(d));
        if (dp > best_dot) {
            best_dot = dp;
            best = d;
        }
    }
    return best;
}

std::array<std::vector<double>, 2> nn_baseline_render(const Scene& scene,
                                                      const HrtfSet& set) {
    scene.validate();
    set.validate();
    std::vector<std::vector<ImageSource>> all;
    double max_delay = 0.0;
    for (const auto& src : scene.sources) {
        all.push_back(compute_images(scene.room, src.position, scene.receiver));
        for (const auto& img : all.back()) max_delay = std::max(max_delay, img.delay_samples);
    }
    const std::size_t len = static_cast<std::size_t>(std::ceil(max_delay)) +
                            scene.frac_delay_taps + set.taps + 1;
    std::array<std::vector<double>, 2> out{std::vector<double>(len, 0.0),
                                           std::vector<double>(len, 0.0)};
    for (const auto& images : all) {
        for (const auto& img : images) {
            const auto [az, el] = image_direction(img, scene.receiver);
            const int d = nearest_direction(set.grid, az, el);
            const FractionalDelay fd =
                fractional_delay_kernel(img.delay_samples, scene.frac_delay_taps);
            for (std::size_t k = 0; k < fd.taps.size(); ++k) {
                const long base = fd.offset + static_cast<long>(k);
                if (base < 0) continue;
                const double g = img.amplitude * fd.taps[k];
                for (int ear = 0; ear < 2; ++ear)
                    for (int t = 0; t < set.taps; ++t) {
                        const std::size_t idx = static_cast<std::size_t>(base) + t;
                        if (idx < len) out[ear][idx] += g * set.ir(d, ear, t);
                    }
            }
        }
    }
    return out;
}

Scene bench_scene(int sh_order, int ism_order) {
    Scene s;
    s.room.dimensions = {6.0, 5.0, 3.0};
    s.room.set_uniform_absorption(0.4);
    s.room.max_ism_order = ism_order;
    s.room.fs = 48000.0;
    s.sources.push_back({{4.0, 4.0, 1.5}, std::nullopt});
    s.receiver = {2.0, 2.0, 1.5};
    s.sh_order = sh_order;
    return s;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void mean_std(const std::vector<double>& xs, double& mean, double& sd) {
    mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    sd = xs.size() > 1 ? std::sqrt(var / static_cast<double>(xs.size() - 1)) : 0.0;
}

ShHrtf bench_hrtf(int order) {
    SyntheticHrtfParams p;
    p.taps = 128;
    const HrtfSet set = generate_synthetic_hrtf(analysis_grid(std::max(order + 1, 14)), p);
    return project_ls(set, order);
}

BenchResult timed_result(const std::string& suite, const std::string& scenario,
                         int trials, const std::vector<double>& times) {
    BenchResult r;
    r.suite = suite;
    r.scenario = scenario;
    r.trials = trials;
    mean_std(times, r.mean_s, r.std_s);
    return r;
}

}  // namespace

std::vector<BenchResult> run_bench(BenchSuite suite, const BenchConfig& cfg) {
    if (cfg.trials < 1) throw ConfigError("run_bench: trials must be positive");
    std::vector<BenchResult> rows;

    const auto time_brir = [&](Scene& scene, const BinauralDecoder& dec,
                               std::vector<double>& arir_times,
                               std::vector<double>& decode_times) {
        for (int t = -1; t < cfg.trials; ++t) {  // t = -1 is the warmup run
            auto t0 = Clock::now();
            SpatialSignal arir = compute_arir(scene);
            const double ta = seconds_since(t0);
            t0 = Clock::now();
            (void)dec.process(arir);
            const double td = seconds_since(t0);
            if (t >= 0) {
                arir_times.push_back(ta);
                decode_times.push_back(td);
            }
        }
    };

    switch (suite) {
        case BenchSuite::SH_ORDER: {
            for (int n : cfg.sh_orders) {
                Scene scene = bench_scene(n, 3);
                const BinauralDecoder dec(bench_hrtf(n));
                std::vector<double> ta, td, tot;
                time_brir(scene, dec, ta, td);
                for (std::size_t i = 0; i < ta.size(); ++i) tot.push_back(ta[i] + td[i]);
                BenchResult r = timed_result("SH_ORDER", "N=" + std::to_string(n),
                                             cfg.trials, tot);
                r.extra["channels"] = sh_channel_count(n);
                double m, s;
                mean_std(ta, m, s);
                r.extra["arir_s"] = m;
                mean_std(td, m, s);
                r.extra["decode_s"] = m;
                rows.push_back(std::move(r));
            }
            break;
        }
        case BenchSuite::ISM_ORDER: {
            const ShHrtf h = bench_hrtf(3);
            for (int order : cfg.ism_orders) {
                Scene scene = bench_scene(3, order);
                const BinauralDecoder dec(h);
                std::vector<double> ta, td, tot;
                time_brir(scene, dec, ta, td);
                for (std::size_t i = 0; i < ta.size(); ++i) tot.push_back(ta[i] + td[i]);
                BenchResult r = timed_result("ISM_ORDER", "R=" + std::to_string(order),
                                             cfg.trials, tot);
                r.extra["images"] = static_cast<double>(
                    compute_images(scene.room, scene.sources[0].position, scene.receiver)
                        .size());
                rows.push_back(std::move(r));
            }
            break;
        }
        case BenchSuite::SOURCES: {
            const ShHrtf h = bench_hrtf(3);
            for (int k : cfg.source_counts) {
                Scene scene = bench_scene(3, 3);
                scene.sources.clear();
                for (int i = 0; i < k; ++i)
                    scene.sources.push_back(
                        {{1.0 + 0.5 * i, 3.5 - 0.25 * i, 1.2 + 0.1 * i}, std::nullopt});
                const BinauralDecoder dec(h);
                std::vector<double> ta, td, tot;
                // The per-source ARIRs are summed into one Ambisonic stream,
                // so the decode is paid once regardless of K.
                for (int t = -1; t < cfg.trials; ++t) {
                    auto t0 = Clock::now();
                    SpatialSignal arir = compute_arir(scene);
                    SpatialSignal sum(1, arir.n_spatial(), arir.n_frames(), arir.fs(),
                                      TimeDomain::TIME, SpaceDomain::SH);
                    sum.set_sh_order(arir.sh_order());
                    for (int c = 0; c < arir.n_channels(); ++c)
                        for (int sp = 0; sp < arir.n_spatial(); ++sp)
                            for (std::size_t f = 0; f < arir.n_frames(); ++f)
                                sum.at(0, sp, f) += arir.at(c, sp, f);
                    const double t_arir = seconds_since(t0);
                    t0 = Clock::now();
                    (void)dec.process(sum);
                    const double t_dec = seconds_since(t0);
                    if (t >= 0) {
                        ta.push_back(t_arir);
                        td.push_back(t_dec);
                    }
                }
                for (std::size_t i = 0; i < ta.size(); ++i) tot.push_back(ta[i] + td[i]);
                BenchResult r = timed_result("SOURCES", "K=" + std::to_string(k),
                                             cfg.trials, tot);
                r.extra["sources"] = k;
                double m, s;
                mean_std(ta, m, s);
                r.extra["arir_s"] = m;
                mean_std(td, m, s);
                r.extra["decode_s"] = m;
                rows.push_back(std::move(r));
            }
            break;
        }
        case BenchSuite::ROTATION: {
            Scene scene = bench_scene(3, cfg.rotation_ism_order);
            const int frames = cfg.rotation_frames;
            std::vector<double> init_t, build_apply, cached_apply, totals;
            for (int t = -1; t < cfg.trials; ++t) {
                auto t0 = Clock::now();
                SpatialSignal arir = compute_arir(scene);
                const double ti = seconds_since(t0);

                // Rebuild D every frame and apply it densely.
                SpatialSignal work = arir.clone();
                t0 = Clock::now();
                for (int f = 0; f < frames; ++f) {
                    const double az = kTwoPi * f / frames;
                    const WignerDMatrix d = wigner_d_matrix(scene.sh_order, az, 0.0, 0.0);
                    rotate_sh(work, d);
                }
                const double tb = seconds_since(t0) / frames;

                // Cached-orientation path: the closed-form azimuth rotation,
                // no per-frame matrix build.
                work = arir.clone();
                t0 = Clock::now();
                for (int f = 0; f < frames; ++f)
                    rotate_sh_azimuth(work, kTwoPi / frames);
                const double tc = seconds_since(t0) / frames;

                if (t >= 0) {
                    init_t.push_back(ti);
                    build_apply.push_back(tb);
                    cached_apply.push_back(tc);
                    totals.push_back(ti + frames * tc);
                }
            }
            BenchResult r = timed_result(
                "ROTATION", "N=3 R=" + std::to_string(cfg.rotation_ism_order),
                cfg.trials, cached_apply);
            double m, s;
            mean_std(init_t, m, s);
            r.extra["init_s"] = m;
            mean_std(build_apply, m, s);
            r.extra["build_apply_ms"] = m * 1e3;
            mean_std(cached_apply, m, s);
            r.extra["cached_apply_ms"] = m * 1e3;
            mean_std(totals, m, s);
            r.extra["total_s"] = m;
            r.extra["frames"] = frames;
            rows.push_back(std::move(r));
            break;
        }
    }
    return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchResult>& rows) {
    std::set<std::string> keys;
    for (const auto& r : rows)
        for (const auto& [k, v] : r.extra) keys.insert(k);
    out << "suite,scenario,trials,mean_s,std_s";
    for (const auto& k : keys) out << ',' << k;
    out << '\n';
    for (const auto& r : rows) {
        out << r.suite << ',' << r.scenario << ',' << r.trials << ',' << r.mean_s << ','
            << r.std_s;
        for (const auto& k : keys) {
            out << ',';
            const auto it = r.extra.find(k);
            if (it != r.extra.end()) out << it->second;
        }
        out << '\n';
    }
}

}  // namespace ambiroom
