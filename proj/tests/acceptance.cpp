// Acceptance gate: one line per criterion, nonzero exit when any FAIL.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>

#include "ambiroom/conv.hpp"
#include "ambiroom/eval.hpp"
#include "ambiroom/fft.hpp"
#include "ambiroom/processors.hpp"
#include "ambiroom/sh.hpp"
#include "ambiroom/synth_hrtf.hpp"

using namespace ambiroom;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int g_failures = 0;

enum class Status { PASS, FAIL, SKIP };

void report(int idx, Status st, const std::string& name, const std::string& note) {
    const char* tag = st == Status::PASS ? "PASS" : st == Status::FAIL ? "FAIL" : "SKIP";
    if (st == Status::FAIL) ++g_failures;
    std::printf("[%2d] %s  %s%s%s\n", idx, tag, name.c_str(), note.empty() ? "" : " -- ",
                note.c_str());
    std::fflush(stdout);
}

std::string ku100_path() {
    if (const char* env = std::getenv("AMBIROOM_KU100")) return env;
    return "data/ku100.shrm";
}

bool try_load_ku100(HrtfSet& set) {
    try {
        set = load_hrtf_file(ku100_path());
        return true;
    } catch (const FormatError&) {
        return false;
    }
}

// Binaural render of the evaluation scene with a given SH HRTF.
std::array<std::vector<double>, 2> render_scene(int sh_order, const ShHrtf& hrtf) {
    Scene scene = bench_scene(sh_order, 5);
    const SpatialSignal arir = compute_arir(scene);
    const BinauralDecoder dec(hrtf);
    const SpatialSignal out = dec.process(arir);
    std::array<std::vector<double>, 2> ears;
    for (int e = 0; e < 2; ++e) {
        ears[e].resize(out.n_frames());
        for (std::size_t t = 0; t < out.n_frames(); ++t)
            ears[e][t] = out.at(0, e, t).real();
    }
    return ears;
}

// ---------------------------------------------------------------------------

void criterion_1() {
    const auto t0 = Clock::now();
    RoomSpec room;
    room.dimensions = {6.0, 5.0, 3.0};
    room.set_uniform_absorption(0.4);
    const Vec3 src{4.0, 4.0, 1.5}, rcv{2.0, 2.0, 1.5};
    const std::size_t want[] = {1, 7, 25, 63, 129, 231, 377, 575, 833};
    bool ok = true;
    for (int r = 0; r <= 8; ++r) {
        room.max_ism_order = r;
        if (compute_images(room, src, rcv).size() != want[r]) ok = false;
    }
    const double el = seconds_since(t0);
    if (el >= 1.0) ok = false;
    char note[64];
    std::snprintf(note, sizeof note, "orders 0..8 in %.3f s", el);
    report(1, ok ? Status::PASS : Status::FAIL, "image-count exactness", note);
}

void criterion_2() {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string note;

    for (int n : {1, 4, 10}) {
        const DirectionGrid g = analysis_grid(n);
        const Eigen::MatrixXd y = sh_basis(g, n).matrix;
        const Eigen::VectorXd w =
            Eigen::Map<const Eigen::VectorXd>(g.weights.data(), g.n_dirs());
        const Eigen::MatrixXd gram = y.transpose() * w.asDiagonal() * y;
        const int dim = sh_channel_count(n);
        if ((gram - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff() >= 1e-8) {
            ok = false;
            note = "orthonormality violated at N=" + std::to_string(n);
        }
    }

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ua(0.0, kTwoPi), ub(0.0, kPi);
    for (int t = 0; t < 40 && ok; ++t) {
        const int order = 1 + t % 5;
        const double a = ua(rng), b = ub(rng), g = ua(rng);
        const WignerDMatrix d = wigner_d_matrix(order, a, b, g);
        const int dim = sh_channel_count(order);
        if ((d.matrix * d.matrix.transpose() - Eigen::MatrixXd::Identity(dim, dim))
                .cwiseAbs()
                .maxCoeff() >= 1e-10) {
            ok = false;
            note = "Wigner-D orthogonality violated";
        }
        const double a2 = ua(rng), b2 = ub(rng), g2 = ua(rng);
        const Eigen::Matrix3d r =
            euler_zyz_matrix(a, b, g) * euler_zyz_matrix(a2, b2, g2);
        const double bb = std::acos(std::clamp(r(2, 2), -1.0, 1.0));
        const double aa = std::atan2(r(1, 2), r(0, 2));
        const double gg = std::atan2(r(2, 1), -r(2, 0));
        const WignerDMatrix dc = wigner_d_matrix(order, aa, bb, gg);
        if ((d.matrix * wigner_d_matrix(order, a2, b2, g2).matrix - dc.matrix)
                .cwiseAbs()
                .maxCoeff() >= 1e-10) {
            ok = false;
            note = "Wigner-D composition violated";
        }
    }

    for (int t = 0; t < 100 && ok; ++t) {
        const int order = 1 + t % 5;
        const double a = ua(rng), b = ub(rng), g = ua(rng);
        const WignerDMatrix d = wigner_d_matrix(order, a, b, g);
        const Eigen::Matrix3d r = euler_zyz_matrix(a, b, g);
        const Eigen::VectorXd f =
            Eigen::VectorXd::Random(sh_channel_count(order));
        const Eigen::VectorXd df = d.matrix * f;
        const double az = ua(rng), el = ub(rng) - kPi / 2.0;
        const Vec3 x = direction_to_unit(az, el);
        const Eigen::Vector3d xr =
            r.transpose() * Eigen::Vector3d(x.x, x.y, x.z);
        const auto [raz, rel] = unit_to_direction({xr(0), xr(1), xr(2)});
        const double lhs = sh_vector(az, el, order).dot(df);
        const double rhs = sh_vector(raz, rel, order).dot(f);
        if (std::abs(lhs - rhs) >= 1e-8) {
            ok = false;
            note = "rotation-evaluation consistency violated";
        }
    }

    const double el2 = seconds_since(t0);
    if (el2 >= 30.0) {
        ok = false;
        note = "exceeded 30 s budget";
    }
    if (ok) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "orthonormality/Wigner/rotation in %.2f s", el2);
        note = buf;
    }
    report(2, ok ? Status::PASS : Status::FAIL, "SH machinery invariants", note);
}

void criterion_3() {
    const DirectionGrid grid = analysis_grid(30);
    const HrtfSet set = generate_synthetic_hrtf(grid, {});
    const ShHrtf sh = project_ls(set, 30);
    const BinauralDecoder dec(sh);

    double worst = 0.0;
    for (int p : {0, grid.n_dirs() / 3, 2 * grid.n_dirs() / 3}) {
        SpatialSignal pw = SpatialSignal::sh_time(1, 30, 1, set.fs);
        const Eigen::VectorXd y = sh_vector(grid.azimuths[p], grid.elevations[p], 30);
        for (int ch = 0; ch < y.size(); ++ch) pw.at(0, ch, 0) = y(ch);
        const SpatialSignal out = dec.process(pw);
        std::array<std::vector<double>, 2> h_hat, h_ref;
        for (int e = 0; e < 2; ++e) {
            h_hat[e].resize(out.n_frames());
            for (std::size_t t = 0; t < out.n_frames(); ++t)
                h_hat[e][t] = out.at(0, e, t).real();
            h_ref[e].resize(set.taps);
            for (int t = 0; t < set.taps; ++t) h_ref[e][t] = set.ir(p, e, t);
        }
        worst = std::max(worst, lsd(h_hat, h_ref, set.fs).lsd_avg);
    }
    char note[80];
    std::snprintf(note, sizeof note, "worst avg LSD %.4f dB over 3 directions (< 0.5)",
                  worst);
    report(3, worst < 0.5 ? Status::PASS : Status::FAIL,
           "binaural identity at N=30", note);
}

void criteria_4_5() {
    // Synthetic ordering half of criterion 4.
    const HrtfSet set = generate_synthetic_hrtf(analysis_grid(30), {});
    const auto ref = render_scene(30, project_ls(set, 30));
    const auto run = [&](const ShHrtf& h, int order) {
        return lsd(render_scene(order, h), ref, set.fs).lsd_avg;
    };
    const double ls3 = run(project_ls(set, 3), 3);
    const double ls7 = run(project_ls(set, 7), 7);
    const double mag3 = run(magls(set, 3, default_magls_fc(3)), 3);
    const bool order_ok = mag3 < ls7 && ls7 < ls3;
    char note[160];

    HrtfSet ku;
    if (!try_load_ku100(ku)) {
        std::snprintf(note, sizeof note,
                      "synthetic: MagLS N=3 %.2f < LS N=7 %.2f < LS N=3 %.2f dB; "
                      "measured-container rows skipped (%s not provided)",
                      mag3, ls7, ls3, ku100_path().c_str());
        report(4, order_ok ? Status::PASS : Status::FAIL, "MagLS quality ordering", note);
        report(5, Status::SKIP, "perceptual transparency (N=5 MagLS <= 2.5 dB)",
               "requires the measured KU100 container at " + ku100_path() +
                   " (or AMBIROOM_KU100); only the synthetic set is available");
        return;
    }

    // Measured container supplied: reproduce the published avg-LSD rows.
    const HrtfSet kus = resample_hrtf(ku, 48000.0);
    const auto kref = render_scene(30, project_ls(kus, 30));
    const auto krun = [&](const ShHrtf& h, int order) {
        return lsd(render_scene(order, h), kref, 48000.0).lsd_avg;
    };
    struct Row {
        int order;
        bool mag;
        double fc;
        double want;
    };
    const Row rows[] = {{1, false, 0, 17.23}, {1, true, 1200, 3.45},
                        {3, false, 0, 13.85}, {3, true, 2000, 2.57},
                        {5, false, 0, 11.36}, {5, true, 3500, 2.02},
                        {7, false, 0, 9.89},  {7, true, 4800, 2.12},
                        {9, false, 0, 6.98},  {9, true, 5000, 2.09}};
    bool rows_ok = order_ok;
    double n5mag = 1e9;
    for (const Row& r : rows) {
        const ShHrtf h =
            r.mag ? magls(kus, r.order, r.fc) : project_ls(kus, r.order);
        const double got = krun(h, r.order);
        if (std::abs(got - r.want) > 1.5) rows_ok = false;
        if (r.order == 5 && r.mag) n5mag = got;
    }
    std::snprintf(note, sizeof note, "synthetic ordering %s; measured rows within 1.5 dB: %s",
                  order_ok ? "holds" : "violated", rows_ok ? "yes" : "no");
    report(4, rows_ok ? Status::PASS : Status::FAIL, "MagLS quality ordering", note);
    std::snprintf(note, sizeof note, "measured N=5 MagLS avg LSD %.2f dB (<= 2.5)", n5mag);
    report(5, n5mag <= 2.5 ? Status::PASS : Status::FAIL,
           "perceptual transparency (N=5 MagLS)", note);
}

void criterion_6() {
    BenchConfig cfg;
    cfg.trials = 10;
    const auto rows = run_bench(BenchSuite::SOURCES, cfg);
    const double k1 = rows.front().mean_s, k8 = rows.back().mean_s;
    double dec_min = 1e9, dec_max = 0.0;
    for (const auto& r : rows) {
        dec_min = std::min(dec_min, r.extra.at("decode_s"));
        dec_max = std::max(dec_max, r.extra.at("decode_s"));
    }
    const double growth = k8 / k1;
    const double dec_var = dec_max / dec_min - 1.0;
    const bool ok = growth <= 3.0 && dec_var < 0.20;
    char note[96];
    std::snprintf(note, sizeof note,
                  "K=8/K=1 total %.2fx (<= 3), decode variation %.1f%% (< 20%%)", growth,
                  100.0 * dec_var);
    report(6, ok ? Status::PASS : Status::FAIL, "decode amortization across sources", note);
}

void criterion_7() {
    BenchConfig cfg;
    cfg.trials = 10;  // 600 frames, N=3, R=5 defaults
    const auto rows = run_bench(BenchSuite::ROTATION, cfg);
    const double build = rows[0].extra.at("build_apply_ms");
    const double cached = rows[0].extra.at("cached_apply_ms");
    const bool ok = cached <= build / 5.0 && rows[0].extra.at("frames") == 600.0;
    char note[96];
    std::snprintf(note, sizeof note,
                  "cached %.4f ms/frame vs build+apply %.4f ms/frame (%.1fx)", cached,
                  build, build / cached);
    report(7, ok ? Status::PASS : Status::FAIL, "rotation caching ratio", note);
}

void criterion_8() {
    bool ok = true;
    std::string note;
    const std::size_t sigs[] = {100, 500, 1023, 1024, 1025, 4096, 16384, 48000, 100000, 257};
    const std::size_t firs[] = {16, 128};
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t ns : sigs)
        for (std::size_t nf : firs) {
            const ConvPlan p = plan_convolution(ns, nf);
            if ((p.mode == ConvMode::OLA) != (nf * 8 < ns)) {
                ok = false;
                note = "selection rule violated";
            }
            std::vector<double> sig(ns), fir(nf);
            for (double& x : sig) x = u(rng);
            for (double& x : fir) x = u(rng);
            const auto a = convolve_ola(sig, fir);
            const auto b = convolve_direct(sig, fir);
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                num += (a[i] - b[i]) * (a[i] - b[i]);
                den += b[i] * b[i];
            }
            if (std::sqrt(num / den) >= 1e-9) {
                ok = false;
                note = "OLA/direct mismatch";
            }
        }

    std::vector<double> sig(48000), fir(128);
    for (double& x : sig) x = u(rng);
    for (double& x : fir) x = u(rng);
    (void)convolve_ola(sig, fir);  // warm FFT plans
    double t_ola = 1e9, t_dir = 1e9;
    for (int rep = 0; rep < 5; ++rep) {
        auto t0 = Clock::now();
        (void)convolve_ola(sig, fir);
        t_ola = std::min(t_ola, seconds_since(t0));
        t0 = Clock::now();
        (void)convolve_direct(sig, fir);
        t_dir = std::min(t_dir, seconds_since(t0));
    }
    if (!(t_ola < t_dir)) {
        ok = false;
        note = "OLA not faster on the 48000/128 case";
    }
    if (ok) {
        char buf[96];
        std::snprintf(buf, sizeof buf,
                      "20-case rule+equality; 48000/128 OLA %.2fx faster", t_dir / t_ola);
        note = buf;
    }
    report(8, ok ? Status::PASS : Status::FAIL, "overlap-add engine", note);
}

void criterion_9() {
    bool ok = true;
    std::string note;

    // (a) plane-wave expansion oracle, open sphere, converged N_SM
    {
        ArraySpec spec;
        spec.capsule_dirs.azimuths = {0.3};
        spec.capsule_dirs.elevations = {0.2};
        spec.capsule_dirs.weights = {kFourPi};
        spec.radius = 0.042;
        spec.sphere = SphereType::OPEN;
        spec.sm_order = 30;
        spec.fs = 48000.0;
        spec.mask_enabled = false;
        const SteeringMatrix v = steering_matrix(spec, spec.capsule_dirs, 256);
        for (std::size_t f = 1; f < v.freqs.size(); ++f) {
            const double ka = kTwoPi * v.freqs[f] * spec.radius / spec.c;
            if (ka > 3.0) break;
            if (std::abs(v.v[f](0, 0) - std::exp(cplx(0.0, ka))) >= 1e-3) {
                ok = false;
                note = "plane-wave expansion oracle failed";
            }
        }
    }

    // (b) ASM round trip on the 32-capsule rigid array below f_alias
    ArraySpec rigid;
    rigid.capsule_dirs = capsule_layout(32);
    rigid.radius = 0.042;
    rigid.sphere = SphereType::RIGID;
    rigid.sm_order = 3;
    rigid.fs = 48000.0;
    rigid.mask_enabled = false;
    const double f_alias = 3.0 * rigid.c / (kTwoPi * rigid.radius);
    {
        const std::size_t nfft = 256;
        const SteeringMatrix v = steering_matrix(rigid, design_grid(3, 3), nfft);
        const auto w = asm_filters(v, 3, 1e-6);
        std::mt19937 rng(17);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        Eigen::VectorXcd a(16);
        for (int i = 0; i < 16; ++i) a(i) = u(rng);
        const Eigen::MatrixXd y_caps = sh_basis(rigid.capsule_dirs, 3).matrix;
        for (std::size_t f = 1; f < v.freqs.size(); ++f) {
            if (v.freqs[f] < 500.0 || v.freqs[f] > f_alias) continue;
            const RadialTerm r = radial_coefficient(
                rigid, std::numeric_limits<double>::infinity(), {v.freqs[f]});
            Eigen::VectorXcd b_acn(16);
            for (int n = 0; n <= 3; ++n)
                for (int m = -n; m <= n; ++m) b_acn(acn_index(n, m)) = r.b(0, n);
            const Eigen::VectorXcd p = y_caps.cast<cplx>() * b_acn.asDiagonal() * a;
            const double err_db = 20.0 * std::log10((w[f] * p - a).norm() / a.norm());
            if (err_db >= -20.0) {
                ok = false;
                note = "ASM round trip above -20 dB";
            }
        }
    }

    // (c) BSM vs ASM+decode below f_alias (1 dB LSD)
    {
        const HrtfSet set = generate_synthetic_hrtf(analysis_grid(6), {});
        const ShHrtf sh = project_ls(set, 3);
        const std::size_t nfft = sh.nfft;
        const SteeringMatrix v =
            steering_matrix(rigid, design_grid(3, rigid.sm_order), nfft);
        const auto wb = bsm_filters(v, sh, -1.0, false);
        const auto wa = asm_filters(v, 3, -1.0);
        // a plane wave from a design direction, rendered both ways
        const int p = 7;
        std::array<std::vector<double>, 2> hb, ha;
        for (int e = 0; e < 2; ++e) {
            std::vector<cplx> sb(v.v.size()), sa(v.v.size());
            for (std::size_t f = 0; f < v.v.size(); ++f) {
                const Eigen::VectorXcd caps = v.v[f].col(p);
                sb[f] = (wb[f].row(e) * caps)(0);
                const Eigen::VectorXcd coef = wa[f] * caps;
                cplx acc = 0.0;
                for (int ch = 0; ch < 16; ++ch)
                    acc += sh.coeffs[e](ch, static_cast<Eigen::Index>(f)) * coef(ch);
                sa[f] = acc;
            }
            sb[0] = sb[0].real();
            sb.back() = sb.back().real();
            sa[0] = sa[0].real();
            sa.back() = sa.back().real();
            hb[e] = fft::irfft(sb, nfft);
            ha[e] = fft::irfft(sa, nfft);
        }
        const double d = lsd(hb, ha, rigid.fs, 200.0, f_alias).lsd_avg;
        if (d >= 1.0) {
            ok = false;
            note = "BSM vs ASM+decode LSD " + std::to_string(d) + " dB";
        }
    }

    // (d) POINT -> PLANE far-field convergence at r_s = 100 m
    {
        ArraySpec open = rigid;
        open.sphere = SphereType::OPEN;
        open.mask_enabled = false;
        open.source_model = SourceModel::POINT_SOURCE;
        const double f_ka2 = 2.0 * open.c / (kTwoPi * open.radius);
        const RadialTerm pt = radial_coefficient(open, 100.0, {f_ka2});
        ArraySpec plane = open;
        plane.source_model = SourceModel::PLANE_WAVE;
        const RadialTerm pl = radial_coefficient(
            plane, std::numeric_limits<double>::infinity(), {f_ka2});
        for (int n = 0; n <= 3; ++n)
            if (std::abs(pt.b(0, n) - pl.b(0, n)) / std::abs(pl.b(0, n)) >= 1e-2) {
                ok = false;
                note = "POINT->PLANE convergence failed";
            }
    }

    if (ok) note = "expansion oracle, ASM round trip, BSM agreement, far-field limit";
    report(9, ok ? Status::PASS : Status::FAIL, "steering/encoder suite", note);
}

void criterion_10() {
    BenchConfig cfg;
    cfg.trials = 2;
    bool ok = true;
    std::string note;

    const auto sh = run_bench(BenchSuite::SH_ORDER, cfg);
    const double chans[] = {4, 16, 36, 64, 100, 169};
    if (sh.size() != 6) ok = false;
    for (std::size_t i = 0; ok && i < sh.size(); ++i)
        if (sh[i].extra.at("channels") != chans[i]) ok = false;

    const auto ism = run_bench(BenchSuite::ISM_ORDER, cfg);
    const double imgs[] = {7, 25, 63, 129, 231, 377, 575, 833};
    if (ism.size() != 8) ok = false;
    for (std::size_t i = 0; ok && i < ism.size(); ++i)
        if (ism[i].extra.at("images") != imgs[i]) ok = false;

    const auto srcs = run_bench(BenchSuite::SOURCES, cfg);
    if (srcs.size() != 4) ok = false;

    const auto rot = run_bench(BenchSuite::ROTATION, cfg);
    if (rot.size() != 1 || rot[0].extra.at("frames") != 600.0) ok = false;

    note = ok ? "table shapes: 6 SH rows, 8 ISM rows, 4 source rows, 600-frame rotation"
              : "bench table shape mismatch";
    report(10, ok ? Status::PASS : Status::FAIL, "benchmark table regeneration", note);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criteria_4_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed or explicitly skipped\n");
    return 0;
}
