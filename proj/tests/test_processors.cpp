#include <doctest.h>

#include <random>

#include "ambiroom/fft.hpp"
#include "ambiroom/processors.hpp"
#include "ambiroom/sh.hpp"
#include "ambiroom/synth_hrtf.hpp"

using namespace ambiroom;

namespace {

ShHrtf flat_order0_hrtf(double fs = 48000.0, std::size_t nfft = 64) {
    ShHrtf h;
    h.order = 0;
    h.mode = HrtfMode::LS;
    h.nfft = nfft;
    h.fs = fs;
    for (int ear = 0; ear < 2; ++ear)
        h.coeffs[ear] = Eigen::MatrixXcd::Ones(1, static_cast<Eigen::Index>(nfft / 2 + 1));
    return h;
}

SpatialSignal random_sh(int order, std::size_t n, unsigned seed, double fs = 48000.0) {
    SpatialSignal s = SpatialSignal::sh_time(1, order, n, fs);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int ch = 0; ch < s.n_spatial(); ++ch)
        for (std::size_t f = 0; f < n; ++f) s.at(0, ch, f) = u(rng);
    return s;
}

ArraySpec quickstart_array() {
    ArraySpec a;
    a.capsule_dirs = capsule_layout(32);
    a.radius = 0.042;
    a.sphere = SphereType::RIGID;
    a.sm_order = 3;
    a.fs = 48000.0;
    return a;
}

}  // namespace

TEST_CASE("order-0 flat HRTF is a passthrough on both ears") {
    const BinauralDecoder dec(flat_order0_hrtf());
    SpatialSignal rir = random_sh(0, 100, 1);
    const SpatialSignal out = dec.process(rir);
    CHECK(out.n_spatial() == 2);
    CHECK(out.space_domain() == SpaceDomain::SPACE);
    for (int ear = 0; ear < 2; ++ear)
        for (std::size_t t = 0; t < 100; ++t)
            CHECK(out.at(0, ear, t).real() ==
                  doctest::Approx(rir.at(0, 0, t).real()).epsilon(1e-9));
}

TEST_CASE("binaural decode equals the per-bin inner product") {
    const HrtfSet set = generate_synthetic_hrtf(analysis_grid(4), {});
    const ShHrtf sh = project_ls(set, 2);
    const BinauralDecoder dec(sh);
    SpatialSignal sig = random_sh(2, 64, 3);
    const SpatialSignal out = dec.process(sig);

    // manual oracle
    const std::size_t out_len = 64 + sh.nfft - 1;
    const std::size_t nfft = next_pow2(out_len);
    const ShHrtf shb = project_ls(resample_hrtf(set, set.fs), 2, nfft);
    std::vector<std::vector<cplx>> spec(9);
    for (int ch = 0; ch < 9; ++ch) spec[ch] = fft::rfft(sig.real_frames(0, ch), nfft);
    for (int ear = 0; ear < 2; ++ear) {
        std::vector<cplx> acc(nfft / 2 + 1, 0.0);
        for (std::size_t f = 0; f < acc.size(); ++f)
            for (int ch = 0; ch < 9; ++ch)
                acc[f] += shb.coeffs[ear](ch, static_cast<Eigen::Index>(f)) * spec[ch][f];
        const auto ir = fft::irfft(acc, nfft);
        for (std::size_t t = 0; t < out_len; ++t)
            CHECK(out.at(0, ear, t).real() == doctest::Approx(ir[t]).epsilon(1e-8));
    }
}

TEST_CASE("decode linearity") {
    const BinauralDecoder dec(project_ls(generate_synthetic_hrtf(analysis_grid(4), {}), 2));
    SpatialSignal x = random_sh(2, 40, 11);
    SpatialSignal y = random_sh(2, 40, 12);
    SpatialSignal mix = x.clone();
    for (int ch = 0; ch < 9; ++ch)
        for (std::size_t t = 0; t < 40; ++t)
            mix.at(0, ch, t) = 2.0 * x.at(0, ch, t) - 0.5 * y.at(0, ch, t);
    const SpatialSignal dx = dec.process(x), dy = dec.process(y), dm = dec.process(mix);
    for (int ear = 0; ear < 2; ++ear)
        for (std::size_t t = 0; t < dm.n_frames(); ++t)
            CHECK(std::abs(dm.at(0, ear, t) -
                           (2.0 * dx.at(0, ear, t) - 0.5 * dy.at(0, ear, t))) < 1e-10);
}

TEST_CASE("hrtf order handling: silent truncation, signal excess is an error") {
    const HrtfSet set = generate_synthetic_hrtf(analysis_grid(4), {});
    const ShHrtf sh3 = project_ls(set, 3);
    const BinauralDecoder dec1(sh3, 1);  // silent truncation
    CHECK(dec1.in_order() == 1);
    CHECK(dec1.hrtf().order == 1);
    // truncated coefficients equal the leading rows of the full projection
    const ShHrtf sh1 = project_ls(set, 1);
    CHECK((dec1.hrtf().coeffs[0] - sh3.coeffs[0].topRows(4)).cwiseAbs().maxCoeff() == 0.0);

    SpatialSignal high = random_sh(3, 16, 5);
    CHECK_THROWS_AS((void)dec1.process(high), ConfigError);
    CHECK_THROWS_AS(BinauralDecoder(sh3, 5), ConfigError);  // above the HRTF order
}

TEST_CASE("lower-order signals are accepted by higher-order processors") {
    const BinauralDecoder dec(project_ls(generate_synthetic_hrtf(analysis_grid(4), {}), 3));
    SpatialSignal low = random_sh(1, 30, 6);
    const SpatialSignal out = dec.process(low);
    // equals decoding with the hrtf truncated to the signal order
    const BinauralDecoder dec1(project_ls(generate_synthetic_hrtf(analysis_grid(4), {}), 3), 1);
    const SpatialSignal ref = dec1.process(low);
    for (int ear = 0; ear < 2; ++ear)
        for (std::size_t t = 0; t < ref.n_frames(); ++t)
            CHECK(std::abs(out.at(0, ear, t) - ref.at(0, ear, t)) < 1e-10);
}

TEST_CASE("sample-rate mismatch surfaces before compute") {
    const BinauralDecoder dec(flat_order0_hrtf(44100.0));
    SpatialSignal sig = random_sh(0, 32, 7, 48000.0);
    CHECK_THROWS_AS((void)dec.process(sig), ConfigError);
}

TEST_CASE("chain of one behaves identically") {
    auto dec = std::make_shared<BinauralDecoder>(
        project_ls(generate_synthetic_hrtf(analysis_grid(4), {}), 2));
    const ProcessorChain chain({dec});
    SpatialSignal sig = random_sh(2, 50, 8);
    const SpatialSignal a = chain.process(sig);
    const SpatialSignal b = dec->process(sig);
    REQUIRE(a.n_frames() == b.n_frames());
    for (int ear = 0; ear < 2; ++ear)
        for (std::size_t t = 0; t < a.n_frames(); ++t)
            CHECK(std::abs(a.at(0, ear, t) - b.at(0, ear, t)) < 1e-12);
}

TEST_CASE("chain([ArrayDecoder, AsmEncoder]) collapses to the per-bin kernel product") {
    const ArraySpec spec = quickstart_array();
    auto ad = std::make_shared<ArrayDecoder>(spec, 3);
    auto asm_enc = std::make_shared<AsmEncoder>(spec, 3);
    const ProcessorChain chain({ad, asm_enc});
    CHECK(chain.in_space() == SpaceDomain::SH);
    CHECK(chain.out_space() == SpaceDomain::SH);

    SpatialSignal sig = random_sh(3, 64, 9);
    const SpatialSignal collapsed = chain.process(sig);

    // manual oracle at the chain's transform size
    const std::size_t out_len = 64 + chain.kernel_tail() - 1;
    const std::size_t nfft = next_pow2(out_len);
    REQUIRE(collapsed.n_frames() == out_len);
    const auto ka = ad->kernel(nfft, 48000.0);
    const auto kb = asm_enc->kernel(nfft, 48000.0);
    const std::size_t n_bins = nfft / 2 + 1;
    std::vector<std::vector<cplx>> spec_in(16);
    for (int ch = 0; ch < 16; ++ch) spec_in[ch] = fft::rfft(sig.real_frames(0, ch), nfft);
    Eigen::MatrixXcd want(16, static_cast<Eigen::Index>(n_bins));
    for (std::size_t f = 0; f < n_bins; ++f) {
        Eigen::VectorXcd x(16);
        for (int ch = 0; ch < 16; ++ch) x(ch) = spec_in[ch][f];
        want.col(static_cast<Eigen::Index>(f)) = kb[f] * (ka[f] * x);
    }
    double max_abs = 0.0, max_err = 0.0;
    std::vector<cplx> bins(n_bins);
    for (int ch = 0; ch < 16; ++ch) {
        for (std::size_t f = 0; f < n_bins; ++f)
            bins[f] = want(ch, static_cast<Eigen::Index>(f));
        const auto ir = fft::irfft(bins, nfft);
        for (std::size_t t = 0; t < out_len; ++t) {
            max_abs = std::max(max_abs, std::abs(ir[t]));
            max_err = std::max(max_err, std::abs(collapsed.at(0, ch, t) - ir[t]));
        }
    }
    CHECK(max_err < 1e-9 * std::max(max_abs, 1.0));
}

TEST_CASE("chain performs exactly one forward/inverse transform pair") {
    const ArraySpec spec = quickstart_array();
    const ProcessorChain chain({std::make_shared<ArrayDecoder>(spec, 3),
                                std::make_shared<AsmEncoder>(spec, 3)});
    SpatialSignal sig = random_sh(3, 64, 10);
    SpatialSignal::reset_conversion_stats();
    (void)chain.process(sig);
    const auto st = SpatialSignal::conversion_stats();
    CHECK(st.to_freq == 1);
    CHECK(st.to_time == 1);
}

TEST_CASE("incompatible chain contracts rejected at construction") {
    const ArraySpec spec = quickstart_array();
    auto dec = std::make_shared<BinauralDecoder>(
        project_ls(generate_synthetic_hrtf(analysis_grid(4), {}), 3));
    // BinauralDecoder emits 2 SPACE channels; ArrayDecoder wants 16 SH channels.
    CHECK_THROWS_AS(
        (ProcessorChain({dec, std::make_shared<ArrayDecoder>(spec, 3)})), ConfigError);
    CHECK_THROWS_AS((ProcessorChain({})), ConfigError);
}

TEST_CASE("wrong space domain and wrong channel count rejected") {
    const ArraySpec spec = quickstart_array();
    const AsmEncoder enc(spec, 3);
    SpatialSignal sh_sig = random_sh(3, 16, 13);
    CHECK_THROWS_AS((void)enc.process(sh_sig), ConfigError);  // SH into SPACE input
    SpatialSignal wrong(1, 8, 16, 48000.0);
    CHECK_THROWS_AS((void)enc.process(wrong), ConfigError);  // 8 != 32 capsules
}
