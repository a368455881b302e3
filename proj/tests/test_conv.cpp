#include <doctest.h>

#include <chrono>
#include <random>

#include "ambiroom/conv.hpp"

using namespace ambiroom;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

double rel_err(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return std::sqrt(num / std::max(den, 1e-300));
}

}  // namespace

TEST_CASE("selection rule: OLA iff n_fir * 8 < n_sig, 20-case grid") {
    const std::size_t sigs[] = {100, 500, 1023, 1024, 1025, 4096, 16384, 48000, 100000, 257};
    const std::size_t firs[] = {16, 128};
    int cases = 0;
    for (std::size_t ns : sigs)
        for (std::size_t nf : firs) {
            const ConvPlan p = plan_convolution(ns, nf);
            const bool want_ola = nf * 8 < ns;
            CHECK(p.mode == (want_ola ? ConvMode::OLA : ConvMode::DIRECT));
            if (want_ola) {
                CHECK(p.block == 4 * next_pow2(nf));
                CHECK(p.nfft >= p.block + nf - 1);
            }
            ++cases;
        }
    CHECK(cases == 20);
    CHECK(plan_convolution(500, 400).mode == ConvMode::DIRECT);   // 3200 >= 500
    CHECK(plan_convolution(48000, 128).mode == ConvMode::OLA);    // 1024 < 48000
}

TEST_CASE("delta FIR is the identity") {
    std::mt19937 rng(1);
    const auto sig = random_vec(333, rng);
    const auto out = convolve(sig, {1.0});
    REQUIRE(out.size() == sig.size());
    for (std::size_t i = 0; i < sig.size(); ++i) CHECK(out[i] == doctest::Approx(sig[i]));
}

TEST_CASE("OLA equals direct on 50 random shape combinations") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<std::size_t> sig_len(64, 6000);
    std::uniform_int_distribution<std::size_t> fir_len(1, 300);
    for (int t = 0; t < 50; ++t) {
        const auto sig = random_vec(sig_len(rng), rng);
        const auto fir = random_vec(fir_len(rng), rng);
        const auto a = convolve_ola(sig, fir);
        const auto b = convolve_direct(sig, fir);
        REQUIRE(a.size() == b.size());
        REQUIRE(a.size() == sig.size() + fir.size() - 1);
        CHECK(rel_err(a, b) < 1e-9);
    }
}

TEST_CASE("48000-sample / 128-tap case: OLA selected and faster") {
    std::mt19937 rng(7);
    const auto sig = random_vec(48000, rng);
    const auto fir = random_vec(128, rng);
    REQUIRE(plan_convolution(sig.size(), fir.size()).mode == ConvMode::OLA);

    using Clock = std::chrono::steady_clock;
    (void)convolve_ola(sig, fir);  // warm the FFT plans
    auto t0 = Clock::now();
    const auto a = convolve_ola(sig, fir);
    const double t_ola = std::chrono::duration<double>(Clock::now() - t0).count();
    t0 = Clock::now();
    const auto b = convolve_direct(sig, fir);
    const double t_direct = std::chrono::duration<double>(Clock::now() - t0).count();
    CHECK(rel_err(a, b) < 1e-9);
    CHECK(t_ola < t_direct);
}

TEST_CASE("SpatialSignal convolution preserves metadata") {
    SpatialSignal s = SpatialSignal::sh_time(1, 1, 50, 48000.0);
    for (std::size_t f = 0; f < 50; ++f) s.at(0, 0, f) = (f == 0) ? 1.0 : 0.0;
    std::mt19937 rng(5);
    const auto fir = random_vec(8, rng);
    const SpatialSignal out = convolve(s, fir);
    CHECK(out.n_frames() == 57);
    CHECK(out.space_domain() == SpaceDomain::SH);
    CHECK(out.sh_order() == 1);
    for (std::size_t f = 0; f < 8; ++f)
        CHECK(out.at(0, 0, f).real() == doctest::Approx(fir[f]));
    CHECK_THROWS_AS(convolve(s, std::vector<double>{}), ConfigError);
}
