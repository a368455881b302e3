#include "ambiroom/array.hpp"

#include <cmath>

#include "ambiroom/sh.hpp"
#include "ambiroom/special.hpp"

namespace ambiroom {

void ArraySpec::validate() const {
    if (!(radius > 0.0)) throw ConfigError("array: radius must be positive");
    if (capsule_dirs.n_dirs() < 1) throw ConfigError("array: at least one capsule");
    if (sm_order < 0) throw ConfigError("array: negative steering order");
    if (!(fs > 0.0) || !(c > 0.0)) throw ConfigError("array: invalid fs or c");
}

DirectionGrid capsule_layout(int n_mics) {
    if (n_mics < 1) throw ConfigError("capsule_layout: need at least one capsule");
    int n_theta = std::max(1, static_cast<int>(std::floor(std::sqrt(n_mics / 2.0))));
    int n_phi = (n_mics + n_theta - 1) / n_theta;
    DirectionGrid g = gauss_product_grid(n_theta, n_phi);
    g.azimuths.resize(n_mics);
    g.elevations.resize(n_mics);
    g.weights.resize(n_mics);
    double wsum = 0.0;
    for (double w : g.weights) wsum += w;
    for (double& w : g.weights) w *= kFourPi / wsum;
    return g;
}

double sigmoid_order_mask(const ArraySpec& spec, int n, double ka) {
    if (!spec.mask_enabled) return 1.0;
    const double arg = spec.mask_steepness * (n - ka - spec.mask_offset);
    if (arg > 500.0) return 0.0;
    return 1.0 / (1.0 + std::exp(arg));
}

namespace {

cplx i_pow(int n) {
    switch (((n % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

cplx floor_magnitude(cplx z, double floor_val) {
    const double m = std::abs(z);
    if (m >= floor_val) return z;
    if (m == 0.0) return {floor_val, 0.0};
    return z * (floor_val / m);
}

}  // namespace

RadialTerm radial_coefficient(const ArraySpec& spec, double source_distance,
                              const std::vector<double>& freqs, bool masked) {
    spec.validate();
    const bool point = spec.source_model == SourceModel::POINT_SOURCE &&
                       std::isfinite(source_distance);
    if (spec.source_model == SourceModel::POINT_SOURCE && std::isfinite(source_distance) &&
        source_distance <= spec.radius)
        throw GeometryError("radial_coefficient: source distance must exceed the radius");

    RadialTerm out;
    out.freqs = freqs;
    out.sphere = spec.sphere;
    out.source_model = spec.source_model;
    out.source_distance = source_distance;
    const int n_max = spec.sm_order;
    out.b.setZero(static_cast<Eigen::Index>(freqs.size()), n_max + 1);

    for (std::size_t fi = 0; fi < freqs.size(); ++fi) {
        const double k = kTwoPi * freqs[fi] / spec.c;
        const double ka = k * spec.radius;
        if (ka == 0.0) {
            // DC limit: only the monopole survives, Green's factor -> 1.
            out.b(static_cast<Eigen::Index>(fi), 0) =
                kFourPi * sigmoid_order_mask(spec, 0, 0.0);
            continue;
        }
        const auto j = sph_bessel_j(n_max, ka);
        std::vector<cplx> term(n_max + 1);
        if (spec.sphere == SphereType::OPEN) {
            for (int n = 0; n <= n_max; ++n) term[n] = j[n];
        } else {
            const auto jd = sph_derivative(j, ka);
            const auto h2 = sph_hankel2(n_max, ka);
            const auto h2d = sph_derivative(h2, ka);
            for (int n = 0; n <= n_max; ++n)
                term[n] = j[n] - (jd[n] / floor_magnitude(h2d[n], 1e-12)) * h2[n];
        }
        std::vector<cplx> h2rs;
        if (point) h2rs = sph_hankel2(n_max, k * source_distance);
        for (int n = 0; n <= n_max; ++n) {
            cplx phasing;
            if (point) {
                // Green's-function factor replaces the plane-wave i^n, with
                // unit gain normalization at the array center.
                const double krs = k * source_distance;
                phasing = cplx(0.0, -1.0) * krs * h2rs[n] * std::exp(cplx(0.0, krs));
            } else {
                phasing = i_pow(n);
            }
            const double mask = masked ? sigmoid_order_mask(spec, n, ka) : 1.0;
            out.b(static_cast<Eigen::Index>(fi), n) = kFourPi * phasing * term[n] * mask;
        }
    }
    return out;
}

SteeringMatrix steering_matrix(const ArraySpec& spec, const DirectionGrid& sources,
                               std::size_t nfft, double source_distance) {
    spec.validate();
    if (sources.n_dirs() < 1) throw ConfigError("steering_matrix: no source directions");
    if (nfft < 2) throw ConfigError("steering_matrix: nfft too small");

    SteeringMatrix out;
    out.source_dirs = sources;
    const std::size_t n_bins = nfft / 2 + 1;
    out.freqs.resize(n_bins);
    for (std::size_t f = 0; f < n_bins; ++f)
        out.freqs[f] = static_cast<double>(f) * spec.fs / nfft;

    const RadialTerm radial = radial_coefficient(spec, source_distance, out.freqs, true);
    const Eigen::MatrixXd y_caps = sh_basis(spec.capsule_dirs, spec.sm_order).matrix;
    const Eigen::MatrixXd y_src = sh_basis(sources, spec.sm_order).matrix;
    const int dim = sh_channel_count(spec.sm_order);

    out.v.reserve(n_bins);
    Eigen::VectorXcd b_acn(dim);
    for (std::size_t f = 0; f < n_bins; ++f) {
        for (int n = 0; n <= spec.sm_order; ++n)
            for (int m = -n; m <= n; ++m)
                b_acn(acn_index(n, m)) = radial.b(static_cast<Eigen::Index>(f), n);
        out.v.push_back(y_caps.cast<cplx>() * b_acn.asDiagonal() *
                        y_src.transpose().cast<cplx>());
    }
    return out;
}

double default_tikhonov_eps(const Eigen::MatrixXcd& v, double lambda) {
    const double tr = (v * v.adjoint()).trace().real();
    return lambda * tr / static_cast<double>(v.rows());
}

namespace {

// Regularized right pseudo-inverse factor: (V V^H + eps I)^{-1}, with the
// eps = 0 path guarded against singular V V^H.
Eigen::MatrixXcd damped_gram_inverse(const Eigen::MatrixXcd& v, double eps) {
    const Eigen::Index m = v.rows();
    Eigen::MatrixXcd gram = v * v.adjoint();
    if (eps == 0.0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
        const double lo = es.eigenvalues().minCoeff();
        const double hi = es.eigenvalues().maxCoeff();
        if (!(lo > 1e-12 * std::max(hi, 1e-300)))
            throw NumericalError(
                "asm/bsm: V V^H is singular with eps = 0; use eps > 0");
    }
    gram += eps * Eigen::MatrixXcd::Identity(m, m);
    return gram.ldlt().solve(Eigen::MatrixXcd::Identity(m, m));
}

}  // namespace

std::vector<Eigen::MatrixXcd> asm_filters(const SteeringMatrix& v, int order, double eps) {
    if (v.v.empty()) throw ConfigError("asm_filters: empty steering matrix");
    if (v.source_dirs.n_dirs() < sh_channel_count(order))
        throw ConfigError("asm_filters: design grid under-determined for this order");
    const Eigen::MatrixXcd y = sh_basis(v.source_dirs, order).matrix.cast<cplx>();
    std::vector<Eigen::MatrixXcd> w;
    w.reserve(v.v.size());
    for (const auto& vb : v.v) {
        const double e = eps < 0.0 ? default_tikhonov_eps(vb) : eps;
        w.push_back(y.adjoint() * vb.adjoint() * damped_gram_inverse(vb, e));
    }
    return w;
}

std::vector<Eigen::MatrixXcd> bsm_filters(const SteeringMatrix& v, const ShHrtf& hrtf,
                                          double eps, bool magls_pre, double magls_fc) {
    if (v.v.empty()) throw ConfigError("bsm_filters: empty steering matrix");
    if (v.v.size() != hrtf.n_bins())
        throw ConfigError("bsm_filters: steering and HRTF bin grids differ");
    const int s = v.source_dirs.n_dirs();
    const Eigen::MatrixXcd y = sh_basis(v.source_dirs, hrtf.order).matrix.cast<cplx>();

    // HRTF synthesized on the design grid: (S, n_bins) per ear.
    std::array<Eigen::MatrixXcd, 2> h;
    for (int ear = 0; ear < 2; ++ear) h[ear] = y * hrtf.coeffs[ear];

    if (magls_pre) {
        const double fc = magls_fc > 0.0 ? magls_fc : default_magls_fc(hrtf.order);
        for (int ear = 0; ear < 2; ++ear) {
            for (std::size_t f = 1; f + 1 < v.v.size(); ++f) {
                if (v.freqs[f] <= fc) continue;
                for (int p = 0; p < s; ++p) {
                    const Eigen::Index fe = static_cast<Eigen::Index>(f);
                    const double phase = std::arg(h[ear](p, fe - 1));
                    h[ear](p, fe) = std::abs(h[ear](p, fe)) * std::exp(cplx(0.0, phase));
                }
            }
        }
    }

    std::vector<Eigen::MatrixXcd> w;
    w.reserve(v.v.size());
    for (std::size_t f = 0; f < v.v.size(); ++f) {
        const auto& vb = v.v[f];
        const double e = eps < 0.0 ? default_tikhonov_eps(vb) : eps;
        const Eigen::MatrixXcd inv = damped_gram_inverse(vb, e);
        Eigen::MatrixXcd wf(2, vb.rows());
        for (int ear = 0; ear < 2; ++ear)
            wf.row(ear) =
                h[ear].col(static_cast<Eigen::Index>(f)).transpose() * vb.adjoint() * inv;
        w.push_back(std::move(wf));
    }
    return w;
}

DirectionGrid design_grid(int order, int sm_order) {
    return analysis_grid(std::max(order, sm_order) + 2);
}

}  // namespace ambiroom
