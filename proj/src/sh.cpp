#include "ambiroom/sh.hpp"

#include <cmath>
#include <vector>

namespace ambiroom {

namespace {

// Fully normalized associated Legendre functions (no Condon-Shortley phase),
// including the 1/sqrt(4pi) factor, via the standard stable upward recurrence
// with sector-first seeding. x = cos(colatitude).
void normalized_legendre(int order, double x, Eigen::MatrixXd& p) {
    const double sx = std::sqrt(std::max(0.0, 1.0 - x * x));
    p.setZero(order + 1, order + 1);
    p(0, 0) = std::sqrt(1.0 / kFourPi);
    for (int m = 1; m <= order; ++m)
        p(m, m) = p(m - 1, m - 1) * sx * std::sqrt((2.0 * m + 1.0) / (2.0 * m));
    for (int m = 0; m < order; ++m)
        p(m + 1, m) = p(m, m) * x * std::sqrt(2.0 * m + 3.0);
    for (int m = 0; m <= order; ++m) {
        for (int n = m + 2; n <= order; ++n) {
            const double a = std::sqrt((2.0 * n + 1.0) * (2.0 * n - 1.0) /
                                       (static_cast<double>(n - m) * (n + m)));
            const double b = std::sqrt((2.0 * n + 1.0) * (n - 1.0 - m) * (n - 1.0 + m) /
                                       ((2.0 * n - 3.0) * (n - m) * (n + m)));
            p(n, m) = a * x * p(n - 1, m) - b * p(n - 2, m);
        }
    }
}

std::vector<double> log_factorials(int n_max) {
    std::vector<double> lf(n_max + 1, 0.0);
    for (int i = 2; i <= n_max; ++i) lf[i] = lf[i - 1] + std::log(static_cast<double>(i));
    return lf;
}

// Wigner small-d for the complex SH basis (Condon-Shortley convention).
double wigner_small_d(int j, int mp, int m, double beta, const std::vector<double>& lf) {
    const double ch = std::cos(0.5 * beta);
    const double sh = std::sin(0.5 * beta);
    const double pre = 0.5 * (lf[j + mp] + lf[j - mp] + lf[j + m] + lf[j - m]);
    const int s_lo = std::max(0, m - mp);
    const int s_hi = std::min(j + m, j - mp);
    double sum = 0.0;
    for (int s = s_lo; s <= s_hi; ++s) {
        const double ln = pre - (lf[j + m - s] + lf[s] + lf[mp - m + s] + lf[j - mp - s]);
        const double term = std::exp(ln) * std::pow(ch, 2 * j + m - mp - 2 * s) *
                            std::pow(sh, mp - m + 2 * s);
        sum += ((mp - m + s) % 2 == 0 ? term : -term);
    }
    return sum;
}

// Per-degree complex->real change of basis: rows are real-SH indices m_r,
// columns complex-SH orders m_c, both -n..n.
Eigen::MatrixXcd real_from_complex_basis(int n) {
    const int dim = 2 * n + 1;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(dim, dim);
    c(n, n) = 1.0;
    for (int m = 1; m <= n; ++m) {
        const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
        c(n + m, n + m) = sgn * inv_sqrt2;
        c(n + m, n - m) = inv_sqrt2;
        c(n - m, n + m) = cplx(0.0, -sgn * inv_sqrt2);
        c(n - m, n - m) = cplx(0.0, inv_sqrt2);
    }
    return c;
}

// One real rotation block of degree n for intrinsic z-y-z angles.
Eigen::MatrixXd real_wigner_block(int n, double alpha, double beta, double gamma,
                                  const std::vector<double>& lf) {
    const int dim = 2 * n + 1;
    // In this real-basis convention the active coefficient transform for
    // R = Rz(alpha) Ry(beta) Rz(gamma) carries e^{+i m' alpha} on rows and
    // e^{+i m gamma} on columns; verified by the point-evaluation oracle.
    Eigen::MatrixXcd d(dim, dim);
    for (int mp = -n; mp <= n; ++mp) {
        for (int m = -n; m <= n; ++m) {
            const double small = wigner_small_d(n, mp, m, beta, lf);
            const cplx phase = std::exp(cplx(0.0, mp * alpha + m * gamma));
            d(n + mp, n + m) = phase * small;
        }
    }
    const Eigen::MatrixXcd c = real_from_complex_basis(n);
    return (c * d * c.adjoint()).real();
}

}  // namespace

Eigen::VectorXd sh_vector(double azimuth, double elevation, int order) {
    if (order < 0) throw ConfigError("sh_vector: negative order");
    Eigen::MatrixXd p;
    normalized_legendre(order, std::sin(elevation), p);  // cos(colat) = sin(el)
    const double sqrt2 = std::sqrt(2.0);
    Eigen::VectorXd y(sh_channel_count(order));
    for (int n = 0; n <= order; ++n) {
        y(acn_index(n, 0)) = p(n, 0);
        for (int m = 1; m <= n; ++m) {
            y(acn_index(n, m)) = sqrt2 * p(n, m) * std::cos(m * azimuth);
            y(acn_index(n, -m)) = sqrt2 * p(n, m) * std::sin(m * azimuth);
        }
    }
    return y;
}

ShBasisMatrix sh_basis(const DirectionGrid& grid, int order) {
    if (order < 0) throw ConfigError("sh_basis: negative order");
    ShBasisMatrix b;
    b.order = order;
    b.matrix.resize(grid.n_dirs(), sh_channel_count(order));
    for (int p = 0; p < grid.n_dirs(); ++p)
        b.matrix.row(p) = sh_vector(grid.azimuths[p], grid.elevations[p], order).transpose();
    return b;
}

template <typename Mat>
static Mat sh_analysis_impl(const Mat& values, const DirectionGrid& grid, int order) {
    if (values.rows() != grid.n_dirs())
        throw FormatError("sh_analysis: values/grid length mismatch");
    const ShBasisMatrix y = sh_basis(grid, order);
    Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(grid.weights.data(), grid.n_dirs());
    return y.matrix.transpose() * w.asDiagonal() * values;
}

Eigen::MatrixXcd sh_analysis(const Eigen::MatrixXcd& values, const DirectionGrid& grid,
                             int order) {
    return sh_analysis_impl(values, grid, order);
}

Eigen::MatrixXd sh_analysis(const Eigen::MatrixXd& values, const DirectionGrid& grid,
                            int order) {
    return sh_analysis_impl(values, grid, order);
}

WignerDMatrix wigner_d_matrix(int order, double alpha, double beta, double gamma) {
    if (order < 0) throw ConfigError("wigner_d_matrix: negative order");
    WignerDMatrix d;
    d.order = order;
    d.alpha = alpha;
    d.beta = beta;
    d.gamma = gamma;
    const int dim = sh_channel_count(order);
    d.matrix = Eigen::MatrixXd::Zero(dim, dim);
    if (beta == 0.0 && gamma == 0.0) {
        // Pure-azimuth closed form: per-degree cos/sin pair rotation.
        for (int n = 0; n <= order; ++n) {
            d.matrix(acn_index(n, 0), acn_index(n, 0)) = 1.0;
            for (int m = 1; m <= n; ++m) {
                const double c = std::cos(m * alpha), s = std::sin(m * alpha);
                d.matrix(acn_index(n, m), acn_index(n, m)) = c;
                d.matrix(acn_index(n, m), acn_index(n, -m)) = -s;
                d.matrix(acn_index(n, -m), acn_index(n, m)) = s;
                d.matrix(acn_index(n, -m), acn_index(n, -m)) = c;
            }
        }
        return d;
    }
    const std::vector<double> lf = log_factorials(2 * order + 1);
    for (int n = 0; n <= order; ++n) {
        const int off = n * n;
        d.matrix.block(off, off, 2 * n + 1, 2 * n + 1) =
            real_wigner_block(n, alpha, beta, gamma, lf);
    }
    return d;
}

Eigen::Matrix3d euler_zyz_matrix(double alpha, double beta, double gamma) {
    Eigen::Matrix3d rz1 = Eigen::AngleAxisd(alpha, Eigen::Vector3d::UnitZ()).toRotationMatrix();
    Eigen::Matrix3d ry = Eigen::AngleAxisd(beta, Eigen::Vector3d::UnitY()).toRotationMatrix();
    Eigen::Matrix3d rz2 = Eigen::AngleAxisd(gamma, Eigen::Vector3d::UnitZ()).toRotationMatrix();
    return rz1 * ry * rz2;
}

void rotate_sh(SpatialSignal& sig, const WignerDMatrix& d) {
    if (sig.space_domain() != SpaceDomain::SH)
        throw ConfigError("rotate_sh: signal must be in the SH domain");
    if (sig.sh_order() != d.order)
        throw ConfigError("rotate_sh: order mismatch between signal and matrix");
    const int dim = sig.n_spatial();
    const std::size_t nf = sig.n_frames();
    const Eigen::MatrixXcd dm = d.matrix.cast<cplx>();
    using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    for (int c = 0; c < sig.n_channels(); ++c) {
        Eigen::Map<RowMat> block(&sig.at(c, 0, 0), dim, static_cast<Eigen::Index>(nf));
        block = (dm * block).eval();
    }
}

void rotate_sh_azimuth(SpatialSignal& sig, double alpha) {
    if (sig.space_domain() != SpaceDomain::SH)
        throw ConfigError("rotate_sh_azimuth: signal must be in the SH domain");
    const int order = sig.sh_order();
    const std::size_t nf = sig.n_frames();
    for (int c = 0; c < sig.n_channels(); ++c) {
        for (int n = 1; n <= order; ++n) {
            for (int m = 1; m <= n; ++m) {
                const double co = std::cos(m * alpha), si = std::sin(m * alpha);
                cplx* vp = &sig.at(c, acn_index(n, m), 0);
                cplx* vm = &sig.at(c, acn_index(n, -m), 0);
                for (std::size_t f = 0; f < nf; ++f) {
                    const cplx a = vp[f], b = vm[f];
                    vp[f] = co * a - si * b;
                    vm[f] = si * a + co * b;
                }
            }
        }
    }
}

}  // namespace ambiroom
