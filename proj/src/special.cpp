#include "ambiroom/special.hpp"

#include <cmath>

namespace ambiroom {

std::vector<double> sph_bessel_j(int n_max, double x) {
    if (n_max < 0) throw ConfigError("sph_bessel_j: negative order");
    if (x < 0.0) throw NumericalError("sph_bessel_j: negative argument");
    std::vector<double> j(n_max + 1, 0.0);
    if (x == 0.0) {
        j[0] = 1.0;
        return j;
    }
    // Start the downward recurrence well above n_max.
    const int start = n_max + 16 + static_cast<int>(std::ceil(1.5 * x));
    double fp = 0.0;          // f_{n+1}
    double fc = 1e-30;        // f_n
    std::vector<double> tmp(n_max + 1, 0.0);
    for (int n = start; n >= 1; --n) {
        const double fm = (2.0 * n + 1.0) / x * fc - fp;
        fp = fc;
        fc = fm;
        if (n - 1 <= n_max) tmp[n - 1] = fc;
        if (std::abs(fc) > 1e250) {  // renormalize to avoid overflow
            const double s = 1e-250;
            fc *= s;
            fp *= s;
            for (double& v : tmp) v *= s;
        }
    }
    const double j0 = std::sin(x) / x;
    const double scale = j0 / tmp[0];
    for (int n = 0; n <= n_max; ++n) j[n] = tmp[n] * scale;
    return j;
}

std::vector<double> sph_bessel_y(int n_max, double x) {
    if (n_max < 0) throw ConfigError("sph_bessel_y: negative order");
    if (x <= 0.0) throw NumericalError("sph_bessel_y: singular at x <= 0");
    std::vector<double> y(n_max + 1);
    y[0] = -std::cos(x) / x;
    if (n_max >= 1) y[1] = -std::cos(x) / (x * x) - std::sin(x) / x;
    for (int n = 1; n < n_max; ++n)
        y[n + 1] = (2.0 * n + 1.0) / x * y[n] - y[n - 1];
    return y;
}

std::vector<cplx> sph_hankel2(int n_max, double x) {
    const auto j = sph_bessel_j(n_max, x);
    const auto y = sph_bessel_y(n_max, x);
    std::vector<cplx> h(n_max + 1);
    for (int n = 0; n <= n_max; ++n) h[n] = cplx(j[n], -y[n]);
    return h;
}

std::vector<double> legendre_pn(int n_max, double x) {
    std::vector<double> p(n_max + 1);
    p[0] = 1.0;
    if (n_max >= 1) p[1] = x;
    for (int n = 1; n < n_max; ++n)
        p[n + 1] = ((2.0 * n + 1.0) * x * p[n] - n * p[n - 1]) / (n + 1.0);
    return p;
}

}  // namespace ambiroom
