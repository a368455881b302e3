#pragma once

#include <vector>

#include "ambiroom/types.hpp"

namespace ambiroom {

// Spherical Bessel functions j_n, y_n and Hankel h2_n = j_n - i*y_n for
// n = 0..n_max. j uses downward (Miller) recurrence normalized at n = 0,
// y the upward recurrence. x = 0 is the limit for j (1, 0, 0, ...) and a
// singularity error for y/h2.
std::vector<double> sph_bessel_j(int n_max, double x);
std::vector<double> sph_bessel_y(int n_max, double x);
std::vector<cplx> sph_hankel2(int n_max, double x);

// Derivatives: f'_n(x) = f_{n-1}(x) - (n+1)/x * f_n(x), f'_0 = -f_1.
template <typename T>
std::vector<T> sph_derivative(const std::vector<T>& f, double x) {
    std::vector<T> d(f.size());
    if (!f.empty()) d[0] = (f.size() > 1) ? -f[1] : T(0);
    for (std::size_t n = 1; n < f.size(); ++n)
        d[n] = f[n - 1] - (static_cast<double>(n + 1) / x) * f[n];
    return d;
}

// Legendre polynomials P_0..P_n at x.
std::vector<double> legendre_pn(int n_max, double x);

}  // namespace ambiroom
