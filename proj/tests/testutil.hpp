#ifndef SELFDUAL_TESTUTIL_HPP
#define SELFDUAL_TESTUTIL_HPP

#include <complex>
#include <functional>
#include <random>

namespace sdtest {

// Seeded generators so every test run sees the same samples.
inline std::mt19937_64 rng(unsigned seed = 20240911u) { return std::mt19937_64(seed); }

inline std::complex<double> random_complex(std::mt19937_64& g, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    return {d(g), d(g)};
}

// Composite-Simpson quadrature of a complex integrand along a straight segment,
// with interval doubling until two refinements agree.
inline std::complex<double> integrate_segment(const std::function<std::complex<double>(std::complex<double>)>& f,
                                              std::complex<double> a, std::complex<double> b, double tol = 1e-10) {
    auto simpson = [&](int n) {
        std::complex<double> s = 0.0;
        const std::complex<double> h = (b - a) / double(n);
        for (int i = 0; i < n; ++i) {
            const std::complex<double> x0 = a + h * double(i);
            s += (f(x0) + 4.0 * f(x0 + 0.5 * h) + f(x0 + h)) * (h / 6.0);
        }
        return s;
    };
    std::complex<double> prev = simpson(16);
    for (int n = 32; n <= 16384; n *= 2) {
        const std::complex<double> cur = simpson(n);
        if (std::abs(cur - prev) < tol) return cur;
        prev = cur;
    }
    return prev;
}

}  // namespace sdtest

#endif
