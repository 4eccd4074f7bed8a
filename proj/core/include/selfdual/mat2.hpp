#ifndef SELFDUAL_MAT2_HPP
#define SELFDUAL_MAT2_HPP

#include <array>
#include <cmath>
#include <complex>

namespace sd {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline const cplx iu{0.0, 1.0};

/// 2x2 complex matrix with value semantics. Row-major storage.
struct mat2 {
    std::array<cplx, 4> a{};  // a[0]=m11 a[1]=m12 a[2]=m21 a[3]=m22

    mat2() = default;
    mat2(cplx m11, cplx m12, cplx m21, cplx m22) : a{m11, m12, m21, m22} {}

    static mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static mat2 diag(cplx d1, cplx d2) { return {d1, 0.0, 0.0, d2}; }

    cplx& operator()(int r, int c) { return a[2 * r + c]; }
    const cplx& operator()(int r, int c) const { return a[2 * r + c]; }

    mat2 operator+(const mat2& o) const { return {a[0] + o.a[0], a[1] + o.a[1], a[2] + o.a[2], a[3] + o.a[3]}; }
    mat2 operator-(const mat2& o) const { return {a[0] - o.a[0], a[1] - o.a[1], a[2] - o.a[2], a[3] - o.a[3]}; }
    mat2 operator-() const { return {-a[0], -a[1], -a[2], -a[3]}; }
    mat2 operator*(const mat2& o) const {
        return {a[0] * o.a[0] + a[1] * o.a[2], a[0] * o.a[1] + a[1] * o.a[3],
                a[2] * o.a[0] + a[3] * o.a[2], a[2] * o.a[1] + a[3] * o.a[3]};
    }
    mat2 operator*(cplx s) const { return {a[0] * s, a[1] * s, a[2] * s, a[3] * s}; }
    mat2 operator/(cplx s) const { return {a[0] / s, a[1] / s, a[2] / s, a[3] / s}; }
    mat2& operator+=(const mat2& o) {
        for (int i = 0; i < 4; ++i) a[i] += o.a[i];
        return *this;
    }
    mat2& operator-=(const mat2& o) {
        for (int i = 0; i < 4; ++i) a[i] -= o.a[i];
        return *this;
    }
    mat2& operator*=(cplx s) {
        for (int i = 0; i < 4; ++i) a[i] *= s;
        return *this;
    }

    cplx det() const { return a[0] * a[3] - a[1] * a[2]; }
    cplx trace() const { return a[0] + a[3]; }
    mat2 inverse() const {
        const cplx d = det();
        return {a[3] / d, -a[1] / d, -a[2] / d, a[0] / d};
    }
    mat2 transpose() const { return {a[0], a[2], a[1], a[3]}; }
    mat2 conj() const { return {std::conj(a[0]), std::conj(a[1]), std::conj(a[2]), std::conj(a[3])}; }
    mat2 adjointT() const { return conj().transpose(); }

    /// Frobenius norm.
    double norm() const {
        double s = 0;
        for (const auto& x : a) s += std::norm(x);
        return std::sqrt(s);
    }
};

inline mat2 operator*(cplx s, const mat2& m) { return m * s; }

inline double dist(const mat2& x, const mat2& y) { return (x - y).norm(); }

/// exp(M) by scaling-and-squaring on the 2x2 power series.
inline mat2 expm(const mat2& m) {
    int squarings = 0;
    double nrm = m.norm();
    mat2 x = m;
    while (nrm > 0.5) {
        x *= 0.5;
        nrm *= 0.5;
        ++squarings;
    }
    mat2 sum = mat2::identity();
    mat2 term = mat2::identity();
    for (int k = 1; k <= 20; ++k) {
        term = term * x / cplx(double(k));
        sum += term;
        if (term.norm() < 1e-18) break;
    }
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    return sum;
}

/// Eigenvalues of a 2x2 matrix from trace and determinant.
inline std::array<cplx, 2> eigenvalues(const mat2& m) {
    const cplx t = m.trace(), d = m.det();
    const cplx s = std::sqrt(t * t - 4.0 * d);
    return {(t + s) / 2.0, (t - s) / 2.0};
}

}  // namespace sd

#endif
