#include "selfdual/elliptic.hpp"

#include <cmath>

namespace sd {

namespace {

constexpr double kPoleGuard = 1e-9;

void check_rectangular(const Lattice& lat) {
    if (!(lat.omega1.real() > 0.0) || std::abs(lat.omega1.imag()) > 1e-12 * std::abs(lat.omega1))
        throw domain_error("elliptic: omega1 must be real positive");
    if (!(lat.omega2.imag() > 0.0) || std::abs(lat.omega2.real()) > 1e-12 * std::abs(lat.omega2))
        throw domain_error("elliptic: omega2 must be purely imaginary with Im > 0");
}

}  // namespace

ThetaContext::ThetaContext(const Lattice& lattice, int truncation) : lat_(lattice), trunc_(truncation) {
    check_rectangular(lat_);
    if (trunc_ < 8) throw domain_error("elliptic: truncation too small");
    tau_ = lat_.omega2 / lat_.omega1;
    q_ = std::exp(iu * pi * tau_);
    xfac_ = (lat_.convention == LatticeKind::Gamma2) ? pi * iu / (2.0 * lat_.omega2) : pi * iu / lat_.omega2;

    const Theta1Block b0 = theta1_block(0.0);
    theta1p0_ = b0.t1;
    theta1ppp0_ = b0.t3;
    theta_prime0_ = theta1p0_ / lat_.omega1;
    eta1_ = -theta1ppp0_ / (6.0 * lat_.omega1 * theta1p0_);
    // Legendre relation eta1*omega2 - eta2*omega1 = pi i
    eta2_ = (eta1_ * lat_.omega2 - pi * iu) / lat_.omega1;
}

ThetaContext::Theta1Block ThetaContext::theta1_block(cplx v) const {
    // theta1(v|tau) = 2 sum (-1)^n q^{(n+1/2)^2} sin((2n+1) pi v), with v reduced.
    Theta1Block b{0.0, 0.0, 0.0, 0.0};
    double scale = 0.0;
    for (int n = 0; n < trunc_; ++n) {
        const double m = n + 0.5;
        const cplx qn = std::exp(iu * pi * tau_ * (m * m));
        const double w = (2 * n + 1) * pi;
        const cplx s = std::sin(w * v), c = std::cos(w * v);
        const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
        const cplx f = 2.0 * sgn * qn;
        b.t0 += f * s;
        b.t1 += f * w * c;
        b.t2 -= f * w * w * s;
        b.t3 -= f * w * w * w * c;
        scale = std::max(scale, std::abs(f) * w * w * w);
        if (n > 4 && std::abs(f) * w * w * w < 1e-18 * scale) break;
    }
    return b;
}

void ThetaContext::theta1_full(cplx v, cplx& value, cplx& l1) const {
    const double im_tau = tau_.imag();
    const long n = std::lround(v.imag() / im_tau);
    const cplx vn = v - double(n) * tau_;
    const long m = std::lround(vn.real());
    const cplx vr = vn - double(m);
    const Theta1Block b = theta1_block(vr);
    const cplx shift = -2.0 * pi * iu * double(n);
    const double sgn = ((m + n) % 2 == 0) ? 1.0 : -1.0;
    const cplx factor = sgn * std::exp(-iu * pi * tau_ * double(n) * double(n) + shift * vr);
    value = factor * b.t0;
    l1 = shift + b.t1 / b.t0;
}

cplx ThetaContext::theta(cplx z) const {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw domain_error("elliptic: non-finite theta argument");
    cplx value, l1;
    theta1_full(z / lat_.omega1, value, l1);
    return std::exp(pi * iu * z / lat_.omega1) * value;
}

cplx ThetaContext::theta_dz(cplx z) const {
    cplx value, l1;
    theta1_full(z / lat_.omega1, value, l1);
    const cplx t = std::exp(pi * iu * z / lat_.omega1) * value;
    return t * (pi * iu + l1) / lat_.omega1;
}

cplx ThetaContext::theta_logdz(cplx z) const {
    cplx value, l1;
    theta1_full(z / lat_.omega1, value, l1);
    return (pi * iu + l1) / lat_.omega1;
}

cplx ThetaContext::theta_x(cplx x, cplx z) const {
    if (x == cplx(0.0, 0.0)) return 1.0;
    if (lattice_distance(x) < kPoleGuard) throw domain_error("elliptic: theta_x with x on the lattice");
    if (lattice_distance(z) < kPoleGuard) throw pole_error("elliptic: theta_x evaluated at its pole z=0");
    return theta(z - x) / theta(z) * std::exp(xfac_ * x * (std::conj(z) - z));
}

cplx ThetaContext::theta_x_dz(cplx x, cplx z) const {
    if (x == cplx(0.0, 0.0)) return 0.0;
    return theta_x(x, z) * (theta_logdz(z - x) - theta_logdz(z) - xfac_ * x);
}

WeierstrassValues ThetaContext::weierstrass(cplx xi) const {
    if (lattice_distance(xi) < kPoleGuard) throw pole_error("elliptic: weierstrass at a lattice point");
    const cplx w1 = lat_.omega1;
    const cplx v = xi / w1;
    const double im_tau = tau_.imag();
    const long n = std::lround(v.imag() / im_tau);
    const cplx vn = v - double(n) * tau_;
    const long m = std::lround(vn.real());
    const cplx vr = vn - double(m);
    const Theta1Block b = theta1_block(vr);
    const cplx s = -2.0 * pi * iu * double(n);
    const cplx r1 = b.t1 / b.t0, r2 = b.t2 / b.t0, r3 = b.t3 / b.t0;
    const cplx l1 = s + r1;
    const cplx l2 = s * s + 2.0 * s * r1 + r2;
    const cplx l3 = s * s * s + 3.0 * s * s * r1 + 3.0 * s * r2 + r3;
    WeierstrassValues out;
    out.zeta = 2.0 * eta1_ * xi / w1 + l1 / w1;
    out.p = -2.0 * eta1_ / w1 - (l2 - l1 * l1) / (w1 * w1);
    out.p_prime = -(l3 - 3.0 * l1 * l2 + 2.0 * l1 * l1 * l1) / (w1 * w1 * w1);
    return out;
}

cplx ThetaContext::reduce(cplx z) const {
    const long n = std::lround(z.imag() / lat_.omega2.imag());
    const long m = std::lround(z.real() / lat_.omega1.real());
    return z - double(m) * lat_.omega1 - double(n) * lat_.omega2;
}

double ThetaContext::lattice_distance(cplx z) const { return std::abs(reduce(z)); }

double ThetaContext::half_lattice_distance(cplx z) const { return 0.5 * std::abs(reduce(2.0 * z)); }

std::pair<cplx, cplx> ab_constants(cplx tau) {
    if (!(tau.imag() > 0.0) || std::abs(tau.real()) > 1e-12 * std::abs(tau))
        throw domain_error("elliptic: tau must lie in i R^+");
    ThetaContext ctx(Lattice{1.0, tau, LatticeKind::Gamma1});
    const cplx a = -tau / (pi * iu);
    // eta3 = zeta(tau/2); the tau-cycle integral forces b = 2 a eta3 / tau.
    const cplx eta3 = ctx.eta2();
    const cplx b = 2.0 * a * eta3 / tau;
    return {a, b};
}

}  // namespace sd
