#include <doctest.h>

#include <cmath>
#include <complex>

#include "selfdual/elliptic.hpp"
#include "testutil.hpp"

using namespace sd;
using sdtest::integrate_segment;
using sdtest::random_complex;

namespace {

ThetaContext ctx_gamma2() { return ThetaContext(Lattice{2.0, cplx(0.0, 1.6), LatticeKind::Gamma2}); }
ThetaContext ctx_gamma1() { return ThetaContext(Lattice{1.0, cplx(0.0, 0.8), LatticeKind::Gamma1}); }

// dbar by second-order central differences.
cplx dbar_fd(const std::function<cplx(cplx)>& f, cplx z, double h) {
    const cplx fx = (f(z + h) - f(z - h)) / (2.0 * h);
    const cplx fy = (f(z + iu * h) - f(z - iu * h)) / (2.0 * h);
    return 0.5 * (fx + iu * fy);
}

cplx d_fd(const std::function<cplx(cplx)>& f, cplx z, double h) {
    const cplx fx = (f(z + h) - f(z - h)) / (2.0 * h);
    const cplx fy = (f(z + iu * h) - f(z - iu * h)) / (2.0 * h);
    return 0.5 * (fx - iu * fy);
}

// Winding number of f along a circle, by accumulating argument increments.
int winding_on_circle(const std::function<cplx(cplx)>& f, cplx center, double radius, int nsamples = 256) {
    double total = 0.0;
    cplx prev = f(center + radius);
    for (int k = 1; k <= nsamples; ++k) {
        const double t = 2.0 * pi * k / nsamples;
        const cplx cur = f(center + radius * std::exp(iu * t));
        total += std::arg(cur / prev);
        prev = cur;
    }
    return int(std::lround(total / (2.0 * pi)));
}

}  // namespace

TEST_CASE("theta vanishes at the origin and at lattice points") {
    for (const auto& ctx : {ctx_gamma2(), ctx_gamma1()}) {
        CHECK(std::abs(ctx.theta(0.0)) == 0.0);
        CHECK(std::abs(ctx.theta(ctx.lattice().omega1)) < 1e-13);
        CHECK(std::abs(ctx.theta(3.0 * ctx.lattice().omega1 - 2.0 * ctx.lattice().omega2)) < 1e-10);
    }
}

TEST_CASE("theta quasi-periodicity laws") {
    auto g = sdtest::rng();
    for (const auto& ctx : {ctx_gamma2(), ctx_gamma1()}) {
        const cplx w1 = ctx.lattice().omega1, w2 = ctx.lattice().omega2;
        const double expo = (ctx.lattice().convention == LatticeKind::Gamma2) ? 1.0 : 2.0;
        for (int i = 0; i < 100; ++i) {
            const cplx z = random_complex(g, -1.5, 1.5);
            const cplx t = ctx.theta(z);
            CHECK(std::abs(ctx.theta(z + w1) - t) < 1e-10 * std::abs(t));
            const cplx law = -t * std::exp(-expo * pi * iu * z);
            CHECK(std::abs(ctx.theta(z + w2) - law) < 1e-10 * std::abs(law));
        }
    }
}

TEST_CASE("theta reflection law") {
    // The function pinned by theta(0)=0 and the two quasi-periodicity laws is odd
    // only up to the exponential factor of the w2-law: theta(-z) = -exp(-k pi i z) theta(z).
    auto g = sdtest::rng(7);
    for (const auto& ctx : {ctx_gamma2(), ctx_gamma1()}) {
        const double expo = (ctx.lattice().convention == LatticeKind::Gamma2) ? 1.0 : 2.0;
        for (int i = 0; i < 20; ++i) {
            const cplx z = random_complex(g, -0.9, 0.9);
            const cplx lhs = ctx.theta(-z);
            const cplx rhs = -std::exp(-expo * pi * iu * z) * ctx.theta(z);
            CHECK(std::abs(lhs - rhs) < 1e-10 * (1.0 + std::abs(rhs)));
        }
    }
}

TEST_CASE("theta truncation convergence gate") {
    const Lattice lat{2.0, cplx(0.0, 1.6), LatticeKind::Gamma2};
    ThetaContext lo(lat, 16), hi(lat, 24);
    auto g = sdtest::rng(11);
    for (int i = 0; i < 50; ++i) {
        cplx z = random_complex(g, -1.0, 1.0);
        z = cplx(z.real(), z.imag() * 0.8);  // keep |Im z| <= Im(omega2)/2
        const cplx a = lo.theta(z), b = hi.theta(z);
        CHECK(std::abs(a - b) < 1e-12 * std::abs(b));
    }
}

TEST_CASE("theta_x double periodicity and special values") {
    auto ctx = ctx_gamma2();
    const cplx x{0.31, 0.17};
    CHECK(ctx.theta_x(0.0, cplx(0.4, 0.2)) == cplx(1.0));
    auto g = sdtest::rng(3);
    for (int i = 0; i < 40; ++i) {
        const cplx z = random_complex(g, -0.9, 0.9) + cplx(0.1, 0.05);
        const cplx t = ctx.theta_x(x, z);
        CHECK(std::abs(ctx.theta_x(x, z + ctx.lattice().omega1) - t) < 1e-10 * std::abs(t));
        CHECK(std::abs(ctx.theta_x(x, z + ctx.lattice().omega2) - t) < 1e-10 * std::abs(t));
    }
    // simple zero at z=x
    CHECK(std::abs(ctx.theta_x(x, x)) < 1e-12);
}

TEST_CASE("theta_x solves its dbar equation") {
    auto ctx = ctx_gamma2();
    const cplx x{0.27, -0.12};
    auto f = [&](cplx z) { return ctx.theta_x(x, z); };
    double prev = 0.0;
    const cplx z0{0.45, 0.33};
    for (const double h : {1e-2, 5e-3}) {
        const cplx resid = dbar_fd(f, z0, h) - ctx.xfactor(x) * ctx.theta_x(x, z0);
        if (prev > 0.0) CHECK(std::abs(resid) < 0.5 * prev);  // shrinks at least like O(h^2)/2 per halving
        prev = std::abs(resid);
        CHECK(std::abs(resid) < 1e-2);
    }
    // the holomorphic z-derivative agrees with finite differences
    const cplx dz = d_fd(f, z0, 1e-5);
    CHECK(std::abs(dz - ctx.theta_x_dz(x, z0)) < 1e-7 * (1.0 + std::abs(dz)));
}

TEST_CASE("theta_x winding numbers at zero and pole") {
    auto ctx = ctx_gamma2();
    const cplx x{0.5, 0.35};
    auto f = [&](cplx z) { return ctx.theta_x(x, z); };
    CHECK(winding_on_circle(f, x, 0.05) == 1);
    CHECK(winding_on_circle(f, 0.0, 0.05) == -1);
}

TEST_CASE("weierstrass parity and zeta identities") {
    auto g = sdtest::rng(5);
    for (const auto& ctx : {ctx_gamma2(), ctx_gamma1()}) {
        for (int i = 0; i < 20; ++i) {
            const cplx xi = random_complex(g, -0.8, 0.8) + cplx(0.13, 0.07);
            const auto v = ctx.weierstrass(xi);
            const auto w = ctx.weierstrass(-xi);
            CHECK(std::abs(v.p - w.p) < 1e-9 * (1.0 + std::abs(v.p)));
            CHECK(std::abs(v.p_prime + w.p_prime) < 1e-9 * (1.0 + std::abs(v.p_prime)));
            CHECK(std::abs(v.zeta + w.zeta) < 1e-9 * (1.0 + std::abs(v.zeta)));
        }
        // d zeta / d xi = -p, checked by central differences
        for (int i = 0; i < 20; ++i) {
            const cplx xi = random_complex(g, -0.6, 0.6) + cplx(0.21, 0.11);
            auto f = [&](cplx u) { return ctx.weierstrass(u).zeta; };
            const cplx dz = d_fd(f, xi, 1e-5);
            CHECK(std::abs(dz + ctx.weierstrass(xi).p) < 1e-5 * (1.0 + std::abs(dz)));
            CHECK(std::abs(dbar_fd(f, xi, 1e-5)) < 1e-5);
        }
    }
}

TEST_CASE("weierstrass differential equation") {
    auto ctx = ctx_gamma1();
    // p'(xi)^2 = 4 (p-e1)(p-e2)(p-e3) at the half-period roots
    const cplx w1 = ctx.lattice().omega1, w2 = ctx.lattice().omega2;
    const cplx e1 = ctx.weierstrass(w1 / 2.0).p;
    const cplx e2 = ctx.weierstrass(w2 / 2.0).p;
    const cplx e3 = ctx.weierstrass((w1 + w2) / 2.0).p;
    CHECK(std::abs(e1 + e2 + e3) < 1e-10 * std::abs(e1));
    auto g = sdtest::rng(9);
    for (int i = 0; i < 20; ++i) {
        const cplx xi = random_complex(g, -0.4, 0.4) + cplx(0.18, 0.09);
        const auto v = ctx.weierstrass(xi);
        const cplx lhs = v.p_prime * v.p_prime;
        const cplx rhs = 4.0 * (v.p - e1) * (v.p - e2) * (v.p - e3);
        CHECK(std::abs(lhs - rhs) < 1e-8 * (1.0 + std::abs(rhs)));
    }
    // half-period derivative values vanish
    CHECK(std::abs(ctx.weierstrass(w1 / 2.0).p_prime) < 1e-9);
}

TEST_CASE("legendre relation for the cached eta constants") {
    for (const auto& ctx : {ctx_gamma2(), ctx_gamma1()}) {
        const cplx lhs = ctx.eta1() * ctx.lattice().omega2 - ctx.eta2() * ctx.lattice().omega1;
        CHECK(std::abs(lhs - pi * iu) < 1e-12);
        // eta2 really is zeta(omega2/2)
        CHECK(std::abs(ctx.weierstrass(ctx.lattice().omega2 / 2.0).zeta - ctx.eta2()) < 1e-10);
        CHECK(std::abs(ctx.weierstrass(ctx.lattice().omega1 / 2.0).zeta - ctx.eta1()) < 1e-10);
    }
}

TEST_CASE("ab_constants reproduce the normalization integrals") {
    const cplx tau{0.0, 1.8};
    const auto [a, b] = ab_constants(tau);
    CHECK(std::abs(a.imag()) < 1e-12);
    CHECK(std::abs(b.imag()) < 1e-12);

    ThetaContext ctx(Lattice{1.0, tau, LatticeKind::Gamma1});
    const cplx shift = (1.0 + tau) / 2.0;
    auto integrand = [&](cplx xi) { return a * ctx.weierstrass(xi - shift).p + b; };
    const cplx cyc1 = integrate_segment(integrand, 0.0, 1.0);
    const cplx cyct = integrate_segment(integrand, 0.0, tau);
    CHECK(std::abs(cyc1 - 2.0) < 1e-8);
    CHECK(std::abs(cyct) < 1e-8);
}

TEST_CASE("ab_constants rejects bad moduli") {
    CHECK_THROWS_AS(ab_constants(cplx(0.3, 1.0)), domain_error);
    CHECK_THROWS_AS(ab_constants(cplx(0.0, -1.0)), domain_error);
}

TEST_CASE("pole guards") {
    auto ctx = ctx_gamma2();
    CHECK_THROWS_AS(ctx.weierstrass(cplx(1e-12, 0.0)), pole_error);
    CHECK_THROWS_AS(ctx.weierstrass(2.0 + cplx(0.0, 1e-11)), pole_error);
    CHECK_THROWS_AS(ctx.theta_x(cplx(0.4, 0.2), cplx(1e-12, 1e-12)), pole_error);
    CHECK_THROWS_AS(ctx.theta_x(cplx(1e-12, 0.0), cplx(0.4, 0.2)), domain_error);
}
