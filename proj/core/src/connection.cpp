#include "selfdual/connection.hpp"

#include <algorithm>
#include <cmath>

namespace sd {

// ---------------------------------------------------------------------------
// paths

Path Path::segment(cplx a, cplx b) {
    Path p;
    Piece pc;
    pc.a = a;
    pc.b = b;
    p.pieces_.push_back(pc);
    return p;
}

Path Path::polyline(std::vector<cplx> pts) {
    Path p;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        Piece pc;
        pc.a = pts[i];
        pc.b = pts[i + 1];
        p.pieces_.push_back(pc);
    }
    return p;
}

Path Path::arc(cplx center, double radius, double a0, double a1) {
    Path p;
    Piece pc;
    pc.is_arc = true;
    pc.center = center;
    pc.radius = radius;
    pc.ang0 = a0;
    pc.ang1 = a1;
    p.pieces_.push_back(pc);
    return p;
}

Path Path::puncture_loop(cplx base, cplx center, double radius) {
    const cplx dir = (base - center) / std::abs(base - center);
    const cplx entry = center + radius * dir;
    const double a0 = std::arg(dir);
    Path p = segment(base, entry);
    p.append(arc(center, radius, a0, a0 + 2.0 * pi));
    p.append(segment(entry, base));
    return p;
}

Path Path::reversed() const {
    Path p;
    for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
        Piece pc = *it;
        if (pc.is_arc)
            std::swap(pc.ang0, pc.ang1);
        else
            std::swap(pc.a, pc.b);
        p.pieces_.push_back(pc);
    }
    return p;
}

Path& Path::append(const Path& other) {
    pieces_.insert(pieces_.end(), other.pieces_.begin(), other.pieces_.end());
    return *this;
}

cplx Path::Piece::point(double t) const {
    if (!is_arc) return a + t * (b - a);
    return center + radius * std::exp(iu * (ang0 + t * (ang1 - ang0)));
}

cplx Path::Piece::velocity(double t) const {
    if (!is_arc) return b - a;
    return radius * iu * (ang1 - ang0) * std::exp(iu * (ang0 + t * (ang1 - ang0)));
}

double Path::Piece::length() const { return is_arc ? radius * std::abs(ang1 - ang0) : std::abs(b - a); }

double Path::min_distance(const std::vector<cplx>& points, cplx w1, cplx w2) const {
    auto reduced = [&](cplx z) {
        const long n = std::lround(z.imag() / w2.imag());
        const long m = std::lround(z.real() / w1.real());
        return std::abs(z - double(m) * w1 - double(n) * w2);
    };
    double best = 1e30;
    for (const auto& pc : pieces_) {
        const int samples = std::max(8, int(pc.length() * 64));
        for (int i = 0; i <= samples; ++i) {
            const cplx z = pc.point(double(i) / samples);
            for (const auto& p : points) best = std::min(best, reduced(z - p));
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// connection forms

mat2 ConnectionForm::eval(cplx z, cplx velocity) const { return Az(z) * velocity + Azbar(z) * std::conj(velocity); }

ConnectionForm ConnectionForm::conjugated() const {
    ConnectionForm out = *this;
    const auto az = Az, azbar = Azbar;
    out.Az = [azbar](cplx z) { return azbar(z).conj(); };
    out.Azbar = [az](cplx z) { return az(z).conj(); };
    return out;
}

// ---------------------------------------------------------------------------
// adaptive Dormand-Prince integration of dPsi = -A Psi

namespace {

struct Dopri {
    // classic DOPRI5(4) tableau
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
};

}  // namespace

mat2 monodromy(const ConnectionForm& form, const Path& path, const IntegratorOptions& opts) {
    if (!form.singular_points.empty()) {
        const double d = path.min_distance(form.singular_points, form.omega1, form.omega2);
        if (d < opts.path_clearance)
            throw integration_error("connection: path too close to a singular point (distance " + std::to_string(d) +
                                    ")");
    }
    mat2 psi = mat2::identity();
    long steps = 0;
    for (const auto& pc : path.pieces()) {
        auto rhs = [&](double t, const mat2& y) { return -(form.eval(pc.point(t), pc.velocity(t)) * y); };
        double t = 0.0;
        double h = 0.05;
        mat2 k1 = rhs(t, psi);
        while (t < 1.0) {
            if (++steps > opts.max_steps) throw integration_error("connection: integrator exceeded max steps");
            h = std::min(h, 1.0 - t);
            const mat2 k2 = rhs(t + Dopri::c2 * h, psi + h * Dopri::a21 * k1);
            const mat2 k3 = rhs(t + Dopri::c3 * h, psi + h * (Dopri::a31 * k1 + Dopri::a32 * k2));
            const mat2 k4 = rhs(t + Dopri::c4 * h, psi + h * (Dopri::a41 * k1 + Dopri::a42 * k2 + Dopri::a43 * k3));
            const mat2 k5 = rhs(t + Dopri::c5 * h,
                                psi + h * (Dopri::a51 * k1 + Dopri::a52 * k2 + Dopri::a53 * k3 + Dopri::a54 * k4));
            const mat2 k6 = rhs(t + h, psi + h * (Dopri::a61 * k1 + Dopri::a62 * k2 + Dopri::a63 * k3 +
                                                  Dopri::a64 * k4 + Dopri::a65 * k5));
            const mat2 ynew =
                psi + h * (Dopri::b1 * k1 + Dopri::b3 * k3 + Dopri::b4 * k4 + Dopri::b5 * k5 + Dopri::b6 * k6);
            const mat2 k7 = rhs(t + h, ynew);
            const mat2 errm = h * (Dopri::e1 * k1 + Dopri::e3 * k3 + Dopri::e4 * k4 + Dopri::e5 * k5 +
                                   Dopri::e6 * k6 + Dopri::e7 * k7);
            const double err = errm.norm();
            const double tolerance = opts.tol * (1.0 + psi.norm());
            if (err <= tolerance) {
                t += h;
                psi = ynew;
                k1 = k7;
            }
            double factor = 0.9 * std::pow(tolerance / std::max(err, 1e-300), 0.2);
            h *= std::clamp(factor, 0.2, 5.0);
            if (h < 1e-12) throw integration_error("connection: integrator step collapsed");
            if (!std::isfinite(psi.norm())) throw integration_error("connection: integrator diverged");
        }
    }
    return psi;
}

// ---------------------------------------------------------------------------
// the abelian and rho-deformed families

ConnectionForm diagonal_form_values(const SpectralData& data, cplx chi, cplx alpha) {
    ConnectionForm f;
    f.rho = 0.0;
    f.chi = chi;
    f.alpha = alpha;
    f.omega1 = 2.0;
    f.omega2 = 2.0 * data.tau_tilde();
    const mat2 az = mat2::diag(alpha, -alpha);
    const mat2 azbar = mat2::diag(chi, -chi);
    f.Az = [az](cplx) { return az; };
    f.Azbar = [azbar](cplx) { return azbar; };
    return f;
}

ConnectionForm diagonal_form(const SpectralData& data, cplx xi) {
    if (data.curve().ctx().lattice_distance(xi) < 1e-9 ||
        data.curve().ctx().lattice_distance(xi - (1.0 + data.tau()) / 2.0) < 1e-9)
        throw pole_error("connection: diagonal family undefined over lambda in {0, infinity}");
    return diagonal_form_values(data, data.chi(xi), data.alpha(xi));
}

std::pair<cplx, cplx> offdiag_scales(const SpectralData& data, double rho, cplx chi) {
    const auto& ctx = data.ctxT();
    const cplx x = -(data.tau_tilde() / (pi * iu)) * chi;
    const cplx tp = ctx.theta_prime0();
    const cplx plus = ctx.theta(-x) / ctx.theta(x) * tp / ctx.theta(-2.0 * x) * rho;
    const cplx minus = ctx.theta(x) / ctx.theta(-x) * tp / ctx.theta(2.0 * x) * rho;
    return {plus, minus};
}

ConnectionForm rho_form(const SpectralData& data, double rho, cplx chi, cplx alpha) {
    if (rho < 0.0 || rho >= 0.5) throw domain_error("connection: rho outside [0, 1/2)");
    const cplx x = -(data.tau_tilde() / (pi * iu)) * chi;
    if (data.ctxT().lattice_distance(2.0 * x) < 2e-6)
        throw spin_point_error("connection: chi is a spin point of the torus");
    ConnectionForm f;
    f.rho = rho;
    f.chi = chi;
    f.alpha = alpha;
    f.omega1 = 1.0;
    f.omega2 = data.tau_tilde();
    f.singular_points = {0.0};
    const mat2 azbar = mat2::diag(chi, -chi);
    f.Azbar = [azbar](cplx) { return azbar; };
    if (rho == 0.0) {
        const mat2 az = mat2::diag(alpha, -alpha);
        f.Az = [az](cplx) { return az; };
        f.singular_points.clear();
        return f;
    }
    const auto [cplus, cminus] = offdiag_scales(data, rho, chi);
    const SpectralData d = data;
    f.Az = [d, alpha, x, cplus, cminus](cplx z) {
        const auto& ctx = d.ctxT();
        return mat2(alpha, cplus * ctx.theta_x(2.0 * x, z), cminus * ctx.theta_x(-2.0 * x, z), -alpha);
    };
    return f;
}

// ---------------------------------------------------------------------------
// monodromy data

std::array<cplx, 2> local_monodromy_eigs(const ConnectionForm& form, cplx puncture, double radius,
                                         const IntegratorOptions& opts) {
    IntegratorOptions o = opts;
    o.path_clearance = std::min(o.path_clearance, 0.9 * radius);
    const mat2 h = monodromy(form, Path::arc(puncture, radius, 0.0, 2.0 * pi), o);
    return eigenvalues(h);
}

std::vector<mat2> torus_rep(const ConnectionForm& form, const IntegratorOptions& opts) {
    const cplx z0 = 0.25 * (form.omega1 + form.omega2);
    std::vector<mat2> gens;
    gens.push_back(monodromy(form, Path::segment(z0, z0 + form.omega1), opts));
    gens.push_back(monodromy(form, Path::segment(z0, z0 + form.omega2), opts));
    if (!form.singular_points.empty()) {
        IntegratorOptions o = opts;
        o.path_clearance = std::min(o.path_clearance, 0.9e-2);
        gens.push_back(monodromy(form, Path::puncture_loop(z0, form.singular_points.front(), 1e-2), o));
    }
    return gens;
}

MonodromyData trace_coords(const ConnectionForm& form, const IntegratorOptions& opts) {
    const auto gens = torus_rep(form, opts);
    MonodromyData md;
    md.H_a = gens[0];
    md.H_b = gens[1];
    md.x = md.H_a.trace();
    md.y = md.H_b.trace();
    md.z = (md.H_b * md.H_a).trace();
    cplx commutator_trace;
    if (form.singular_points.size() <= 1) {
        commutator_trace = 2.0 * std::cos(2.0 * pi * form.rho);
    } else {
        const mat2 c = md.H_a * md.H_b * md.H_a.inverse() * md.H_b.inverse();
        commutator_trace = c.trace();
    }
    const cplx cubic =
        md.x * md.x + md.y * md.y + md.z * md.z - md.x * md.y * md.z - 2.0 - commutator_trace;
    md.cubic_residual = std::abs(cubic);
    for (const auto& p : form.singular_points) {
        const auto eig = local_monodromy_eigs(form, p, 1e-2, opts);
        md.local_eigs.push_back(eig[0]);
        md.local_eigs.push_back(eig[1]);
    }
    return md;
}

double plaquette_defect(const ConnectionForm& form, int n, double exclusion) {
    ThetaContext ctx(Lattice{form.omega1, form.omega2, LatticeKind::Gamma1});
    const cplx h1 = form.omega1 / double(n), h2 = form.omega2 / double(n);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const cplx z = double(i) * h1 + double(j) * h2 + 0.5 * (h1 + h2) * 0.0;
            const cplx corners[4] = {z, z + h1, z + h1 + h2, z + h2};
            bool skip = false;
            for (const auto& c : corners)
                for (const auto& p : form.singular_points)
                    if (ctx.lattice_distance(c - p) < exclusion) skip = true;
            if (skip) continue;
            mat2 hol = mat2::identity();
            const cplx edge[4] = {h1, h2, -h1, -h2};
            for (int k = 0; k < 4; ++k) hol = expm(-form.eval(corners[k], edge[k])) * hol;
            worst = std::max(worst, dist(hol, mat2::identity()));
        }
    }
    return worst;
}

// ---------------------------------------------------------------------------
// theta-quotient building blocks on M

namespace {

// theta_x and the cancelled product (h_x theta_x), with their z-derivatives.
// Working with the product removes the spurious pole/zero pair at z = x.
struct GchiBlocks {
    std::shared_ptr<const ThetaContext> ctxp;
    cplx x;
    cplx xf;     // dbar factor of theta_x
    cplx ch;     // normalization of h_x: h_x([1]) = 1
    cplx shift;  // 1 + tt

    GchiBlocks(const SpectralData& data, cplx x_) : ctxp(data.ctxM_ptr()), x(x_) {
        const auto& ctx = *ctxp;
        xf = ctx.xfactor(x);
        shift = 1.0 + data.tau_tilde();
        // h_x = Q(z)/Q(1) with Q = theta(z+1+tt) theta(z-x-1-tt) / (theta(z) theta(z-x))
        const cplx q1 = ctx.theta(1.0 + shift) * ctx.theta(1.0 - x - shift) / (ctx.theta(1.0) * ctx.theta(1.0 - x));
        ch = 1.0 / q1;
    }

    cplx t(cplx z) const {
        return ctxp->theta(z - x) / ctxp->theta(z) * std::exp(xf * (std::conj(z) - z));
    }
    cplx t_dz(cplx z) const { return t(z) * (ctxp->theta_logdz(z - x) - ctxp->theta_logdz(z) - xf); }
    cplx ht(cplx z) const {
        const cplx th0 = ctxp->theta(z);
        return ch * ctxp->theta(z + shift) * ctxp->theta(z - x - shift) / (th0 * th0) *
               std::exp(xf * (std::conj(z) - z));
    }
    cplx ht_dz(cplx z) const {
        return ht(z) *
               (ctxp->theta_logdz(z + shift) + ctxp->theta_logdz(z - x - shift) - 2.0 * ctxp->theta_logdz(z) - xf);
    }
    mat2 G(cplx z) const { return {t(z), t(-z), ht(z), ht(-z)}; }
    mat2 G_dz(cplx z) const { return {t_dz(z), -t_dz(-z), ht_dz(z), -ht_dz(-z)}; }
    cplx det(cplx z) const { return t(z) * ht(-z) - t(-z) * ht(z); }
};

}  // namespace

cplx h_x(const SpectralData& data, cplx x, cplx z) {
    const auto& ctx = data.ctxM();
    if (ctx.lattice_distance(x) < 1e-9) throw domain_error("connection: h_x with x on the lattice");
    if (ctx.lattice_distance(z) < 1e-9 || ctx.lattice_distance(z - x) < 1e-9)
        throw pole_error("connection: h_x evaluated at a divisor pole");
    const cplx shift = 1.0 + data.tau_tilde();
    auto q = [&](cplx w) { return ctx.theta(w + shift) * ctx.theta(w - x - shift) / (ctx.theta(w) * ctx.theta(w - x)); };
    return q(z) / q(1.0);
}

cplx h_x_dz(const SpectralData& data, cplx x, cplx z) {
    const auto& ctx = data.ctxM();
    const cplx shift = 1.0 + data.tau_tilde();
    return h_x(data, x, z) * (ctx.theta_logdz(z + shift) + ctx.theta_logdz(z - x - shift) - ctx.theta_logdz(z) -
                              ctx.theta_logdz(z - x));
}

cplx det_gchi_constant(const SpectralData& data, cplx x) {
    GchiBlocks blocks(data, x);
    const cplx zref{0.37, 0.31 * data.tau_tilde().imag()};
    return blocks.det(zref) / data.ctxM().weierstrass(zref).p_prime;
}

std::pair<cplx, cplx> psi_parameters(const SpectralData& data, cplx xi) {
    const cplx factor = 4.0 * data.tau_tilde() / (pi * iu);
    return {factor * std::conj(data.alpha(xi)), -factor * data.chi(xi)};
}

mat2 psi_gauge(const SpectralData& data, cplx a, cplx x, cplx z, int branch) {
    GchiBlocks bx(data, x), ba(data, a);
    const cplx zref{0.37, 0.31 * data.tau_tilde().imag()};
    const auto wref = data.ctxM().weierstrass(zref);
    const cplx kx = bx.det(zref) / wref.p_prime;
    const cplx ka = ba.det(zref) / wref.p_prime;
    const cplx s = double(branch) * std::sqrt(1.0 / (kx * std::conj(ka)));
    const double pp = std::abs(data.ctxM().weierstrass(z).p_prime);
    const mat2 Na{std::conj(ba.t(z)), std::conj(ba.t(-z)), std::conj(ba.ht(z)), std::conj(ba.ht(-z))};
    const mat2 eps{0.0, 1.0, -1.0, 0.0};
    const mat2 Mx{bx.ht(-z), -bx.t(-z), -bx.ht(z), bx.t(z)};
    return (s / pp) * (Na * eps * Mx);
}

// ---------------------------------------------------------------------------
// the Fuchsian-type form on the 4-punctured torus

ConnectionForm bb_form_values(const SpectralData& data, cplx chi, cplx alpha) {
    const cplx tt = data.tau_tilde();
    const cplx x = -(4.0 * tt / (pi * iu)) * chi;
    if (data.ctxM().lattice_distance(x) < 1e-9)
        throw spin_point_error("connection: Fuchsian gauge degenerates (x on the lattice)");
    ConnectionForm f;
    f.rho = 0.25;  // parabolic weight of the pushed-down system
    f.chi = chi;
    f.alpha = alpha;
    f.omega1 = 2.0;
    f.omega2 = 2.0 * tt;
    f.singular_points = {0.0, 1.0, tt, 1.0 + tt};
    const GchiBlocks blocks(data, x);
    // Weierstrass data of M for the spin-connection term wp''/(2 wp')
    const cplx E1 = data.ctxM().weierstrass(1.0).p;
    const cplx E2 = data.ctxM().weierstrass(tt).p;
    const cplx E3 = data.ctxM().weierstrass(1.0 + tt).p;
    const cplx g2 = -4.0 * (E1 * E2 + E1 * E3 + E2 * E3);
    const cplx xfx = data.ctxM().xfactor(x);
    f.Az = [blocks, alpha, g2](cplx z) {
        const mat2 G = blocks.G(z);
        const mat2 Gi = G.inverse();
        const auto w = blocks.ctxp->weierstrass(z);
        const cplx ss = (6.0 * w.p * w.p - 0.5 * g2) / (2.0 * w.p_prime);
        const mat2 s3 = mat2::diag(1.0, -1.0);
        return ss * mat2::identity() + alpha * (G * s3 * Gi) - blocks.G_dz(z) * Gi;
    };
    f.Azbar = [blocks, chi, xfx](cplx z) {
        const mat2 G = blocks.G(z);
        const mat2 s3 = mat2::diag(1.0, -1.0);
        return (chi - xfx) * (G * s3 * G.inverse());
    };
    return f;
}

ConnectionForm bb_form(const SpectralData& data, cplx xi) {
    return bb_form_values(data, data.chi(xi), data.alpha(xi));
}

std::vector<mat2> sphere_rep(const ConnectionForm& form, const IntegratorOptions& opts) {
    // Generators of the 4-punctured-sphere representation carried by a
    // sigma-invariant form: two puncture loops, the two torus periods, and one
    // sigma-twisted transport z0 -> -z0.
    const cplx w1 = form.omega1, w2 = form.omega2;
    const cplx z0 = 0.5 * (w1 + w2);
    std::vector<mat2> gens = torus_rep(form, opts);
    IntegratorOptions o = opts;
    o.path_clearance = std::min(o.path_clearance, 0.9e-2);
    gens.push_back(monodromy(form, Path::puncture_loop(z0, 0.5 * w1, 1e-2), o));
    const cplx mid = 0.5 * z0 - 0.25 * w2;  // keeps the bend away from 0 and w1/2
    gens.push_back(monodromy(form, Path::polyline({z0, mid, -z0}), opts));
    return gens;
}

}  // namespace sd
