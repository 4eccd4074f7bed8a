#ifndef SELFDUAL_CONNECTION_HPP
#define SELFDUAL_CONNECTION_HPP

#include <functional>
#include <vector>

#include "selfdual/spectral.hpp"

namespace sd {

/// A parametrized integration path: polyline segments and circular arcs.
class Path {
  public:
    static Path segment(cplx a, cplx b);
    static Path polyline(std::vector<cplx> pts);
    /// Circle around center, radius, from angle a0 to a1 (counterclockwise if a1 > a0).
    static Path arc(cplx center, double radius, double a0, double a1);
    /// Closed loop: base -> circle entry -> full turn -> back to base.
    static Path puncture_loop(cplx base, cplx center, double radius);

    Path reversed() const;
    Path& append(const Path& other);

    struct Piece {
        bool is_arc = false;
        cplx a, b;      // segment endpoints
        cplx center;    // arc data
        double radius = 0.0, ang0 = 0.0, ang1 = 0.0;
        cplx point(double t) const;     // t in [0,1]
        cplx velocity(double t) const;  // d point / dt
        double length() const;
    };
    const std::vector<Piece>& pieces() const { return pieces_; }
    /// Min distance from the path to any of the points, modulo the lattice (w1, w2).
    double min_distance(const std::vector<cplx>& points, cplx w1, cplx w2) const;

  private:
    std::vector<Piece> pieces_;
};

/// Flat SL(2,C)-connection 1-form on a torus, d + Az dz + Azbar dzbar.
/// Evaluators must be pure; the struct is freely copyable and thread-safe.
struct ConnectionForm {
    double rho = 0.0;
    cplx chi{}, alpha{};
    std::function<mat2(cplx)> Az;
    std::function<mat2(cplx)> Azbar;
    std::vector<cplx> singular_points;
    cplx omega1{2.0, 0.0}, omega2{0.0, 2.0};  // periods of the underlying torus

    mat2 eval(cplx z, cplx velocity) const;

    /// The complex-conjugate connection: dz and dzbar components swapped and
    /// conjugated entrywise.
    ConnectionForm conjugated() const;
};

struct MonodromyData {
    mat2 H_a, H_b;
    cplx x, y, z;
    std::vector<cplx> local_eigs;
    double cubic_residual = 0.0;
};

struct IntegratorOptions {
    double tol = 1e-10;
    double path_clearance = 1e-3;
    int max_steps = 2000000;
};

/// Path-ordered solution of dPsi = -A Psi, Psi(start) = Id, evaluated at the
/// path end. Adaptive embedded Runge-Kutta with step control.
mat2 monodromy(const ConnectionForm& form, const Path& path, const IntegratorOptions& opts = {});

/// The abelian family nabla^xi = d + diag(alpha,-alpha) dz + diag(chi,-chi) dzbar
/// on M = C/(2Z + 2tt Z).
ConnectionForm diagonal_form(const SpectralData& data, cplx xi);
ConnectionForm diagonal_form_values(const SpectralData& data, cplx chi, cplx alpha);

/// The rho-deformed connection on the once-punctured torus T^2 = C/(Z + tt Z):
/// diagonal d +- (alpha dz + chi dzbar), off-diagonals
/// beta^pm = coeff^pm(x) thetatilde_{+-2x}(z) dz with x = -(tt/pi i) chi.
ConnectionForm rho_form(const SpectralData& data, double rho, cplx chi, cplx alpha);

/// The two off-diagonal scales of rho_form.
std::pair<cplx, cplx> offdiag_scales(const SpectralData& data, double rho, cplx chi);

/// Monodromies along the torus generators and the trace coordinates
/// x = tr H_a, y = tr H_b, z = tr(H_b H_a); cubic_residual is
/// |x^2+y^2+z^2-xyz-2-2cos(2 pi rho)|. Includes local eigenvalues at the
/// puncture when the form is singular.
MonodromyData trace_coords(const ConnectionForm& form, const IntegratorOptions& opts = {});

/// Eigenvalues of the small-loop monodromy around a puncture.
std::array<cplx, 2> local_monodromy_eigs(const ConnectionForm& form, cplx puncture, double radius = 1e-2,
                                         const IntegratorOptions& opts = {});

/// Plaquette-holonomy defect on an n x n grid (single Euler exponential per
/// edge), skipping cells near the singular points. Returns the max defect.
double plaquette_defect(const ConnectionForm& form, int n, double exclusion = 0.05);

/// The meromorphic function on M with divisor -[0]-[x]+[1+tt]+[x+1+tt],
/// normalized by h_x([1]) = 1.
cplx h_x(const SpectralData& data, cplx x, cplx z);
cplx h_x_dz(const SpectralData& data, cplx x, cplx z);

/// The reality gauge Psi_{a,x}(z) between the conjugated and plain Fuchsian
/// pullbacks on M. The sqrt prefactor branch is the argument `branch` (+-1)
/// times 1/|wp'(z)| times the principal branch at the family seed; see
/// PsiFamily for the continuation along the circle loop.
mat2 psi_gauge(const SpectralData& data, cplx a, cplx x, cplx z, int branch = +1);

/// det(g^chi) = theta_x sigma*theta_x (sigma*h_x - h_x); a constant multiple
/// of wp' on M. Returns that constant.
cplx det_gchi_constant(const SpectralData& data, cplx x);

/// The Fuchsian-type form on the 4-punctured torus M: (nabla^S tensor
/// nabla^{chi,alpha}) gauged by (g^chi)^{-1}; traceless, sigma-odd
/// coefficients, regular singular points at the half-lattice points of M.
ConnectionForm bb_form(const SpectralData& data, cplx xi);
ConnectionForm bb_form_values(const SpectralData& data, cplx chi, cplx alpha);

/// The x- and a-parameters of the Psi gauge at a point of the spectral torus:
/// x = -(4 tt/pi i) chi(xi), a = (4 tt/pi i) conj(alpha(xi)).
std::pair<cplx, cplx> psi_parameters(const SpectralData& data, cplx xi);

/// Monodromy generators of the once-punctured-torus representation
/// (H_a, H_b, puncture loop), all based at the same point.
std::vector<mat2> torus_rep(const ConnectionForm& form, const IntegratorOptions& opts = {});

/// Monodromy generators of the 4-punctured-sphere representation carried by a
/// sigma-odd form on M: transports from z0 to -z0 around each of the four
/// half-lattice points (their pairwise products are the liftable torus loops).
std::vector<mat2> sphere_rep(const ConnectionForm& form, const IntegratorOptions& opts = {});

}  // namespace sd

#endif
