#ifndef SELFDUAL_SPECTRAL_HPP
#define SELFDUAL_SPECTRAL_HPP

#include <memory>
#include <optional>
#include <vector>

#include "selfdual/elliptic.hpp"

namespace sd {

/// The genus-1 spectral torus Sigma = C/(Z + tau Z) together with the
/// degree-2 covering map lambda : Sigma -> CP^1 normalized by
///   lambda([0]) = 0,  lambda([(1+tau)/2]) = infinity,
///   lambda(sigma(xi)) = lambda(xi),  lambda(eta(xi)) = -1/conj(lambda(xi)),
/// for sigma(xi) = -xi and eta(xi) = conj(xi) + (1+tau)/2.
///
/// lambda is a Moebius transform of the Weierstrass p-function:
/// lambda = c/(p - e3) with c = sqrt((e1-e3)(e3-e2)) > 0, which pins
/// r = lambda([1/2]) = sqrt((e3-e2)/(e1-e3)) in (0,1) when e3 < 0.
class SpectralCurve {
  public:
    explicit SpectralCurve(cplx tau, int truncation = 32);

    cplx tau() const { return tau_; }
    double r() const { return r_; }
    const ThetaContext& ctx() const { return *ctx_; }
    cplx moebius_scale() const { return c_; }
    cplx moebius_pole() const { return e3_; }
    cplx e1() const { return e1_; }
    cplx e2() const { return e2_; }
    cplx e3() const { return e3_; }

    cplx lambda(cplx xi) const;
    cplx lambda_dxi(cplx xi) const;

    /// The odd meromorphic function with y^2 = lambda (lambda - r)(lambda + 1/r),
    /// evaluated through the uniformization (sheet determined by xi).
    cplx y(cplx xi) const;
    /// d y / d xi.
    cplx y_dxi(cplx xi) const;

    /// y on the algebraic model. sheet=+1 is the branch with cuts on the real
    /// segments [0,r] and (-inf,-1/r]; sheet=-1 its negative. The unit circle
    /// is cut-free.
    cplx curve_y(cplx lambda, int sheet) const;

    /// Invert lambda on the unit-circle preimage component that passes through
    /// the quarter point (1+tau)/4 (the loop isotopic to R + tau/4). Returns
    /// the unique xi on that loop with lambda(xi) = lambda_target, |target|=1.
    cplx xi_on_circle(cplx lambda_target) const;
    /// Same loop parametrized by phase: lambda(xi_loop(phi)) = exp(i phi).
    cplx xi_loop(double phi) const;

    /// The branch point over lambda = r.
    cplx xi_branch_r() const { return 0.5; }

  private:
    void trace_circle_loop();

    cplx tau_;
    std::shared_ptr<const ThetaContext> ctx_;
    cplx e1_, e2_, e3_, c_;
    double r_;
    std::vector<cplx> loop_;  // xi at phases 2 pi k / loop_.size()
};

/// Whitham deformation data: chi_tilde = chi + y * xs(lambda) with xs a Taylor
/// series on the disk, alpha_tilde = alpha + y * as(lambda) with as a Laurent
/// series on an annulus around the unit circle.
struct WhithamDeformation {
    std::vector<cplx> x_coeffs;  // Taylor coefficients of xs, k = 0..Nx-1
    std::vector<cplx> a_coeffs;  // Laurent coefficients of as, k = -Nlo..Nhi (see lo)
    int a_lo = 0;                // index of a_coeffs[0] is -a_lo
    double domain = 1.2;         // |lambda|^2 < domain for xs, 1/domain < |lambda|^2 < domain for as

    cplx eval_x(cplx lambda) const;
    cplx eval_a(cplx lambda) const;
};

/// Spectral data of the family of flat connections on the torus
/// M = C/(2Z + 2tt Z): the curve, the modulus tt, the lattice constants a, b,
/// and the two meromorphic functions chi, alpha with
///   dchi = (pi i / 2 tt)(a wp(xi - (1+tau)/2) + b) dxi,  chi(0) = 0,
///   alpha(xi) = -conj(chi(conj(xi) - (1+tau)/2)) - pi i/(2 tt).
class SpectralData {
  public:
    SpectralData(SpectralCurve curve, cplx tauTilde, int truncation = 32);

    const SpectralCurve& curve() const { return curve_; }
    cplx tau() const { return curve_.tau(); }
    cplx tau_tilde() const { return tt_; }
    cplx a() const { return a_; }
    cplx b() const { return b_; }

    /// Theta context of M = C/(2Z + 2tt Z).
    const ThetaContext& ctxM() const { return *ctxM_; }
    std::shared_ptr<const ThetaContext> ctxM_ptr() const { return ctxM_; }
    /// Theta context of T^2 = C/(Z + tt Z).
    const ThetaContext& ctxT() const { return *ctxT_; }
    std::shared_ptr<const ThetaContext> ctxT_ptr() const { return ctxT_; }

    cplx chi(cplx xi) const;
    cplx chi_dxi(cplx xi) const;
    cplx alpha(cplx xi) const;

    /// chi, alpha with the deformation state applied (odd in xi by construction).
    std::pair<cplx, cplx> deformed(const WhithamDeformation& def, cplx xi) const;

    /// Distance of (2 tt / pi i) chi(xi) from the lattice Z + tt Z; zero means
    /// the holomorphic structure is a spin bundle of M.
    double spin_distance(cplx chi_value) const;
    /// Minimum of spin_distance along the circle component Re + tau/4.
    double nonspin_margin(int samples = 256) const;

  private:
    SpectralCurve curve_;
    cplx tt_;
    cplx a_, b_;
    cplx chi0_;
    std::shared_ptr<const ThetaContext> ctxM_, ctxT_;
};

/// Search Im tau by bisection so that the branch value r of the spectral curve
/// hits r_target (monotone decreasing in Im tau on (1, inf)).
cplx find_tau_for_r(double r_target, double tol = 1e-12);

/// Structured-text (JSON) round trip for SpectralData + deformation.
std::string serialize_spectral(const SpectralData& data, const std::optional<WhithamDeformation>& def);
std::pair<SpectralData, std::optional<WhithamDeformation>> deserialize_spectral(const std::string& text);

}  // namespace sd

#endif
