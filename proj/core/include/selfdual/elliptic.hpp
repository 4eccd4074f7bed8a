#ifndef SELFDUAL_ELLIPTIC_HPP
#define SELFDUAL_ELLIPTIC_HPP

#include <complex>

#include "selfdual/errors.hpp"
#include "selfdual/mat2.hpp"

namespace sd {

/// Which quasi-periodicity law the shifted theta function of the lattice obeys.
///
/// Gamma2 is the rectangular lattice 2Z + 2tt*Z whose theta satisfies
///   theta(z+w1) = theta(z),  theta(z+w2) = -theta(z) exp(-pi i z),
/// Gamma1 is Z + tt*Z with
///   theta(z+w1) = theta(z),  theta(z+w2) = -theta(z) exp(-2 pi i z).
enum class LatticeKind { Gamma2, Gamma1 };

struct Lattice {
    cplx omega1;  // real positive period
    cplx omega2;  // purely imaginary period, Im > 0
    LatticeKind convention;
};

struct WeierstrassValues {
    cplx p;        // wp(xi)
    cplx p_prime;  // wp'(xi)
    cplx zeta;     // zeta(xi)
};

/// Precomputed series data for the shifted theta function and the Weierstrass
/// functions of one lattice. Immutable after construction; safe to share
/// between threads.
class ThetaContext {
  public:
    ThetaContext(const Lattice& lattice, int truncation = 32);

    const Lattice& lattice() const { return lat_; }
    int truncation() const { return trunc_; }
    cplx nome() const { return q_; }

    /// Shifted theta function of the lattice; entire, theta(0) = 0.
    cplx theta(cplx z) const;
    /// d/dz of theta.
    cplx theta_dz(cplx z) const;
    /// Logarithmic derivative theta'(z)/theta(z).
    cplx theta_logdz(cplx z) const;
    /// theta'(0).
    cplx theta_prime0() const { return theta_prime0_; }

    /// theta_x(z) = theta(z-x)/theta(z) * exp(k x (conj z - z)) with the
    /// convention factor k = pi i/(4 tt) for Gamma2 and pi i/tt for Gamma1.
    /// Simple zero at z = x, simple pole at z = 0; doubly periodic.
    cplx theta_x(cplx x, cplx z) const;
    /// d/dz of theta_x at fixed x.
    cplx theta_x_dz(cplx x, cplx z) const;
    /// The dbar-constant: dbar theta_x = xfactor(x) * theta_x.
    cplx xfactor(cplx x) const { return xfac_ * x; }

    /// Weierstrass p, p', zeta of the lattice.
    WeierstrassValues weierstrass(cplx xi) const;

    /// zeta(omega1/2) and zeta(omega2/2).
    cplx eta1() const { return eta1_; }
    cplx eta2() const { return eta2_; }

    /// Distance from z to the nearest lattice point.
    double lattice_distance(cplx z) const;
    /// Distance from z to the nearest half-lattice point (lattice/2).
    double half_lattice_distance(cplx z) const;

    /// Reduce z modulo the lattice into the centered fundamental cell.
    cplx reduce(cplx z) const;

  private:
    struct Theta1Block {
        cplx t0, t1, t2, t3;  // theta1 and derivatives w.r.t. v at reduced argument
    };
    Theta1Block theta1_block(cplx v) const;
    // value + first log-derivatives at unreduced v, handling the reduction factor
    void theta1_full(cplx v, cplx& value, cplx& l1) const;

    Lattice lat_;
    int trunc_;
    cplx tau_;  // omega2/omega1
    cplx q_;    // exp(i pi tau)
    cplx xfac_;
    cplx theta1p0_, theta1ppp0_;
    cplx theta_prime0_;
    cplx eta1_, eta2_;
};

/// The lattice constants a, b of the spectral torus C/(Z + tau Z): the unique
/// pair with  int_1 (a wp + b) dxi = 2  and  int_tau (a wp + b) dxi = 0.
/// a = -tau/(pi i); b is fixed by the tau-cycle integral.
std::pair<cplx, cplx> ab_constants(cplx tau);

}  // namespace sd

#endif
