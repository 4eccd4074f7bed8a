#include "selfdual/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace sd {

SpectralCurve::SpectralCurve(cplx tau, int truncation) : tau_(tau) {
    if (!(tau.imag() > 0.0) || std::abs(tau.real()) > 1e-12 * std::abs(tau))
        throw domain_error("spectral: tau must lie in i R^+");
    ctx_ = std::make_shared<ThetaContext>(Lattice{1.0, tau, LatticeKind::Gamma1}, truncation);
    e1_ = ctx_->weierstrass(0.5).p;
    e2_ = ctx_->weierstrass(tau / 2.0).p;
    e3_ = ctx_->weierstrass((1.0 + tau) / 2.0).p;
    // rectangular lattice: all roots real, e2 < e3 < e1
    const double a1 = e1_.real(), a2 = e2_.real(), a3 = e3_.real();
    if (!(a2 < a3 && a3 < a1)) throw domain_error("spectral: unexpected root ordering");
    if (!(a3 < 0.0)) throw domain_error("spectral: branch value r outside (0,1) for this tau");
    c_ = std::sqrt((a1 - a3) * (a3 - a2));
    r_ = (std::sqrt((a3 - a2) / (a1 - a3)));
    if (!(r_ > 0.0 && r_ < 1.0)) throw domain_error("spectral: branch value r outside (0,1)");
    trace_circle_loop();
}

cplx SpectralCurve::lambda(cplx xi) const {
    if (ctx_->lattice_distance(xi) < 1e-9) return 0.0;  // double zero of lambda
    if (ctx_->lattice_distance(xi - (1.0 + tau_) / 2.0) < 1e-9)
        throw pole_error("spectral: lambda has its pole at (1+tau)/2");
    return c_ / (ctx_->weierstrass(xi).p - e3_);
}

cplx SpectralCurve::lambda_dxi(cplx xi) const {
    const auto w = ctx_->weierstrass(xi);
    const cplx d = w.p - e3_;
    return -c_ * w.p_prime / (d * d);
}

cplx SpectralCurve::y(cplx xi) const {
    if (ctx_->lattice_distance(xi) < 1e-9) return 0.0;  // simple zero over lambda = 0
    const auto w = ctx_->weierstrass(xi);
    const cplx d = w.p - e3_;
    return 0.5 * iu * std::sqrt(c_) * w.p_prime / (d * d);
}

cplx SpectralCurve::y_dxi(cplx xi) const {
    const auto w = ctx_->weierstrass(xi);
    const cplx g2 = -4.0 * (e1_ * e2_ + e1_ * e3_ + e2_ * e3_);
    const cplx ppp = 6.0 * w.p * w.p - 0.5 * g2;
    const cplx d = w.p - e3_;
    return 0.5 * iu * std::sqrt(c_) * (ppp * d - 2.0 * w.p_prime * w.p_prime) / (d * d * d);
}

cplx SpectralCurve::curve_y(cplx lambda, int sheet) const {
    const double guard = 1e-12;
    if (std::abs(lambda) < guard || std::abs(lambda - r_) < guard || std::abs(lambda + 1.0 / r_) < guard)
        throw domain_error("spectral: lambda at a branch point of the curve");
    // cut [0,r] carried by sqrt(1 - r/lambda); cut (-inf,-1/r] by sqrt(lambda + 1/r)
    const cplx v = lambda * std::sqrt(1.0 - r_ / lambda) * std::sqrt(lambda + 1.0 / r_);
    return sheet >= 0 ? v : -v;
}

void SpectralCurve::trace_circle_loop() {
    // lambda((1+tau)/4) is forced to be +-i by lambda(xi + (1+tau)/2) = -1/lambda(xi).
    // From there follow lambda(xi) = exp(i phi) around the circle by Newton
    // continuation; this is the preimage component isotopic to R + tau/4.
    const int n = 256;
    loop_.assign(n, 0.0);
    cplx xi = (1.0 + tau_) / 4.0;
    const double phi0 = std::arg(lambda(xi));
    const int substeps = 4;
    const double dphi = 2.0 * pi / (n * substeps);
    auto refine = [&](cplx guess, cplx target) {
        cplx z = guess;
        for (int it = 0; it < 40; ++it) {
            const cplx f = lambda(z) - target;
            if (std::abs(f) < 1e-13) return z;
            z -= f / lambda_dxi(z);
        }
        throw convergence_error("spectral: circle-loop tracing did not converge");
    };
    for (int k = 0; k <= n * substeps; ++k) {
        const double phi = phi0 + k * dphi;
        xi = refine(xi, std::exp(iu * phi));
        // store when phi lands on the output grid 2 pi j / n
        const double scaled = phi * n / (2.0 * pi);
        const long j = std::lround(scaled);
        if (std::abs(scaled - double(j)) < 1e-9) loop_[((j % n) + n) % n] = xi;
    }
}

cplx SpectralCurve::xi_loop(double phi) const {
    const int n = int(loop_.size());
    const double scaled = phi * n / (2.0 * pi);
    const long j0 = long(std::floor(scaled));
    const cplx guess = loop_[((j0 % n) + n) % n];
    const cplx target = std::exp(iu * phi);
    cplx z = guess;
    for (int it = 0; it < 40; ++it) {
        const cplx f = lambda(z) - target;
        if (std::abs(f) < 1e-13) return z;
        z -= f / lambda_dxi(z);
    }
    throw convergence_error("spectral: xi_loop did not converge");
}

cplx SpectralCurve::xi_on_circle(cplx lambda_target) const {
    if (std::abs(std::abs(lambda_target) - 1.0) > 1e-9)
        throw domain_error("spectral: xi_on_circle needs |lambda| = 1");
    return xi_loop(std::arg(lambda_target));
}

namespace {

bool all_zero(const std::vector<cplx>& v) {
    for (const auto& c : v)
        if (c != cplx(0.0)) return false;
    return true;
}

}  // namespace

cplx WhithamDeformation::eval_x(cplx lambda) const {
    if (all_zero(x_coeffs)) return 0.0;
    if (std::norm(lambda) >= domain)
        throw domain_error("spectral: lambda outside the disk domain of the x-deformation");
    cplx acc = 0.0;
    for (auto it = x_coeffs.rbegin(); it != x_coeffs.rend(); ++it) acc = acc * lambda + *it;
    return acc;
}

cplx WhithamDeformation::eval_a(cplx lambda) const {
    if (all_zero(a_coeffs)) return 0.0;
    const double n2 = std::norm(lambda);
    if (n2 >= domain || n2 <= 1.0 / domain)
        throw domain_error("spectral: lambda outside the annulus domain of the a-deformation");
    cplx acc = 0.0;
    for (auto it = a_coeffs.rbegin(); it != a_coeffs.rend(); ++it) acc = acc * lambda + *it;
    return acc * std::pow(lambda, -double(a_lo));
}

SpectralData::SpectralData(SpectralCurve curve, cplx tauTilde, int truncation)
    : curve_(std::move(curve)), tt_(tauTilde) {
    if (!(tt_.imag() > 0.0) || std::abs(tt_.real()) > 1e-12 * std::abs(tt_))
        throw domain_error("spectral: tauTilde must lie in i R^+");
    const auto [a, b] = ab_constants(curve_.tau());
    a_ = a;
    b_ = b;
    ctxM_ = std::make_shared<ThetaContext>(Lattice{2.0, 2.0 * tt_, LatticeKind::Gamma2}, truncation);
    ctxT_ = std::make_shared<ThetaContext>(Lattice{1.0, tt_, LatticeKind::Gamma1}, truncation);
    const cplx shift = (1.0 + curve_.tau()) / 2.0;
    chi0_ = -(pi * iu / (2.0 * tt_)) * a_ * curve_.ctx().weierstrass(shift).zeta;
}

cplx SpectralData::chi(cplx xi) const {
    const cplx shift = (1.0 + curve_.tau()) / 2.0;
    if (curve_.ctx().lattice_distance(xi - shift) < 1e-9)
        throw pole_error("spectral: chi evaluated at its pole (1+tau)/2");
    const cplx zeta = curve_.ctx().weierstrass(xi - shift).zeta;
    return (pi * iu / (2.0 * tt_)) * (-a_ * zeta + b_ * xi) + chi0_;
}

cplx SpectralData::chi_dxi(cplx xi) const {
    const cplx shift = (1.0 + curve_.tau()) / 2.0;
    return (pi * iu / (2.0 * tt_)) * (a_ * curve_.ctx().weierstrass(xi - shift).p + b_);
}

cplx SpectralData::alpha(cplx xi) const {
    const cplx shift = (1.0 + curve_.tau()) / 2.0;
    return -std::conj(chi(std::conj(xi) - shift)) - pi * iu / (2.0 * tt_);
}

std::pair<cplx, cplx> SpectralData::deformed(const WhithamDeformation& def, cplx xi) const {
    const cplx lam = curve_.lambda(xi);
    const cplx yv = curve_.y(xi);
    return {chi(xi) + yv * def.eval_x(lam), alpha(xi) + yv * def.eval_a(lam)};
}

double SpectralData::spin_distance(cplx chi_value) const {
    const cplx u = (2.0 * tt_ / (pi * iu)) * chi_value;
    return ctxT_->lattice_distance(u);
}

double SpectralData::nonspin_margin(int samples) const {
    double margin = 1e30;
    for (int k = 0; k < samples; ++k) {
        const cplx xi = curve_.xi_loop(2.0 * pi * k / samples);
        margin = std::min(margin, spin_distance(chi(xi)));
    }
    return margin;
}

cplx find_tau_for_r(double r_target, double tol) {
    if (!(r_target > 0.0 && r_target < 1.0)) throw domain_error("spectral: r_target must be in (0,1)");
    double lo = 1.02, hi = 8.0;  // r is 1 at Im tau = 1 and decreases towards 0
    auto r_of = [](double im) {
        const cplx tau(0.0, im);
        ThetaContext ctx(Lattice{1.0, tau, LatticeKind::Gamma1});
        const double a1 = ctx.weierstrass(0.5).p.real();
        const double a2 = ctx.weierstrass(tau / 2.0).p.real();
        const double a3 = ctx.weierstrass((1.0 + tau) / 2.0).p.real();
        return std::sqrt((a3 - a2) / (a1 - a3));
    };
    if (r_of(lo) < r_target || r_of(hi) > r_target) throw domain_error("spectral: r_target outside bisection range");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (r_of(mid) > r_target)
            lo = mid;
        else
            hi = mid;
    }
    return cplx(0.0, 0.5 * (lo + hi));
}

namespace {

nlohmann::json cplx_to_json(cplx v) { return nlohmann::json::array({v.real(), v.imag()}); }

cplx cplx_from_json(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

nlohmann::json coeffs_to_json(const std::vector<cplx>& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : v) arr.push_back(cplx_to_json(c));
    return arr;
}

std::vector<cplx> coeffs_from_json(const nlohmann::json& j) {
    std::vector<cplx> out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(cplx_from_json(e));
    return out;
}

}  // namespace

std::string serialize_spectral(const SpectralData& data, const std::optional<WhithamDeformation>& def) {
    nlohmann::json j;
    j["tau"] = cplx_to_json(data.tau());
    j["tauTilde"] = cplx_to_json(data.tau_tilde());
    j["a"] = cplx_to_json(data.a());
    j["b"] = cplx_to_json(data.b());
    j["r"] = data.curve().r();
    j["moebius"] = {cplx_to_json(data.curve().moebius_scale()), cplx_to_json(data.curve().moebius_pole())};
    j["truncation"] = {{"theta", data.ctxM().truncation()}};
    if (def) {
        j["deformation"] = {{"x_coeffs", coeffs_to_json(def->x_coeffs)},
                            {"a_coeffs", coeffs_to_json(def->a_coeffs)},
                            {"a_lo", def->a_lo},
                            {"domain", def->domain}};
    }
    return j.dump(2);
}

std::pair<SpectralData, std::optional<WhithamDeformation>> deserialize_spectral(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("spectral: ") + e.what());
    }
    const cplx tau = cplx_from_json(j.at("tau"));
    const cplx tt = cplx_from_json(j.at("tauTilde"));
    const int trunc = j.at("truncation").at("theta").get<int>();
    SpectralData data(SpectralCurve(tau, trunc), tt, trunc);
    std::optional<WhithamDeformation> def;
    if (j.contains("deformation")) {
        WhithamDeformation d;
        d.x_coeffs = coeffs_from_json(j["deformation"].at("x_coeffs"));
        d.a_coeffs = coeffs_from_json(j["deformation"].at("a_coeffs"));
        d.a_lo = j["deformation"].at("a_lo").get<int>();
        d.domain = j["deformation"].at("domain").get<double>();
        def = std::move(d);
    }
    return {std::move(data), std::move(def)};
}

}  // namespace sd
