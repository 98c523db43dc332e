#include "cg/surfaces.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cg {

SurfaceChart SurfaceChart::clifford() {
    SurfaceChart c;
    c.kind_ = Kind::clifford;
    c.name_ = "clifford";
    c.domain_ = {2 * M_PI, 2 * M_PI};
    return c;
}

SurfaceChart SurfaceChart::flat_torus(double r) {
    if (!(r > 0 && r < 1)) throw std::invalid_argument("flat_torus: need 0 < r < 1");
    SurfaceChart c;
    c.kind_ = Kind::flat_torus;
    c.name_ = "flat_torus";
    c.params_ = {r};
    double s = std::sqrt(1 - r * r);
    c.domain_ = {2 * M_PI * r, 2 * M_PI * s};
    return c;
}

SurfaceChart SurfaceChart::mobius_image(const SurfaceChart& base, const LorentzMap& L) {
    SurfaceChart c;
    c.kind_ = Kind::mobius_image;
    c.name_ = "mobius_image";
    c.params_ = base.params_;
    c.domain_ = base.domain_;
    c.L_ = L;
    c.base_ = std::make_shared<const SurfaceChart>(base);
    return c;
}

SurfaceChart SurfaceChart::custom(const std::string& name, JetFn fn, const Domain& domain) {
    SurfaceChart c;
    c.kind_ = Kind::custom;
    c.name_ = name;
    c.domain_ = domain;
    c.fn_ = std::move(fn);
    return c;
}

SurfaceChart SurfaceChart::from_name(const std::string& name, const std::vector<double>& params) {
    if (name == "clifford") return clifford();
    if (name == "flat_torus") {
        if (params.size() != 1) throw std::invalid_argument("flat_torus takes one parameter r");
        return flat_torus(params[0]);
    }
    throw std::invalid_argument("unknown surface: " + name);
}

Vec4J SurfaceChart::raw_jet(double u1, double u2, int order) const {
    Jet2 U = Jet2::variable(order, 0, u1);
    Jet2 V = Jet2::variable(order, 1, u2);
    switch (kind_) {
        case Kind::clifford: {
            double k = 1 / std::sqrt(2.0);
            return {cos(U) * k, sin(U) * k, cos(V) * k, sin(V) * k};
        }
        case Kind::flat_torus: {
            double r = params_[0], s = std::sqrt(1 - r * r);
            Jet2 a = U / r, b = V / s;
            return {cos(a) * r, sin(a) * r, cos(b) * s, sin(b) * s};
        }
        case Kind::mobius_image: {
            Vec4J x = base_->raw_jet(u1, u2, order);
            MinkT<Jet2> y{{Jet2(order, 1.0), x[0], x[1], x[2], x[3]}};
            MinkT<Jet2> Ly = L_.apply(y);
            if (!(Ly.c[0].value() > 0)) throw std::domain_error("mobius_image: time component not positive");
            Jet2 inv = recip(Ly.c[0]);
            return {Ly.c[1] * inv, Ly.c[2] * inv, Ly.c[3] * inv, Ly.c[4] * inv};
        }
        case Kind::custom:
            return fn_(u1, u2, order);
    }
    throw std::logic_error("unreachable");
}

Vec4J SurfaceChart::immersion_jet(double u1, double u2, int order, int jet_max) const {
    if (order > jet_max) {
        std::ostringstream os;
        os << "immersion_jet: order " << order << " exceeds jet maximum " << jet_max;
        throw std::out_of_range(os.str());
    }
    return raw_jet(u1, u2, order);
}

Vec4 SurfaceChart::point(double u1, double u2) const {
    Vec4J j = raw_jet(u1, u2, 0);
    return {j[0].value(), j[1].value(), j[2].value(), j[3].value()};
}

ConformalFactor ConformalFactor::constant(double c) {
    if (!(c > 0)) throw std::invalid_argument("constant conformal factor must be positive");
    ConformalFactor f;
    f.kind_ = Kind::constant;
    f.a_ = c;
    return f;
}

ConformalFactor ConformalFactor::affine(double a, const Vec4& b) {
    double nb = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2] + b[3] * b[3]);
    if (!(a - nb > 0)) throw std::invalid_argument("affine conformal factor needs a > |b|");
    ConformalFactor f;
    f.kind_ = Kind::affine;
    f.a_ = a;
    f.b_ = b;
    return f;
}

ConformalFactor ConformalFactor::from_name(const std::string& name, const std::vector<double>& params) {
    if (name == "constant") {
        if (params.size() != 1) throw std::invalid_argument("constant takes one parameter c");
        return constant(params[0]);
    }
    if (name == "affine") {
        if (params.size() != 5) throw std::invalid_argument("affine takes parameters a, b1, b2, b3, b4");
        return affine(params[0], {params[1], params[2], params[3], params[4]});
    }
    throw std::invalid_argument("unknown conformal factor: " + name);
}

std::string ConformalFactor::name() const { return kind_ == Kind::constant ? "constant" : "affine"; }

std::vector<double> ConformalFactor::params() const {
    if (kind_ == Kind::constant) return {a_};
    return {a_, b_[0], b_[1], b_[2], b_[3]};
}

LambdaJets lambda_jet(const ConformalFactor& f, const Vec4J& xhat, const Vec4J& n) {
    LambdaJets r;
    r.lam = f.value(xhat);
    if (!(r.lam.value() > 0)) throw std::domain_error("lambda_jet: conformal factor not positive");
    auto g = f.grad(xhat);
    r.lam_n = g[0] * n[0];
    for (int k = 1; k < 4; ++k) r.lam_n += g[k] * n[k];
    return r;
}

}  // namespace cg
