#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cg/jet.hpp"
#include "cg/mink5.hpp"

namespace cg {

constexpr int kDefaultJetMax = 6;

using Vec4J = std::array<Jet2, 4>;

struct Domain {
    double u_period = 0;  // 0 means not periodic
    double v_period = 0;
};

// Isothermal immersion of a parameter domain into the unit 3-sphere.
class SurfaceChart {
public:
    enum class Kind { clifford, flat_torus, mobius_image, custom };
    using JetFn = std::function<Vec4J(double, double, int)>;

    static SurfaceChart clifford();
    static SurfaceChart flat_torus(double r);
    static SurfaceChart mobius_image(const SurfaceChart& base, const LorentzMap& L);
    // name in {clifford, flat_torus, mobius_image}; flat_torus takes params {r}.
    // Immersion supplied as a jet-valued function (u1, u2, order) -> components.
    static SurfaceChart custom(const std::string& name, JetFn fn, const Domain& domain);
    static SurfaceChart from_name(const std::string& name, const std::vector<double>& params);

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const std::vector<double>& params() const { return params_; }
    const Domain& domain() const { return domain_; }
    const LorentzMap& transform() const { return L_; }
    const SurfaceChart* base() const { return base_.get(); }

    // Component jets of the immersion at (u1,u2); throws when order > jet_max.
    Vec4J immersion_jet(double u1, double u2, int order, int jet_max = kDefaultJetMax) const;
    Vec4 point(double u1, double u2) const;

private:
    Vec4J raw_jet(double u1, double u2, int order) const;

    Kind kind_ = Kind::clifford;
    std::string name_;
    std::vector<double> params_;
    Domain domain_;
    LorentzMap L_;
    std::shared_ptr<const SurfaceChart> base_;
    JetFn fn_;
};

// Positive function on S^3: constant(c) or affine a + b.x with a > |b|.
class ConformalFactor {
public:
    enum class Kind { constant, affine };

    static ConformalFactor constant(double c);
    static ConformalFactor affine(double a, const Vec4& b);
    static ConformalFactor from_name(const std::string& name, const std::vector<double>& params);

    Kind kind() const { return kind_; }
    std::string name() const;
    std::vector<double> params() const;
    double a() const { return a_; }
    const Vec4& b() const { return b_; }
    bool is_constant() const { return kind_ == Kind::constant; }

    // Ambient value, gradient and Hessian of lambda on R^4.
    template <class T>
    T value(const std::array<T, 4>& x) const {
        T s = x[0] * b_[0];
        for (int k = 1; k < 4; ++k) s += x[k] * b_[k];
        return s + a_;
    }
    template <class T>
    std::array<T, 4> grad(const std::array<T, 4>& x) const {
        std::array<T, 4> g;
        for (int k = 0; k < 4; ++k) g[k] = x[0] * 0.0 + b_[k];
        return g;
    }
    template <class T>
    std::array<std::array<T, 4>, 4> hess(const std::array<T, 4>& x) const {
        std::array<std::array<T, 4>, 4> h;
        for (auto& row : h)
            for (auto& e : row) e = x[0] * 0.0;
        return h;
    }

private:
    Kind kind_ = Kind::constant;
    double a_ = 1.0;
    Vec4 b_{0, 0, 0, 0};
};

struct LambdaJets {
    Jet2 lam;    // lambda o xhat
    Jet2 lam_n;  // directional derivative of lambda along the unit normal
};

// Requires the normal jets at matching order; throws when lambda is not positive.
LambdaJets lambda_jet(const ConformalFactor& f, const Vec4J& xhat, const Vec4J& n);

}  // namespace cg
