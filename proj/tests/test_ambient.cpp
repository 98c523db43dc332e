#include <cmath>

#include "cg/ambient.hpp"
#include "cg/checks.hpp"
#include "doctest.h"

using namespace cg;

namespace {

// first fundamental form of alpha (y + rho y*) from the frame vectors
Eigen::Matrix4d first_form_oracle(const FrameState& f, double alpha, double rho) {
    MinkVec y = value(f.y), ys = value(f.ystar);
    std::array<MinkVec, 4> d = {y + rho * ys, alpha * ys, alpha * (value(f.y_u[0]) + rho * value(f.ystar_u[0])),
                                alpha * (value(f.y_u[1]) + rho * value(f.ystar_u[1]))};
    Eigen::Matrix4d G;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) G(a, b) = lorentz_inner(d[a], d[b]);
    return G;
}

const ConformalFactor kAffine = ConformalFactor::affine(1.3, {0.2, 0, 0, 0});

}  // namespace

TEST_CASE("ambient first form, its inverse and determinant") {
    auto chart = SurfaceChart::flat_torus(0.6);
    int k = 0;
    for (auto& p : sample_points(chart, 12, 41)) {
        double alpha = 0.5 + 0.2 * k, rho = -0.15 + 0.03 * k;
        ++k;
        FrameState f = frame_state(chart, kAffine, p[0], p[1]);
        AmbientForms a = ambient_forms(f, alpha, rho);
        Eigen::Matrix4d G = first_form_oracle(f, alpha, rho);
        CHECK((a.G - G).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, G.cwiseAbs().maxCoeff()));
        CHECK((a.Ginv * G - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(std::abs(a.detG - G.determinant()) < 1e-9 * std::abs(G.determinant()));
        CHECK(normal_residual(f, alpha, rho) < 1e-12);
        CHECK(std::abs(a.Htilde - a.Htilde_trace) < 1e-9 * std::max(1.0, std::abs(a.Htilde)));
    }
}

TEST_CASE("rho derivatives of the inverse at rho = 0") {
    auto chart = SurfaceChart::clifford();
    for (auto& p : sample_points(chart, 5, 43)) {
        FrameState f = frame_state(chart, kAffine, p[0], p[1]);
        CHECK(der_inverse_check(f, 1.7).max_error() < 1e-8);
    }
}

TEST_CASE("degenerate rho values are refused") {
    auto chart = SurfaceChart::flat_torus(0.6);
    FrameState f = frame_state(chart, kAffine, 1.0, 2.0);
    auto roots = degeneracy_roots(f, 1.5, 50);
    REQUIRE(!roots.empty());
    auto direct = degeneracy_roots_direct(f, 1.5, 50);
    REQUIRE(direct.size() == roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i) {
        CHECK(std::abs(roots[i].rho - direct[i].rho) < 1e-6);
        CHECK_THROWS_AS(ambient_forms(f, 1.5, roots[i].rho), DegeneratePoint);
    }
    // Clifford has Omega* = -Omega/2, hence a double root at rho = 2
    FrameState c = frame_state(SurfaceChart::clifford(), ConformalFactor::constant(1.0), 0.3, 0.4);
    auto cr = degeneracy_roots(c, 1.0, 50);
    REQUIRE(cr.size() == 1);
    CHECK(cr[0].rho == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(cr[0].multiplicity == 2);
}

TEST_CASE("invariants are homogeneous in alpha with their order") {
    auto chart = SurfaceChart::flat_torus(0.6);
    FrameState f = frame_state(chart, kAffine, 0.8, 1.9);
    auto base = invariant_suite(f, 1.0);
    for (double alpha : {0.5, 2.0, 4.0}) {
        auto s = invariant_suite(f, alpha);
        REQUIRE(s.size() == base.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            double expect = s[i].ambient ? base[i].value * std::pow(alpha, -s[i].order) : base[i].value;
            CHECK(std::abs(s[i].value - expect) <= 1e-10 * std::max(1.0, std::abs(expect)));
        }
    }
}

TEST_CASE("catalog lists the Willmore invariants with their orders") {
    bool w = false, d = false;
    for (auto& i : invariant_catalog()) {
        if (i.name == "willmore") w = i.order == 3;
        if (i.name == "dlap_willmore") d = i.order == 5;
    }
    CHECK(w);
    CHECK(d);
}

TEST_CASE("ambient Laplacian of H~ equals 2 alpha^-3 W") {
    auto chart = SurfaceChart::flat_torus(0.6);
    const double alpha = 1.3;
    LaplaceOracle o = laplace_oracle(chart, kAffine, 0.7, 2.2, alpha);
    FrameState f = frame_state(chart, kAffine, 0.7, 2.2);
    double W = willmore_from_trace(f);
    CHECK(std::abs(o.lap - 2 * W / std::pow(alpha, 3)) <= 1e-6 * std::abs(o.lap));
    CHECK(std::abs(o.dlap - dlap_htilde_closed(f, alpha)) <= 1e-5 * std::abs(o.dlap));
}

TEST_CASE("ruled surface lies in the unit hyperboloid") {
    FrameState f = frame_state(SurfaceChart::flat_torus(0.6), kAffine, 1.2, 0.3);
    for (double t : {-0.5, 0.0, 0.5}) {
        RuledForms r = ruled_surface_forms(f, t);
        CHECK(std::abs(r.norm + 1) < 1e-12);
        CHECK((r.I - r.I_formula).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(std::abs(r.detI - r.detI_derived) < 1e-9 * std::abs(r.detI));
        CHECK(std::abs(r.H - r.H_formula) < 1e-9 * std::max(1.0, std::abs(r.H)));
    }
}

TEST_CASE("fitted scaling exponents") {
    auto chart = SurfaceChart::flat_torus(0.6);
    auto pts = sample_points(chart, 6, 3);
    const std::pair<const char*, int> expect[] = {{"normII2", 2}, {"willmore", 3}, {"norm_grad_h", 4}, {"dlap_willmore", 5}};
    for (auto& [name, k] : expect) {
        ScalingFit fit = conformal_invariance_check(chart, kAffine, name, pts);
        CHECK(!fit.vacuous);
        CHECK(std::abs(fit.exponent - k) < 0.01);
        CHECK(fit.residual < 1e-6);
    }
}
