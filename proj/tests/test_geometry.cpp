#include <cmath>

#include "cg/checks.hpp"
#include "cg/classical.hpp"
#include "cg/frame.hpp"
#include "doctest.h"

using namespace cg;

TEST_CASE("Lorentz maps preserve eta and compose") {
    Mat5 eta = Mat5::Identity();
    eta(0, 0) = -1;
    for (int s = 0; s < 10; ++s) {
        LorentzMap L = random_mobius(100 + s, 1.0);
        Mat5 M = L.matrix();
        CHECK((M.transpose() * eta * M - eta).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(M(0, 0) > 0);
        CHECK(M.determinant() == doctest::Approx(1.0).epsilon(1e-12));
        Mat5 I = (L * L.inverse()).matrix() - Mat5::Identity();
        CHECK(I.cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK_THROWS(LorentzMap(2 * Mat5::Identity()));
}

TEST_CASE("boost rapidity and light cone") {
    LorentzMap B = make_boost({1, 0, 0, 0}, 0.8);
    MinkVec t = B.apply(mink(1, 0, 0, 0, 0));
    CHECK(t[0] == doctest::Approx(std::cosh(0.8)));
    CHECK(std::abs(t[1]) == doctest::Approx(std::sinh(0.8)));
    CHECK(classify(mink(1, 1, 0, 0, 0)) == Causal::null);
    CHECK(classify(mink(2, 1, 0, 0, 0)) == Causal::timelike);
    CHECK(classify(mink(1, 1, 1, 0, 0)) == Causal::spacelike);
    // the projective action sends the sphere to itself with factor mu = time component
    Vec4 p{0.5, 0.5, 0.5, 0.5};
    auto im = mobius_action(B, p);
    double n = 0;
    for (double x : im.image) n += x * x;
    CHECK(n == doctest::Approx(1.0).epsilon(1e-14));
    double sh = B.apply(mink(0, 1, 0, 0, 0))[0];
    CHECK(std::abs(sh) == doctest::Approx(std::sinh(0.8)));
    CHECK(im.mu == doctest::Approx(std::cosh(0.8) + 0.5 * sh));
}

TEST_CASE("classical scalars of the catalog tori") {
    auto c = classical_geometry(SurfaceChart::clifford(), 0.4, 1.3, 4);
    CHECK(c.E.value() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(c.H.value()) < 1e-14);
    CHECK(std::abs(c.K.value()) < 1e-13);

    const double r = 0.6, s = 0.8;
    auto t = classical_geometry(SurfaceChart::flat_torus(r), 1.1, 2.7, 4);
    CHECK(t.E.value() == doctest::Approx(1.0).epsilon(1e-14));
    // principal curvatures s/r and -r/s up to orientation
    CHECK(std::abs(t.H.value()) == doctest::Approx((s * s - r * r) / (2 * r * s)).epsilon(1e-13));
    double o = t.o11.value() * t.o11.value() + t.o12.value() * t.o12.value();
    CHECK(2 * o / (t.E.value() * t.E.value()) == doctest::Approx(625.0 / 288).epsilon(1e-13));
}

TEST_CASE("Mobius images stay isothermal") {
    for (int k = 0; k < 6; ++k) {
        auto chart = SurfaceChart::mobius_image(k % 2 ? SurfaceChart::clifford() : SurfaceChart::flat_torus(0.6),
                                                random_mobius(300 + k, 1.0));
        auto J = chart.immersion_jet(0.7 + k, 0.2 * k, 2);
        std::array<double, 4> xu, xv;
        for (int c = 0; c < 4; ++c) xu[c] = J[c].d(0), xv[c] = J[c].d(1);
        double E = 0, F = 0, G = 0;
        for (int c = 0; c < 4; ++c) E += xu[c] * xu[c], F += xu[c] * xv[c], G += xv[c] * xv[c];
        CHECK(std::abs(E - G) < 1e-10 * E);
        CHECK(std::abs(F) < 1e-10 * E);
    }
}

TEST_CASE("frame identities hold on the catalog under both factors") {
    for (const auto& lam : {ConformalFactor::constant(1.0), ConformalFactor::affine(1.3, {0.2, 0, 0, 0})})
        for (const auto& chart : {SurfaceChart::clifford(), SurfaceChart::flat_torus(0.6)})
            for (auto& p : sample_points(chart, 8, 11)) {
                FrameState f = frame_state(chart, lam, p[0], p[1]);
                CHECK(frame_identities(f).max() < 1e-9);
                // y null, xi unit, <y, y*> = -1
                MinkVec y = value(f.y), ys = value(f.ystar), xi = value(f.xi);
                CHECK(std::abs(lorentz_inner(y, y)) < 1e-12);
                CHECK(std::abs(lorentz_inner(ys, ys)) < 1e-12);
                CHECK(std::abs(lorentz_inner(y, ys) + 1) < 1e-12);
                CHECK(std::abs(lorentz_inner(xi, xi) - 1) < 1e-12);
                // y = lambda (1, x)
                Vec4 x = chart.point(p[0], p[1]);
                double lam0 = lam.value(x);
                CHECK(std::abs(y[0] - lam0) < 1e-13);
                for (int c = 0; c < 4; ++c) CHECK(std::abs(y[c + 1] - lam0 * x[c]) < 1e-13);
            }
}

TEST_CASE("Willmore operator of flat tori matches the closed form") {
    for (double r : {0.5, 0.6, 0.7}) {
        double s = std::sqrt(1 - r * r), closed = (s * s - r * r) / (4 * r * r * r * s * s * s);
        auto chart = SurfaceChart::flat_torus(r);
        for (auto& p : sample_points(chart, 4, 3)) {
            FrameState f = frame_state(chart, ConformalFactor::constant(1.0), p[0], p[1]);
            CHECK(std::abs(willmore_from_trace(f) - closed) <= 1e-8 * std::abs(closed));
            CHECK(std::abs(willmore_operator(f).value() - closed) <= 1e-8 * std::abs(closed));
        }
    }
    CHECK(flat_torus_willmore(0.6) == doctest::Approx(0.632957).epsilon(1e-6));
}

TEST_CASE("Clifford torus: conformal transform is the antipodal map and its own dual") {
    auto chart = SurfaceChart::clifford();
    auto dual = conformal_dual_chart(chart);
    for (auto& p : sample_points(chart, 5, 21)) {
        FrameState f = frame_state(chart, ConformalFactor::constant(1.0), p[0], p[1]);
        Vec4 x = chart.point(p[0], p[1]), xs = conformal_transform(f).xstar;
        for (int c = 0; c < 4; ++c) CHECK(std::abs(xs[c] + x[c]) < 1e-12);
        CHECK(std::abs(willmore_from_trace(f)) < 1e-12);
        FrameState g = frame_state(dual, ConformalFactor::constant(1.0), p[0], p[1], 4, 4);
        Vec4 xx = conformal_transform(g).xstar;
        for (int c = 0; c < 4; ++c) CHECK(std::abs(xx[c] - x[c]) < 1e-9);
    }
}

TEST_CASE("Lorentz equivariance of xi and y* over 20 maps") {
    auto base = SurfaceChart::flat_torus(0.6);
    for (int k = 0; k < 20; ++k) {
        LorentzMap L = random_mobius(500 + k, 1.0);
        auto img = SurfaceChart::mobius_image(base, L);
        double u1 = 0.3 * k, u2 = 0.17 * k + 0.1;
        FrameState f = frame_state(base, ConformalFactor::constant(1.0), u1, u2);
        FrameState g = frame_state(img, ConformalFactor::constant(1.0), u1, u2);
        MinkVec Lxi = L.apply(value(f.xi)), Lys = L.apply(value(f.ystar)), gxi = value(g.xi), gys = value(g.ystar);
        double mu = mobius_action(L, base.point(u1, u2)).mu;
        for (int c = 0; c < 5; ++c) {
            CHECK(std::abs(gxi[c] - Lxi[c]) < 1e-9);
            CHECK(std::abs(gys[c] - mu * Lys[c]) < 1e-9 * std::max(1.0, std::abs(mu * Lys[c])));
        }
    }
}

TEST_CASE("umbilic points are refused") {
    // the round equator sphere x4 = 0 is totally umbilic
    auto sphere = SurfaceChart::custom(
        "equator",
        [](double u1, double u2, int order) {
            Jet2 U = Jet2::variable(order, 0, u1), V = Jet2::variable(order, 1, u2);
            Jet2 d = 1.0 + U * U + V * V;
            return Vec4J{2.0 * U / d, 2.0 * V / d, (U * U + V * V - 1.0) / d, Jet2(order, 0.0)};
        },
        Domain{});
    CHECK_THROWS_AS(frame_state(sphere, ConformalFactor::constant(1.0), 0.2, 0.3), UmbilicPoint);
}
