#include <cmath>
#include <vector>

#include "cg/checks.hpp"
#include "cg/fd.hpp"
#include "cg/jet.hpp"
#include "cg/surfaces.hpp"
#include "doctest.h"

using namespace cg;

namespace {

// Richardson-extrapolated central difference
template <class F>
double richardson(F f, double x, double h = 1e-4) {
    auto D = [&](double s) { return (f(x + s) - f(x - s)) / (2 * s); };
    return (4 * D(h / 2) - D(h)) / 3;
}

std::vector<SurfaceChart> charts() {
    return {SurfaceChart::clifford(), SurfaceChart::flat_torus(0.6),
            SurfaceChart::mobius_image(SurfaceChart::flat_torus(0.6), random_mobius(7, 1.0))};
}

}  // namespace

TEST_CASE("jet arithmetic reproduces closed-form partials") {
    const double u = 0.3, v = -0.7;
    Jet2 U = Jet2::variable(5, 0, u), V = Jet2::variable(5, 1, v);
    Jet2 f = sin(U) * exp(V);
    CHECK(f.d(0, 1) == doctest::Approx(std::cos(u) * std::exp(v)).epsilon(1e-14));
    CHECK(f.deriv({3, 2}) == doctest::Approx(-std::cos(u) * std::exp(v)).epsilon(1e-13));
    Jet2 g = log(1.0 + U * U) / sqrt(2.0 + cos(V));
    // d/du of log(1+u^2) / sqrt(2+cos v)
    CHECK(g.d(0) == doctest::Approx(2 * u / (1 + u * u) / std::sqrt(2 + std::cos(v))).epsilon(1e-14));
    Jet2 p = powi(U + V, 3);
    CHECK(p.d(0, 1) == doctest::Approx(6 * (u + v)).epsilon(1e-14));
    CHECK(p.deriv({2, 1}) == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(p.deriv({3, 1}) == doctest::Approx(0.0));
}

TEST_CASE("jet division and reciprocal invert multiplication") {
    Jet2 U = Jet2::variable(6, 0, 0.4), V = Jet2::variable(6, 1, 1.1);
    Jet2 a = 1.0 + U * V + sin(U);
    Jet2 r = (a / a) - 1.0;
    for (std::size_t k = 0; k < r.size(); ++k) CHECK(std::abs(r[k]) < 1e-13);
}

TEST_CASE("chart jets agree with Richardson differences up to order 3") {
    // order 1 against the immersion, order k+1 against differences of validated order-k partials
    const double pts[3][2] = {{0.37, 1.21}, {2.5, 0.4}, {4.1, 3.3}};
    for (const auto& chart : charts()) {
        for (auto& p : pts) {
            auto J = chart.immersion_jet(p[0], p[1], 3);
            for (int c = 0; c < 4; ++c) {
                for (int var = 0; var < 2; ++var) {
                    double fd = richardson(
                        [&](double s) {
                            auto x = var == 0 ? chart.point(s, p[1]) : chart.point(p[0], s);
                            return x[c];
                        },
                        p[var]);
                    Jet2::Index a{};
                    a[var] = 1;
                    double jet = J[c].deriv(a);
                    CHECK(std::abs(fd - jet) <= 1e-6 * std::max(1.0, std::abs(jet)));
                }
                for (int ord = 1; ord < 3; ++ord)
                    for (int i = 0; i <= ord; ++i)
                        for (int var = 0; var < 2; ++var) {
                            Jet2::Index a{ord - i, i};
                            double fd = richardson(
                                [&](double s) {
                                    auto K = var == 0 ? chart.immersion_jet(s, p[1], ord) : chart.immersion_jet(p[0], s, ord);
                                    return K[c].deriv(a);
                                },
                                p[var]);
                            Jet2::Index b = a;
                            b[var] += 1;
                            double jet = J[c].deriv(b);
                            CHECK(std::abs(fd - jet) <= 1e-6 * std::max(1.0, std::abs(jet)));
                        }
            }
        }
    }
}

TEST_CASE("immersion jets past jet_max are refused") {
    CHECK_THROWS(SurfaceChart::clifford().immersion_jet(0, 0, 7, 6));
}

TEST_CASE("mobius_image of the identity is the base chart") {
    auto a = SurfaceChart::clifford(), b = SurfaceChart::mobius_image(a, LorentzMap());
    auto ja = a.immersion_jet(0.3, 0.9, 4), jb = b.immersion_jet(0.3, 0.9, 4);
    for (int c = 0; c < 4; ++c)
        for (std::size_t k = 0; k < ja[c].size(); ++k) CHECK(std::abs(ja[c][k] - jb[c][k]) < 1e-14);
}

TEST_CASE("Fornberg weights") {
    auto w1 = fd_weights(0, {-2, -1, 0, 1, 2}, 1);
    const double e1[] = {1.0 / 12, -2.0 / 3, 0, 2.0 / 3, -1.0 / 12};
    for (int k = 0; k < 5; ++k) CHECK(w1[k] == doctest::Approx(e1[k]).epsilon(1e-14));
    auto w2 = fd_weights(0, {-2, -1, 0, 1, 2}, 2);
    const double e2[] = {-1.0 / 12, 4.0 / 3, -2.5, 4.0 / 3, -1.0 / 12};
    for (int k = 0; k < 5; ++k) CHECK(w2[k] == doctest::Approx(e2[k]).epsilon(1e-14));
    // one-sided stencil differentiates a quartic exactly
    auto w = fd_weights(0, {0, 1, 2, 3, 4}, 1);
    double s = 0;
    for (int k = 0; k < 5; ++k) s += w[k] * std::pow(k + 0.5, 4);
    CHECK(s == doctest::Approx(4 * 0.125).epsilon(1e-12));
    CHECK_THROWS_AS(fd_weights(0, {0, 1}, 2), std::invalid_argument);
}

TEST_CASE("periodic line derivatives converge at fourth order") {
    auto err = [](int n) {
        std::vector<double> f(n + 1);
        double h = 2 * M_PI / n;
        for (int i = 0; i <= n; ++i) f[i] = std::sin(i * h) + 0.3 * std::cos(2 * i * h);
        Line l{f.data(), n + 1, 1, h, true, true};
        double e = 0;
        for (int i = 0; i <= n; ++i)
            e = std::max(e, std::abs(line_derivative(l, i, 1, 5) - (std::cos(i * h) - 0.6 * std::sin(2 * i * h))));
        return e;
    };
    double order = std::log2(err(32) / err(64));
    CHECK(order > 3.8);
    // interpolation between nodes
    std::vector<double> f(65);
    for (int i = 0; i <= 64; ++i) f[i] = std::sin(i * 2 * M_PI / 64);
    Line l{f.data(), 65, 1, 2 * M_PI / 64, true, true};
    CHECK(std::abs(line_interpolate(l, 10.5) - std::sin(10.5 * 2 * M_PI / 64)) < 1e-5);
    CHECK(std::abs(line_interpolate(l, 63.5) - std::sin(63.5 * 2 * M_PI / 64)) < 1e-5);
}
