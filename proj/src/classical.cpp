#include "cg/classical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cg {

Jet2 dot4(const Vec4J& a, const Vec4J& b) {
    Jet2 s = a[0] * b[0];
    for (int k = 1; k < 4; ++k) s += a[k] * b[k];
    return s;
}

namespace {

Jet2 det3(const Jet2& a00, const Jet2& a01, const Jet2& a02, const Jet2& a10, const Jet2& a11, const Jet2& a12,
          const Jet2& a20, const Jet2& a21, const Jet2& a22) {
    return a00 * (a11 * a22 - a12 * a21) - a01 * (a10 * a22 - a12 * a20) + a02 * (a10 * a21 - a11 * a20);
}

// Vector c with c.v = det[a, b, w, v] for every v.
Vec4J cross4(const Vec4J& a, const Vec4J& b, const Vec4J& w) {
    Vec4J c;
    for (int i = 0; i < 4; ++i) {
        int r[3], m = 0;
        for (int k = 0; k < 4; ++k)
            if (k != i) r[m++] = k;
        Jet2 d = det3(a[r[0]], b[r[0]], w[r[0]], a[r[1]], b[r[1]], w[r[1]], a[r[2]], b[r[2]], w[r[2]]);
        c[i] = (i % 2 == 0) ? -d : d;
    }
    return c;
}

Vec4J truncate(const Vec4J& v, int order) {
    return {v[0].truncate(order), v[1].truncate(order), v[2].truncate(order), v[3].truncate(order)};
}

Vec4J diff(const Vec4J& v, int var) { return {v[0].diff(var), v[1].diff(var), v[2].diff(var), v[3].diff(var)}; }

}  // namespace

ClassicalJet classical_geometry(const SurfaceChart& chart, double u1, double u2, int order, int jet_max) {
    if (order < 2) throw std::invalid_argument("classical_geometry: need immersion order >= 2");
    ClassicalJet c;
    c.x = chart.immersion_jet(u1, u2, order, jet_max);
    c.xu[0] = diff(c.x, 0);
    c.xu[1] = diff(c.x, 1);
    c.E = dot4(c.xu[0], c.xu[0]);
    if (!(c.E.value() > 1e-12)) throw std::domain_error("classical_geometry: degenerate immersion");
    Vec4J x1 = truncate(c.x, order - 1);
    Vec4J cr = cross4(x1, c.xu[0], c.xu[1]);
    // Orientation det(n, x, x_u1, x_u2) > 0, i.e. the opposite of the cross product order.
    Jet2 inv = -recip(sqrt(dot4(cr, cr)));
    for (int k = 0; k < 4; ++k) c.n[k] = cr[k] * inv;
    Vec4J x11 = diff(c.xu[0], 0), x12 = diff(c.xu[0], 1), x22 = diff(c.xu[1], 1);
    c.e = dot4(x11, c.n);
    c.f = dot4(x12, c.n);
    c.g = dot4(x22, c.n);
    Jet2 E2 = c.E.truncate(order - 2);
    c.H = (c.e + c.g) / (2.0 * E2);
    c.K = (c.e * c.g - c.f * c.f) / (E2 * E2) + 1.0;
    c.o11 = (c.e - c.g) * 0.5;
    c.o12 = c.f;
    return c;
}

LambdaJet conformal_change(const ClassicalJet& cj, const LambdaJets& lj) {
    LambdaJet r;
    r.lam = lj.lam;
    r.lam_n = lj.lam_n;
    r.E = lj.lam * lj.lam * cj.E;
    r.e = lj.lam * cj.e - lj.lam_n * cj.E;
    r.f = lj.lam * cj.f;
    r.g = lj.lam * cj.g - lj.lam_n * cj.E;
    r.H = (r.e + r.g) / (2.0 * r.E);
    r.o11 = lj.lam * cj.o11;
    r.o12 = lj.lam * cj.o12;
    r.normII2 = 2.0 * (r.o11 * r.o11 + r.o12 * r.o12) / (r.E * r.E);
    return r;
}

Jet2 CurvatureJet::R3ijk(int i, int j, int k, const Jet2& E) const {
    Jet2 z = E * 0.0;
    Jet2 r = z;
    if (i == j) r += R3i[k] * E;
    if (i == k) r -= R3i[j] * E;
    return r;
}

CurvatureJet conformal_curvature(const ConformalFactor& fac, const ClassicalJet& cj, const LambdaJets& lj) {
    int J = std::min(cj.n[0].order(), cj.xu[0][0].order());
    Vec4J x = truncate(cj.x, J);
    Vec4J n = truncate(cj.n, J);
    Jet2 lam = lj.lam.truncate(J);
    auto g = fac.grad(x);
    auto h = fac.hess(x);
    // phi = log lambda: ambient gradient and Hessian
    std::array<Jet2, 4> Dp;
    for (int a = 0; a < 4; ++a) Dp[a] = g[a] / lam;
    std::array<std::array<Jet2, 4>, 4> D2p;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) D2p[a][b] = h[a][b] / lam - Dp[a] * Dp[b];
    Jet2 radial = x[0] * Dp[0];
    for (int a = 1; a < 4; ++a) radial += x[a] * Dp[a];
    Jet2 grad2 = Dp[0] * Dp[0];
    for (int a = 1; a < 4; ++a) grad2 += Dp[a] * Dp[a];
    grad2 -= radial * radial;

    auto hess = [&](const Vec4J& X, const Vec4J& Y) {
        Jet2 s = radial * 0.0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) s += X[a] * D2p[a][b] * Y[b];
        return s - radial * dot4(X, Y);
    };
    auto dphi = [&](const Vec4J& X) {
        Jet2 s = X[0] * Dp[0];
        for (int a = 1; a < 4; ++a) s += X[a] * Dp[a];
        return s;
    };
    // Schouten tensor of e^{2phi} g0 in dimension 3: P = g0/2 - Hess phi + dphi dphi - |dphi|^2 g0 / 2
    auto P = [&](const Vec4J& X, const Vec4J& Y) {
        return dot4(X, Y) * 0.5 - hess(X, Y) + dphi(X) * dphi(Y) - grad2 * dot4(X, Y) * 0.5;
    };
    Jet2 trD2 = D2p[0][0] + D2p[1][1] + D2p[2][2] + D2p[3][3];
    Jet2 xD2x = hess(x, x) + radial * dot4(x, x);  // D2phi(x,x)
    Jet2 lap = trD2 - xD2x - 3.0 * radial;

    const Vec4J& X1 = cj.xu[0];
    const Vec4J& X2 = cj.xu[1];
    Vec4J X1t = truncate(X1, J), X2t = truncate(X2, J);
    Jet2 El = lam * lam * cj.E.truncate(J);
    std::array<Vec4J, 2> Xi = {X1t, X2t};

    CurvatureJet r;
    r.scal = (6.0 - 4.0 * lap - 2.0 * grad2) / (lam * lam);
    Jet2 Jtr = r.scal * 0.25;
    Jet2 P33 = P(n, n) / (lam * lam);
    for (int i = 0; i < 2; ++i) {
        r.R3i[i] = P(n, Xi[i]) / lam;
        for (int j = 0; j < 2; ++j) {
            r.Ri3j3[i][j] = P(Xi[i], Xi[j]);
            if (i == j) r.Ri3j3[i][j] += P33 * El;
        }
    }
    r.P33 = P33;
    r.R33 = P33 + Jtr;
    r.R1212 = El * (P(X1t, X1t) + P(X2t, X2t));
    r.KT = r.R1212 / (El * El);
    if (J >= 1) r.divric = (r.R3i[0].diff(0) + r.R3i[1].diff(1)) / El.truncate(J - 1);
    return r;
}

std::array<std::array<std::array<Jet2, 2>, 2>, 2> conformal_christoffel(const Jet2& E) {
    Jet2 L = log(E);
    std::array<Jet2, 2> dl = {L.diff(0) * 0.5, L.diff(1) * 0.5};
    std::array<std::array<std::array<Jet2, 2>, 2>, 2> G;
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                Jet2 s = dl[0] * 0.0;
                if (i == k) s += dl[j];
                if (j == k) s += dl[i];
                if (i == j) s -= dl[k];
                G[k][i][j] = s;
            }
    return G;
}

Residual3 codazzi_residual_classical(const LambdaJet& lj, const CurvatureJet& cj, double r3_sign) {
    std::array<std::array<Jet2, 2>, 2> O = {{{lj.o11, lj.o12}, {lj.o12, -lj.o11}}};
    auto G = conformal_christoffel(lj.E);
    auto cov = [&](int i, int j, int k) {
        double s = O[i][j].d(k);
        for (int l = 0; l < 2; ++l) s -= G[l][k][i].value() * O[l][j].value() + G[l][k][j].value() * O[i][l].value();
        return s;
    };
    double E = lj.E.value();
    Residual3 r{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                double v = cov(i, j, k) - cov(i, k, j) - r3_sign * cj.R3ijk(i, j, k, lj.E).value();
                if (i == k) v -= lj.H.d(j) * E;
                if (i == j) v += lj.H.d(k) * E;
                r[i][j][k] = v;
            }
    return r;
}

double max_abs(const Residual3& r) {
    double m = 0;
    for (auto& a : r)
        for (auto& b : a)
            for (double v : b) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace cg
