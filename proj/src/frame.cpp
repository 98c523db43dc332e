#include "cg/frame.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cg {

MinkJ dmink(const MinkJ& v, int var) {
    MinkJ r;
    for (int k = 0; k < 5; ++k) r.c[k] = v.c[k].diff(var);
    return r;
}

MinkVec value(const MinkJ& v) {
    MinkVec r;
    for (int k = 0; k < 5; ++k) r.c[k] = v.c[k].value();
    return r;
}

Mat2 value(const Mat2J& m) { return {{{m[0][0].value(), m[0][1].value()}, {m[1][0].value(), m[1][1].value()}}}; }

namespace {

MinkJ lift_point(const Jet2& t, const Vec4J& x) { return MinkJ{{t, x[0], x[1], x[2], x[3]}}; }

Jet2 zero_like(const Jet2& j) { return Jet2(j.order(), 0.0); }

double maxabs(std::initializer_list<double> v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double mink_maxabs(const MinkVec& v) {
    double m = 0;
    for (double x : v.c) m = std::max(m, std::abs(x));
    return m;
}

// y-dagger of lambda^2 g0 as a field on S^3, composed with a jet-valued point x.
MinkJ ydagger_field(const ConformalFactor& fac, const Vec4J& x) {
    Jet2 lam = fac.value(x);
    auto g = fac.grad(x);
    Jet2 gx = g[0] * x[0];
    for (int k = 1; k < 4; ++k) gx += g[k] * x[k];
    Vec4J grad;  // round gradient of log lambda
    Jet2 inv = recip(lam);
    for (int k = 0; k < 4; ++k) grad[k] = (g[k] - gx * x[k]) * inv;
    Jet2 g2 = grad[0] * grad[0];
    for (int k = 1; k < 4; ++k) g2 += grad[k] * grad[k];
    Jet2 half = g2 * 0.5;
    MinkJ r;
    r.c[0] = (half + 0.5) * inv;
    for (int k = 0; k < 4; ++k) r.c[k + 1] = (half * x[k] - 0.5 * x[k] + grad[k]) * inv;
    return r;
}

}  // namespace

FrameState frame_state(const SurfaceChart& chart, const ConformalFactor& lambda, double u1, double u2, int order,
                       int jet_max) {
    if (order < 4) throw std::invalid_argument("frame_state: need jet order >= 4");
    FrameState f;
    f.u1 = u1;
    f.u2 = u2;
    f.cl = classical_geometry(chart, u1, u2, order, jet_max);
    const int J1 = order - 1;
    Vec4J x1;
    for (int k = 0; k < 4; ++k) x1[k] = f.cl.x[k].truncate(J1);
    LambdaJets lam = lambda_jet(lambda, x1, f.cl.n);
    f.lj = conformal_change(f.cl, lam);
    f.cv = conformal_curvature(lambda, f.cl, lam);

    double detO = -(f.lj.o11.value() * f.lj.o11.value() + f.lj.o12.value() * f.lj.o12.value());
    if (std::abs(detO) < kUmbilicEps) throw UmbilicPoint("frame_state: umbilic point");

    Jet2 one(J1, 1.0);
    MinkJ y0 = lift_point(one, x1);
    f.y = lam.lam * y0;
    Jet2 ln = lam.lam_n / lam.lam;
    f.nvec = MinkJ{{zero_like(ln), f.cl.n[0], f.cl.n[1], f.cl.n[2], f.cl.n[3]}} + ln * y0;
    f.xi = f.lj.H * f.y + f.nvec;
    f.ydag = ydagger_field(lambda, x1);
    for (int i = 0; i < 2; ++i) {
        f.y_u[i] = dmink(f.y, i);
        f.xi_u[i] = dmink(f.xi, i);
    }
    f.m = lorentz_inner(f.xi_u[0], f.xi_u[0]);
    const Jet2& E = f.lj.E;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) f.Omega[i][j] = -lorentz_inner(f.xi_u[i], f.y_u[j]);

    // y* = k y + ydag + H n + (omega_j / E) y_j with omega = E Omega^{-1} b, b_i = <ydag + H n, xi_i>
    MinkJ base = f.ydag + f.lj.H * f.nvec;
    std::array<Jet2, 2> b = {lorentz_inner(base, f.xi_u[0]), lorentz_inner(base, f.xi_u[1])};
    const Mat2J& O = f.Omega;
    Jet2 det = O[0][0] * O[1][1] - O[0][1] * O[1][0];
    Jet2 s = E / det;
    f.omega[0] = s * (O[1][1] * b[0] - O[0][1] * b[1]);
    f.omega[1] = s * (O[0][0] * b[1] - O[1][0] * b[0]);
    Jet2 w2 = (f.omega[0] * f.omega[0] + f.omega[1] * f.omega[1]) / E;
    Jet2 kappa = (f.lj.H * f.lj.H + w2) * 0.5;
    f.ystar = kappa * f.y + base + (f.omega[0] / E) * f.y_u[0] + (f.omega[1] / E) * f.y_u[1];
    for (int i = 0; i < 2; ++i) f.ystar_u[i] = dmink(f.ystar, i);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) f.OmegaStar[i][j] = -lorentz_inner(f.xi_u[i], f.ystar_u[j]);
    return f;
}

OmegaNorms omega_norms(const FrameState& f) {
    double E = f.lj.E.value(), m = f.m.value();
    double w1 = f.omega[0].value(), w2 = f.omega[1].value();
    double h1 = f.lj.H.d(0), h2 = f.lj.H.d(1);
    double r1 = f.cv.R3i[0].value(), r2 = f.cv.R3i[1].value();
    return {(w1 * w1 + w2 * w2) / E, (h1 * h1 + h2 * h2) / m, ((h1 - r1) * (h1 - r1) + (h2 - r2) * (h2 - r2)) / m};
}

Jet2 willmore_operator(const FrameState& f) {
    const Jet2& H = f.lj.H;
    const Jet2& E = f.lj.E;
    Jet2 lap = (H.diff(0).diff(0) + H.diff(1).diff(1)) / E;
    const auto& R = f.cv.Ri3j3;
    Jet2 OR = f.lj.o11 * R[0][0] + 2.0 * f.lj.o12 * R[0][1] - f.lj.o11 * R[1][1];
    return lap + f.lj.normII2 * H + OR / (E * E) - f.cv.divric;
}

double willmore_from_trace(const FrameState& f) {
    return -(f.OmegaStar[0][0].value() + f.OmegaStar[1][1].value()) / f.lj.E.value();
}

Mat2J omega_star_closed(const FrameState& f, bool covariant) {
    const Jet2& H = f.lj.H;
    const Jet2& E = f.lj.E;
    Mat2J O = {{{f.lj.o11, f.lj.o12}, {f.lj.o12, -f.lj.o11}}};
    auto G = conformal_christoffel(E);
    std::array<Jet2, 2> dH = {H.diff(0), H.diff(1)};
    const auto& R3 = f.cv.R3i;
    Jet2 N = f.lj.normII2;
    std::array<Jet2, 2> dN = {N.diff(0), N.diff(1)};
    Jet2 w2 = (f.omega[0] * f.omega[0] + f.omega[1] * f.omega[1]) / E;
    Jet2 half = (w2 + H * H) * 0.5;
    Mat2J r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Jet2 hess = dH[i].diff(j);
            Jet2 dR = R3[i].diff(j);
            if (covariant)
                for (int k = 0; k < 2; ++k) {
                    hess -= G[k][i][j] * dH[k];
                    dR -= G[k][i][j] * R3[k];
                }
            Jet2 v = dR - hess - half * O[i][j];
            if (i == j) v -= H * f.m;
            for (int k = 0; k < 2; ++k) {
                Jet2 Pjk = f.cv.Ri3j3[j][k];
                if (j == k) Pjk -= f.cv.P33 * E;
                v -= O[i][k] * Pjk / E;
            }
            for (int k = 0; k < 2; ++k) {
                Jet2 c = zero_like(dN[0]);
                if (j == k) c += dN[i];
                if (i == k) c += dN[j];
                if (i == j) c -= dN[k];
                v += 0.5 * c / N * (dH[k] - R3[k]);
            }
            r[i][j] = v;
        }
    return r;
}

ConformalTransform conformal_transform(const FrameState& f) {
    MinkVec ys = value(f.ystar);
    // the ray of y* does not depend on lambda; normalise by the time component
    if (!(ys.c[0] > 1e-12)) throw std::domain_error("conformal_transform: y* not on the positive light cone");
    ConformalTransform t;
    t.mu = ys.c[0];
    t.a = 0;
    MinkVec y = value(f.y);
    for (int k = 0; k < 4; ++k) {
        t.xstar[k] = ys.c[k + 1] / ys.c[0];
        t.a += t.xstar[k] * y.c[k + 1] / y.c[0];
    }
    return t;
}

SurfaceChart conformal_dual_chart(const SurfaceChart& chart) {
    auto fn = [chart](double u1, double u2, int order) {
        FrameState f = frame_state(chart, ConformalFactor::constant(1.0), u1, u2, order + 3, order + 3);
        Jet2 inv = recip(f.ystar.c[0]);
        return Vec4J{f.ystar.c[1] * inv, f.ystar.c[2] * inv, f.ystar.c[3] * inv, f.ystar.c[4] * inv};
    };
    return SurfaceChart::custom(chart.name() + "*", fn, chart.domain());
}

MinkVec xi_mean_curvature(const FrameState& f) {
    MinkJ lap = dmink(f.xi_u[0], 0) + dmink(f.xi_u[1], 1);
    MinkVec l = value(lap), x = value(f.xi);
    double m = f.m.value();
    MinkVec r;
    for (int k = 0; k < 5; ++k) r.c[k] = 0.5 * (l.c[k] / m + 2.0 * x.c[k]);
    return r;
}

double FrameIdentityReport::max() const {
    return maxabs({enveloping, mobius_metric, ystar, ydagger, omega_is_II0});
}

FrameIdentityReport frame_identities(const FrameState& f) {
    auto ip = [](const MinkJ& a, const MinkJ& b) { return lorentz_inner(a, b).value(); };
    FrameIdentityReport r;
    r.enveloping = maxabs({ip(f.xi, f.xi) - 1, ip(f.xi, f.y), ip(f.xi, f.y_u[0]), ip(f.xi, f.y_u[1])});
    double m = f.m.value(), E = f.lj.E.value();
    r.mobius_metric = maxabs({ip(f.xi_u[0], f.xi_u[1]), ip(f.xi_u[0], f.xi_u[0]) - m, ip(f.xi_u[1], f.xi_u[1]) - m,
                              m - 0.5 * E * f.lj.normII2.value()});
    r.ystar = maxabs({ip(f.ystar, f.y) + 1, ip(f.ystar, f.ystar), ip(f.ystar, f.xi), ip(f.ystar, f.xi_u[0]),
                      ip(f.ystar, f.xi_u[1])});
    r.ydagger = maxabs({ip(f.ydag, f.y) + 1, ip(f.ydag, f.ydag), ip(f.ydag, f.y_u[0]), ip(f.ydag, f.y_u[1]),
                        ip(f.ydag, f.nvec)});
    r.omega_is_II0 = maxabs({f.Omega[0][0].value() - f.lj.o11.value(), f.Omega[0][1].value() - f.lj.o12.value(),
                             f.Omega[1][0].value() - f.lj.o12.value(), f.Omega[1][1].value() + f.lj.o11.value()});
    return r;
}

DerivativeReport frame_derivatives(const FrameState& f) {
    DerivativeReport r;
    double m = f.m.value(), E = f.lj.E.value(), H = f.lj.H.value();
    MinkVec y = value(f.y), ys = value(f.ystar), xi = value(f.xi), n = value(f.nvec), yd = value(f.ydag);
    MinkVec x1 = value(f.xi_u[0]), x2 = value(f.xi_u[1]);
    for (int i = 0; i < 2; ++i) {
        double w = f.omega[i].value();
        MinkVec a = value(f.y_u[i]) + w * y + (f.Omega[i][0].value() / m) * x1 + (f.Omega[i][1].value() / m) * x2;
        MinkVec b = value(f.ystar_u[i]) - w * ys + (f.OmegaStar[i][0].value() / m) * x1 +
                    (f.OmegaStar[i][1].value() / m) * x2;
        r.y_expansion = std::max(r.y_expansion, mink_maxabs(a));
        r.ystar_expansion = std::max(r.ystar_expansion, mink_maxabs(b));
        r.ystar_dot_y = std::max(r.ystar_dot_y, std::abs(lorentz_inner(value(f.ystar_u[i]), y) + w));
    }
    MinkVec lapy = value(dmink(f.y_u[0], 0) + dmink(f.y_u[1], 1));
    double R1212 = f.cv.R1212.value();
    MinkVec common = lapy - (2 * E * H) * n - (2 * E) * yd;
    r.laplace_y_printed = mink_maxabs(common + R1212 * y);
    r.laplace_y_normalized = mink_maxabs(common + (R1212 / E) * y);
    MinkVec lapxi = value(dmink(f.xi_u[0], 0) + dmink(f.xi_u[1], 1));
    double trs = f.OmegaStar[0][0].value() + f.OmegaStar[1][1].value();
    r.laplace_xi = mink_maxabs(lapxi + trs * y + (2 * m) * xi);
    r.laplace_xi_dot_y = std::abs(lorentz_inner(lapxi, y));
    double div = (f.omega[0].d(0) + f.omega[1].d(1)) / E;
    double OO = 0, OOs = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            OO += f.Omega[i][j].value() * f.Omega[i][j].value();
            OOs += f.Omega[i][j].value() * f.OmegaStar[i][j].value();
        }
    // Omega.Omega* / |Omega|^2 is a ratio of like contractions; the E factors cancel
    r.div_omega = std::abs(div - (H * H + 2 * OOs / OO + R1212 / (E * E)));
    return r;
}

CurvatureIdentityReport curvature_identities(const FrameState& f, const ConformalFactor& lambda) {
    CurvatureIdentityReport r;
    const int J = f.ydag.c[0].order();
    std::array<MinkJ, 2> yd_u = {dmink(f.ydag, 0), dmink(f.ydag, 1)};
    double E = f.lj.E.value();
    const auto& R = f.cv.Ri3j3;
    for (int i = 0; i < 2; ++i) {
        r.n_dagger = std::max(r.n_dagger, std::abs(lorentz_inner(value(f.nvec), value(yd_u[i])) + f.cv.R3i[i].value()));
    }
    double lam = f.lj.lam.value();
    double R33 = f.cv.R33.value(), R1212 = f.cv.R1212.value();
    double P33 = R33 - 0.25 * f.cv.scal.value();
    r.offdiag = std::abs(lorentz_inner(value(f.y_u[0]), value(yd_u[1])) + R[0][1].value());
    r.offdiag = std::max(r.offdiag, std::abs(lorentz_inner(value(f.y_u[1]), value(yd_u[0])) + R[1][0].value()));
    for (int i = 0; i < 2; ++i) {
        double d = lorentz_inner(value(f.y_u[i]), value(yd_u[i])) + R[i][i].value();
        r.diag_printed = std::max(r.diag_printed, std::abs(d - 0.5 * (R33 - R1212)));
        r.diag_schouten = std::max(r.diag_schouten, std::abs(d - E * P33));
    }
    // derivative of the y-dagger field along the unit normal n / lambda (great circle through x)
    Vec4 x, n;
    for (int k = 0; k < 4; ++k) {
        x[k] = f.cl.x[k].value();
        n[k] = f.cl.n[k].value();
    }
    Jet2 s = Jet2::variable(std::max(1, std::min(J, 2)), 0, 0.0);
    Jet2 cs = cos(s), sn = sin(s);
    Vec4J curve;
    for (int k = 0; k < 4; ++k) curve[k] = cs * x[k] + sn * n[k];
    MinkJ ydc = ydagger_field(lambda, curve);
    MinkVec dyd;
    for (int k = 0; k < 5; ++k) dyd.c[k] = ydc.c[k].d(0) / lam;
    double nn = lorentz_inner(value(f.nvec), dyd);
    r.normal_printed = std::abs(nn + 0.5 * (R33 - R1212));
    r.normal_schouten = std::abs(nn + P33);

    // div Ric: covariant divergence of R_3i versus the partial-derivative form
    auto G = conformal_christoffel(f.lj.E);
    double cov = 0, part = 0;
    for (int i = 0; i < 2; ++i) {
        part += f.cv.R3i[i].d(i);
        cov += f.cv.R3i[i].d(i);
        for (int k = 0; k < 2; ++k) cov -= f.cv.R3i[k].value() * G[k][i][i].value();
    }
    r.div_ric = std::max(std::abs(cov - part) / E, std::abs(part / E - f.cv.divric.value()));
    for (int k = 0; k < 2; ++k)
        r.christoffel_trace = std::max(r.christoffel_trace, std::abs(G[k][0][0].value() + G[k][1][1].value()));

    Jet2 L = log(f.lj.E);
    double K = -(L.d(0, 0) + L.d(1, 1)) / (2 * E);
    double e = f.lj.e.value(), ff = f.lj.f.value(), g = f.lj.g.value();
    r.gauss = std::abs(K - ((e * g - ff * ff) / (E * E) + f.cv.KT.value()));
    return r;
}

}  // namespace cg
