#pragma once

#include <array>
#include <stdexcept>

#include "cg/jet.hpp"
#include "cg/surfaces.hpp"

namespace cg {

constexpr double kUmbilicEps = 1e-8;

struct UmbilicPoint : std::domain_error {
    using std::domain_error::domain_error;
};

Jet2 dot4(const Vec4J& a, const Vec4J& b);

// Round-metric surface geometry. All fields are jets at one parameter point.
struct ClassicalJet {
    Vec4J x;                    // immersion
    std::array<Vec4J, 2> xu;    // first partials
    Vec4J n;                    // unit normal, det(n, x, x_u1, x_u2) > 0
    Jet2 E, e, f, g;            // I = E|du|^2, II = e du1^2 + 2f du1du2 + g du2^2
    Jet2 H, K;
    Jet2 o11, o12;              // traceless part: [[o11, o12], [o12, -o11]]
};

// order is the immersion jet order; the normal and E come out one order lower,
// II and H two orders lower.
ClassicalJet classical_geometry(const SurfaceChart& chart, double u1, double u2, int order,
                                int jet_max = kDefaultJetMax);

// Same quantities for the metric lambda^2 g0 (E_l, II_l, H_l, Omega = traceless II_l).
struct LambdaJet {
    Jet2 lam, lam_n;
    Jet2 E, e, f, g, H;
    Jet2 o11, o12;
    Jet2 normII2;  // |traceless II|^2 measured with I_lambda
};

LambdaJet conformal_change(const ClassicalJet& cj, const LambdaJets& lj);

// Curvature of lambda^2 g0 in the frame {x_u1, x_u2, n / lambda}.
struct CurvatureJet {
    std::array<std::array<Jet2, 2>, 2> Ri3j3;  // R_{i3j3}
    std::array<Jet2, 2> R3i;                  // Ric(d3, di)
    Jet2 R33;                                 // Ric(d3, d3)
    Jet2 P33;                                 // Schouten P(d3, d3)
    Jet2 R1212;
    Jet2 KT;                                  // sectional curvature of the tangent plane
    Jet2 divric;                              // E_l^{-1} sum_i d_i R_{3i}
    Jet2 scal;
    // R_{3ijk}, assembled from the three-dimensional Ricci decomposition.
    Jet2 R3ijk(int i, int j, int k, const Jet2& E) const;
};

CurvatureJet conformal_curvature(const ConformalFactor& f, const ClassicalJet& cj, const LambdaJets& lj);

// Residual tensor r[i][j][k] of the Codazzi equation for the surface in (S^3, lambda^2 g0):
// Omega_{ij;k} - Omega_{ik;j} - R_{3ijk} - (H_l)_j E_l d_ik + (H_l)_k E_l d_ij.
// Covariant derivatives are taken with the Levi-Civita connection of E_l |du|^2.
using Residual3 = std::array<std::array<std::array<double, 2>, 2>, 2>;
Residual3 codazzi_residual_classical(const LambdaJet& lj, const CurvatureJet& cj, double r3_sign = 1.0);
double max_abs(const Residual3& r);

// Christoffel symbols of the conformal metric E |du|^2: Gamma[k][i][j].
std::array<std::array<std::array<Jet2, 2>, 2>, 2> conformal_christoffel(const Jet2& E);

}  // namespace cg
