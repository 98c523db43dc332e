#pragma once

#include <array>

#include "cg/classical.hpp"
#include "cg/mink5.hpp"

namespace cg {

using MinkJ = MinkT<Jet2>;
using Mat2J = std::array<std::array<Jet2, 2>, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

MinkJ dmink(const MinkJ& v, int var);
MinkVec value(const MinkJ& v);
Mat2 value(const Mat2J& m);

// Everything at one surface point for the metric lambda^2 g0, as jets.
// With immersion order J: y, n_vec order J-1, xi order J-2, omega and y* order J-3,
// Omega* order J-4.
struct FrameState {
    double u1 = 0, u2 = 0;
    ClassicalJet cl;
    LambdaJet lj;
    CurvatureJet cv;
    MinkJ y, ydag, ystar, xi, nvec;
    std::array<MinkJ, 2> y_u, xi_u, ystar_u;
    Jet2 m;
    std::array<Jet2, 2> omega;
    Mat2J Omega, OmegaStar;  // Omega_ij = -<xi_i, y_j>, Omega*_ij = -<xi_i, y*_j>
};

// Throws std::domain_error at umbilic points (|det Omega| below kUmbilicEps).
FrameState frame_state(const SurfaceChart& chart, const ConformalFactor& lambda, double u1, double u2,
                       int order = kDefaultJetMax, int jet_max = kDefaultJetMax);

// |omega|^2 three ways: sum omega_i^2 / E (the frame), |dH|^2 / m as printed,
// and |dH - R_3.|^2 / m which keeps the curvature term of the lambda metric.
struct OmegaNorms {
    double frame, printed, with_curvature;
};
OmegaNorms omega_norms(const FrameState& f);

// Closed-form Willmore operator Delta H + |II0|^2 H + II0^{ij} R_i3j3 - div Ric(n, .), as a jet.
Jet2 willmore_operator(const FrameState& f);
// -tr Omega* / E from the frame.
double willmore_from_trace(const FrameState& f);

// Closed form of Omega* from surface data. covariant = true reads the second derivatives
// of H and first derivatives of R_3i as covariant derivatives of I_lambda.
Mat2J omega_star_closed(const FrameState& f, bool covariant = true);

struct ConformalTransform {
    Vec4 xstar;
    double a;   // xhat . xstar
    double mu;  // time component of y*
};
ConformalTransform conformal_transform(const FrameState& f);

// Chart of the conformal transform xhat* (jets of order k need base order k + 3).
SurfaceChart conformal_dual_chart(const SurfaceChart& chart);

// Mean curvature vector of the xi-surface in de Sitter space, (Delta_0 xi / m + 2 xi) / 2.
MinkVec xi_mean_curvature(const FrameState& f);

struct FrameIdentityReport {
    double enveloping = 0;       // <xi,xi>-1, <xi,y>, <xi,y_i>
    double mobius_metric = 0;    // <xi_1,xi_2>, <xi_i,xi_i>-m, m - E|II0|^2/2
    double ystar = 0;            // relations defining y*
    double ydagger = 0;          // relations defining y-dagger
    double omega_is_II0 = 0;     // Omega - II0_lambda
    double max() const;
};
FrameIdentityReport frame_identities(const FrameState& f);

struct DerivativeReport {
    double y_expansion = 0;      // y_i = -omega_i y - Omega_ik xi_k / m
    double ystar_expansion = 0;  // y*_i = omega_i y* - Omega*_ik xi_k / m
    double ystar_dot_y = 0;      // <y*_i, y> + omega_i
    double laplace_y_printed = 0;    // Delta_0 y - 2EH n - 2E ydag + R_1212 y
    double laplace_y_normalized = 0; // same with R_1212 / E
    double laplace_xi = 0;       // Delta_0 xi + tr Omega* y + 2 m xi
    double laplace_xi_dot_y = 0; // <Delta_0 xi, y>
    double div_omega = 0;        // Div omega - (H^2 + 2 Omega.Omega*/|Omega|^2 + R_1212 / E^2)
};
DerivativeReport frame_derivatives(const FrameState& f);

// Curvature identities relating y-dagger and the curvature of lambda^2 g0.
struct CurvatureIdentityReport {
    double n_dagger = 0;            // <n_vec, ydag_i> + R_i3
    double offdiag = 0;             // <y_i, ydag_j> + R_i3j3, i != j
    double diag_printed = 0;        // <y_i, ydag_i> + R_i3i3 - (R_33 - R_1212)/2
    double diag_schouten = 0;       // <y_i, ydag_i> + R_i3i3 - E P_33
    double normal_printed = 0;      // <n_vec, (ydag along n)> + (R_33 - R_1212)/2
    double normal_schouten = 0;     // same quantity + P_33
    double div_ric = 0;             // covariant divergence minus the partial-derivative form
    double christoffel_trace = 0;   // sum_i Gamma^k_ii
    double gauss = 0;               // intrinsic K of I_lambda - (det II_l / E^2 + K^T)
};
CurvatureIdentityReport curvature_identities(const FrameState& f, const ConformalFactor& lambda);

}  // namespace cg
