#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "cg/frame.hpp"

namespace cg {

struct DegeneratePoint : std::domain_error {
    using std::domain_error::domain_error;
};

// First and second fundamental forms of alpha y + alpha rho y* in coordinates (alpha, rho, u1, u2).
struct AmbientForms {
    double alpha = 0, rho = 0;
    Eigen::Matrix4d G, Ginv, Ginv_direct, hh;
    Mat2 P;                   // Omega + rho Omega*
    double detP = 0;          // det Omega - rho tr(Omega Omega*) + rho^2 det Omega*
    double detG = 0;          // -alpha^6 detP^2 / m^2
    double detG_norm = 0;     // second displayed form, |P|^2 measured with I_lambda
    double detG_direct = 0;
    double Htilde = 0;        // rho det Omega W / (alpha detP)
    double Htilde_trace = 0;  // tr(Ginv hh)
    double inverse_residual() const;  // |Ginv G - 1| for the block formula
};

constexpr double kDegenerateEps = 1e-12;

// Throws DegeneratePoint when |det G| < kDegenerateEps alpha^6.
AmbientForms ambient_forms(const FrameState& f, double alpha, double rho);

// rho-derivatives of the inverse at rho = 0: jet differentiation of the block formulas against the
// closed values -2|w|^2/alpha, 2/alpha^2, -2 w_i/(alpha^2 E), 8|w|^2/alpha^2.
struct DerInverseReport {
    double jet[5] = {0, 0, 0, 0, 0};
    double closed[5] = {0, 0, 0, 0, 0};
    double max_error() const;
};
DerInverseReport der_inverse_check(const FrameState& f, double alpha);

// Zeros of det G for rho in [0, rho_max]: from the quadratic detP, and from the vanishing minima of
// the direct determinant.
struct DegeneracyRoot {
    double rho;
    int multiplicity;
};
std::vector<DegeneracyRoot> degeneracy_roots(const FrameState& f, double alpha, double rho_max);
std::vector<DegeneracyRoot> degeneracy_roots_direct(const FrameState& f, double alpha, double rho_max);

// <xi, d x~> for the four coordinate directions.
double normal_residual(const FrameState& f, double alpha, double rho);

// x+ = (e^t y + e^-t y*) / sqrt 2 in the hyperboloid, coordinates (t, u1, u2).
struct RuledForms {
    double t = 0;
    Eigen::Matrix3d I, I_formula, II;
    double norm = 0;           // <x+, x+>
    double detI = 0;           // direct
    double detI_printed = 0;   // (E^2|P|^2 - tr^2)^2 / (8 m^2)
    double detI_derived = 0;   // detP^2 / (4 m^2)
    double H = 0;              // tr(I^-1 II)
    double H_formula = 0;      // e^-3t sqrt2 det Omega W / (det Omega - e^-2t tr + e^-4t det*)
};
RuledForms ruled_surface_forms(const FrameState& f, double t);

// Christoffel symbols and covariant derivatives of h~ at rho = 0.
// Index order A = 0 alpha, 1 rho, 2 u1, 3 u2; Gamma[C][A][B] = Gamma^C_AB, h[A][B][C] = h_AB,C.
using Tensor3 = std::array<std::array<std::array<double, 4>, 4>, 4>;
struct CovariantH {
    Tensor3 gamma_direct{}, h_direct{}, h_table{};
    double gamma_table_error = 0;  // listed Christoffel symbols against the direct ones
    double phi[4] = {0, 0, 0, 0};  // h_AB,C g^BC from the table
    double norm_table = 0;         // |grad h|^2 contracted from the table
    double norm_direct = 0;        // from the direct covariant derivative
    double norm_formula = 0;       // surface-data expression as displayed
    double norm_derived = 0;       // surface-data expression that keeps all curvature terms
    double norm_omega_star = 0;    // -6 alpha^-4 Omega.Omega*
};
CovariantH christoffels_and_covariant_h(const FrameState& f, double alpha, double kappa = 1.0);

struct InvariantRecord {
    std::string name;
    double value;
    int order;
    bool ambient;  // evaluated on the associate surface, homogeneous in alpha
};

// Invariants at (alpha, 0). Needs frame jets of order >= 6.
std::vector<InvariantRecord> invariant_suite(const FrameState& f, double alpha);

// Catalog of invariant names and orders.
struct InvariantInfo {
    std::string name;
    int order;
    std::string description;
};
const std::vector<InvariantInfo>& invariant_catalog();

// Closed forms at rho = 0.
double lap_htilde_closed(const FrameState& f, double alpha);
double dlap_htilde_closed(const FrameState& f, double alpha);
double dlap_htilde_intro(const FrameState& f, double alpha);

// Direct ambient Laplacians of H~ with jets in (alpha, rho, u1, u2). kappa rescales
// G -> kappa^2 G and h -> kappa h. Builds its own frame with immersion order 8.
struct LaplaceOracle {
    double lap = 0, dlap = 0;
    double htilde = 0;  // H~ at rho_eval
    double h2 = 0;      // |h|^2 at rho = 0
};
LaplaceOracle laplace_oracle(const SurfaceChart& chart, const ConformalFactor& lambda, double u1, double u2,
                             double alpha, double kappa = 1.0, double rho_eval = 0.1);

// Exponent fit of log(I_lambda / I_1) against -log lambda over points.
struct ScalingFit {
    double exponent = 0, residual = 0;
    bool vacuous = false;
};
ScalingFit conformal_invariance_check(const SurfaceChart& chart, const ConformalFactor& lambda,
                                      const std::string& invariant, const std::vector<std::array<double, 2>>& pts);

}  // namespace cg
