#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cg/frame.hpp"

namespace cg {

struct IntegrabilityFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct GramDriftError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rectangular parameter grid; n[k] points per axis including both ends.
struct Grid {
    int n[2] = {0, 0};
    double u0[2] = {0, 0};
    double h[2] = {0, 0};
    bool periodic[2] = {false, false};  // last point repeats the first

    static Grid over_domain(const SurfaceChart& chart, int intervals1, int intervals2);
    static Grid patch(double u1, double u2, double len1, double len2, int intervals1, int intervals2);
    double u(int axis, double i) const { return u0[axis] + i * h[axis]; }
    int index(int i, int j) const { return i * n[1] + j; }
    int size() const { return n[0] * n[1]; }
};

// Conformal data at one point: m, its gradient, omega, Omega, Omega* (coordinate components).
struct PointData {
    double m = 0;
    double m_u[2] = {0, 0};
    double w[2] = {0, 0};
    Mat2 O{}, S{};
};

// (m, omega, Omega, Omega*) on a grid, either backed by an analytic chart (jets at any point) or
// tabulated (finite differences and cubic interpolation).
class ConformalData {
public:
    enum Field { M = 0, W1, W2, O11, O12, S11, S12, S22, kFields };
    static const char* field_name(int f);
    static int field_index(const std::string& name);

    static ConformalData from_chart(const SurfaceChart& chart, const ConformalFactor& lambda, const Grid& grid);
    static ConformalData tabulated(const Grid& grid, std::array<std::vector<double>, kFields> fields);

    const Grid& grid() const { return grid_; }
    bool has_chart() const { return chart_.has_value(); }
    const SurfaceChart& chart() const { return *chart_; }
    const ConformalFactor& lambda() const { return *lambda_; }
    const std::vector<double>& field(int f) const { return fields_[f]; }
    ConformalData tabulate() const;  // drops the chart
    void perturb(int field, int i, int j, double eps);

    PointData at_node(int i, int j) const;
    // Along a grid line: axis 0 moves u1 at fixed u2 index, axis 1 the converse. s is fractional.
    PointData along(int axis, int fixed, double s) const;

private:
    PointData from_frame(double u1, double u2) const;
    double fd(int field, int i, int j, int axis, int deriv) const;

    Grid grid_;
    std::array<std::vector<double>, kFields> fields_;
    std::array<std::vector<double>, 2> m_u_;  // jet gradients of m when chart-backed
    std::optional<SurfaceChart> chart_;
    std::optional<ConformalFactor> lambda_;
};

struct ResidualField {
    std::string name;
    std::vector<double> values;
    double max_abs = 0;
};
struct IntegrabilityReport {
    std::vector<ResidualField> fields;
    static const std::vector<std::string>& primary();
    double max_primary() const;
    const ResidualField& get(const std::string& name) const;
};

// Compatibility residuals on every grid node. Primary entries: codazzi_y_1/2, codazzi_y_star_1/2,
// codazzi_mix, gauss_xi. codazzi_y_star_printed_1/2 and codazzi_y_star_swapped_1/2 use the
// log|Omega|^2 terms in the displayed and index-swapped arrangement.
IntegrabilityReport integrability_residuals(const ConformalData& data);

// Rows of the frame F are e0 = y, e1 = y*, e2 = xi_1/sqrt m, e3 = xi_2/sqrt m, e4 = xi; dF/du_k = A_k F.
Mat5 structure_matrix(const PointData& p, int k);
// Lorentz inner products of the rows for a valid frame.
const Mat5& frame_gram();
// Zero-curvature residual d2 A1 - d1 A2 + [A1, A2] from a chart, and A G + G A^T.
struct StructureCheck {
    double zero_curvature = 0;
    double skew = 0;
    double against_frame = 0;  // A_k F - dF/du_k for the chart's frame
};
StructureCheck structure_check(const SurfaceChart& chart, const ConformalFactor& lambda, double u1, double u2);

struct FrameField {
    Grid grid;
    std::vector<Mat5> F;
};

enum class Sweep { row_first, column_first };

struct IntegrateOptions {
    Sweep sweep = Sweep::row_first;
    bool check_integrability = true;
    double integrability_tol = 1e-6;
    double drift_limit = 1e-4;
};

// Seed frames.
Mat5 exact_seed(const SurfaceChart& chart, const ConformalFactor& lambda, double u1, double u2);
Mat5 standard_seed();  // y = (1, e1), e2..e4 = spatial e2..e4
Mat5 transform_seed(const LorentzMap& L, const Mat5& seed);
// Completes y*, given y, e2, e3, e4 (rows 0, 2, 3, 4), from the linear conditions and nullity.
MinkVec solve_ystar(const Mat5& seed);

// RK4 with step equal to the grid spacing, from the seed at the grid origin. Throws IntegrabilityFailure
// when the residuals exceed the tolerance and GramDriftError past the drift limit.
FrameField integrate_structure_equations(const ConformalData& data, const Mat5& seed, const IntegrateOptions& opt = {});
FrameField exact_frame_field(const SurfaceChart& chart, const ConformalFactor& lambda, const Grid& grid);
double gram_drift(const FrameField& f);
double max_frame_difference(const FrameField& a, const FrameField& b);

struct ExtractedSurface {
    std::vector<Vec4> x;
    std::vector<double> lam;
};
ExtractedSurface extract_surface(const FrameField& f);

// Invariant fields recovered from a frame field by 8th-order differences.
struct FrameInvariants {
    std::vector<double> m, normII2, willmore, lam;
    std::vector<double> normII2_round, willmore_round;  // times lam^2, lam^3
};
FrameInvariants frame_invariants(const FrameField& f);

struct MobiusComparison {
    double m = 0, normII2 = 0, willmore = 0;              // lift-invariant fields
    double normII2_round = 0, willmore_round = 0;         // normalised by the time component
    double max() const;
};
MobiusComparison compare_modulo_mobius(const FrameField& a, const FrameField& b);

}  // namespace cg
