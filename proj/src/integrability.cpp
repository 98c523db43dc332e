#include "cg/integrability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cg/fd.hpp"
#include "cg/parallel.hpp"

namespace cg {

namespace {

constexpr int kResidualOrder = 5;  // Omega* needs one derivative
constexpr int kNodeOrder = 4;

template <class T>
using Mat5T = std::array<std::array<T, 5>, 5>;

// A_k from (m, m_u, omega, Omega, Omega*). Rows and columns: y, y*, xi_1/sqrt m, xi_2/sqrt m, xi.
template <class T>
Mat5T<T> structure_t(const T& m, const std::array<T, 2>& m_u, const std::array<T, 2>& w,
                     const std::array<std::array<T, 2>, 2>& O, const std::array<std::array<T, 2>, 2>& S, int k) {
    using std::sqrt;
    T zero = m * 0.0;
    Mat5T<T> A;
    for (auto& row : A) row.fill(zero);
    T rm = sqrt(m);
    A[0][0] = -w[k];
    A[1][1] = w[k];
    for (int i = 0; i < 2; ++i) {
        A[0][2 + i] = -O[k][i] / rm;
        A[1][2 + i] = -S[k][i] / rm;
        A[2 + i][0] = -S[i][k] / rm;
        A[2 + i][1] = -O[i][k] / rm;
    }
    T c = k == 0 ? -m_u[1] / (m * 2.0) : m_u[0] / (m * 2.0);
    A[2][3] = c;
    A[3][2] = -c;
    A[2 + k][4] = -rm;
    A[4][2 + k] = rm;
    return A;
}

Mat5 to_eigen(const Mat5T<double>& a) {
    Mat5 r;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) r(i, j) = a[i][j];
    return r;
}

Mat5 eta5() {
    Mat5 e = Mat5::Identity();
    e(0, 0) = -1;
    return e;
}

Eigen::Matrix<double, 1, 5> row_of(const MinkVec& v) {
    Eigen::Matrix<double, 1, 5> r;
    for (int k = 0; k < 5; ++k) r(k) = v[k];
    return r;
}

double inner(const Eigen::Matrix<double, 1, 5>& a, const Eigen::Matrix<double, 1, 5>& b) {
    return a.dot(b) - 2 * a(0) * b(0);
}

}  // namespace

// ---- grid ----

Grid Grid::over_domain(const SurfaceChart& chart, int n1, int n2) {
    if (n1 < 4 || n2 < 4) throw std::invalid_argument("grid: need at least 4 intervals per axis");
    const Domain& d = chart.domain();
    if (d.u_period <= 0 || d.v_period <= 0) throw std::invalid_argument("grid: chart has no periodic domain");
    Grid g;
    g.n[0] = n1 + 1;
    g.n[1] = n2 + 1;
    g.h[0] = d.u_period / n1;
    g.h[1] = d.v_period / n2;
    g.periodic[0] = g.periodic[1] = true;
    return g;
}

Grid Grid::patch(double u1, double u2, double len1, double len2, int n1, int n2) {
    if (n1 < 4 || n2 < 4) throw std::invalid_argument("grid: need at least 4 intervals per axis");
    Grid g;
    g.n[0] = n1 + 1;
    g.n[1] = n2 + 1;
    g.u0[0] = u1;
    g.u0[1] = u2;
    g.h[0] = len1 / n1;
    g.h[1] = len2 / n2;
    return g;
}

// ---- conformal data ----

const char* ConformalData::field_name(int f) {
    static const char* names[] = {"m", "omega1", "omega2", "Omega11", "Omega12", "OmegaStar11", "OmegaStar12",
                                  "OmegaStar22"};
    return names[f];
}

int ConformalData::field_index(const std::string& name) {
    for (int f = 0; f < kFields; ++f)
        if (name == field_name(f)) return f;
    throw std::invalid_argument("unknown conformal data field: " + name);
}

PointData ConformalData::from_frame(double u1, double u2) const {
    FrameState f = frame_state(*chart_, *lambda_, u1, u2, kNodeOrder, kDefaultJetMax);
    PointData p;
    p.m = f.m.value();
    p.m_u[0] = f.m.d(0);
    p.m_u[1] = f.m.d(1);
    for (int i = 0; i < 2; ++i) p.w[i] = f.omega[i].value();
    p.O = value(f.Omega);
    p.S = value(f.OmegaStar);
    return p;
}

ConformalData ConformalData::from_chart(const SurfaceChart& chart, const ConformalFactor& lambda, const Grid& grid) {
    ConformalData d;
    d.grid_ = grid;
    d.chart_ = chart;
    d.lambda_ = lambda;
    for (auto& v : d.fields_) v.resize(grid.size());
    for (auto& v : d.m_u_) v.resize(grid.size());
    parallel_for(grid.n[0], [&](int i) {
        for (int j = 0; j < grid.n[1]; ++j) {
            PointData p = d.from_frame(grid.u(0, i), grid.u(1, j));
            int id = grid.index(i, j);
            d.fields_[M][id] = p.m;
            d.fields_[W1][id] = p.w[0];
            d.fields_[W2][id] = p.w[1];
            d.fields_[O11][id] = p.O[0][0];
            d.fields_[O12][id] = p.O[0][1];
            d.fields_[S11][id] = p.S[0][0];
            d.fields_[S12][id] = p.S[0][1];
            d.fields_[S22][id] = p.S[1][1];
            d.m_u_[0][id] = p.m_u[0];
            d.m_u_[1][id] = p.m_u[1];
        }
    });
    return d;
}

ConformalData ConformalData::tabulated(const Grid& grid, std::array<std::vector<double>, kFields> fields) {
    for (int a = 0; a < 2; ++a)
        if (grid.n[a] < 5) throw std::invalid_argument("conformal data: need at least 5 points per axis");
    for (auto& v : fields)
        if (static_cast<int>(v.size()) != grid.size())
            throw std::invalid_argument("conformal data: field size does not match the grid");
    for (double m : fields[M])
        if (!(m > 0)) throw std::invalid_argument("conformal data: m must be positive");
    ConformalData d;
    d.grid_ = grid;
    d.fields_ = std::move(fields);
    return d;
}

ConformalData ConformalData::tabulate() const {
    ConformalData d = *this;
    d.chart_.reset();
    d.lambda_.reset();
    d.m_u_ = {};
    return d;
}

void ConformalData::perturb(int field, int i, int j, double eps) {
    chart_.reset();
    lambda_.reset();
    m_u_ = {};
    fields_.at(field).at(grid_.index(i, j)) += eps;
}

double ConformalData::fd(int field, int i, int j, int axis, int deriv) const {
    const std::vector<double>& v = fields_[field];
    Line line;
    if (axis == 0) {
        line = {v.data() + grid_.index(0, j), grid_.n[0], grid_.n[1], grid_.h[0], grid_.periodic[0], true};
        return line_derivative(line, i, deriv, 5);
    }
    line = {v.data() + grid_.index(i, 0), grid_.n[1], 1, grid_.h[1], grid_.periodic[1], true};
    return line_derivative(line, j, deriv, 5);
}

PointData ConformalData::at_node(int i, int j) const {
    int id = grid_.index(i, j);
    PointData p;
    p.m = fields_[M][id];
    p.m_u[0] = chart_ ? m_u_[0][id] : fd(M, i, j, 0, 1);
    p.m_u[1] = chart_ ? m_u_[1][id] : fd(M, i, j, 1, 1);
    p.w[0] = fields_[W1][id];
    p.w[1] = fields_[W2][id];
    p.O = {{{fields_[O11][id], fields_[O12][id]}, {fields_[O12][id], -fields_[O11][id]}}};
    p.S = {{{fields_[S11][id], fields_[S12][id]}, {fields_[S12][id], fields_[S22][id]}}};
    return p;
}

PointData ConformalData::along(int axis, int fixed, double s) const {
    int i0 = static_cast<int>(std::floor(s));
    if (std::abs(s - i0) < 1e-12) return axis == 0 ? at_node(i0, fixed) : at_node(fixed, i0);
    if (chart_) {
        double u1 = axis == 0 ? grid_.u(0, s) : grid_.u(0, fixed);
        double u2 = axis == 0 ? grid_.u(1, fixed) : grid_.u(1, s);
        return from_frame(u1, u2);
    }
    const int n = grid_.n[axis];
    int st = grid_.periodic[axis] ? i0 - 1 : std::clamp(i0 - 1, 0, n - 4);
    std::vector<double> xs(4);
    for (int k = 0; k < 4; ++k) xs[k] = st + k;
    auto w = fd_weights(s, xs, 0);
    PointData r;
    r.m = 0;
    for (int k = 0; k < 4; ++k) {
        int idx = st + k;
        if (grid_.periodic[axis]) idx = ((idx % (n - 1)) + (n - 1)) % (n - 1);
        PointData p = axis == 0 ? at_node(idx, fixed) : at_node(fixed, idx);
        r.m += w[k] * p.m;
        for (int a = 0; a < 2; ++a) {
            r.m_u[a] += w[k] * p.m_u[a];
            r.w[a] += w[k] * p.w[a];
            for (int b = 0; b < 2; ++b) {
                r.O[a][b] += w[k] * p.O[a][b];
                r.S[a][b] += w[k] * p.S[a][b];
            }
        }
    }
    return r;
}

// ---- residuals ----

const std::vector<std::string>& IntegrabilityReport::primary() {
    static const std::vector<std::string> names = {"codazzi_y_1",      "codazzi_y_2", "codazzi_y_star_1",
                                                   "codazzi_y_star_2", "codazzi_mix", "gauss_xi"};
    return names;
}

double IntegrabilityReport::max_primary() const {
    double r = 0;
    for (const auto& n : primary()) r = std::max(r, get(n).max_abs);
    return r;
}

const ResidualField& IntegrabilityReport::get(const std::string& name) const {
    for (const auto& f : fields)
        if (f.name == name) return f;
    throw std::out_of_range("no residual named " + name);
}

namespace {

// Values and first derivatives of the data at one node; second derivatives of log m for the curvature.
struct NodeJet {
    double m, m_d[2], lm_dd[2];  // m, dm, d^2 log m / du_k^2
    double w[2], w_d[2][2];      // w_d[i][k] = d_k omega_i
    double O[2][2], O_d[2][2][2];
    double S[2][2], S_d[2][2][2];
};

NodeJet node_from_chart(const SurfaceChart& chart, const ConformalFactor& lambda, double u1, double u2) {
    FrameState f = frame_state(chart, lambda, u1, u2, kResidualOrder, kResidualOrder);
    NodeJet n{};
    n.m = f.m.value();
    Jet2 lm = log(f.m);
    for (int k = 0; k < 2; ++k) {
        n.m_d[k] = f.m.d(k);
        n.lm_dd[k] = lm.d(k, k);
        n.w[k] = f.omega[k].value();
        for (int l = 0; l < 2; ++l) n.w_d[k][l] = f.omega[k].d(l);
    }
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            n.O[i][j] = f.Omega[i][j].value();
            n.S[i][j] = f.OmegaStar[i][j].value();
            for (int k = 0; k < 2; ++k) {
                n.O_d[i][j][k] = f.Omega[i][j].d(k);
                n.S_d[i][j][k] = f.OmegaStar[i][j].d(k);
            }
        }
    return n;
}

struct Residuals {
    double cy[2], cys[2], cys_printed[2], cys_swapped[2], mix, gauss;
};

Residuals residuals_at(const NodeJet& n) {
    Residuals r{};
    const auto& O = n.O;
    const auto& S = n.S;
    const auto& w = n.w;
    double detO = O[0][0] * O[1][1] - O[0][1] * O[1][0];
    // d log|Omega|^2 with |Omega|^2 = 2m/E = 2 m^2 / (-det Omega)
    double ddet[2];
    for (int k = 0; k < 2; ++k)
        ddet[k] = n.O_d[0][0][k] * O[1][1] + O[0][0] * n.O_d[1][1][k] - n.O_d[0][1][k] * O[1][0] -
                  O[0][1] * n.O_d[1][0][k];
    double lnorm[2], lm[2];
    for (int k = 0; k < 2; ++k) {
        lm[k] = n.m_d[k] / n.m;
        lnorm[k] = 2 * lm[k] - ddet[k] / detO;
    }
    double tr = S[0][0] + S[1][1];

    r.cy[0] = n.O_d[0][0][1] - n.O_d[0][1][0] - (w[0] * O[0][1] - w[1] * O[0][0]);
    r.cy[1] = n.O_d[0][1][1] - n.O_d[1][1][0] - (w[0] * O[1][1] - w[1] * O[0][1]);

    double lhs0 = n.S_d[0][0][1] - n.S_d[0][1][0] - (-w[0] * S[0][1] + w[1] * S[0][0]);
    double lhs1 = n.S_d[0][1][1] - n.S_d[1][1][0] - (-w[0] * S[1][1] + w[1] * S[0][1]);
    r.cys[0] = lhs0 - 0.5 * tr * lm[1];
    r.cys[1] = lhs1 + 0.5 * tr * lm[0];
    r.cys_printed[0] = lhs0 - 0.5 * tr * lnorm[1];
    r.cys_printed[1] = lhs1 - 0.5 * tr * lnorm[1];
    r.cys_swapped[0] = lhs0 - 0.5 * tr * lnorm[1];
    r.cys_swapped[1] = lhs1 + 0.5 * tr * lnorm[0];

    r.mix = n.w_d[0][1] - n.w_d[1][0] - ((O[0][0] - O[1][1]) * S[0][1] - (S[0][0] - S[1][1]) * O[0][1]) / n.m;

    double K = -(n.lm_dd[0] + n.lm_dd[1]) / (2 * n.m);
    double trOS = O[0][0] * S[0][0] + 2 * O[0][1] * S[0][1] + O[1][1] * S[1][1];
    r.gauss = K - 1 - trOS / (n.m * n.m);
    return r;
}

}  // namespace


IntegrabilityReport integrability_residuals(const ConformalData& data) {
    static const char* names[] = {"codazzi_y_1",
                                  "codazzi_y_2",
                                  "codazzi_y_star_1",
                                  "codazzi_y_star_2",
                                  "codazzi_mix",
                                  "gauss_xi",
                                  "codazzi_y_star_printed_1",
                                  "codazzi_y_star_printed_2",
                                  "codazzi_y_star_swapped_1",
                                  "codazzi_y_star_swapped_2"};
    const Grid& g = data.grid();
    IntegrabilityReport rep;
    for (const char* n : names) rep.fields.push_back({n, std::vector<double>(g.size(), 0.0), 0.0});

    std::vector<double> logm = data.field(ConformalData::M);
    for (double& v : logm) v = std::log(v);
    auto fd = [&](const std::vector<double>& v, int i, int j, int axis, int deriv) {
        Line line = axis == 0 ? Line{v.data() + g.index(0, j), g.n[0], g.n[1], g.h[0], g.periodic[0], true}
                              : Line{v.data() + g.index(i, 0), g.n[1], 1, g.h[1], g.periodic[1], true};
        return line_derivative(line, axis == 0 ? i : j, deriv, 5);
    };

    parallel_for(g.n[0], [&](int i) {
        for (int j = 0; j < g.n[1]; ++j) {
            NodeJet n{};
            if (data.has_chart()) {
                n = node_from_chart(data.chart(), data.lambda(), g.u(0, i), g.u(1, j));
            } else {
                using CD = ConformalData;
                int id = g.index(i, j);
                auto val = [&](int f) { return data.field(f)[id]; };
                auto der = [&](int f, int k) { return fd(data.field(f), i, j, k, 1); };
                n.m = val(CD::M);
                for (int k = 0; k < 2; ++k) {
                    n.m_d[k] = der(CD::M, k);
                    n.lm_dd[k] = fd(logm, i, j, k, 2);
                    n.w_d[0][k] = der(CD::W1, k);
                    n.w_d[1][k] = der(CD::W2, k);
                    n.O_d[0][0][k] = der(CD::O11, k);
                    n.O_d[0][1][k] = n.O_d[1][0][k] = der(CD::O12, k);
                    n.O_d[1][1][k] = -n.O_d[0][0][k];
                    n.S_d[0][0][k] = der(CD::S11, k);
                    n.S_d[0][1][k] = n.S_d[1][0][k] = der(CD::S12, k);
                    n.S_d[1][1][k] = der(CD::S22, k);
                }
                n.w[0] = val(CD::W1);
                n.w[1] = val(CD::W2);
                n.O[0][0] = val(CD::O11);
                n.O[0][1] = n.O[1][0] = val(CD::O12);
                n.O[1][1] = -n.O[0][0];
                n.S[0][0] = val(CD::S11);
                n.S[0][1] = n.S[1][0] = val(CD::S12);
                n.S[1][1] = val(CD::S22);
            }
            Residuals r = residuals_at(n);
            double vals[] = {r.cy[0],          r.cy[1],          r.cys[0],         r.cys[1],
                             r.mix,            r.gauss,          r.cys_printed[0], r.cys_printed[1],
                             r.cys_swapped[0], r.cys_swapped[1]};
            for (std::size_t f = 0; f < rep.fields.size(); ++f) rep.fields[f].values[g.index(i, j)] = vals[f];
        }
    });
    for (auto& f : rep.fields)
        for (double v : f.values) f.max_abs = std::max(f.max_abs, std::abs(v));
    return rep;
}

// ---- structure equations ----

Mat5 structure_matrix(const PointData& p, int k) {
    std::array<double, 2> mu{p.m_u[0], p.m_u[1]}, w{p.w[0], p.w[1]};
    return to_eigen(structure_t<double>(p.m, mu, w, p.O, p.S, k));
}

const Mat5& frame_gram() {
    static const Mat5 G = [] {
        Mat5 g = Mat5::Identity();
        g(0, 0) = g(1, 1) = 0;
        g(0, 1) = g(1, 0) = -1;
        return g;
    }();
    return G;
}

StructureCheck structure_check(const SurfaceChart& chart, const ConformalFactor& lambda, double u1, double u2) {
    FrameState f = frame_state(chart, lambda, u1, u2, kResidualOrder, kResidualOrder);
    std::array<Jet2, 2> mu{f.m.diff(0), f.m.diff(1)};
    Jet2 m = f.m.truncate(mu[0].order());
    Mat5T<Jet2> A[2] = {structure_t<Jet2>(m, mu, f.omega, f.Omega, f.OmegaStar, 0),
                        structure_t<Jet2>(m, mu, f.omega, f.Omega, f.OmegaStar, 1)};
    Mat5 A0[2], dA[2];  // dA[0] = d2 A1, dA[1] = d1 A2
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) {
                A0[k](i, j) = A[k][i][j].value();
                dA[k](i, j) = A[k][i][j].d(1 - k);
            }
    StructureCheck r;
    Mat5 Z = dA[0] - dA[1] + A0[0] * A0[1] - A0[1] * A0[0];
    r.zero_curvature = Z.cwiseAbs().maxCoeff();
    for (int k = 0; k < 2; ++k)
        r.skew = std::max(r.skew, (A0[k] * frame_gram() + frame_gram() * A0[k].transpose()).cwiseAbs().maxCoeff());

    // frame rows as jets
    Jet2 rm = sqrt(f.m);
    std::array<MinkJ, 5> rows = {f.y, f.ystar, (1.0 / rm) * f.xi_u[0], (1.0 / rm) * f.xi_u[1], f.xi};
    Mat5 F;
    for (int a = 0; a < 5; ++a) F.row(a) = row_of(value(rows[a]));
    for (int k = 0; k < 2; ++k) {
        Mat5 dF;
        for (int a = 0; a < 5; ++a) dF.row(a) = row_of(value(dmink(rows[a], k)));
        r.against_frame = std::max(r.against_frame, (dF - A0[k] * F).cwiseAbs().maxCoeff());
    }
    return r;
}

// ---- seeds ----

Mat5 exact_seed(const SurfaceChart& chart, const ConformalFactor& lambda, double u1, double u2) {
    FrameState f = frame_state(chart, lambda, u1, u2, kNodeOrder, kDefaultJetMax);
    double rm = std::sqrt(f.m.value());
    Mat5 F;
    F.row(0) = row_of(value(f.y));
    F.row(1) = row_of(value(f.ystar));
    F.row(2) = row_of(value(f.xi_u[0])) / rm;
    F.row(3) = row_of(value(f.xi_u[1])) / rm;
    F.row(4) = row_of(value(f.xi));
    return F;
}

MinkVec solve_ystar(const Mat5& seed) {
    // <y*, y> = -1, <y*, e_a> = 0 for a = 2..4; the solution set is p + t y, null for t = <p,p>/2.
    Eigen::Matrix<double, 4, 5> A;
    Eigen::Vector4d b(-1, 0, 0, 0);
    const int rows[] = {0, 2, 3, 4};
    for (int r = 0; r < 4; ++r) A.row(r) = seed.row(rows[r]) * eta5();
    Eigen::Matrix<double, 5, 1> p = A.completeOrthogonalDecomposition().solve(b);
    Eigen::Matrix<double, 1, 5> pr = p.transpose(), y = seed.row(0);
    double t = inner(pr, pr) / 2;
    MinkVec out;
    for (int k = 0; k < 5; ++k) out[k] = pr(k) + t * y(k);
    return out;
}

Mat5 standard_seed() {
    Mat5 F = Mat5::Zero();
    F(0, 0) = F(0, 1) = 1;
    F(2, 2) = F(3, 3) = F(4, 4) = 1;
    F.row(1) = row_of(solve_ystar(F));
    return F;
}

Mat5 transform_seed(const LorentzMap& L, const Mat5& seed) { return seed * L.matrix().transpose(); }

// ---- integration ----

namespace {

// One RK4 step of dF/ds = A(s) F with s in index units along an axis.
Mat5 rk4_step(const Mat5& F, double h, const Mat5& A0, const Mat5& Ah, const Mat5& A1) {
    Mat5 k1 = A0 * F;
    Mat5 k2 = Ah * (F + 0.5 * h * k1);
    Mat5 k3 = Ah * (F + 0.5 * h * k2);
    Mat5 k4 = A1 * (F + h * k3);
    return F + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
}

void integrate_line(const ConformalData& data, FrameField& out, int axis, int fixed) {
    const Grid& g = data.grid();
    const int n = g.n[axis];
    auto id = [&](int s) { return axis == 0 ? g.index(s, fixed) : g.index(fixed, s); };
    Mat5 Aprev = structure_matrix(data.along(axis, fixed, 0), axis);
    for (int s = 0; s + 1 < n; ++s) {
        Mat5 Ah = structure_matrix(data.along(axis, fixed, s + 0.5), axis);
        Mat5 Anext = structure_matrix(data.along(axis, fixed, s + 1), axis);
        out.F[id(s + 1)] = rk4_step(out.F[id(s)], g.h[axis], Aprev, Ah, Anext);
        Aprev = Anext;
    }
}

}  // namespace

FrameField integrate_structure_equations(const ConformalData& data, const Mat5& seed, const IntegrateOptions& opt) {
    double seed_gram = (seed * eta5() * seed.transpose() - frame_gram()).cwiseAbs().maxCoeff();
    if (seed_gram > 1e-10) throw std::invalid_argument("seed frame is not orthonormal");
    if (opt.check_integrability) {
        IntegrabilityReport rep = integrability_residuals(data);
        if (rep.max_primary() > opt.integrability_tol) {
            std::ostringstream os;
            os << "integrability residual " << rep.max_primary() << " exceeds " << opt.integrability_tol;
            throw IntegrabilityFailure(os.str());
        }
    }
    const Grid& g = data.grid();
    FrameField out{g, std::vector<Mat5>(g.size(), Mat5::Zero())};
    out.F[0] = seed;
    if (opt.sweep == Sweep::row_first) {
        integrate_line(data, out, 0, 0);
        parallel_for(g.n[0], [&](int i) { integrate_line(data, out, 1, i); });
    } else {
        integrate_line(data, out, 1, 0);
        parallel_for(g.n[1], [&](int j) { integrate_line(data, out, 0, j); });
    }
    double drift = gram_drift(out);
    if (drift > opt.drift_limit) {
        std::ostringstream os;
        os << "Gram drift " << drift << " exceeds " << opt.drift_limit << "; refine the grid";
        throw GramDriftError(os.str());
    }
    return out;
}

FrameField exact_frame_field(const SurfaceChart& chart, const ConformalFactor& lambda, const Grid& grid) {
    FrameField out{grid, std::vector<Mat5>(grid.size())};
    parallel_for(grid.n[0], [&](int i) {
        for (int j = 0; j < grid.n[1]; ++j)
            out.F[grid.index(i, j)] = exact_seed(chart, lambda, grid.u(0, i), grid.u(1, j));
    });
    return out;
}

double gram_drift(const FrameField& f) {
    double r = 0;
    for (const Mat5& F : f.F) r = std::max(r, (F * eta5() * F.transpose() - frame_gram()).cwiseAbs().maxCoeff());
    return r;
}

double max_frame_difference(const FrameField& a, const FrameField& b) {
    if (a.F.size() != b.F.size()) throw std::invalid_argument("frame fields on different grids");
    double r = 0;
    for (std::size_t k = 0; k < a.F.size(); ++k) r = std::max(r, (a.F[k] - b.F[k]).cwiseAbs().maxCoeff());
    return r;
}

ExtractedSurface extract_surface(const FrameField& f) {
    ExtractedSurface s;
    for (const Mat5& F : f.F) {
        double lam = F(0, 0);
        if (!(lam > 0)) throw std::domain_error("extract_surface: y has non-positive time component");
        s.lam.push_back(lam);
        s.x.push_back({F(0, 1) / lam, F(0, 2) / lam, F(0, 3) / lam, F(0, 4) / lam});
    }
    return s;
}

// ---- invariants ----

FrameInvariants frame_invariants(const FrameField& f) {
    const Grid& g = f.grid;
    const int N = g.size();
    // derivative of one entry (row a, component c) of the frame along an axis, 9-point stencils
    std::vector<double> buf(N);
    auto derivative = [&](int a, int c, int axis) {
        for (int k = 0; k < N; ++k) buf[k] = f.F[k](a, c);
        std::vector<double> d(N);
        for (int i = 0; i < g.n[0]; ++i)
            for (int j = 0; j < g.n[1]; ++j) {
                Line line = axis == 0 ? Line{buf.data() + g.index(0, j), g.n[0], g.n[1], g.h[0], false, true}
                                      : Line{buf.data() + g.index(i, 0), g.n[1], 1, g.h[1], false, true};
                d[g.index(i, j)] = line_derivative(line, axis == 0 ? i : j, 1, 9);
            }
        return d;
    };
    // D[row][axis][component]
    std::array<std::array<std::array<std::vector<double>, 5>, 2>, 5> D;
    for (int a : {0, 1, 4})
        for (int axis = 0; axis < 2; ++axis)
            for (int c = 0; c < 5; ++c) D[a][axis][c] = derivative(a, c, axis);

    FrameInvariants inv;
    for (int k = 0; k < N; ++k) {
        auto vec = [&](int a, int axis) {
            Eigen::Matrix<double, 1, 5> v;
            for (int c = 0; c < 5; ++c) v(c) = D[a][axis][c][k];
            return v;
        };
        double m = 0, E = 0, tr = 0;
        for (int axis = 0; axis < 2; ++axis) {
            m += inner(vec(4, axis), vec(4, axis)) / 2;
            E += inner(vec(0, axis), vec(0, axis)) / 2;
            tr += -inner(vec(4, axis), vec(1, axis));
        }
        double lam = f.F[k](0, 0);
        inv.m.push_back(m);
        inv.normII2.push_back(2 * m / E);
        inv.willmore.push_back(-tr / E);
        inv.lam.push_back(lam);
        inv.normII2_round.push_back(2 * m / E * lam * lam);
        inv.willmore_round.push_back(-tr / E * lam * lam * lam);
    }
    return inv;
}

double MobiusComparison::max() const {
    return std::max({m, normII2, willmore, normII2_round, willmore_round});
}

MobiusComparison compare_modulo_mobius(const FrameField& a, const FrameField& b) {
    if (a.grid.n[0] != b.grid.n[0] || a.grid.n[1] != b.grid.n[1])
        throw std::invalid_argument("compare_modulo_mobius: grids differ");
    FrameInvariants ia = frame_invariants(a), ib = frame_invariants(b);
    auto dev = [](const std::vector<double>& x, const std::vector<double>& y) {
        double r = 0;
        for (std::size_t k = 0; k < x.size(); ++k) r = std::max(r, std::abs(x[k] - y[k]));
        return r;
    };
    MobiusComparison c;
    c.m = dev(ia.m, ib.m);
    c.normII2 = dev(ia.normII2, ib.normII2);
    c.willmore = dev(ia.willmore, ib.willmore);
    c.normII2_round = dev(ia.normII2_round, ib.normII2_round);
    c.willmore_round = dev(ia.willmore_round, ib.willmore_round);
    return c;
}

}  // namespace cg
