#include "cg/mink5.hpp"

#include <cmath>
#include <stdexcept>

namespace cg {

namespace {
Mat5 eta() {
    Mat5 e = Mat5::Identity();
    e(0, 0) = -1.0;
    return e;
}
}  // namespace

const char* to_string(Causal c) {
    switch (c) {
        case Causal::timelike: return "timelike";
        case Causal::null: return "null";
        case Causal::spacelike: return "spacelike";
    }
    return "?";
}

Causal classify(const MinkVec& v, double tol) {
    if (!(tol > 0)) throw std::invalid_argument("classify: tolerance must be positive");
    double q = lorentz_inner(v, v);
    double e = 0;
    for (double x : v.c) e += x * x;
    if (std::abs(q) <= tol * (1.0 + e)) return Causal::null;
    return q < 0 ? Causal::timelike : Causal::spacelike;
}

LorentzMap::LorentzMap() : M_(Mat5::Identity()) {}

LorentzMap::LorentzMap(const Mat5& M) : M_(M) {
    if (!is_valid(M)) throw std::invalid_argument("LorentzMap: matrix is not in the identity component of O(1,4)");
}

bool LorentzMap::is_valid(const Mat5& M, double tol) {
    Mat5 r = M.transpose() * eta() * M - eta();
    if (r.cwiseAbs().maxCoeff() > tol) return false;
    if (!(M(0, 0) > 0)) return false;
    return std::abs(M.determinant() - 1.0) <= 1e-9;
}

MinkVec LorentzMap::apply(const MinkVec& v) const {
    Eigen::Matrix<double, 5, 1> x;
    for (int k = 0; k < 5; ++k) x(k) = v.c[k];
    Eigen::Matrix<double, 5, 1> y = M_ * x;
    MinkVec r;
    for (int k = 0; k < 5; ++k) r.c[k] = y(k);
    return r;
}

LorentzMap LorentzMap::operator*(const LorentzMap& o) const {
    LorentzMap r;
    r.M_ = M_ * o.M_;
    return r;
}

LorentzMap LorentzMap::inverse() const {
    LorentzMap r;
    r.M_ = eta() * M_.transpose() * eta();
    return r;
}

LorentzMap make_boost(const Vec4& dir, double rapidity) {
    double n2 = 0;
    for (double d : dir) n2 += d * d;
    if (std::abs(n2 - 1.0) > 1e-12) throw std::invalid_argument("make_boost: direction must be a unit vector");
    double ch = std::cosh(rapidity), sh = std::sinh(rapidity);
    Mat5 M = Mat5::Identity();
    M(0, 0) = ch;
    for (int i = 0; i < 4; ++i) {
        M(0, i + 1) = sh * dir[i];
        M(i + 1, 0) = sh * dir[i];
        for (int j = 0; j < 4; ++j) M(i + 1, j + 1) += (ch - 1.0) * dir[i] * dir[j];
    }
    return LorentzMap(M);
}

LorentzMap make_rotation(int i, int j, double angle) {
    if (!(1 <= i && i < j && j <= 4)) throw std::invalid_argument("make_rotation: need 1 <= i < j <= 4");
    Mat5 M = Mat5::Identity();
    double c = std::cos(angle), s = std::sin(angle);
    M(i, i) = c;
    M(j, j) = c;
    M(i, j) = -s;
    M(j, i) = s;
    return LorentzMap(M);
}

MobiusImage mobius_action(const LorentzMap& L, const Vec4& p) {
    MinkVec v = L.apply(lift(p));
    if (!(v.c[0] > 0)) throw std::domain_error("mobius_action: image left the future light cone");
    MobiusImage r;
    r.mu = v.c[0];
    for (int k = 0; k < 4; ++k) r.image[k] = v.c[k + 1] / v.c[0];
    return r;
}

}  // namespace cg
