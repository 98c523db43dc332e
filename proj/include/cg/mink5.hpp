#pragma once

#include <array>
#include <Eigen/Dense>

namespace cg {

// Vector in R^{1,4}: component 0 is time, 1..4 are space.
template <class T>
struct MinkT {
    std::array<T, 5> c;

    T& operator[](int k) { return c[k]; }
    const T& operator[](int k) const { return c[k]; }

    MinkT& operator+=(const MinkT& o) {
        for (int k = 0; k < 5; ++k) c[k] += o.c[k];
        return *this;
    }
    MinkT& operator-=(const MinkT& o) {
        for (int k = 0; k < 5; ++k) c[k] -= o.c[k];
        return *this;
    }
    friend MinkT operator+(MinkT a, const MinkT& b) { return a += b; }
    friend MinkT operator-(MinkT a, const MinkT& b) { return a -= b; }
    friend MinkT operator-(MinkT a) {
        for (auto& x : a.c) x = -x;
        return a;
    }
    template <class S>
    friend MinkT operator*(const S& s, MinkT a) {
        for (auto& x : a.c) x = x * s;
        return a;
    }
};

template <class T>
T lorentz_inner(const MinkT<T>& u, const MinkT<T>& v) {
    T s = u.c[1] * v.c[1];
    for (int k = 2; k < 5; ++k) s += u.c[k] * v.c[k];
    return s - u.c[0] * v.c[0];
}

using MinkVec = MinkT<double>;
using Vec4 = std::array<double, 4>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

inline MinkVec mink(double t, double x1, double x2, double x3, double x4) { return MinkVec{{t, x1, x2, x3, x4}}; }
inline MinkVec lift(const Vec4& p) { return MinkVec{{1.0, p[0], p[1], p[2], p[3]}}; }

enum class Causal { timelike, null, spacelike };
const char* to_string(Causal c);

// Null when |<v,v>| <= tol * (1 + |v|^2_euclid).
Causal classify(const MinkVec& v, double tol = 1e-10);

class LorentzMap {
public:
    LorentzMap();  // identity
    // Validates M^T eta M = eta (1e-12 per entry), M00 > 0, det M = +1.
    explicit LorentzMap(const Mat5& M);

    const Mat5& matrix() const { return M_; }
    MinkVec apply(const MinkVec& v) const;
    template <class T>
    MinkT<T> apply(const MinkT<T>& v) const {
        MinkT<T> r;
        for (int i = 0; i < 5; ++i) {
            r.c[i] = v.c[0] * M_(i, 0);
            for (int j = 1; j < 5; ++j) r.c[i] += v.c[j] * M_(i, j);
        }
        return r;
    }
    LorentzMap operator*(const LorentzMap& o) const;
    LorentzMap inverse() const;

    static bool is_valid(const Mat5& M, double tol = 1e-12);

private:
    Mat5 M_;
};

// Boost along a unit spatial direction; rotation in the (i,j) spatial plane, 1 <= i < j <= 4.
LorentzMap make_boost(const Vec4& dir, double rapidity);
LorentzMap make_rotation(int i, int j, double angle);

struct MobiusImage {
    Vec4 image;
    double mu;
};
// L (1,p) = mu (1,image).
MobiusImage mobius_action(const LorentzMap& L, const Vec4& p);

}  // namespace cg
