#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace cg {

// Truncated multivariate Taylor polynomial in NV variables, total degree <= order.
// Coefficients are stored graded by degree; the enumeration inside a degree does
// not depend on the order, so truncation is a resize.
template <int NV>
class Jet {
public:
    using Index = std::array<int, NV>;
    static constexpr int kMaxOrder = NV <= 2 ? 12 : (NV <= 4 ? 8 : 4);

    Jet() : Jet(0, 0.0) {}
    explicit Jet(int order, double value = 0.0) : order_(order), c_(layout(order).size, 0.0) {
        c_[0] = value;
    }

    static Jet variable(int order, int var, double base) {
        Jet j(order, base);
        if (order >= 1) j.c_[1 + var] = 1.0;
        return j;
    }

    int order() const { return order_; }
    std::size_t size() const { return c_.size(); }
    double value() const { return c_[0]; }
    double& operator[](std::size_t k) { return c_[k]; }
    double operator[](std::size_t k) const { return c_[k]; }

    double coeff(const Index& a) const {
        int d = degree(a);
        if (d > order_) throw std::out_of_range("jet: index above order");
        return c_[layout(order_).find(a)];
    }
    void set_coeff(const Index& a, double v) { c_[layout(order_).find(a)] = v; }

    // Partial derivative value at the base point.
    double deriv(const Index& a) const {
        double f = 1.0;
        for (int v = 0; v < NV; ++v)
            for (int k = 2; k <= a[v]; ++k) f *= k;
        return coeff(a) * f;
    }
    double d(int var) const {
        Index a{};
        a[var] = 1;
        return deriv(a);
    }
    double d(int v1, int v2) const {
        Index a{};
        a[v1] += 1;
        a[v2] += 1;
        return deriv(a);
    }

    Jet diff(int var) const {
        if (order_ == 0) throw std::domain_error("jet: cannot differentiate order-0 jet");
        const auto& L = layout(order_);
        Jet r(order_ - 1);
        for (std::size_t k = 0; k < r.c_.size(); ++k) {
            std::size_t src = L.up[var][k];
            r.c_[k] = c_[src] * (L.idx[k][var] + 1);
        }
        return r;
    }

    Jet truncate(int order) const {
        if (order >= order_) return *this;
        Jet r(order);
        for (std::size_t k = 0; k < r.c_.size(); ++k) r.c_[k] = c_[k];
        return r;
    }

    // Jet with the constant term removed.
    Jet increment() const {
        Jet r = *this;
        r.c_[0] = 0.0;
        return r;
    }

    // Evaluate the truncated polynomial at an offset from the base point.
    double eval(const std::array<double, NV>& h) const {
        const auto& L = layout(order_);
        double s = 0.0;
        for (std::size_t k = 0; k < c_.size(); ++k) {
            double t = c_[k];
            for (int v = 0; v < NV; ++v)
                for (int p = 0; p < L.idx[k][v]; ++p) t *= h[v];
            s += t;
        }
        return s;
    }

    Jet& operator+=(const Jet& o) { return axpy(1.0, o); }
    Jet& operator-=(const Jet& o) { return axpy(-1.0, o); }
    Jet& operator+=(double s) { c_[0] += s; return *this; }
    Jet& operator-=(double s) { c_[0] -= s; return *this; }
    Jet& operator*=(double s) {
        for (auto& x : c_) x *= s;
        return *this;
    }
    Jet& operator/=(double s) { return *this *= 1.0 / s; }
    Jet& operator*=(const Jet& o) { return *this = *this * o; }
    Jet& operator/=(const Jet& o) { return *this = *this / o; }

    friend Jet operator*(const Jet& a, const Jet& b) {
        int J = std::min(a.order_, b.order_);
        Jet r(J);
        const auto& L = layout(J);
        const double* pa = a.c_.data();
        const double* pb = b.c_.data();
        double* pr = r.c_.data();
        for (const auto& t : L.mul) pr[t.k] += pa[t.i] * pb[t.j];
        return r;
    }

    // f(a) where f is given by its derivatives at a.value(): d[k] = f^(k)(a0).
    static Jet compose(const Jet& a, const std::vector<double>& d) {
        int J = a.order_;
        Jet h = a.increment();
        std::vector<double> c(J + 1);
        double fact = 1.0;
        for (int k = 0; k <= J; ++k) {
            if (k > 0) fact *= k;
            c[k] = d[k] / fact;
        }
        Jet r(J, c[J]);
        for (int k = J - 1; k >= 0; --k) {
            r = r * h;
            r.c_[0] += c[k];
        }
        return r;
    }

    static int degree(const Index& a) {
        int s = 0;
        for (int v : a) s += v;
        return s;
    }

private:
    struct Triple {
        std::size_t i, j, k;
    };
    struct Layout {
        int order = 0;
        std::size_t size = 0;
        std::vector<Index> idx;
        std::vector<Triple> mul;
        std::array<std::vector<std::size_t>, NV> up;  // index of a + e_var for each a of degree < order
        std::vector<std::pair<std::size_t, std::size_t>> keys;
        static std::size_t key(const Index& a) {
            std::size_t h = 0;
            for (int v : a) h = h * 32 + static_cast<std::size_t>(v);
            return h;
        }
        std::size_t find(const Index& a) const {
            auto it = std::lower_bound(keys.begin(), keys.end(), std::make_pair(key(a), std::size_t{0}));
            if (it == keys.end() || it->first != key(a)) throw std::out_of_range("jet: multi-index not found");
            return it->second;
        }
    };

    static void enumerate(int deg, int var, Index& cur, std::vector<Index>& out) {
        if (var == NV - 1) {
            cur[var] = deg;
            out.push_back(cur);
            return;
        }
        for (int a = deg; a >= 0; --a) {
            cur[var] = a;
            enumerate(deg - a, var + 1, cur, out);
        }
    }

    static std::unique_ptr<Layout> build(int order) {
        auto L = std::make_unique<Layout>();
        L->order = order;
        for (int d = 0; d <= order; ++d) {
            Index cur{};
            enumerate(d, 0, cur, L->idx);
        }
        L->size = L->idx.size();
        for (std::size_t k = 0; k < L->size; ++k) L->keys.emplace_back(Layout::key(L->idx[k]), k);
        std::sort(L->keys.begin(), L->keys.end());
        auto lookup = [&](const Index& a) { return L->find(a); };
        for (std::size_t i = 0; i < L->size; ++i) {
            int di = degree(L->idx[i]);
            for (std::size_t j = 0; j < L->size; ++j) {
                if (di + degree(L->idx[j]) > order) continue;
                Index s;
                for (int v = 0; v < NV; ++v) s[v] = L->idx[i][v] + L->idx[j][v];
                L->mul.push_back({i, j, lookup(s)});
            }
        }
        if (order > 0) {
            for (int v = 0; v < NV; ++v) {
                for (std::size_t k = 0; k < L->size; ++k) {
                    if (degree(L->idx[k]) >= order) break;
                    Index s = L->idx[k];
                    s[v] += 1;
                    L->up[v].push_back(lookup(s));
                }
            }
        }
        return L;
    }

    static const Layout& layout(int order) {
        if (order < 0 || order > kMaxOrder) throw std::out_of_range("jet: order out of range");
        static std::array<std::unique_ptr<Layout>, kMaxOrder + 1> cache;
        static std::array<std::once_flag, kMaxOrder + 1> flags;
        std::call_once(flags[order], [order] { cache[order] = build(order); });
        return *cache[order];
    }

    Jet& axpy(double s, const Jet& o) {
        if (o.order_ < order_) *this = truncate(o.order_);
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += s * o.c_[k];
        return *this;
    }

    int order_;
    std::vector<double> c_;
};

template <int NV> Jet<NV> operator+(Jet<NV> a, const Jet<NV>& b) { return a += b; }
template <int NV> Jet<NV> operator-(Jet<NV> a, const Jet<NV>& b) { return a -= b; }
template <int NV> Jet<NV> operator+(Jet<NV> a, double s) { return a += s; }
template <int NV> Jet<NV> operator+(double s, Jet<NV> a) { return a += s; }
template <int NV> Jet<NV> operator-(Jet<NV> a, double s) { return a -= s; }
template <int NV> Jet<NV> operator-(double s, const Jet<NV>& a) { return Jet<NV>(a.order(), s) - a; }
template <int NV> Jet<NV> operator-(Jet<NV> a) { return a *= -1.0; }
template <int NV> Jet<NV> operator*(Jet<NV> a, double s) { return a *= s; }
template <int NV> Jet<NV> operator*(double s, Jet<NV> a) { return a *= s; }
template <int NV> Jet<NV> operator/(Jet<NV> a, double s) { return a /= s; }

template <int NV>
Jet<NV> recip(const Jet<NV>& a) {
    double x = a.value();
    if (x == 0.0) throw std::domain_error("jet: reciprocal of zero");
    std::vector<double> d(a.order() + 1);
    double p = 1.0 / x;
    for (int k = 0; k <= a.order(); ++k) {
        d[k] = p;
        p *= -(k + 1) / x;
    }
    return Jet<NV>::compose(a, d);
}

template <int NV> Jet<NV> operator/(const Jet<NV>& a, const Jet<NV>& b) { return a * recip(b); }
template <int NV> Jet<NV> operator/(double s, const Jet<NV>& b) { return recip(b) * s; }

template <int NV>
Jet<NV> pow(const Jet<NV>& a, double e) {
    double x = a.value();
    if (x <= 0.0 && e != std::floor(e)) throw std::domain_error("jet: fractional power of non-positive value");
    std::vector<double> d(a.order() + 1);
    double coef = 1.0;
    for (int k = 0; k <= a.order(); ++k) {
        d[k] = coef * std::pow(x, e - k);
        coef *= (e - k);
    }
    return Jet<NV>::compose(a, d);
}

template <int NV>
Jet<NV> powi(const Jet<NV>& a, int k) {
    if (k < 0) return recip(powi(a, -k));
    Jet<NV> r(a.order(), 1.0);
    for (int i = 0; i < k; ++i) r = r * a;
    return r;
}

template <int NV>
Jet<NV> sqrt(const Jet<NV>& a) {
    if (a.value() <= 0.0) throw std::domain_error("jet: sqrt of non-positive value");
    return pow(a, 0.5);
}

template <int NV>
Jet<NV> exp(const Jet<NV>& a) {
    std::vector<double> d(a.order() + 1, std::exp(a.value()));
    return Jet<NV>::compose(a, d);
}

template <int NV>
Jet<NV> log(const Jet<NV>& a) {
    double x = a.value();
    if (x <= 0.0) throw std::domain_error("jet: log of non-positive value");
    std::vector<double> d(a.order() + 1);
    d[0] = std::log(x);
    double p = 1.0 / x;
    for (int k = 1; k <= a.order(); ++k) {
        d[k] = p;
        p *= -k / x;
    }
    return Jet<NV>::compose(a, d);
}

template <int NV>
Jet<NV> sin(const Jet<NV>& a) {
    double s = std::sin(a.value()), c = std::cos(a.value());
    std::vector<double> d(a.order() + 1);
    const double cyc[4] = {s, c, -s, -c};
    for (int k = 0; k <= a.order(); ++k) d[k] = cyc[k % 4];
    return Jet<NV>::compose(a, d);
}

template <int NV>
Jet<NV> cos(const Jet<NV>& a) {
    double s = std::sin(a.value()), c = std::cos(a.value());
    std::vector<double> d(a.order() + 1);
    const double cyc[4] = {c, -s, -c, s};
    for (int k = 0; k <= a.order(); ++k) d[k] = cyc[k % 4];
    return Jet<NV>::compose(a, d);
}

using Jet2 = Jet<2>;
using Jet4 = Jet<4>;

// Lift a jet in (u1,u2) into a jet in (a,r,u1,u2) that does not depend on a,r.
inline Jet4 lift_u(const Jet2& j, int order) {
    Jet4 r(order);
    int J = std::min(order, j.order());
    for (int d = 0; d <= J; ++d)
        for (int a = 0; a <= d; ++a) r.set_coeff({0, 0, a, d - a}, j.coeff({a, d - a}));
    return r;
}

// Scalar helpers so formulas can be written once for double and jets.
inline double value_of(double x) { return x; }
template <int NV> double value_of(const Jet<NV>& j) { return j.value(); }

}  // namespace cg
