#include "cg/fd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cg {

std::vector<double> fd_weights(double x0, const std::vector<double>& xs, int deriv) {
    const int n = static_cast<int>(xs.size());
    if (deriv >= n) throw std::invalid_argument("fd_weights: stencil too small for derivative order");
    std::vector<std::vector<double>> c(n, std::vector<double>(deriv + 1, 0.0));
    double c1 = 1.0, c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        int mn = std::min(i, deriv);
        double c2 = 1.0, c5 = c4;
        c4 = xs[i] - x0;
        for (int j = 0; j < i; ++j) {
            double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = c[i][deriv];
    return w;
}

namespace {

int period(const Line& l) { return l.closed ? l.n - 1 : l.n; }

double sample(const Line& l, int i) {
    if (l.periodic) {
        int p = period(l);
        i = ((i % p) + p) % p;
    }
    return l.at(i);
}

// first index of a width-point stencil around i
int stencil_start(const Line& l, int i, int width) {
    int s = i - width / 2;
    if (l.periodic) return s;
    if (width > l.n) throw std::invalid_argument("finite differences: line shorter than stencil");
    return std::clamp(s, 0, l.n - width);
}

}  // namespace

double line_derivative(const Line& line, int i, int deriv, int width) {
    int s = stencil_start(line, i, width);
    std::vector<double> xs(width);
    for (int k = 0; k < width; ++k) xs[k] = s + k;
    auto w = fd_weights(i, xs, deriv);
    double r = 0;
    for (int k = 0; k < width; ++k) r += w[k] * sample(line, s + k);
    return r / std::pow(line.h, deriv);
}

double line_interpolate(const Line& line, double s) {
    int i = static_cast<int>(std::floor(s));
    int st = line.periodic ? i - 1 : std::clamp(i - 1, 0, line.n - 4);
    std::vector<double> xs(4);
    for (int k = 0; k < 4; ++k) xs[k] = st + k;
    auto w = fd_weights(s, xs, 0);
    double r = 0;
    for (int k = 0; k < 4; ++k) r += w[k] * sample(line, st + k);
    return r;
}

}  // namespace cg
