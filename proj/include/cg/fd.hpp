#pragma once

#include <vector>

namespace cg {

// Finite-difference weights for the derivative of order `deriv` at x0 from samples at xs (Fornberg).
std::vector<double> fd_weights(double x0, const std::vector<double>& xs, int deriv);

// Derivative of a sampled line f[0..n-1] with spacing h at index i, using a stencil of `width` points.
// Periodic lines wrap with period n - 1 when the last sample repeats the first (closed = true) or n otherwise;
// open lines shift the stencil inward at the ends.
struct Line {
    const double* f;
    int n;
    int stride;
    double h;
    bool periodic;
    bool closed;
    double at(int i) const { return f[static_cast<long>(i) * stride]; }
};
double line_derivative(const Line& line, int i, int deriv, int width);

// Cubic (4-point) interpolation on a line at fractional index s.
double line_interpolate(const Line& line, double s);

}  // namespace cg
