#pragma once

namespace contactlab {

// Bessel functions of the first kind, orders 0 and 1, for real arguments.
// Absolute error is below 1e-12 on [0, 50].
double bessel_j0(double x);
double bessel_j1(double x);

}  // namespace contactlab
