#pragma once

#include <vector>

namespace stuckelberg {

/// Accuracy envelope of the Bessel evaluator: |n| <= 200, |x| <= 1000,
/// absolute error <= 1e-12.
inline constexpr int kBesselMaxOrder = 200;
inline constexpr double kBesselMaxArgument = 1000.0;

/// J_n(x), Bessel function of the first kind of integer order.
double bessel_jn(int n, double x);

/// J_0(x) .. J_max_order(x) from a single normalized downward recurrence.
std::vector<double> bessel_jn_sequence(int max_order, double x);

}  // namespace stuckelberg
