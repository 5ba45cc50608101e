#include "stuckelberg/bessel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace stuckelberg {

namespace {

void check_envelope(int n, double x)
{
    if (std::abs(n) > kBesselMaxOrder || !(std::abs(x) <= kBesselMaxArgument)) {
        throw std::domain_error("bessel_jn: (n=" + std::to_string(n) + ", x=" + std::to_string(x) +
                                ") outside |n| <= 200, |x| <= 1000");
    }
}

// Miller's algorithm on |x| > 0: recur J_{k-1} = (2k/x) J_k - J_{k+1} down from
// an order where J is negligible and normalize with J_0 + 2 sum J_2k = 1.
// The start order sits past the Airy turning region x + O(x^(1/3)).
std::vector<double> miller(int max_order, double ax)
{
    constexpr double kBig = 1e250;
    const double margin = 20.0 + 20.0 * std::cbrt(ax);
    int start = static_cast<int>(std::ceil(std::max<double>(max_order, ax) + margin));
    start += start % 2;

    std::vector<double> j(static_cast<std::size_t>(max_order) + 1, 0.0);
    double above = 0.0;  // J_{k+1}
    double current = 1.0;  // J_k, arbitrary scale
    double norm = 2.0 * current;  // start is even
    for (int k = start; k > 0; --k) {
        const double below = 2.0 * k / ax * current - above;
        above = current;
        current = below;  // now J_{k-1}
        const int order = k - 1;
        if (order <= max_order) j[static_cast<std::size_t>(order)] = current;
        if (order > 0 && order % 2 == 0) norm += 2.0 * current;
        if (std::abs(current) > kBig) {
            current /= kBig;
            above /= kBig;
            norm /= kBig;
            for (int m = order; m <= max_order; ++m) j[static_cast<std::size_t>(m)] /= kBig;
        }
    }
    norm += current;  // J_0
    for (auto& v : j) v /= norm;
    return j;
}

}  // namespace

std::vector<double> bessel_jn_sequence(int max_order, double x)
{
    if (max_order < 0) throw std::invalid_argument("bessel_jn_sequence: negative order");
    check_envelope(max_order, x);
    std::vector<double> j(static_cast<std::size_t>(max_order) + 1, 0.0);
    if (x == 0.0) {
        j[0] = 1.0;
        return j;
    }
    j = miller(max_order, std::abs(x));
    if (x < 0.0) {
        for (std::size_t n = 1; n < j.size(); n += 2) j[n] = -j[n];
    }
    return j;
}

double bessel_jn(int n, double x)
{
    check_envelope(n, x);
    const int m = std::abs(n);
    const double value = bessel_jn_sequence(m, x)[static_cast<std::size_t>(m)];
    return (n < 0 && m % 2 == 1) ? -value : value;
}

}  // namespace stuckelberg
