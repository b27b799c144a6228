#include "oneshot/bessel.hpp"

#include "oneshot/errors.hpp"

#include <cmath>
#include <numbers>

namespace oneshot {

namespace {

constexpr double kSeriesLimit = 8.0;

}  // namespace

double bessel_j0_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 80; ++k) {
        term *= -q / (static_cast<double>(k) * k);
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum) && k > 2) break;
    }
    return sum;
}

double bessel_y0(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw ValidationError("x", "bessel_y0 needs a finite x > 0");
    using std::numbers::pi;

    if (x <= kSeriesLimit) {
        // Y0 = (2/pi)(ln(x/2) + gamma) J0 + (2/pi) sum_{k>=1} (-1)^{k+1} H_k (x^2/4)^k / (k!)^2
        const double q = 0.25 * x * x;
        double term = 1.0;  // (-1)^k (x^2/4)^k / (k!)^2
        double harmonic = 0.0;
        double tail = 0.0;
        for (int k = 1; k < 80; ++k) {
            term *= -q / (static_cast<double>(k) * k);
            harmonic += 1.0 / k;
            const double t = -term * harmonic;
            tail += t;
            if (std::abs(t) < 1e-17 * (1.0 + std::abs(tail)) && k > 2) break;
        }
        return 2.0 / pi * ((std::log(0.5 * x) + std::numbers::egamma) * bessel_j0_series(x) + tail);
    }

    // Hankel expansion Y0 = sqrt(2/(pi x)) (P sin chi + Q cos chi), chi = x - pi/4,
    // truncated just before its smallest term.
    const double z = 8.0 * x;
    double p = 1.0;
    double q = 0.0;
    double a = 1.0;  // |a_m| = ((2m-1)!!)^2 / (m! (8x)^m)
    double prev = 1.0;
    for (int m = 1; m < 200; ++m) {
        a *= (2.0 * m - 1.0) * (2.0 * m - 1.0) / (m * z);
        if (a >= prev) break;
        prev = a;
        // m odd feeds Q, m even feeds P, with signs alternating in pairs.
        switch (m % 4) {
            case 1: q -= a; break;
            case 2: p -= a; break;
            case 3: q += a; break;
            case 0: p += a; break;
        }
    }
    const double chi = x - 0.25 * pi;
    return std::sqrt(2.0 / (pi * x)) * (p * std::sin(chi) + q * std::cos(chi));
}

}  // namespace oneshot
