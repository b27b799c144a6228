#pragma once

namespace oneshot {

// Bessel function of the second kind, order zero, for x > 0. Absolute error
// below 1e-8 on (0, 100]. Throws ValidationError for x <= 0.
[[nodiscard]] double bessel_y0(double x);

// Order-zero Bessel function of the first kind (power series, x <= 8 only);
// exposed for the Y0 tests.
[[nodiscard]] double bessel_j0_series(double x);

}  // namespace oneshot
