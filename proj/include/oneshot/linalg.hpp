#pragma once

#include <Eigen/Dense>

#include <complex>

namespace oneshot {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// Operator 2-norm, from the largest eigenvalue of the smaller Gram matrix.
[[nodiscard]] double spectral_norm(const Matrix& a);

/// max |lambda_i| over the spectrum of a square matrix (dense nonsymmetric eigensolve).
[[nodiscard]] double spectral_radius(const Matrix& a);

/// Eigenvalues of a square real matrix; throws NumericalError if the QR iteration fails.
[[nodiscard]] ComplexVector eigenvalues(const Matrix& a);

/// Smallest singular value of a complex square matrix.
[[nodiscard]] double smallest_singular_value(const ComplexMatrix& a);

/// Kronecker product I_r (x) block.
[[nodiscard]] Matrix block_diagonal(const Matrix& block, int replicas);

/// a^p for p >= 0.
[[nodiscard]] Matrix matrix_power(const Matrix& a, int p);

}  // namespace oneshot
