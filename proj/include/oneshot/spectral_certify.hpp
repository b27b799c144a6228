#pragma once

// Block iteration matrices of the coupled (p, u, sigma) iteration and their
// spectra.

#include "oneshot/linear_forward.hpp"

#include <ostream>
#include <utility>
#include <vector>

namespace oneshot {

// T_k = I + B + ... + B^{k-1}
// U_k = sum_{l=0}^{k-1} (B^T)^{k-1-l} H^T H B^l
// X_k = U_1 + ... + U_{k-1}    (zero for k = 1)
struct KStepOperators {
    Matrix T;
    Matrix U;
    Matrix X;
    int k = 1;
};

[[nodiscard]] KStepOperators k_step_operators(const LinearInverseProblem& problem, int k);
// Same recurrences on explicit (B, H); used on the diagonal block of a
// replicated problem.
[[nodiscard]] KStepOperators k_step_operators(const Matrix& B, const Matrix& H, int k);

// Rows and columns ordered (p, u, sigma); with a = tau/(1+tau alpha), b = 1/(1+tau alpha):
//   [ (B^T)^k - a X_k M M^T   U_k   b X_k M ]
//   [ -a T_k M M^T            B^k   b T_k M ]
//   [ -a M^T                  0     b I     ]
[[nodiscard]] Matrix iteration_matrix_semi_implicit(const LinearInverseProblem& problem, double tau, double alpha,
                                                    int k);

struct CertifyOptions {
    double margin = 1e-10;
    int size_guard = 4000;
};

struct SpectralCertificate {
    double spectral_radius = 0.0;
    ComplexVector eigenvalues;
    double min_dist_to_one = 0.0;
    bool convergent = false;
    double margin = 1e-10;
};

// Throws NumericalError when 2 n_u + n_sigma exceeds the size guard or the
// eigensolver fails.
[[nodiscard]] SpectralCertificate certify(const LinearInverseProblem& problem, double tau, double alpha, int k,
                                          const CertifyOptions& options = {});

// Eigenvalues and (column) eigenvectors of the iteration matrix.
[[nodiscard]] std::pair<ComplexVector, ComplexMatrix> eigenpairs(const LinearInverseProblem& problem, double tau,
                                                                 double alpha, int k,
                                                                 const CertifyOptions& options = {});

// (1+tau alpha) lambda - 1
//   + tau lambda < M^T [lambda - (B^T)^k]^{-1} [(lambda-1) X_k + T_k^T H^T H T_k] (lambda - B^k)^{-1} M y, y >
// Throws SingularSystemError when lambda is within 1e-8 |B|^k of Spec(B^k).
[[nodiscard]] Complex eigen_equation_residual(const LinearInverseProblem& problem, Complex lambda,
                                              const ComplexVector& y, double tau, double alpha, int k);

struct CertificateRow {
    double tau = 0.0;
    double alpha = 0.0;
    int k = 1;
    SpectralCertificate certificate;
};

// tau,alpha,k,spectral_radius,min_dist_to_one,convergent
void write_certificate_csv(std::ostream& out, const std::vector<CertificateRow>& rows);
// re,im
void write_spectrum_csv(std::ostream& out, const ComplexVector& eigenvalues);

}  // namespace oneshot
