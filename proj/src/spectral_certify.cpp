#include "oneshot/spectral_certify.hpp"

#include "oneshot/csv.hpp"
#include "oneshot/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace oneshot {

namespace {

void check_args(double tau, double alpha, int k) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw ValidationError("tau", "must be finite and > 0");
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ValidationError("alpha", "must be finite and >= 0");
    if (k < 1) throw ValidationError("k", "must be >= 1");
}

KStepOperators full_size_operators(const LinearInverseProblem& problem, int k) {
    KStepOperators ops = k_step_operators(problem.B_block(), problem.H_block(), k);
    if (problem.replicas() > 1) {
        ops.T = block_diagonal(ops.T, problem.replicas());
        ops.U = block_diagonal(ops.U, problem.replicas());
        ops.X = block_diagonal(ops.X, problem.replicas());
    }
    return ops;
}

Matrix full_power(const LinearInverseProblem& problem, int k) {
    const Matrix bk = matrix_power(problem.B_block(), k);
    return problem.replicas() > 1 ? block_diagonal(bk, problem.replicas()) : bk;
}

}  // namespace

KStepOperators k_step_operators(const Matrix& B, const Matrix& H, int k) {
    if (k < 1) throw ValidationError("k", "must be >= 1");
    if (B.rows() != B.cols() || H.cols() != B.rows()) throw DimensionError("k_step_operators: shape mismatch");
    const auto n = B.rows();
    const Matrix hth = H.transpose() * H;

    KStepOperators ops;
    ops.k = k;
    ops.T = Matrix::Identity(n, n);
    ops.U = hth;
    ops.X = Matrix::Zero(n, n);
    Matrix bj = Matrix::Identity(n, n);  // B^j
    for (int j = 1; j < k; ++j) {
        bj = B * bj;
        ops.X += ops.U;
        ops.U = (B.transpose() * ops.U + hth * bj).eval();
        ops.T = (Matrix::Identity(n, n) + B * ops.T).eval();
    }
    return ops;
}

KStepOperators k_step_operators(const LinearInverseProblem& problem, int k) {
    return full_size_operators(problem, k);
}

Matrix iteration_matrix_semi_implicit(const LinearInverseProblem& problem, double tau, double alpha, int k) {
    check_args(tau, alpha, k);
    const KStepOperators ops = full_size_operators(problem, k);
    const Matrix bk = full_power(problem, k);
    const Matrix& M = problem.M();
    const Eigen::Index nu = problem.n_u();
    const Eigen::Index ns = problem.n_sigma();
    const double a = tau / (1.0 + tau * alpha);
    const double b = 1.0 / (1.0 + tau * alpha);

    const Matrix mmt = M * M.transpose();
    Matrix G = Matrix::Zero(2 * nu + ns, 2 * nu + ns);
    G.block(0, 0, nu, nu) = bk.transpose() - a * ops.X * mmt;
    G.block(0, nu, nu, nu) = ops.U;
    G.block(0, 2 * nu, nu, ns) = b * ops.X * M;
    G.block(nu, 0, nu, nu) = -a * ops.T * mmt;
    G.block(nu, nu, nu, nu) = bk;
    G.block(nu, 2 * nu, nu, ns) = b * ops.T * M;
    G.block(2 * nu, 0, ns, nu) = -a * M.transpose();
    G.block(2 * nu, 2 * nu, ns, ns) = b * Matrix::Identity(ns, ns);
    return G;
}

namespace {

void check_size(const LinearInverseProblem& problem, const CertifyOptions& options) {
    const long long dim = 2LL * problem.n_u() + problem.n_sigma();
    if (dim > options.size_guard) {
        throw NumericalError("iteration matrix dimension " + std::to_string(dim) + " exceeds size guard " +
                             std::to_string(options.size_guard));
    }
}

}  // namespace

SpectralCertificate certify(const LinearInverseProblem& problem, double tau, double alpha, int k,
                            const CertifyOptions& options) {
    check_size(problem, options);
    SpectralCertificate cert;
    cert.margin = options.margin;
    cert.eigenvalues = eigenvalues(iteration_matrix_semi_implicit(problem, tau, alpha, k));
    cert.spectral_radius = cert.eigenvalues.cwiseAbs().maxCoeff();
    cert.min_dist_to_one = (cert.eigenvalues.array() - Complex(1.0, 0.0)).abs().minCoeff();
    cert.convergent = cert.spectral_radius < 1.0 - options.margin;
    return cert;
}

std::pair<ComplexVector, ComplexMatrix> eigenpairs(const LinearInverseProblem& problem, double tau, double alpha,
                                                   int k, const CertifyOptions& options) {
    check_size(problem, options);
    Eigen::EigenSolver<Matrix> solver(iteration_matrix_semi_implicit(problem, tau, alpha, k), true);
    if (solver.info() != Eigen::Success) throw NumericalError("nonsymmetric eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

Complex eigen_equation_residual(const LinearInverseProblem& problem, Complex lambda, const ComplexVector& y,
                                double tau, double alpha, int k) {
    check_args(tau, alpha, k);
    if (y.size() != problem.n_sigma()) throw DimensionError("y must have length n_sigma");

    // Everything is block diagonal, so work on one block per replica.
    const Matrix bk = matrix_power(problem.B_block(), k);
    const ComplexVector spec = eigenvalues(bk);
    const double dist = (spec.array() - lambda).abs().minCoeff();
    const double scale = std::max(std::pow(spectral_norm(problem.B_block()), k), std::numeric_limits<double>::min());
    if (dist < 1e-8 * scale) {
        throw SingularSystemError("lambda is within the resolvent exclusion band around Spec(B^k)");
    }

    const KStepOperators ops = k_step_operators(problem.B_block(), problem.H_block(), k);
    const Matrix hT = problem.H_block() * ops.T;
    const auto nb = bk.rows();
    const ComplexMatrix ident = ComplexMatrix::Identity(nb, nb);
    const ComplexMatrix middle = (lambda - 1.0) * ops.X.cast<Complex>() + (hT.transpose() * hT).cast<Complex>();
    const Eigen::PartialPivLU<ComplexMatrix> right(lambda * ident - bk.cast<Complex>());
    const Eigen::PartialPivLU<ComplexMatrix> left(lambda * ident - bk.transpose().cast<Complex>());

    const ComplexVector my = problem.M().cast<Complex>() * y;
    const Eigen::Map<const ComplexMatrix> segments(my.data(), nb, problem.replicas());
    const ComplexMatrix w = left.solve(middle * right.solve(segments));
    const Eigen::Map<const ComplexVector> w_flat(w.data(), w.size());
    const ComplexVector v = problem.M().transpose().cast<Complex>() * w_flat;

    // <v, y> = y^H v
    const Complex inner = y.dot(v);
    return (1.0 + tau * alpha) * lambda - 1.0 + tau * lambda * inner;
}

void write_certificate_csv(std::ostream& out, const std::vector<CertificateRow>& rows) {
    out << "tau,alpha,k,spectral_radius,min_dist_to_one,convergent\n";
    for (const auto& r : rows) {
        out << csv::shortest(r.tau) << ',' << csv::shortest(r.alpha) << ',' << r.k << ','
            << csv::shortest(r.certificate.spectral_radius) << ',' << csv::shortest(r.certificate.min_dist_to_one)
            << ',' << (r.certificate.convergent ? "true" : "false") << '\n';
    }
}

void write_spectrum_csv(std::ostream& out, const ComplexVector& eigenvalues) {
    out << "re,im\n";
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        out << csv::shortest(eigenvalues(i).real()) << ',' << csv::shortest(eigenvalues(i).imag()) << '\n';
    }
}

}  // namespace oneshot
