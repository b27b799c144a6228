#include "oneshot/linalg.hpp"

#include "oneshot/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace oneshot {

double spectral_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    const Matrix gram = a.rows() <= a.cols() ? Matrix(a * a.transpose()) : Matrix(a.transpose() * a);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed in spectral_norm");
    return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

ComplexVector eigenvalues(const Matrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("eigenvalues: matrix is not square");
    if (a.size() == 0) return {};
    Eigen::EigenSolver<Matrix> solver(a, false);
    if (solver.info() != Eigen::Success) throw NumericalError("nonsymmetric eigensolver did not converge");
    return solver.eigenvalues();
}

double spectral_radius(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    return eigenvalues(a).cwiseAbs().maxCoeff();
}

double smallest_singular_value(const ComplexMatrix& a) {
    // The Gram matrix route is several times faster than a complex Jacobi SVD;
    // fall back to the SVD when squaring the condition number would cost accuracy.
    if (a.rows() == a.cols() && a.rows() > 0) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.adjoint() * a, Eigen::EigenvaluesOnly);
        if (solver.info() == Eigen::Success) {
            const auto& ev = solver.eigenvalues();
            if (ev(0) > 1e-8 * ev(ev.size() - 1)) return std::sqrt(ev(0));
        }
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(a);
    return svd.singularValues().minCoeff();
}

Matrix block_diagonal(const Matrix& block, int replicas) {
    Matrix out = Matrix::Zero(block.rows() * replicas, block.cols() * replicas);
    for (int r = 0; r < replicas; ++r) {
        out.block(r * block.rows(), r * block.cols(), block.rows(), block.cols()) = block;
    }
    return out;
}

Matrix matrix_power(const Matrix& a, int p) {
    Matrix result = Matrix::Identity(a.rows(), a.cols());
    for (int i = 0; i < p; ++i) result = result * a;
    return result;
}

}  // namespace oneshot
