#include "oneshot/errors.hpp"
#include "oneshot/spectral_certify.hpp"
#include "oneshot/tau_bounds.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace oneshot;
using testing_support::random_problem;
using testing_support::rel_diff;

namespace {

// Term-by-term sums straight from the definitions.
KStepOperators direct_sums(const Matrix& B, const Matrix& H, int k) {
    const auto n = B.rows();
    const Matrix hth = H.transpose() * H;
    auto U = [&](int j) {
        Matrix u = Matrix::Zero(n, n);
        for (int l = 0; l < j; ++l) u += matrix_power(B.transpose(), j - 1 - l) * hth * matrix_power(B, l);
        return u;
    };
    KStepOperators ops;
    ops.k = k;
    ops.T = Matrix::Zero(n, n);
    for (int l = 0; l < k; ++l) ops.T += matrix_power(B, l);
    ops.U = U(k);
    ops.X = Matrix::Zero(n, n);
    for (int j = 1; j < k; ++j) ops.X += U(j);
    return ops;
}

}  // namespace

TEST(KStepOperators, SmallK) {
    std::mt19937_64 rng(41);
    auto prob = random_problem(rng, 5, 2, 3, 0.5);
    const Matrix B = prob.B();
    const Matrix H = prob.H();
    const Matrix hth = H.transpose() * H;
    const auto k1 = k_step_operators(prob, 1);
    EXPECT_EQ(k1.T, Matrix::Identity(5, 5));
    EXPECT_LT((k1.U - hth).norm(), 1e-15);
    EXPECT_TRUE(k1.X.isZero(0.0));
    const auto k2 = k_step_operators(prob, 2);
    EXPECT_LT((k2.T - (Matrix::Identity(5, 5) + B)).norm(), 1e-15);
    EXPECT_LT((k2.U - (B.transpose() * hth + hth * B)).norm(), 1e-14);
    EXPECT_LT((k2.X - hth).norm(), 1e-15);
}

TEST(KStepOperators, IdentitiesAgainstDirectSums) {
    std::mt19937_64 rng(42);
    for (int k = 1; k <= 12; ++k) {
        auto prob = random_problem(rng, 6 + k, 2, 4, 0.1 * (k % 9 + 1));
        const Matrix B = prob.B();
        const Matrix H = prob.H();
        const auto ops = k_step_operators(prob, k);
        const auto oracle = direct_sums(B, H, k);
        EXPECT_LT(rel_diff(ops.T, oracle.T), 1e-12);
        EXPECT_LT(rel_diff(ops.U, oracle.U), 1e-12);
        EXPECT_LT(rel_diff(ops.X, oracle.X), 1e-12);
        EXPECT_LT(rel_diff(ops.U, ops.U.transpose()), 1e-12);
        EXPECT_LT(rel_diff(ops.X, ops.X.transpose()), 1e-12);
        const Matrix lhs = ops.U * ops.T - ops.X * matrix_power(B, k) + ops.X;
        const Matrix rhs = ops.T.transpose() * H.transpose() * H * ops.T;
        EXPECT_LT(rel_diff(lhs, rhs), 1e-12) << "k=" << k;
        const auto next = k_step_operators(prob, k + 1);
        EXPECT_LT(rel_diff(next.X, ops.X + ops.U), 1e-12);
    }
}

TEST(KStepOperators, NormBoundsWhenContractive) {
    std::mt19937_64 rng(43);
    for (int i = 1; i <= 9; ++i) {
        const double b = 0.1 * i;
        auto prob = random_problem(rng, 8, 2, 5, b);
        const double nh = spectral_norm(prob.H());
        for (int k : {1, 2, 4, 7}) {
            const auto ops = k_step_operators(prob, k);
            EXPECT_LE(spectral_norm(ops.T), (1 - std::pow(b, k)) / (1 - b) * (1 + 1e-12));
            const double xb = nh * nh * (1 - k * std::pow(b, k - 1) + (k - 1) * std::pow(b, k)) / ((1 - b) * (1 - b));
            EXPECT_LE(spectral_norm(ops.X), xb * (1 + 1e-12) + 1e-15);
        }
    }
}

TEST(IterationMatrix, BZeroBlocks) {
    std::mt19937_64 rng(44);
    auto prob = random_problem(rng, 4, 2, 3, 0.0);
    const double tau = 0.7;
    const Matrix G = iteration_matrix_semi_implicit(prob, tau, 0.0, 1);
    const Matrix& M = prob.M();
    const Matrix H = prob.H();
    EXPECT_TRUE(G.block(0, 0, 4, 4).isZero(0.0));
    EXPECT_LT((G.block(0, 4, 4, 4) - H.transpose() * H).norm(), 1e-15);
    EXPECT_TRUE(G.block(0, 8, 4, 2).isZero(0.0));
    EXPECT_LT((G.block(4, 0, 4, 4) + tau * M * M.transpose()).norm(), 1e-15);
    EXPECT_TRUE(G.block(4, 4, 4, 4).isZero(0.0));
    EXPECT_LT((G.block(4, 8, 4, 2) - M).norm(), 1e-15);
    EXPECT_LT((G.block(8, 0, 2, 4) + tau * M.transpose()).norm(), 1e-15);
    EXPECT_TRUE(G.block(8, 4, 2, 4).isZero(0.0));
    EXPECT_EQ(G.block(8, 8, 2, 2), Matrix::Identity(2, 2));
}

TEST(IterationMatrix, KOneSpecialization) {
    std::mt19937_64 rng(45);
    auto prob = random_problem(rng, 5, 2, 3, 0.5);
    const double tau = 0.4, alpha = 0.2;
    const double a = tau / (1 + tau * alpha), b = 1 / (1 + tau * alpha);
    const Matrix G = iteration_matrix_semi_implicit(prob, tau, alpha, 1);
    const Matrix B = prob.B();
    const Matrix H = prob.H();
    const Matrix& M = prob.M();
    Matrix oracle = Matrix::Zero(12, 12);
    oracle.block(0, 0, 5, 5) = B.transpose();
    oracle.block(0, 5, 5, 5) = H.transpose() * H;
    oracle.block(5, 0, 5, 5) = -a * M * M.transpose();
    oracle.block(5, 5, 5, 5) = B;
    oracle.block(5, 10, 5, 2) = b * M;
    oracle.block(10, 0, 2, 5) = -a * M.transpose();
    oracle.block(10, 10, 2, 2) = b * Matrix::Identity(2, 2);
    EXPECT_LT((G - oracle).norm(), 1e-14);
}

TEST(Certify, BasicProperties) {
    std::mt19937_64 rng(46);
    auto prob = random_problem(rng, 6, 2, 4, 0.5);
    const auto cert = certify(prob, 0.1, 0.01, 2);
    EXPECT_EQ(cert.eigenvalues.size(), 14);
    EXPECT_EQ(cert.convergent, cert.spectral_radius < 1 - cert.margin);
    EXPECT_GT(cert.min_dist_to_one, 1e-8);

    // tau -> 0: the sigma block decouples with eigenvalue 1/(1 + tau alpha) ~ 1.
    const auto tiny = certify(prob, 1e-14, 0.0, 1);
    EXPECT_NEAR(tiny.spectral_radius, 1.0, 1e-10);
    EXPECT_FALSE(tiny.convergent);

    CertifyOptions small;
    small.size_guard = 10;
    EXPECT_THROW((void)certify(prob, 0.1, 0.0, 1, small), NumericalError);
}

TEST(Certify, ConvergentBelowBound) {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 10; ++trial) {
        auto prob = random_problem(rng, 6, 2, 4, 0.2 + 0.06 * trial);
        for (int k : {1, 2, 3}) {
            const auto rep = tau_bound_report(prob, 1e-3, k, CaseParameters::defaults());
            EXPECT_TRUE(certify(prob, rep.tau_max.value(), 1e-3, k).convergent);
        }
    }
}

TEST(EigenEquation, LambdaOne) {
    std::mt19937_64 rng(48);
    auto prob = random_problem(rng, 6, 3, 4, 0.5);
    ComplexVector y = testing_support::random_vector(rng, 3).cast<Complex>();
    y.normalize();
    const double tau = 0.3, alpha = 0.1;
    const Vector w = prob.reduced() * y.real();
    for (int k : {1, 2, 4}) {
        const Complex r = eigen_equation_residual(prob, 1.0, y, tau, alpha, k);
        EXPECT_NEAR(r.real(), tau * (alpha + w.squaredNorm()), 1e-12);
        EXPECT_NEAR(r.imag(), 0.0, 1e-12);
    }
}

TEST(EigenEquation, BZeroQuadratic) {
    std::mt19937_64 rng(49);
    auto prob = random_problem(rng, 5, 2, 4, 0.0);
    ComplexVector y(2);
    y << Complex(0.6, 0.1), Complex(-0.3, 0.5);
    y.normalize();
    const double tau = 0.4, alpha = 0.05;
    const Complex lambda(0.3, 1.2);
    const double hmy = (prob.H() * prob.M() * y).norm();
    const Complex expected = ((1 + tau * alpha) * lambda * lambda - lambda + tau * hmy * hmy) / lambda;
    EXPECT_LT(std::abs(eigen_equation_residual(prob, lambda, y, tau, alpha, 1) - expected), 1e-12);
    EXPECT_THROW((void)eigen_equation_residual(prob, 0.0, y, tau, alpha, 1), SingularSystemError);
}

TEST(EigenEquation, VanishesOnComputedEigenpairs) {
    std::mt19937_64 rng(50);
    int checked = 0;
    for (int trial = 0; trial < 6; ++trial) {
        auto prob = random_problem(rng, 5, 2, 3, 0.6);
        const int k = 1 + trial % 3;
        const double alpha = 0.01;
        const auto rep = tau_bound_report(prob, alpha, k, CaseParameters::defaults());
        const double tau = 50 * rep.tau_max.value();  // well into the divergent range
        const auto [vals, vecs] = eigenpairs(prob, tau, alpha, k);
        for (Eigen::Index i = 0; i < vals.size(); ++i) {
            if (std::abs(vals(i)) < 1.0) continue;
            ComplexVector y = vecs.col(i).tail(2);
            if (y.norm() < 1e-8) continue;
            y.normalize();
            EXPECT_LT(std::abs(eigen_equation_residual(prob, vals(i), y, tau, alpha, k)), 1e-8);
            ++checked;
        }
    }
    EXPECT_GT(checked, 0);
}

TEST(Certify, CsvFormat) {
    std::mt19937_64 rng(51);
    auto prob = random_problem(rng, 4, 1, 2, 0.3);
    std::ostringstream out;
    write_certificate_csv(out, {{0.5, 0.0, 1, certify(prob, 0.5, 0.0, 1)}});
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "tau,alpha,k,spectral_radius,min_dist_to_one,convergent");
    EXPECT_NE(out.str().find("\n0.5,0,1,"), std::string::npos);
}
