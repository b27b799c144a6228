#pragma once

// Discretized linear inverse problem
//
//     state:    u = B u + M sigma + F
//     adjoint:  p = B^T p + H^T (H u - g)
//     cost:     J(sigma) = 1/2 |H u(sigma) - g|^2 + alpha/2 |sigma|^2
//
// with rho(B) < 1 and the reduced operator A = H (I - B)^{-1} M injective.
//
// B and H may be stored as a single block replicated along the diagonal
// (B = I_r (x) B_block, H = I_r (x) H_block). This is how independent
// right-hand sides sharing one parameter vector (several sources) are stacked
// without materializing an r-times larger dense operator; r = 1 is the plain
// dense case.

#include "oneshot/linalg.hpp"

#include <memory>
#include <optional>
#include <utility>

namespace oneshot {

struct ProblemOptions {
    // Injectivity test: sigma_min(A) > rank_tol * sigma_max(A).
    double rank_tol = 1e-10;
    // rho(B_block) when the caller knows it more cheaply than a dense
    // nonsymmetric eigensolve (e.g. B similar to a symmetric matrix). Trusted.
    std::optional<double> spectral_radius;
};

class LinearInverseProblem {
public:
    LinearInverseProblem(Matrix B, Matrix M, Matrix H, Vector F, ProblemOptions options = {});

    // B = I_r (x) b_block, H = I_r (x) h_block; M and F are given at full size.
    static LinearInverseProblem block_replicated(Matrix b_block, Matrix M, Matrix h_block, Vector F,
                                                 int replicas, ProblemOptions options = {});

    [[nodiscard]] int n_u() const noexcept { return data_->n_u; }
    [[nodiscard]] int n_sigma() const noexcept { return static_cast<int>(data_->M.cols()); }
    [[nodiscard]] int n_g() const noexcept { return data_->n_g; }
    [[nodiscard]] int replicas() const noexcept { return data_->replicas; }
    [[nodiscard]] int block_size() const noexcept { return static_cast<int>(data_->B_block.rows()); }

    [[nodiscard]] const Matrix& B_block() const noexcept { return data_->B_block; }
    [[nodiscard]] const Matrix& H_block() const noexcept { return data_->H_block; }
    [[nodiscard]] const Matrix& M() const noexcept { return data_->M; }
    [[nodiscard]] const Vector& F() const noexcept { return data_->F; }

    // Full-size dense operators (materialized when replicas > 1).
    [[nodiscard]] Matrix B() const;
    [[nodiscard]] Matrix H() const;

    [[nodiscard]] Vector apply_B(const Vector& x) const;
    [[nodiscard]] Vector apply_Bt(const Vector& x) const;
    [[nodiscard]] Vector apply_H(const Vector& x) const;
    [[nodiscard]] Vector apply_Ht(const Vector& y) const;

    // (I - B)^{-1} x and (I - B^T)^{-1} x via the cached LU factorization.
    [[nodiscard]] Vector solve_I_minus_B(const Vector& x) const;
    [[nodiscard]] Vector solve_I_minus_Bt(const Vector& x) const;

    // Quantities computed once at construction.
    [[nodiscard]] double spectral_radius_B() const noexcept { return data_->rho_B; }
    [[nodiscard]] const Matrix& reduced() const noexcept { return data_->A; }
    // H (I - B)^{-1} F
    [[nodiscard]] const Vector& data_offset() const noexcept { return data_->offset; }
    [[nodiscard]] const Vector& reduced_singular_values() const noexcept { return data_->singular_values; }

private:
    struct Data {
        Matrix B_block;
        Matrix H_block;
        Matrix M;
        Vector F;
        int replicas = 1;
        int n_u = 0;
        int n_g = 0;
        double rho_B = 0.0;
        Eigen::PartialPivLU<Matrix> lu;
        Matrix A;
        Vector offset;
        Vector singular_values;
    };

    LinearInverseProblem(Matrix b_block, Matrix M, Matrix h_block, Vector F, int replicas,
                         ProblemOptions options);

    std::shared_ptr<const Data> data_;
};

// Measurements and regularization weight on top of a problem.
class Objective {
public:
    Objective(LinearInverseProblem problem, Vector g, double alpha);

    [[nodiscard]] const LinearInverseProblem& problem() const noexcept { return problem_; }
    [[nodiscard]] const Vector& g() const noexcept { return g_; }
    [[nodiscard]] double alpha() const noexcept { return alpha_; }

private:
    LinearInverseProblem problem_;
    Vector g_;
    double alpha_;
};

struct IterationState {
    Vector sigma;
    Vector u;
    Vector p;
};

// u0 = 0, p0 = 0 unless overridden.
[[nodiscard]] IterationState initial_state(const LinearInverseProblem& problem, Vector sigma0);

[[nodiscard]] Vector solve_state_exact(const LinearInverseProblem& problem, const Vector& sigma);
[[nodiscard]] Vector solve_adjoint_exact(const LinearInverseProblem& problem, const Vector& u,
                                         const Vector& g);

// k inner sweeps with sigma_new held fixed, starting from (state.u, state.p).
// The adjoint update uses the pre-update state u_l.
[[nodiscard]] std::pair<Vector, Vector> fixed_point_sweep(const LinearInverseProblem& problem,
                                                          const IterationState& state,
                                                          const Vector& sigma_new, const Vector& g,
                                                          int k);

[[nodiscard]] double cost(const Objective& objective, const Vector& sigma);
[[nodiscard]] Vector gradient(const Objective& objective, const Vector& sigma);

// A = H (I - B)^{-1} M, n_g x n_sigma.
[[nodiscard]] Matrix reduced_operator(const LinearInverseProblem& problem);

// argmin J, from the normal equations (A^T A + alpha I) sigma = A^T (g - H (I-B)^{-1} F),
// solved as a stacked least-squares problem.
[[nodiscard]] Vector regularized_solution(const Objective& objective);

}  // namespace oneshot
