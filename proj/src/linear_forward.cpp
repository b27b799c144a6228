#include "oneshot/linear_forward.hpp"

#include "oneshot/errors.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <string>

namespace oneshot {

namespace {

bool all_finite(const Matrix& m) { return m.allFinite(); }

// Applies I_r (x) block to x, where x stacks r segments of length block.cols().
template <typename Block>
Vector apply_replicated(const Block& block, int replicas, const Vector& x) {
    const Eigen::Map<const Matrix> segments(x.data(), block.cols(), replicas);
    Matrix out = block * segments;
    return Eigen::Map<const Vector>(out.data(), out.size());
}

Vector solve_replicated(const Eigen::PartialPivLU<Matrix>& lu, bool transpose, int replicas,
                        const Vector& x) {
    const Eigen::Map<const Matrix> segments(x.data(), x.size() / replicas, replicas);
    Matrix out = transpose ? Matrix(lu.transpose().solve(segments)) : Matrix(lu.solve(segments));
    return Eigen::Map<const Vector>(out.data(), out.size());
}

void require_size(const char* what, Eigen::Index got, Eigen::Index want) {
    if (got != want) {
        throw DimensionError(std::string(what) + ": expected length " + std::to_string(want) +
                             ", got " + std::to_string(got));
    }
}

}  // namespace

LinearInverseProblem::LinearInverseProblem(Matrix B, Matrix M, Matrix H, Vector F, ProblemOptions options)
    : LinearInverseProblem(std::move(B), std::move(M), std::move(H), std::move(F), 1, options) {}

LinearInverseProblem LinearInverseProblem::block_replicated(Matrix b_block, Matrix M, Matrix h_block,
                                                            Vector F, int replicas,
                                                            ProblemOptions options) {
    return LinearInverseProblem(std::move(b_block), std::move(M), std::move(h_block), std::move(F),
                                replicas, options);
}

LinearInverseProblem::LinearInverseProblem(Matrix b_block, Matrix M, Matrix h_block, Vector F,
                                           int replicas, ProblemOptions options) {
    if (replicas < 1) throw DimensionError("replicas must be >= 1");
    if (b_block.rows() == 0 || b_block.rows() != b_block.cols()) {
        throw DimensionError("B must be square and non-empty");
    }
    const auto nb = b_block.rows();
    const auto n_u = nb * replicas;
    if (M.rows() != n_u || M.cols() == 0) {
        throw DimensionError("M must have n_u = " + std::to_string(n_u) + " rows and >= 1 column");
    }
    if (h_block.cols() != nb || h_block.rows() == 0) throw DimensionError("H must have n_u columns");
    require_size("F", F.size(), n_u);
    if (!all_finite(b_block) || !all_finite(M) || !all_finite(h_block) || !F.allFinite()) {
        throw InvariantError("problem matrices contain non-finite entries");
    }

    auto data = std::make_shared<Data>();
    data->replicas = replicas;
    data->n_u = static_cast<int>(n_u);
    data->n_g = static_cast<int>(h_block.rows() * replicas);

    data->rho_B = options.spectral_radius ? *options.spectral_radius : spectral_radius(b_block);
    if (!(data->rho_B < 1.0)) {
        throw InvariantError("spectral radius of B is " + std::to_string(data->rho_B) + " (must be < 1)");
    }

    data->lu.compute(Matrix::Identity(nb, nb) - b_block);
    if (data->lu.rcond() < std::numeric_limits<double>::epsilon()) {
        throw SingularSystemError("I - B is numerically singular");
    }

    data->B_block = std::move(b_block);
    data->H_block = std::move(h_block);
    data->M = std::move(M);
    data->F = std::move(F);

    // Reduced operator A = H (I-B)^{-1} M, column by column through the replicated solve.
    Matrix A(data->n_g, data->M.cols());
    for (Eigen::Index j = 0; j < data->M.cols(); ++j) {
        const Vector w = solve_replicated(data->lu, false, replicas, data->M.col(j));
        A.col(j) = apply_replicated(data->H_block, replicas, w);
    }
    data->offset = apply_replicated(data->H_block, replicas, solve_replicated(data->lu, false, replicas, data->F));

    Eigen::JacobiSVD<Matrix> svd(A);
    data->singular_values = svd.singularValues();
    const double smax = data->singular_values.maxCoeff();
    const double smin = A.cols() > A.rows() ? 0.0 : data->singular_values.minCoeff();
    if (!(smax > 0.0) || !(smin > options.rank_tol * smax)) {
        throw InvariantError("H (I - B)^{-1} M is not injective (sigma_min / sigma_max = " +
                             std::to_string(smax > 0.0 ? smin / smax : 0.0) + ")");
    }
    data->A = std::move(A);
    data_ = std::move(data);
}

Matrix LinearInverseProblem::B() const {
    return replicas() == 1 ? data_->B_block : block_diagonal(data_->B_block, replicas());
}

Matrix LinearInverseProblem::H() const {
    return replicas() == 1 ? data_->H_block : block_diagonal(data_->H_block, replicas());
}

Vector LinearInverseProblem::apply_B(const Vector& x) const {
    require_size("apply_B", x.size(), n_u());
    return apply_replicated(data_->B_block, replicas(), x);
}

Vector LinearInverseProblem::apply_Bt(const Vector& x) const {
    require_size("apply_Bt", x.size(), n_u());
    return apply_replicated(data_->B_block.transpose(), replicas(), x);
}

Vector LinearInverseProblem::apply_H(const Vector& x) const {
    require_size("apply_H", x.size(), n_u());
    return apply_replicated(data_->H_block, replicas(), x);
}

Vector LinearInverseProblem::apply_Ht(const Vector& y) const {
    require_size("apply_Ht", y.size(), n_g());
    return apply_replicated(data_->H_block.transpose(), replicas(), y);
}

Vector LinearInverseProblem::solve_I_minus_B(const Vector& x) const {
    require_size("solve_I_minus_B", x.size(), n_u());
    return solve_replicated(data_->lu, false, replicas(), x);
}

Vector LinearInverseProblem::solve_I_minus_Bt(const Vector& x) const {
    require_size("solve_I_minus_Bt", x.size(), n_u());
    return solve_replicated(data_->lu, true, replicas(), x);
}

Objective::Objective(LinearInverseProblem problem, Vector g, double alpha)
    : problem_(std::move(problem)), g_(std::move(g)), alpha_(alpha) {
    if (!(alpha_ >= 0.0) || !std::isfinite(alpha_)) throw ValidationError("alpha", "must be finite and >= 0");
    require_size("g", g_.size(), problem_.n_g());
    if (!g_.allFinite()) throw ValidationError("g", "contains non-finite entries");
}

IterationState initial_state(const LinearInverseProblem& problem, Vector sigma0) {
    require_size("sigma0", sigma0.size(), problem.n_sigma());
    return {std::move(sigma0), Vector::Zero(problem.n_u()), Vector::Zero(problem.n_u())};
}

Vector solve_state_exact(const LinearInverseProblem& problem, const Vector& sigma) {
    require_size("sigma", sigma.size(), problem.n_sigma());
    return problem.solve_I_minus_B(problem.M() * sigma + problem.F());
}

Vector solve_adjoint_exact(const LinearInverseProblem& problem, const Vector& u, const Vector& g) {
    require_size("u", u.size(), problem.n_u());
    require_size("g", g.size(), problem.n_g());
    return problem.solve_I_minus_Bt(problem.apply_Ht(problem.apply_H(u) - g));
}

std::pair<Vector, Vector> fixed_point_sweep(const LinearInverseProblem& problem, const IterationState& state,
                                            const Vector& sigma_new, const Vector& g, int k) {
    if (k < 1) throw ValidationError("k", "must be >= 1");
    require_size("sigma_new", sigma_new.size(), problem.n_sigma());
    require_size("state.u", state.u.size(), problem.n_u());
    require_size("state.p", state.p.size(), problem.n_u());
    require_size("g", g.size(), problem.n_g());

    const Vector source = problem.M() * sigma_new + problem.F();
    Vector u = state.u;
    Vector p = state.p;
    for (int l = 0; l < k; ++l) {
        Vector p_next = problem.apply_Bt(p) + problem.apply_Ht(problem.apply_H(u) - g);
        u = problem.apply_B(u) + source;
        p = std::move(p_next);
    }
    return {std::move(u), std::move(p)};
}

double cost(const Objective& objective, const Vector& sigma) {
    const auto& problem = objective.problem();
    const Vector u = solve_state_exact(problem, sigma);
    const Vector residual = problem.apply_H(u) - objective.g();
    return 0.5 * residual.squaredNorm() + 0.5 * objective.alpha() * sigma.squaredNorm();
}

Vector gradient(const Objective& objective, const Vector& sigma) {
    const auto& problem = objective.problem();
    const Vector u = solve_state_exact(problem, sigma);
    const Vector p = solve_adjoint_exact(problem, u, objective.g());
    return problem.M().transpose() * p + objective.alpha() * sigma;
}

Matrix reduced_operator(const LinearInverseProblem& problem) { return problem.reduced(); }

Vector regularized_solution(const Objective& objective) {
    const auto& problem = objective.problem();
    const Matrix& A = problem.reduced();
    const Vector rhs = objective.g() - problem.data_offset();
    const double alpha = objective.alpha();
    const auto n = A.cols();

    if (alpha == 0.0) {
        const Vector& sv = problem.reduced_singular_values();
        // A^T A is numerically singular once its condition number reaches 1/eps.
        if (sv.minCoeff() <= std::sqrt(std::numeric_limits<double>::epsilon()) * sv.maxCoeff()) {
            throw RankDeficiencyError("alpha = 0 and A^T A is numerically singular");
        }
        return A.colPivHouseholderQr().solve(rhs);
    }
    Matrix stacked(A.rows() + n, n);
    stacked << A, std::sqrt(alpha) * Matrix::Identity(n, n);
    Vector stacked_rhs = Vector::Zero(A.rows() + n);
    stacked_rhs.head(A.rows()) = rhs;
    return stacked.colPivHouseholderQr().solve(stacked_rhs);
}

}  // namespace oneshot
