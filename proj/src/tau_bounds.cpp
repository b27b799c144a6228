#include "oneshot/tau_bounds.hpp"

#include "oneshot/csv.hpp"
#include "oneshot/errors.hpp"
#include "oneshot/spectral_certify.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace oneshot {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

void check_parameters(const CaseParameters& p, bool strict_theta) {
    if (!(p.theta0 > 0.0) || !(p.theta0 <= kPi / 4)) throw ValidationError("theta0", "must lie in (0, pi/4]");
    if (strict_theta && !(p.theta0 < kPi / 4)) {
        throw ValidationError("theta0", "must be strictly below pi/4 for the k-step bounds");
    }
    if (!(p.delta0 > 0.0) || !std::isfinite(p.delta0)) throw ValidationError("delta0", "must be finite and > 0");
}

void check_norms(double norm_B, double norm_M, double norm_H, double alpha) {
    if (!(norm_B >= 0.0) || !(norm_M > 0.0) || !(norm_H > 0.0)) {
        throw ValidationError("norms", "need |B| >= 0 and |M|, |H| > 0");
    }
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ValidationError("alpha", "must be finite and >= 0");
}

StepBound larger(const std::optional<StepBound>& a, const std::optional<StepBound>& b) {
    if (!a) return *b;
    if (!b) return *a;
    return *a < *b ? *b : *a;
}

void finish(TauBoundReport& r) {
    const std::array<std::pair<const std::optional<StepBound>*, BindingCase>, 5> entries{{
        {&r.bound_real, BindingCase::Real},
        {&r.bound_case1, BindingCase::Case1},
        {&r.bound_case2, BindingCase::Case2},
        {&r.bound_case3, BindingCase::Case3},
        {&r.bound_b_zero, BindingCase::BZero},
    }};
    r.tau_max = StepBound::unbounded();
    r.binding_case = BindingCase::None;
    for (const auto& [bound, which] : entries) {
        if (*bound && !(*bound)->is_unbounded() && **bound < r.tau_max) {
            r.tau_max = **bound;
            r.binding_case = which;
        }
    }
}

double sigma_min_resolvent(const Matrix& T, double theta) {
    const auto n = T.rows();
    const ComplexMatrix m = ComplexMatrix::Identity(n, n) - std::polar(1.0, -theta) * T.cast<Complex>();
    return smallest_singular_value(m);
}

// Golden-section search inside the two cells around every sampled local
// maximum that comes within 10% of the largest sample.
template <class F>
double polish_grid_maxima(F&& f, const std::vector<double>& values, double h) {
    const int n = static_cast<int>(values.size()) - 1;
    const double top = *std::max_element(values.begin(), values.end());
    double best = top;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int j = 0; j <= n; ++j) {
        const bool left_ok = j == 0 || values[j] >= values[j - 1];
        const bool right_ok = j == n || values[j] >= values[j + 1];
        if (!left_ok || !right_ok || values[j] < 0.9 * top) continue;
        double lo = std::max(0.0, (j - 1) * h);
        double hi = std::min(n * h, (j + 1) * h);
        double x1 = hi - g * (hi - lo);
        double x2 = lo + g * (hi - lo);
        double f1 = f(x1);
        double f2 = f(x2);
        for (int it = 0; it < 40; ++it) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = f(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = f(x1);
            }
        }
        best = std::max({best, f1, f2});
    }
    return best;
}

}  // namespace

CaseParameters CaseParameters::make(double theta0, double delta0) {
    CaseParameters p;
    p.theta0 = theta0;
    p.delta0 = delta0;
    check_parameters(p, false);
    const double s3 = std::sin(1.5 * theta0);
    const double c3 = std::cos(1.5 * theta0);
    p.c = (1.0 + 2.0 * delta0 * s3 + delta0 * delta0) / (c3 * c3);
    p.C1 = kSqrt2 - 1.0;
    p.C2 = kSqrt2 + 1.0 / (2.0 * std::sin(theta0 / 2.0)) - 1.0;
    p.C3 = std::sqrt(p.c) / delta0 - 1.0;
    return p;
}

CaseParameters CaseParameters::defaults() { return make(kPi / 8, 1.0); }

StepBound StepBound::reciprocal(double denominator) {
    if (!(denominator > 0.0)) return unbounded();
    return finite(1.0 / denominator);
}

double StepBound::value() const {
    if (!value_) throw Error("StepBound: value() on an unbounded bound");
    return *value_;
}

double StepBound::value_or_inf() const noexcept {
    return value_ ? *value_ : std::numeric_limits<double>::infinity();
}

std::string StepBound::to_string() const { return value_ ? csv::shortest(*value_) : "unbounded"; }

std::string_view to_string(BindingCase c) {
    switch (c) {
        case BindingCase::Real: return "real";
        case BindingCase::Case1: return "case1";
        case BindingCase::Case2: return "case2";
        case BindingCase::Case3: return "case3";
        case BindingCase::BZero: return "b_zero";
        case BindingCase::None: return "none";
    }
    return "?";
}

OperatorNorms operator_norms(const LinearInverseProblem& problem, int k) {
    const KStepOperators ops = k_step_operators(problem.B_block(), problem.H_block(), k);
    OperatorNorms n;
    n.k = k;
    n.norm_B = spectral_norm(problem.B_block());
    n.norm_M = spectral_norm(problem.M());
    n.norm_H = spectral_norm(problem.H_block());
    n.norm_Bk = spectral_norm(matrix_power(problem.B_block(), k));
    n.norm_Tk = spectral_norm(ops.T);
    n.norm_Xk = spectral_norm(ops.X);
    return n;
}

double s_of(const Matrix& T) {
    if (T.rows() != T.cols()) throw DimensionError("s_of: matrix is not square");
    if (T.size() == 0 || T.isZero(0.0)) return 1.0;
    const double rho = spectral_radius(T);
    if (!(rho < 1.0)) throw NumericalError("s_of: rho(T) = " + std::to_string(rho) + " is not < 1");

    // For real T the boundary values at z and conj(z) have equal norms, so
    // theta in [0, pi] covers the circle.
    auto f = [&](double theta) { return 1.0 / sigma_min_resolvent(T, theta); };
    int n = 1024;
    std::vector<double> values(n + 1);
    for (int j = 0; j <= n; ++j) values[j] = f(kPi * j / n);

    double best = 0.0;
    constexpr int kMaxPoints = 1 << 16;
    for (;;) {
        const double estimate = polish_grid_maxima(f, values, kPi / n);
        const bool done = best > 0.0 && std::abs(estimate - best) <= 1e-6 * estimate;
        best = std::max(best, estimate);
        if (done || n >= kMaxPoints) break;
        std::vector<double> refined(2 * n + 1);
        for (int j = 0; j <= n; ++j) refined[2 * j] = values[j];
        for (int j = 0; j < n; ++j) refined[2 * j + 1] = f(kPi * (2 * j + 1) / (2 * n));
        values = std::move(refined);
        n *= 2;
    }

    const auto id = Matrix::Identity(T.rows(), T.cols());
    const double floor = 1.0 / smallest_singular_value((id - T).cast<Complex>());
    return std::max(best, floor);
}

std::pair<Matrix, Matrix> pq_decompose(const Matrix& T, Complex lambda) {
    if (T.rows() != T.cols()) throw DimensionError("pq_decompose: matrix is not square");
    if (std::abs(lambda) < 1.0) throw ValidationError("lambda", "|lambda| must be >= 1");
    const double r = 1.0 / std::abs(lambda);
    const double phi = -std::arg(lambda);
    const double rc = r * std::cos(phi);
    const double rs = r * std::sin(phi);
    const auto n = T.rows();
    const Matrix id = Matrix::Identity(n, n);
    const Matrix D = id - 2.0 * rc * T + r * r * T * T;
    Eigen::PartialPivLU<Matrix> lu(D);
    if (lu.rcond() < std::numeric_limits<double>::epsilon()) {
        throw SingularSystemError("pq_decompose: I - 2 r cos(phi) T + r^2 T^2 is singular");
    }
    // Everything is a polynomial in T, so the factors commute.
    const Matrix d_inv = lu.inverse();
    Matrix P = (id - rc * T) * d_inv;
    Matrix Q = rs * T * d_inv;
    return {std::move(P), std::move(Q)};
}

GammaCase gamma_select(Complex lambda, double theta0, double delta0) {
    if (lambda.imag() == 0.0) throw ValidationError("lambda", "must not be real");
    if (std::abs(lambda) < 1.0) throw ValidationError("lambda", "|lambda| must be >= 1");
    check_parameters(CaseParameters{theta0, delta0}, false);

    const Complex z = lambda * lambda - lambda;
    const double theta = std::arg(lambda);
    if (z.real() >= 0.0) return {1, z.imag() >= 0.0 ? 1.0 : -1.0};
    const double at = std::abs(theta);
    if (at >= theta0 && at <= kPi - theta0) return {2, z.imag() >= 0.0 ? -1.0 : 1.0};
    if (at < theta0) {
        const double g = (delta0 + std::sin(1.5 * theta0)) / std::cos(1.5 * theta0);
        return {3, theta > 0.0 ? g : -g};
    }
    return {4, std::numeric_limits<double>::quiet_NaN()};
}

TauBoundReport sufficient_tau_one_step(double norm_B, double norm_M, double norm_H, std::optional<double> s_B,
                                       double alpha, const CaseParameters& params, bool b_is_zero,
                                       bool rho_B_only) {
    check_norms(norm_B, norm_M, norm_H, alpha);
    check_parameters(params, false);

    TauBoundReport r;
    r.k = 1;
    r.alpha = alpha;
    r.norm_B = norm_B;
    r.norm_M = norm_M;
    r.norm_H = norm_H;
    r.s_Bk = s_B;
    r.parameters = params;
    const double hm2 = norm_H * norm_H * norm_M * norm_M;

    if (b_is_zero) {
        r.bound_b_zero = StepBound::reciprocal(hm2 - alpha);
        finish(r);
        return r;
    }

    const bool closed = !rho_B_only && norm_B < 1.0;
    if (!closed && !s_B) throw ValidationError("s_B", "required when |B| >= 1 or only rho(B) < 1 is used");

    const double b = norm_B;
    const double sin_half = std::sin(params.theta0 / 2.0);
    std::optional<StepBound> c1, c2, c3, s1, s2, s3;
    if (closed) {
        const double pref = hm2 / std::pow(1.0 - b, 4);
        c1 = StepBound::reciprocal(pref * 4.0 * b * b + params.C1 * alpha);
        c2 = StepBound::reciprocal(pref * std::pow((1.0 + b) * (1.0 - b), 2) / (2.0 * sin_half) + params.C2 * alpha);
        c3 = StepBound::reciprocal(pref * 2.0 * params.c / params.delta0 * b * b + params.C3 * alpha);
    }
    if (s_B) {
        const double s4 = std::pow(*s_B, 4);
        s1 = StepBound::reciprocal(hm2 * s4 * 4.0 * b * b + params.C1 * alpha);
        s2 = StepBound::reciprocal(hm2 * s4 * std::pow(1.0 + 2.0 * b, 2) / (2.0 * sin_half) + params.C2 * alpha);
        s3 = StepBound::reciprocal(hm2 * s4 * 2.0 * params.c / params.delta0 * b * b + params.C3 * alpha);
    }
    // No real eigenvalue of modulus >= 1 exists for any tau when k = 1.
    r.bound_real = StepBound::unbounded();
    r.bound_case1 = larger(c1, s1);
    r.bound_case2 = larger(c2, s2);
    r.bound_case3 = larger(c3, s3);
    finish(r);
    return r;
}

TauBoundReport sufficient_tau_k_step(const OperatorNorms& norms, std::optional<double> s_Bk, double alpha,
                                     const CaseParameters& params, bool b_is_zero) {
    check_norms(norms.norm_B, norms.norm_M, norms.norm_H, alpha);
    check_parameters(params, true);
    const int k = norms.k;
    if (k < 1) throw ValidationError("k", "must be >= 1");

    TauBoundReport r;
    r.k = k;
    r.alpha = alpha;
    r.norm_B = norms.norm_B;
    r.norm_M = norms.norm_M;
    r.norm_H = norms.norm_H;
    r.s_Bk = s_Bk;
    r.parameters = params;
    const double m2 = norms.norm_M * norms.norm_M;
    const double hm2 = norms.norm_H * norms.norm_H * m2;

    if (b_is_zero) {
        // k = 1: (|H|^2|M|^2 - alpha) tau < 1. For k >= 2 the inner sweeps
        // reproduce the exact state and adjoint, so the scheme is semi-implicit
        // gradient descent on A = HM: (|H|^2|M|^2 - alpha) tau < 2.
        r.bound_b_zero = StepBound::reciprocal((hm2 - alpha) / (k == 1 ? 1.0 : 2.0));
        finish(r);
        return r;
    }

    const bool closed = norms.norm_B < 1.0;
    if (!closed && !s_Bk) throw ValidationError("s_Bk", "required when |B| >= 1");

    const double sin_half = std::sin(params.theta0 / 2.0);
    const double sqc = std::sqrt(params.c);
    const double max_term = std::max(sqc / params.delta0, sqc / std::cos(2.0 * params.theta0));

    std::optional<StepBound> real_c, c1, c2, c3, real_s, s1, s2, s3;
    if (closed) {
        const double b = norms.norm_B;
        const double bk = std::pow(b, k);
        const double pi_k = 1.0 - k * std::pow(b, k - 1) + (k - 1) * bk;
        const double pref = hm2 / (std::pow(1.0 - b, 2) * std::pow(1.0 - bk, 2));
        const double psi1 = 4.0 * bk * bk + kSqrt2 * pi_k * (1.0 + bk);
        const double psi2 = (std::pow(1.0 - bk, 2) / (2.0 * sin_half) + kSqrt2 * pi_k) * std::pow(1.0 + bk, 2);
        const double psi3 = 2.0 * params.c * sin_half / params.delta0 * bk * bk +
                            sqc / params.delta0 * pi_k * (1.0 + bk * bk) + 2.0 * max_term * pi_k * bk;
        real_c = StepBound::reciprocal(pref * pi_k - 0.5 * alpha);
        c1 = StepBound::reciprocal(pref * psi1 + params.C1 * alpha);
        c2 = StepBound::reciprocal(pref * psi2 + params.C2 * alpha);
        c3 = StepBound::reciprocal(pref * psi3 + params.C3 * alpha);
    }
    if (s_Bk) {
        const double s2v = *s_Bk * *s_Bk;
        const double s4 = s2v * s2v;
        const double bk = norms.norm_Bk;
        const double ht = hm2 * norms.norm_Tk * norms.norm_Tk;
        const double mx = m2 * norms.norm_Xk;
        real_s = StepBound::reciprocal(mx * s2v - 0.5 * alpha);
        s1 = StepBound::reciprocal(4.0 * ht * bk * bk * s4 + kSqrt2 * mx * std::pow(1.0 + 2.0 * bk, 2) * s4 +
                                   params.C1 * alpha);
        s2 = StepBound::reciprocal((ht / (2.0 * sin_half) + kSqrt2 * mx) * std::pow(1.0 + 2.0 * bk, 2) * s4 +
                                   params.C2 * alpha);
        s3 = StepBound::reciprocal((2.0 * params.c * sin_half / params.delta0 * ht * bk * bk +
                                    sqc / params.delta0 * mx * (1.0 + 2.0 * bk + 2.0 * bk * bk) +
                                    2.0 * max_term * mx * (bk + bk * bk)) *
                                       s4 +
                                   params.C3 * alpha);
    }
    r.bound_real = larger(real_c, real_s);
    r.bound_case1 = larger(c1, s1);
    r.bound_case2 = larger(c2, s2);
    r.bound_case3 = larger(c3, s3);
    finish(r);
    return r;
}

namespace {

TauBoundReport dispatch(const OperatorNorms& norms, std::optional<double> s_Bk, double alpha,
                        const CaseParameters& params, bool b_is_zero) {
    if (norms.k == 1) {
        return sufficient_tau_one_step(norms.norm_B, norms.norm_M, norms.norm_H, s_Bk, alpha, params, b_is_zero,
                                       false);
    }
    return sufficient_tau_k_step(norms, s_Bk, alpha, params, b_is_zero);
}

}  // namespace

TauBoundReport tau_bound_report(const LinearInverseProblem& problem, double alpha, int k,
                                const CaseParameters& params, const BoundOptions& options) {
    if (k < 1) throw ValidationError("k", "must be >= 1");
    const OperatorNorms norms = operator_norms(problem, k);
    const bool b_is_zero = problem.B_block().isZero(0.0);
    std::optional<double> s;
    if (!b_is_zero && (problem.block_size() <= options.s_max_block || norms.norm_B >= 1.0)) {
        s = s_of(matrix_power(problem.B_block(), k));
    }
    return dispatch(norms, s, alpha, params, b_is_zero);
}

CaseParameters optimize_case_parameters(const OperatorNorms& norms, std::optional<double> s_Bk, double alpha,
                                        bool b_is_zero) {
    std::vector<std::pair<double, double>> candidates;
    candidates.reserve(64 * 64 + 1);
    for (int i = 0; i < 64; ++i) {
        for (int j = 0; j < 64; ++j) {
            candidates.emplace_back(kPi / 4 * (i + 1) / 65.0, std::pow(10.0, -3.0 + 4.0 * j / 63.0));
        }
    }
    candidates.emplace_back(kPi / 8, 1.0);
    std::sort(candidates.begin(), candidates.end());

    CaseParameters best_params;
    std::optional<StepBound> best;
    for (const auto& [theta0, delta0] : candidates) {
        const CaseParameters p = CaseParameters::make(theta0, delta0);
        const StepBound t = dispatch(norms, s_Bk, alpha, p, b_is_zero).tau_max;
        if (!best || *best < t) {
            best = t;
            best_params = p;
        }
    }
    return best_params;
}

bool marden_quadratic_inside(double a0, double a1) {
    return std::abs(a0) < 1.0 && (a0 - a1 + 1.0) * (a0 + a1 + 1.0) > 0.0;
}

void write_bound_csv_header(std::ostream& out) {
    out << "k,alpha,normB,normM,normH,sBk,bound_real,bound_c1,bound_c2,bound_c3,bound_b0,tau_max,binding_case,theta0,"
           "delta0\n";
}

void write_bound_csv_row(std::ostream& out, const TauBoundReport& r) {
    auto bound = [](const std::optional<StepBound>& b) { return b ? b->to_string() : std::string(); };
    out << r.k << ',' << csv::shortest(r.alpha) << ',' << csv::shortest(r.norm_B) << ',' << csv::shortest(r.norm_M)
        << ',' << csv::shortest(r.norm_H) << ',' << csv::shortest(r.s_Bk) << ',' << bound(r.bound_real) << ','
        << bound(r.bound_case1) << ',' << bound(r.bound_case2) << ',' << bound(r.bound_case3) << ','
        << bound(r.bound_b_zero) << ',' << r.tau_max.to_string() << ',' << to_string(r.binding_case) << ','
        << csv::shortest(r.parameters.theta0) << ',' << csv::shortest(r.parameters.delta0) << '\n';
}

}  // namespace oneshot
