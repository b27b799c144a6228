#pragma once

// Explicit sufficient step sizes for the semi-implicit k-step one-shot
// iteration, and the auxiliary quantities they are built from.

#include "oneshot/linear_forward.hpp"

#include <optional>
#include <ostream>
#include <string_view>
#include <string>
#include <utility>

namespace oneshot {

struct CaseParameters {
    double theta0 = 0.0;
    double delta0 = 0.0;
    double c = 0.0;
    double C1 = 0.0;
    double C2 = 0.0;
    double C3 = 0.0;

    // Throws ValidationError unless theta0 in (0, pi/4] and delta0 > 0.
    static CaseParameters make(double theta0, double delta0);
    // theta0 = pi/8, delta0 = 1
    static CaseParameters defaults();
};

// A step bound that may be +infinity ("no restriction").
class StepBound {
public:
    static StepBound finite(double value) { return StepBound(value); }
    static StepBound unbounded() { return StepBound(); }
    // 1/denominator, or unbounded when denominator <= 0.
    static StepBound reciprocal(double denominator);

    [[nodiscard]] bool is_unbounded() const noexcept { return !value_; }
    [[nodiscard]] double value() const;  // throws if unbounded
    [[nodiscard]] double value_or_inf() const noexcept;
    // "unbounded" or the shortest round-trip decimal
    [[nodiscard]] std::string to_string() const;

    friend bool operator<(const StepBound& a, const StepBound& b) { return a.value_or_inf() < b.value_or_inf(); }
    friend bool operator==(const StepBound& a, const StepBound& b) = default;

private:
    StepBound() = default;
    explicit StepBound(double v) : value_(v) {}
    std::optional<double> value_;
};

enum class BindingCase { Real, Case1, Case2, Case3, BZero, None };
[[nodiscard]] std::string_view to_string(BindingCase c);

struct TauBoundReport {
    int k = 1;
    double alpha = 0.0;
    double norm_B = 0.0;
    double norm_M = 0.0;
    double norm_H = 0.0;
    std::optional<double> s_Bk;
    // Absent bounds were not part of the minimum.
    std::optional<StepBound> bound_real;
    std::optional<StepBound> bound_case1;
    std::optional<StepBound> bound_case2;
    std::optional<StepBound> bound_case3;
    std::optional<StepBound> bound_b_zero;
    StepBound tau_max = StepBound::unbounded();
    BindingCase binding_case = BindingCase::None;
    CaseParameters parameters;
};

struct OperatorNorms {
    double norm_B = 0.0;
    double norm_M = 0.0;
    double norm_H = 0.0;
    double norm_Bk = 0.0;
    double norm_Tk = 0.0;
    double norm_Xk = 0.0;
    int k = 1;
};

// Norms of B, B^k, T_k, X_k are taken on the diagonal block (they coincide for
// a block-diagonal operator).
[[nodiscard]] OperatorNorms operator_norms(const LinearInverseProblem& problem, int k);

// sup_{|z|>=1} |(I - T/z)^{-1}|, estimated on |z| = 1. Throws NumericalError
// if rho(T) >= 1.
[[nodiscard]] double s_of(const Matrix& T);

// (I - T/lambda)^{-1} = P + iQ with real-coefficient P, Q.
[[nodiscard]] std::pair<Matrix, Matrix> pq_decompose(const Matrix& T, Complex lambda);

struct GammaCase {
    int case_id = 0;  // 1..3, or 4 for the (empty) region with no valid gamma
    double gamma = 0.0;
};

// Throws ValidationError for real lambda or |lambda| < 1.
[[nodiscard]] GammaCase gamma_select(Complex lambda, double theta0, double delta0);

// k = 1. s_B enables the s(B)-based forms; rho_B_only restricts to them.
[[nodiscard]] TauBoundReport sufficient_tau_one_step(double norm_B, double norm_M, double norm_H,
                                                     std::optional<double> s_B, double alpha,
                                                     const CaseParameters& params, bool b_is_zero,
                                                     bool rho_B_only);

// General k; requires theta0 < pi/4. b_is_zero selects the B = 0 criterion.
[[nodiscard]] TauBoundReport sufficient_tau_k_step(const OperatorNorms& norms, std::optional<double> s_Bk,
                                                   double alpha, const CaseParameters& params, bool b_is_zero);

struct BoundOptions {
    // s(B^k) is computed when the block is at most this size, or when |B| >= 1.
    int s_max_block = 64;
};

// Assembles norms (and s(B^k) when affordable) from a problem and dispatches
// on k.
[[nodiscard]] TauBoundReport tau_bound_report(const LinearInverseProblem& problem, double alpha, int k,
                                              const CaseParameters& params, const BoundOptions& options = {});

// Grid search over theta0 in (0, pi/4), delta0 in [1e-3, 10] (64 x 64, plus the
// defaults) maximizing tau_max; ties go to the smallest theta0, then delta0.
[[nodiscard]] CaseParameters optimize_case_parameters(const OperatorNorms& norms, std::optional<double> s_Bk,
                                                      double alpha, bool b_is_zero);

// Both roots of z^2 + a1 z + a0 strictly inside the unit circle.
[[nodiscard]] bool marden_quadratic_inside(double a0, double a1);

// k,alpha,normB,normM,normH,sBk,bound_real,bound_c1,bound_c2,bound_c3,bound_b0,tau_max,binding_case,theta0,delta0
void write_bound_csv_header(std::ostream& out);
void write_bound_csv_row(std::ostream& out, const TauBoundReport& report);

}  // namespace oneshot
