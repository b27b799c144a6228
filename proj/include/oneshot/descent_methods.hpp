#pragma once

// The four outer schemes on top of a LinearInverseProblem, plus a run loop
// that records a convergence trace.

#include "oneshot/linear_forward.hpp"

#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

namespace oneshot {

enum class SchemeKind { UsualGD, SemiImplicitGD, KStepOneShot, SemiImplicitKStepOneShot };

[[nodiscard]] std::string_view to_string(SchemeKind kind);
// Exact name match; throws ValidationError otherwise.
[[nodiscard]] SchemeKind scheme_from_string(std::string_view name);
[[nodiscard]] bool is_one_shot(SchemeKind kind);

struct RunConfig {
    SchemeKind scheme = SchemeKind::UsualGD;
    double tau = 1.0;
    int k = 1;
    int max_outer = 100;
    double tol_cost = 0.0;
    // Stop when |sigma' - sigma| <= tol_step (1 + |sigma|); 0 disables. One-shot
    // schemes additionally need the (u, p) change to pass the same relative test.
    double tol_step = 0.0;
    Vector sigma0;
    std::optional<Vector> u0;  // zero if absent
    std::optional<Vector> p0;
    // Reference for the relative sigma error. If absent, the regularized
    // solution is used when it is computable.
    std::optional<Vector> sigma_ref;
    // wall_ms is recorded only when enabled, so traces stay byte-reproducible by default.
    bool record_wall_time = false;
};

void validate(const RunConfig& config, const LinearInverseProblem& problem);

enum class RunStatus { Running, MaxOuter, CostTolerance, StepTolerance, Diverged };

[[nodiscard]] std::string_view to_string(RunStatus status);

struct TraceRecord {
    int n = 0;
    double cost = 0.0;
    double grad_norm = 0.0;
    std::optional<double> rel_err_sigma;
    long long acc_inner = 0;
    std::optional<double> wall_ms;
};

struct ConvergenceTrace {
    std::vector<TraceRecord> records;  // n = 0 is the initial iterate
    RunStatus status = RunStatus::Running;
    IterationState final_state;

    [[nodiscard]] bool diverged() const noexcept { return status == RunStatus::Diverged; }
    [[nodiscard]] int outer_iterations() const { return records.empty() ? 0 : records.back().n; }
};

[[nodiscard]] IterationState step_usual_gd(const Objective& objective, const IterationState& state, double tau);
[[nodiscard]] IterationState step_semi_implicit_gd(const Objective& objective, const IterationState& state,
                                                   double tau);
[[nodiscard]] IterationState step_k_shot(const Objective& objective, const IterationState& state, double tau,
                                         int k);
[[nodiscard]] IterationState step_semi_implicit_k_shot(const Objective& objective, const IterationState& state,
                                                       double tau, int k);

[[nodiscard]] IterationState step(const Objective& objective, const IterationState& state, SchemeKind scheme,
                                  double tau, int k);

// Never throws on divergence: cost > 1e12 or a non-finite cost ends the run
// with status Diverged.
[[nodiscard]] ConvergenceTrace run(const Objective& objective, const RunConfig& config);

// Header n,cost,grad_norm,rel_err_sigma,acc_inner,wall_ms,status. Absent
// values are empty fields; status is "running" on all but the last row.
void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace);

}  // namespace oneshot
